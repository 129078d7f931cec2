// Copyright (c) 2026 The catkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "catkit/checkpoint.hpp"
#include "catkit/cli.hpp"
#include "catkit/data.hpp"
#include "catkit/embed.hpp"
#include "catkit/errors.hpp"
#include "catkit/eval.hpp"
#include "catkit/parallel.hpp"
#include "catkit/spectrogram_cache.hpp"
#include "catkit/toy.hpp"
#include "catkit/train.hpp"
#include "catkit/wav.hpp"
#include "json.hpp"

namespace catkit {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Reads --config files as JSON. Keys are option long names; an object keyed
// by a subcommand name scopes its keys to that subcommand, and flat keys go
// to whichever subcommand was selected.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* app) : app_(app) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<std::string> scope;
    for (const CLI::App* sub : app_->get_subcommands()) scope.push_back(sub->get_name());
    std::vector<CLI::ConfigItem> items;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        for (auto jt = it->begin(); jt != it->end(); ++jt) items.push_back(Item({it.key()}, jt.key(), *jt));
      } else {
        items.push_back(Item(scope, it.key(), *it));
      }
    }
    return items;
  }

 private:
  static std::string Scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static CLI::ConfigItem Item(std::vector<std::string> parents, const std::string& name, const json& v) {
    CLI::ConfigItem item;
    item.parents = std::move(parents);
    item.name = name;
    if (v.is_array()) {
      for (const auto& e : v) item.inputs.push_back(Scalar(e));
    } else {
      item.inputs = {Scalar(v)};
    }
    return item;
  }

  const CLI::App* app_;
};

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

// CSV artifacts open with one comment line carrying the resolved config.
std::string CsvHeader(const json& config) { return "# config: " + config.dump() + "\n"; }

struct SpecFlags {
  int win_len = 512;
  int hop = 128;
  int fft_len = 512;
  std::string freq_crop = "low";

  void Add(CLI::App* cmd) {
    cmd->add_option("--win-len", win_len, "STFT window length in samples")->capture_default_str();
    cmd->add_option("--hop", hop, "STFT hop in samples")->capture_default_str();
    cmd->add_option("--fft-len", fft_len, "FFT length")->capture_default_str();
    cmd->add_option("--freq-crop", freq_crop, "which 128 frequency bins to keep")
        ->check(CLI::IsMember({"low", "high", "center"}))
        ->capture_default_str();
  }
  SpectrogramOptions Resolve() const {
    SpectrogramOptions o;
    o.win_len = win_len;
    o.hop = hop;
    o.fft_len = fft_len;
    o.freq_crop = ParseFreqCrop(freq_crop);
    o.Validate();
    return o;
  }
};

struct ModelFlags {
  std::string arch = "cat";
  std::vector<int> conv_channels;
  std::optional<int> embed_dim, layers, heads, cnn_hidden;
  std::optional<double> mlp_ratio, drop_path, dropout, conv_dropout, dense_dropout;
  std::vector<int> mlp_hidden;

  void Add(CLI::App* cmd) {
    cmd->add_option("--arch", arch, "model family")
        ->check(CLI::IsMember({"cat", "cnn", "mlp"}))
        ->capture_default_str();
    cmd->add_option("--conv-channels", conv_channels, "two tokenizer/conv widths")->expected(2);
    cmd->add_option("--embed-dim", embed_dim, "CAT token width");
    cmd->add_option("--layers", layers, "CAT transformer layers");
    cmd->add_option("--heads", heads, "CAT attention heads");
    cmd->add_option("--mlp-ratio", mlp_ratio, "CAT feed-forward expansion");
    cmd->add_option("--drop-path", drop_path, "CAT maximum stochastic-depth rate");
    cmd->add_option("--dropout", dropout, "CAT dropout rate");
    cmd->add_option("--cnn-hidden", cnn_hidden, "CNN dense width");
    cmd->add_option("--conv-dropout", conv_dropout, "CNN dropout after the conv block");
    cmd->add_option("--dense-dropout", dense_dropout, "CNN dropout after the dense layer");
    cmd->add_option("--mlp-hidden", mlp_hidden, "two MLP hidden widths")->expected(2);
  }

  ModelConfig Resolve(int num_classes) const {
    ModelConfig cfg = DefaultConfig(ParseArch(arch));
    if (auto* c = std::get_if<CatConfig>(&cfg)) {
      if (!conv_channels.empty()) c->conv_channels = {conv_channels[0], conv_channels[1]};
      if (embed_dim) c->embed_dim = *embed_dim;
      if (layers) c->num_layers = *layers;
      if (heads) c->num_heads = *heads;
      if (mlp_ratio) c->mlp_ratio = *mlp_ratio;
      if (drop_path) c->drop_path_rate = *drop_path;
      if (dropout) c->dropout = *dropout;
    } else if (auto* n = std::get_if<CnnConfig>(&cfg)) {
      if (!conv_channels.empty()) n->conv_channels = {conv_channels[0], conv_channels[1]};
      if (cnn_hidden) n->hidden = *cnn_hidden;
      if (conv_dropout) n->conv_dropout = *conv_dropout;
      if (dense_dropout) n->dense_dropout = *dense_dropout;
    } else if (auto* m = std::get_if<MlpConfig>(&cfg)) {
      if (!mlp_hidden.empty()) m->hidden = {mlp_hidden[0], mlp_hidden[1]};
    }
    SetNumClasses(cfg, num_classes);
    Validate(cfg);
    return cfg;
  }
};

struct TrainFlags {
  std::optional<int> epochs, patience, batch_size;
  std::uint64_t seed = 0;
  std::optional<double> validation_fraction, epsilon, gamma, lr, weight_decay;
  std::string loss = "poly1ce";
  std::optional<std::string> optimizer;
  double threshold_quantile = 0.05;

  void Add(CLI::App* cmd) {
    cmd->add_option("--epochs", epochs, "maximum epochs");
    cmd->add_option("--patience", patience, "early-stopping patience in epochs");
    cmd->add_option("--batch-size", batch_size, "mini-batch size");
    cmd->add_option("--seed", seed, "seed for every random choice in the run")->capture_default_str();
    cmd->add_option("--val-fraction", validation_fraction, "stratified validation share");
    cmd->add_option("--loss", loss, "training loss")
        ->check(CLI::IsMember({"ce", "fl", "poly1ce", "poly1fl"}))
        ->capture_default_str();
    cmd->add_option("--epsilon", epsilon, "poly-1 coefficient");
    cmd->add_option("--gamma", gamma, "focal exponent");
    cmd->add_option("--optimizer", optimizer, "adam | adamw")->check(CLI::IsMember({"adam", "adamw"}));
    cmd->add_option("--lr", lr, "learning rate");
    cmd->add_option("--wd", weight_decay, "decoupled weight decay");
    cmd->add_option("--threshold-quantile", threshold_quantile,
                    "validation p_m quantile stored as the tuned open-set threshold")
        ->capture_default_str();
  }

  TrainConfig Resolve(Arch arch) const {
    TrainConfig c = TrainConfig::Defaults(arch);
    c.seed = seed;
    c.loss = LossConfig::Defaults(ParseLossKind(loss));
    if (epsilon) c.loss.epsilon = *epsilon;
    if (gamma) c.loss.gamma = *gamma;
    if (epochs) c.epochs = *epochs;
    if (patience) c.patience = *patience;
    if (batch_size) c.batch_size = *batch_size;
    if (validation_fraction) c.validation_fraction = *validation_fraction;
    if (optimizer) c.optimizer = ParseOptimizerKind(*optimizer);
    if (lr) c.lr = *lr;
    if (weight_decay) c.weight_decay = *weight_decay;
    c.Validate();
    return c;
  }
};

json ReportEpoch(const EpochRecord& r) {
  return {{"epoch", r.epoch}, {"train_loss", r.train_loss}, {"val_loss", r.val_loss}, {"val_acc", r.val_acc}};
}

std::string Fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

int GenToy(const fs::path& out_dir, int known_k, int unknown_k, int train_n, int test_n, int unknown_n,
           double duration, std::uint64_t seed, std::ostream& out) {
  ToySpec spec = ToySpec::Default(known_k, unknown_k, seed);
  spec.duration_s = duration;
  Manifest m = gen_toy(spec, train_n, test_n, out_dir, unknown_n);
  const json config = {{"command", "gen-toy"}, {"out", out_dir.string()}, {"known_k", known_k},
                       {"unknown_k", unknown_k}, {"train_per_class", train_n},
                       {"test_per_class", test_n}, {"unknown_test", unknown_n < 0 ? test_n : unknown_n},
                       {"duration", duration}, {"seed", seed}};
  WriteText(out_dir / "manifest.csv", CsvHeader(config) + format_manifest(m));
  out << "wrote " << m.entries.size() << " files and " << (out_dir / "manifest.csv").string() << "\n";
  return 0;
}

void PrintEpoch(std::ostream& err, const EpochRecord& r) {
  err << "epoch " << r.epoch << "  train_loss " << Fixed(r.train_loss, 4) << "  val_loss "
      << Fixed(r.val_loss, 4) << "  val_acc " << Fixed(r.val_acc, 4) << std::endl;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"catkit: synthetic speech attribution toolkit", "catkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON file of option values; command-line flags take precedence");

  // gen-toy
  auto* gen = app.add_subcommand("gen-toy", "write a toy pseudo-synthesizer corpus and manifest");
  std::string gen_out;
  int known_k = 6, unknown_k = 2, train_n = 200, test_n = 100, unknown_n = -1;
  double duration = 1.1;
  std::uint64_t gen_seed = 0;
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--known", known_k, "known pseudo-synthesizers")->capture_default_str();
  gen->add_option("--unknown", unknown_k, "unknown pseudo-synthesizers")->capture_default_str();
  gen->add_option("--train-per-class", train_n)->capture_default_str();
  gen->add_option("--test-per-class", test_n)->capture_default_str();
  gen->add_option("--unknown-test", unknown_n, "test files per unknown class (default: --test-per-class)");
  gen->add_option("--duration", duration, "seconds per file")->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();

  // prep
  auto* prep = app.add_subcommand("prep", "compute and cache spectrograms for a manifest");
  std::string prep_manifest, prep_cache;
  SpecFlags prep_spec;
  prep->add_option("--manifest", prep_manifest)->required();
  prep->add_option("--cache", prep_cache, "cache directory")->required();
  prep_spec.Add(prep);

  // train and sweep share their flags.
  struct FitFlags {
    std::string manifest, cache, out;
    SpecFlags spec;
    ModelFlags model;
    TrainFlags train;
    std::vector<double> epsilons;
  };
  FitFlags tr, sw;
  auto add_fit = [](CLI::App* cmd, FitFlags& f) {
    cmd->add_option("--manifest", f.manifest)->required();
    cmd->add_option("--cache", f.cache, "spectrogram cache directory");
    cmd->add_option("--out", f.out, "output directory")->required();
    f.spec.Add(cmd);
    f.model.Add(cmd);
    f.train.Add(cmd);
  };
  auto* train = app.add_subcommand("train", "train a model and write a checkpoint");
  add_fit(train, tr);
  auto* sweep = app.add_subcommand("sweep", "grid-search the poly-1 epsilon");
  add_fit(sweep, sw);
  sweep->add_option("--epsilons", sw.epsilons, "epsilon grid (default 0 0.5 1 2 3 3.3 4)");

  // eval
  auto* ev = app.add_subcommand("eval", "closed- or open-set evaluation on the test split");
  std::string ev_ckpt, ev_manifest, ev_cache, ev_out, ev_mode = "closed", ev_threshold = "0.5";
  ev->add_option("--checkpoint", ev_ckpt)->required();
  ev->add_option("--manifest", ev_manifest)->required();
  ev->add_option("--cache", ev_cache);
  ev->add_option("--out", ev_out, "output directory")->required();
  ev->add_option("--mode", ev_mode)->check(CLI::IsMember({"closed", "open"}))->capture_default_str();
  ev->add_option("--threshold", ev_threshold, "T in (0,1), or 'auto' for the value tuned at training")
      ->capture_default_str();

  // embed
  auto* em = app.add_subcommand("embed", "tSNE of the model latents on the test split");
  std::string em_ckpt, em_manifest, em_cache, em_out;
  TsneConfig tcfg;
  std::size_t max_points = 2000;
  em->add_option("--checkpoint", em_ckpt)->required();
  em->add_option("--manifest", em_manifest)->required();
  em->add_option("--cache", em_cache);
  em->add_option("--out", em_out, "output directory")->required();
  em->add_option("--perplexity", tcfg.perplexity)->capture_default_str();
  em->add_option("--iterations", tcfg.iterations)->capture_default_str();
  em->add_option("--learning-rate", tcfg.learning_rate)->capture_default_str();
  em->add_option("--max-points", max_points, "stratified subsample cap")->capture_default_str();
  em->add_option("--seed", tcfg.seed)->capture_default_str();

  // attribute
  auto* at = app.add_subcommand("attribute", "attribute a single WAV file");
  std::string at_ckpt, at_wav, at_threshold = "0.5";
  at->add_option("--checkpoint", at_ckpt)->required();
  at->add_option("--wav", at_wav)->required();
  at->add_option("--threshold", at_threshold, "T in (0,1), or 'auto'")->capture_default_str();

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  auto parse_threshold = [](const std::string& text, const Checkpoint& ck) {
    if (text == "auto") {
      if (!ck.metadata.contains("threshold")) throw ConfigError("checkpoint has no tuned threshold");
      return ck.metadata["threshold"].get<double>();
    }
    double t = 0.0;
    try {
      std::size_t used = 0;
      t = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ConfigError("threshold must be a number or 'auto'");
    }
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
    return t;
  };

  try {
    tune_allocator();
    if (*gen) return GenToy(gen_out, known_k, unknown_k, train_n, test_n, unknown_n, duration, gen_seed, out);

    if (*prep) {
      const SpectrogramOptions opts = prep_spec.Resolve();
      const Manifest m = load_manifest(prep_manifest);
      std::size_t n = 0;
      for (Split s : {Split::kTrain, Split::kTest}) n += load_dataset(m, s, opts, false, prep_cache).size();
      const json config = {{"command", "prep"}, {"manifest", prep_manifest}, {"cache", prep_cache},
                           {"spectrogram", ToJson(opts)}};
      WriteText(fs::path(prep_cache) / "prep.json", config.dump(2) + "\n");
      out << "cached " << n << " spectrograms in " << prep_cache << "\n";
      return 0;
    }

    if (*train || *sweep) {
      const FitFlags& f = *train ? tr : sw;
      const SpectrogramOptions opts = f.spec.Resolve();
      const Manifest m = load_manifest(f.manifest);
      if (m.classes.size() < 2) throw DataError("manifest lists fewer than 2 known synthesizers");
      const ModelConfig mcfg = f.model.Resolve(static_cast<int>(m.classes.size()));
      const TrainConfig tcfg_run = f.train.Resolve(ArchOf(mcfg));
      const Dataset data = load_dataset(m, Split::kTrain, opts, true, f.cache);
      json config = {{"command", *train ? "train" : "sweep"}, {"manifest", f.manifest},
                     {"cache", f.cache}, {"out", f.out}, {"spectrogram", ToJson(opts)},
                     {"model", ToJson(mcfg)}, {"train", ToJson(tcfg_run)},
                     {"threshold_quantile", f.train.threshold_quantile}};
      const fs::path out_dir(f.out);
      fs::create_directories(out_dir);
      auto on_epoch = [&](const EpochRecord& r) { PrintEpoch(err, r); };

      if (*sweep) {
        const std::vector<double> grid = f.epsilons.empty() ? default_epsilon_grid() : f.epsilons;
        config["epsilons"] = grid;
        const auto rows = sweep_epsilon(mcfg, data, tcfg_run, grid, on_epoch);
        std::ostringstream csv;
        csv << CsvHeader(config) << "epsilon,val_acc,val_loss,best_epoch\n";
        json table = json::array();
        std::size_t best = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          csv << rows[i].epsilon << ',' << rows[i].val_acc << ',' << rows[i].val_loss << ','
              << rows[i].best_epoch << '\n';
          table.push_back({{"epsilon", rows[i].epsilon}, {"val_acc", rows[i].val_acc},
                           {"val_loss", rows[i].val_loss}, {"best_epoch", rows[i].best_epoch}});
          if (rows[i].val_acc > rows[best].val_acc) best = i;
        }
        WriteText(out_dir / "sweep.csv", csv.str());
        const json report = {{"config", config}, {"rows", table}, {"best_epsilon", rows[best].epsilon}};
        WriteText(out_dir / "sweep_report.json", report.dump(2) + "\n");
        out << "best epsilon " << rows[best].epsilon << " (val_acc " << Fixed(rows[best].val_acc, 4) << ")\n";
        return 0;
      }

      const FitResult r = fit(mcfg, data, tcfg_run, on_epoch);
      std::vector<Spectrogram> val_inputs;
      for (std::size_t i : r.val_indices) val_inputs.push_back(data.inputs[i]);
      const Inference vinf = run_model(r.model, val_inputs, false);
      const double threshold = tune_threshold(vinf.probabilities, f.train.threshold_quantile);

      Checkpoint ck{mcfg, r.model.params().Clone(), m.classes, opts, json::object()};
      ck.metadata = {{"config", config}, {"best_epoch", r.best_epoch},
                     {"best_val_loss", r.best_val_loss}, {"threshold", threshold}};
      save_checkpoint(out_dir / "model.ckpt", ck);
      WriteText(out_dir / "history.csv", CsvHeader(config) + history_csv(r.history));
      json hist = json::array();
      for (const auto& e : r.history) hist.push_back(ReportEpoch(e));
      const json report = {{"config", config}, {"classes", m.classes}, {"best_epoch", r.best_epoch},
                           {"best_val_loss", r.best_val_loss}, {"threshold", threshold},
                           {"parameters", param_count(mcfg)}, {"history", hist}};
      WriteText(out_dir / "train_report.json", report.dump(2) + "\n");
      out << "best epoch " << r.best_epoch << ", val_loss " << Fixed(r.best_val_loss, 4)
          << ", tuned threshold " << Fixed(threshold, 4) << "\n";
      return 0;
    }

    if (*ev) {
      const Checkpoint ck = load_checkpoint(ev_ckpt);
      const bool open = ev_mode == "open";
      const double threshold = parse_threshold(ev_threshold, ck);
      const Manifest m = load_manifest(ev_manifest);
      if (m.classes != ck.class_names) throw DataError("manifest classes differ from the checkpoint's");
      const Dataset test = load_dataset(m, Split::kTest, ck.spectrogram, !open, ev_cache);
      if (test.size() == 0) throw DataError("test split is empty");
      const Inference inf = run_model(ck.ToModel(), test.inputs, false);
      std::vector<Decision> decisions;
      for (const auto& p : inf.probabilities) {
        decisions.push_back(open ? attribute_open(p, threshold) : attribute_closed(p));
      }
      const int n = static_cast<int>(m.classes.size());
      const ConfusionMatrix cm = confusion(decisions, test.labels, n, open);
      const Metrics metrics = weighted_metrics(cm);
      const json config = {{"command", "eval"}, {"checkpoint", ev_ckpt}, {"manifest", ev_manifest},
                           {"cache", ev_cache}, {"mode", ev_mode}, {"threshold", threshold},
                           {"training", ck.metadata.value("config", json::object())}};
      std::vector<std::string> names = m.classes;
      if (open) names.push_back("U");
      auto name_of = [&](int label) { return label == kUnknown ? std::string("U") : m.classes[static_cast<std::size_t>(label)]; };
      std::ostringstream csv;
      csv << CsvHeader(config) << "path,truth,prediction,p_max\n";
      for (std::size_t i = 0; i < test.size(); ++i) {
        csv << test.paths[i] << ',' << (open ? name_of(test.labels[i]) : test.synthesizers[i]) << ','
            << name_of(decisions[i].label) << ',' << decisions[i].confidence << '\n';
      }
      json report = {{"config", config}, {"mode", ev_mode}, {"threshold", threshold},
                     {"classes", names}, {"confusion", ToJson(cm)}, {"support", metrics.support},
                     {"accuracy", metrics.accuracy}, {"precision", metrics.precision},
                     {"recall", metrics.recall}, {"f1", metrics.f1}, {"per_class", ToJson(metrics)}};
      const fs::path out_dir(ev_out);
      WriteText(out_dir / ("eval_" + ev_mode + ".json"), report.dump(2) + "\n");
      WriteText(out_dir / ("predictions_" + ev_mode + ".csv"), csv.str());
      out << ev_mode << "-set accuracy " << Fixed(metrics.accuracy, 4) << "  precision "
          << Fixed(metrics.precision, 4) << "  recall " << Fixed(metrics.recall, 4) << "  f1 "
          << Fixed(metrics.f1, 4) << "\n";
      return 0;
    }

    if (*em) {
      const Checkpoint ck = load_checkpoint(em_ckpt);
      const Manifest m = load_manifest(em_manifest);
      const Dataset all = load_dataset(m, Split::kTest, ck.spectrogram, false, em_cache);
      const auto keep = stratified_subsample(all.synthesizers, max_points, tcfg.seed);
      const Dataset test = all.Subset(keep);
      const Inference inf = run_model(ck.ToModel(), test.inputs, true);
      const int dim = static_cast<int>(inf.latents.front().size());
      Grid x(static_cast<int>(test.size()), dim);
      for (std::size_t i = 0; i < test.size(); ++i) {
        std::copy(inf.latents[i].begin(), inf.latents[i].end(), x.values.begin() + static_cast<std::ptrdiff_t>(i) * dim);
      }
      const TsneResult t = tsne(x, tcfg);
      const ClusterReport rep = cluster_report(t.y, test.synthesizers, tcfg.seed);
      const json config = {{"command", "embed"}, {"checkpoint", em_ckpt}, {"manifest", em_manifest},
                           {"cache", em_cache}, {"perplexity", tcfg.perplexity},
                           {"iterations", tcfg.iterations}, {"learning_rate", tcfg.learning_rate},
                           {"max_points", max_points}, {"seed", tcfg.seed}};
      std::ostringstream csv;
      csv << CsvHeader(config) << "sample_path,synthesizer,known_flag,y1,y2\n";
      csv << std::setprecision(9);
      for (std::size_t i = 0; i < test.size(); ++i) {
        csv << test.paths[i] << ',' << test.synthesizers[i] << ',' << (test.known[i] ? "true" : "false")
            << ',' << t.y.at(static_cast<int>(i), 0) << ',' << t.y.at(static_cast<int>(i), 1) << '\n';
      }
      const fs::path out_dir(em_out);
      WriteText(out_dir / "embedding.csv", csv.str());
      const json report = {{"config", config}, {"points", test.size()}, {"initial_kl", t.initial_kl},
                           {"final_kl", t.final_kl}, {"cluster_report", ToJson(rep)}};
      WriteText(out_dir / "embed_report.json", report.dump(2) + "\n");
      out << "embedded " << test.size() << " points, KL " << Fixed(t.initial_kl, 4) << " -> "
          << Fixed(t.final_kl, 4) << ", purity " << Fixed(rep.purity, 4) << "\n";
      return 0;
    }

    if (*at) {
      const Checkpoint ck = load_checkpoint(at_ckpt);
      const double threshold = parse_threshold(at_threshold, ck);
      const Spectrogram s = spectrogram(read_wav(at_wav), ck.spectrogram);
      const Inference inf = run_model(ck.ToModel(), std::span<const Spectrogram>(&s, 1), false);
      const ProbabilitySet& p = inf.probabilities.front();
      const Decision d = attribute_open(p, threshold);
      auto name = [&](std::size_t i) {
        return i < ck.class_names.size() ? ck.class_names[i] : "class_" + std::to_string(i);
      };
      out << "probabilities:\n";
      for (std::size_t i = 0; i < p.probs.size(); ++i) out << "  " << name(i) << " " << Fixed(p.probs[i]) << "\n";
      out << "p_max: " << Fixed(d.confidence) << "\n";
      out << "closed-set: " << name(static_cast<std::size_t>(p.argmax())) << "\n";
      out << "open-set (T=" << threshold << "): "
          << (d.unknown() ? std::string("unknown (U)") : name(static_cast<std::size_t>(d.label))) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace catkit
