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


#ifndef CATKIT_CLI_HPP_
#define CATKIT_CLI_HPP_

#include <iostream>
#include <string>
#include <vector>

namespace catkit {

// Entry point of the catkit tool. args[0] is the program name. Returns 0 on
// success, 2 on usage errors and 1 when a module reports an error.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace catkit

#endif  // CATKIT_CLI_HPP_
