// Copyright 2026 The chainest Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHAINEST_CLI_HPP
#define CHAINEST_CLI_HPP

#include <string>
#include <vector>

namespace chainest::cli {

/// Run the command-line tool on an argument list (without argv[0]).
/// Exit codes: 0 success, 1 usage/validation error, 2 data error,
/// 3 numeric guard.
int run(const std::vector<std::string>& args);

}  // namespace chainest::cli

#endif  // CHAINEST_CLI_HPP
