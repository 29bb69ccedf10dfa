// Copyright 2026 The lisa Authors.
//
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
#ifndef LISA_TOOLS_CLI_HPP_
#define LISA_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace lisa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line (without the program name). Data goes to `out`,
// diagnostics to `err`. Returns the process exit code.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace lisa::cli

#endif  // LISA_TOOLS_CLI_HPP_
