// Copyright 2026 The tnshap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TNSHAP_TOOLS_CLI_H_
#define TNSHAP_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace tnshap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInputError = 2;

// Runs the tool with argv-style arguments (args[0] is the program name).
// Data goes to `out`; diagnostics and manifests without a path go to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tnshap::cli

#endif  // TNSHAP_TOOLS_CLI_H_
