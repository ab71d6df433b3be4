// Copyright 2026 The dglbf Authors
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
// -----------------------------------------------------------------------------

#ifndef DGLBF_CLI_H_
#define DGLBF_CLI_H_

#include <ostream>

namespace dglbf {

// Exit codes of the dglbf command.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitError = 1;  // usage, I/O or invalid input
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitTimeout = 3;

// Runs one invocation: dglbf <place|gen|bench|validate|paths> [flags].
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace dglbf

#endif  // DGLBF_CLI_H_
