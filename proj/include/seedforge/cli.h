// Copyright 2026 The Seedforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEEDFORGE_CLI_H_
#define SEEDFORGE_CLI_H_

#include <iosfwd>

namespace seedforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // runtime failure (I/O, backend, sandbox)
inline constexpr int kExitUsage = 2;    // bad arguments, configuration or inputs
inline constexpr int kExitEmptyCorpus = 3;
inline constexpr int kExitPartial = 4;  // campaign finished with failed trials

// Entry point of the `seedforge` tool. Output goes to `out`, diagnostics to
// `err`.
int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace seedforge

#endif  // SEEDFORGE_CLI_H_
