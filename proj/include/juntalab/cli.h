// Copyright 2026 The juntalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver. Every subcommand writes its result to --out (stdout
// when absent) and, with --out, a run record to <out>.run.json.

#ifndef JUNTALAB_CLI_H_
#define JUNTALAB_CLI_H_

#include <string>
#include <vector>

namespace juntalab {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 runtime failure, 2 usage error.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace juntalab

#endif  // JUNTALAB_CLI_H_
