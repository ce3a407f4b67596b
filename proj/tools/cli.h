// Copyright 2026 The Dimlight Authors
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

#ifndef DIMLIGHT_TOOLS_CLI_H_
#define DIMLIGHT_TOOLS_CLI_H_

#include <ostream>

#include "dimlight/error.h"

namespace dimlight::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitInvariant = 3,
};

int ExitCodeFor(ErrorKind kind);

// Entry point of the `dimlight` binary: degrade, genqa, eval, report and
// selftest. Settings resolve as flags > --config file > built-in defaults.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace dimlight::cli

#endif  // DIMLIGHT_TOOLS_CLI_H_
