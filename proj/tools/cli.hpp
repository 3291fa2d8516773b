// Copyright 2026 The epnilab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EPNILAB_TOOLS_CLI_HPP_
#define EPNILAB_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace epnilab::cli {

// Exit-code contract shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,        // success, no violation
  kExitInternal = 1,  // internal failure (including trials that errored)
  kExitUsage = 2,     // usage, configuration or input error
  kExitDossier = 3,   // a counterexample candidate was written
};

// Runs the epnilab command line. `args` excludes the program name. Human output
// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace epnilab::cli

#endif  // EPNILAB_TOOLS_CLI_HPP_
