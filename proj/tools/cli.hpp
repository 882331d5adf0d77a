// Copyright (c) 2026, The augbias Authors. All rights reserved.
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


#ifndef AUGBIAS_TOOLS_CLI_HPP_
#define AUGBIAS_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace augbias::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kInternal = 2 };

/// Runs the command line `args` (without the program name). Artifacts go to
/// files or `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace augbias::cli

#endif  // AUGBIAS_TOOLS_CLI_HPP_
