// Copyright 2026 The csdtc Authors
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

#ifndef CSDTC_TOOLS_CLI_H
#define CSDTC_TOOLS_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace csdtc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// A sweep command fails only when more than this fraction of its points failed.
inline constexpr double kMaxFailedFraction = 0.10;

/// Runs the command line `args` (without the program name). Data goes to `--out` or to
/// `out`; diagnostics and summaries go to `err`. Returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace csdtc::cli

#endif  // CSDTC_TOOLS_CLI_H
