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

#ifndef CSDTC_RB_IO_H
#define CSDTC_RB_IO_H

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "csdtc/rb.h"

namespace csdtc::rb {

/// Reads one trace:
///
///     kind=population_X1,variant=SRB
///     m,value,std_err
///     1,0.97,0.004
///     ...
///
/// The column header line is optional and std_err may be omitted (on every row or none).
/// Errors are ValidationError messages prefixed with `source`.
RBTrace parse_trace_csv(std::istream &in, const std::string &source);
RBTrace read_trace_csv(const std::filesystem::path &path);
void write_trace_csv(std::ostream &out, const RBTrace &trace);

/// {L1_cz, r_incoh_cz, r_coh_cz, r_cz, fidelity, uncertainties{...}, d, warnings}; absent entries are null.
nlohmann::json budget_to_json(const ErrorBudget &budget);

}  // namespace csdtc::rb

#endif  // CSDTC_RB_IO_H
