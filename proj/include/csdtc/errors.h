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

#ifndef CSDTC_ERRORS_H
#define CSDTC_ERRORS_H

#include <stdexcept>
#include <string>

namespace csdtc {

/// Input data violates a documented invariant (bad parameter, malformed file).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Configuration problem: unusable basis size, empty grid, bad CLI option.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (singular matrix, solver or fit did not converge).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The analytic model left its domain of validity (non-positive mode capacitance etc).
struct ModelValidityError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace csdtc

#endif  // CSDTC_ERRORS_H
