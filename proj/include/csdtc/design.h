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

#ifndef CSDTC_DESIGN_H
#define CSDTC_DESIGN_H

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "csdtc/circuit.h"
#include "csdtc/errors.h"
#include "csdtc/hamiltonian.h"

namespace csdtc {

struct MinimizeResult {
    double x = 0;
    double fx = 0;
    int evaluations = 0;
    /// Every (x, f(x)) evaluated, in order.
    std::vector<std::pair<double, double>> trace;
};

/// The minimum found lies on (or within tolerance of) an end of the bracket.
struct BracketError : NumericalError {
    BracketError(const std::string &what, std::vector<std::pair<double, double>> t)
        : NumericalError(what), trace(std::move(t)) {
    }
    std::vector<std::pair<double, double>> trace;
};

/// Golden-section search for a minimum of a unimodal f on [lo, hi] to within `tol` in x.
/// Evaluates both ends too and throws BracketError unless an interior point beats them.
MinimizeResult golden_section_minimize(const std::function<double(double)> &f, double lo, double hi, double tol);

/// argmin over C34 in [lo, hi] fF of |zeta| from exact diagonalization at `flux`.
MinimizeResult argmin_abs_zeta_c34(const CircuitParams &params, double lo_fF, double hi_fF, FluxPoint flux,
                                   const ChargeBasisConfig &cfg, double tol_fF = 0.25);

}  // namespace csdtc

#endif  // CSDTC_DESIGN_H
