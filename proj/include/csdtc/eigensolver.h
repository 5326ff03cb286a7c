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

#ifndef CSDTC_EIGENSOLVER_H
#define CSDTC_EIGENSOLVER_H

#include <functional>

#include <Eigen/Dense>

#include "csdtc/errors.h"
#include "csdtc/hamiltonian.h"

namespace csdtc {

struct EigenPairs {
    /// Ascending.
    Eigen::VectorXd values;
    /// Orthonormal columns matching `values`.
    Eigen::MatrixXcd vectors;
    /// ||H v - lambda v|| per pair, recomputed from scratch after convergence.
    Eigen::VectorXd residual_norms;
    int iterations = 0;
    int matvecs = 0;
};

/// In-place approximate application of (H - shift)^-1.
using Preconditioner = std::function<void(double shift, Eigen::Ref<Eigen::VectorXcd> v)>;

struct SolverOptions {
    /// Convergence: every residual <= tolerance * H.norm_bound().
    double tolerance = 1e-9;
    int max_iterations = 400;
    /// Extra Ritz pairs carried along to speed up convergence of the last wanted ones.
    int guard_vectors = 4;
    /// Largest search space before a thick restart; 0 picks 3 * block size.
    int max_subspace = 0;
    /// Defaults to the diagonal (Jacobi) preconditioner.
    Preconditioner preconditioner;
    /// Optional starting block; missing columns are filled with unit vectors on the lowest diagonal entries.
    Eigen::MatrixXcd initial_guess;
};

/// Raised when the iteration budget runs out; carries the last residual norms.
struct SolverError : NumericalError {
    SolverError(const std::string &what, Eigen::VectorXd residuals)
        : NumericalError(what), residual_norms(std::move(residuals)) {
    }
    Eigen::VectorXd residual_norms;
};

/// The k lowest eigenpairs of a Hermitian operator by block Davidson iteration with
/// Olsen-corrected preconditioning and thick restarts. Requires 0 < k < dimension.
EigenPairs solve_lowest(const SparseHermitianOperator &h, int k, const SolverOptions &options = {});

}  // namespace csdtc

#endif  // CSDTC_EIGENSOLVER_H
