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

#include "csdtc/eigensolver.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace csdtc {

namespace {

// Orthogonalizes `t` against the first `cols` columns of `basis` (two classical Gram-Schmidt
// passes) and normalizes it. Returns false when nothing independent is left.
bool orthonormalize_against(const Eigen::MatrixXcd &basis, Eigen::Index cols, Eigen::VectorXcd &t) {
    double before = t.norm();
    if (!(before > 0) || !std::isfinite(before)) {
        return false;
    }
    for (int pass = 0; pass < 2 && cols > 0; ++pass) {
        Eigen::VectorXcd coeffs = basis.leftCols(cols).adjoint() * t;
        t.noalias() -= basis.leftCols(cols) * coeffs;
    }
    double after = t.norm();
    if (after < 1e-10 * before) {
        return false;
    }
    t /= after;
    return true;
}

Eigen::MatrixXcd apply_block(const SparseHermitianOperator &h, const Eigen::MatrixXcd &v, int &matvecs) {
    Eigen::MatrixXcd out(v.rows(), v.cols());
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        h.apply(v.col(c), out.col(c));
        ++matvecs;
    }
    return out;
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd &m) {
    return 0.5 * (m + m.adjoint());
}

std::string describe_residuals(const Eigen::VectorXd &res, int k, double tol) {
    std::ostringstream out;
    out << "residuals (tolerance " << tol << "):";
    for (int i = 0; i < std::min<Eigen::Index>(k, res.size()); ++i) {
        out << ' ' << res[i];
    }
    return out.str();
}

}  // namespace

EigenPairs solve_lowest(const SparseHermitianOperator &h, int k, const SolverOptions &options) {
    const Eigen::Index n = h.dimension();
    if (k <= 0 || k >= n) {
        throw ConfigError("solve_lowest needs 0 < k < dimension (k=" + std::to_string(k) +
                          ", dimension=" + std::to_string(n) + ")");
    }
    const Eigen::Index block = std::min<Eigen::Index>(k + std::max(options.guard_vectors, 0), n);
    Eigen::Index max_subspace = options.max_subspace > 0 ? options.max_subspace : 3 * block;
    max_subspace = std::clamp<Eigen::Index>(max_subspace, std::min<Eigen::Index>(block + 1, n), n);
    const double tol = options.tolerance * std::max(h.norm_bound(), 1e-300);

    const Eigen::VectorXd diag = h.diagonal();
    Preconditioner precondition = options.preconditioner;
    if (!precondition) {
        precondition = [&diag](double shift, Eigen::Ref<Eigen::VectorXcd> v) {
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                double denom = diag[i] - shift;
                if (std::abs(denom) < 1e-8) {
                    denom = denom < 0 ? -1e-8 : 1e-8;
                }
                v[i] /= denom;
            }
        };
    }

    EigenPairs result;
    Eigen::MatrixXcd v(n, max_subspace);
    Eigen::Index p = 0;
    auto try_append = [&](Eigen::VectorXcd t) {
        if (p < max_subspace && orthonormalize_against(v, p, t)) {
            v.col(p++) = t;
            return true;
        }
        return false;
    };
    // Block version for the correction vectors: two block Gram-Schmidt passes against the
    // current basis, then modified Gram-Schmidt inside the block.
    auto append_block = [&](std::vector<Eigen::VectorXcd> &cols) {
        if (cols.empty()) {
            return;
        }
        const Eigen::Index m = static_cast<Eigen::Index>(cols.size());
        Eigen::MatrixXcd t(n, m);
        Eigen::VectorXd before(m);
        for (Eigen::Index c = 0; c < m; ++c) {
            t.col(c) = std::move(cols[c]);
            before[c] = t.col(c).norm();
        }
        for (int pass = 0; pass < 2 && p > 0; ++pass) {
            Eigen::MatrixXcd coeffs = v.leftCols(p).adjoint() * t;
            t.noalias() -= v.leftCols(p) * coeffs;
        }
        const Eigen::Index first = p;
        for (Eigen::Index c = 0; c < m && p < max_subspace; ++c) {
            Eigen::VectorXcd col = t.col(c);
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index j = first; j < p; ++j) {
                    col -= v.col(j).dot(col) * v.col(j);
                }
            }
            double norm = col.norm();
            if (!(before[c] > 0) || !std::isfinite(norm) || norm < 1e-10 * before[c]) {
                continue;
            }
            v.col(p++) = col / norm;
        }
    };
    for (Eigen::Index c = 0; c < options.initial_guess.cols() && p < block; ++c) {
        if (options.initial_guess.rows() != n) {
            throw ConfigError("initial guess has the wrong number of rows");
        }
        try_append(options.initial_guess.col(c));
    }
    if (p < block) {
        std::vector<Eigen::Index> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return diag[a] < diag[b]; });
        for (Eigen::Index c = 0; c < n && p < block; ++c) {
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
            e[order[c]] = 1.0;
            try_append(std::move(e));
        }
    }

    Eigen::MatrixXcd hv(n, max_subspace);
    hv.leftCols(p) = apply_block(h, v.leftCols(p), result.matvecs);
    Eigen::MatrixXcd g = hermitian_part(v.leftCols(p).adjoint() * hv.leftCols(p));

    Eigen::VectorXd residuals;
    for (int iter = 0;; ++iter) {
        result.iterations = iter;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g);
        const Eigen::Index b = std::min(block, p);
        const Eigen::MatrixXcd s = eig.eigenvectors().leftCols(b);
        const Eigen::VectorXd theta = eig.eigenvalues().head(b);
        Eigen::MatrixXcd x = v.leftCols(p) * s;
        Eigen::MatrixXcd hx = hv.leftCols(p) * s;
        Eigen::MatrixXcd r = hx - x * theta.asDiagonal();
        residuals = r.colwise().norm().transpose();

        if ((residuals.head(k).array() <= tol).all()) {
            // Confirm against a fresh product; accumulated H*V drifts over many restarts.
            Eigen::MatrixXcd xk = x.leftCols(k);
            Eigen::MatrixXcd hxk = apply_block(h, xk, result.matvecs);
            Eigen::VectorXd rq(k);
            for (int i = 0; i < k; ++i) {
                rq[i] = xk.col(i).dot(hxk.col(i)).real();
            }
            Eigen::VectorXd true_res = (hxk - xk * rq.asDiagonal()).colwise().norm().transpose();
            if ((true_res.array() <= tol).all()) {
                result.values = rq;
                result.vectors = std::move(xk);
                result.residual_norms = true_res;
                return result;
            }
            residuals.head(k) = true_res;
        }
        if (iter >= options.max_iterations) {
            throw SolverError("eigensolver did not converge in " + std::to_string(iter) + " iterations; " +
                                  describe_residuals(residuals, k, tol),
                              residuals.head(k));
        }

        std::vector<Eigen::VectorXcd> corrections;
        for (Eigen::Index i = 0; i < b; ++i) {
            if (residuals[i] <= tol) {
                continue;
            }
            Eigen::VectorXcd t = r.col(i);
            precondition(theta[i], t);
            Eigen::VectorXcd y = x.col(i);
            precondition(theta[i], y);
            cplx denom = x.col(i).dot(y);
            if (std::abs(denom) > 1e-14 * y.norm()) {
                t -= (x.col(i).dot(t) / denom) * y;
            }
            corrections.push_back(std::move(t));
        }

        if (p + static_cast<Eigen::Index>(corrections.size()) > max_subspace) {
            // Thick restart on the current Ritz vectors.
            Eigen::MatrixXcd keep = std::move(x);
            p = 0;
            for (Eigen::Index c = 0; c < keep.cols(); ++c) {
                try_append(keep.col(c));
            }
            hv.leftCols(p) = apply_block(h, v.leftCols(p), result.matvecs);
            g = hermitian_part(v.leftCols(p).adjoint() * hv.leftCols(p));
            // Make room if the corrections still do not fit.
            const Eigen::Index room = max_subspace - p;
            if (static_cast<Eigen::Index>(corrections.size()) > room) {
                corrections.resize(room);
            }
        }

        const Eigen::Index old_p = p;
        append_block(corrections);
        if (p == old_p) {
            if (p == n) {
                continue;
            }
            throw SolverError("eigensolver stagnated: no new search directions; " +
                                  describe_residuals(residuals, k, tol),
                              residuals.head(k));
        }
        const Eigen::Index added = p - old_p;
        hv.middleCols(old_p, added) = apply_block(h, v.middleCols(old_p, added), result.matvecs);
        Eigen::MatrixXcd grown(p, p);
        grown.topLeftCorner(old_p, old_p) = g;
        Eigen::MatrixXcd cross = v.leftCols(old_p).adjoint() * hv.middleCols(old_p, added);
        grown.topRightCorner(old_p, added) = cross;
        grown.bottomLeftCorner(added, old_p) = cross.adjoint();
        grown.bottomRightCorner(added, added) =
            hermitian_part(v.middleCols(old_p, added).adjoint() * hv.middleCols(old_p, added));
        g = std::move(grown);
    }
}

}  // namespace csdtc
