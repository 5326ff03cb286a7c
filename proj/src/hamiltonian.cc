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

#include "csdtc/hamiltonian.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "csdtc/constants.h"
#include "csdtc/errors.h"
#include "csdtc/text_format.h"

namespace csdtc {

namespace {

using Shape = std::array<std::int64_t, 4>;

// Applies `t` (out x in) along one axis of a 4-index tensor stored with axis 0 slowest.
Eigen::VectorXcd transform_axis(const Eigen::Ref<const Eigen::VectorXcd> &x, Shape &shape, int axis,
                                const Eigen::MatrixXd &t) {
    std::int64_t outer = 1;
    std::int64_t inner = 1;
    for (int a = 0; a < axis; ++a) {
        outer *= shape[a];
    }
    for (int a = axis + 1; a < 4; ++a) {
        inner *= shape[a];
    }
    const std::int64_t in_d = shape[axis];
    const std::int64_t out_d = t.rows();
    Eigen::VectorXcd y(outer * out_d * inner);
    if (inner == 1) {
        Eigen::Map<const Eigen::MatrixXcd> xm(x.data(), in_d, outer);
        Eigen::Map<Eigen::MatrixXcd> ym(y.data(), out_d, outer);
        ym.noalias() = t.cast<cplx>() * xm;
    } else {
        // Real view: interleaved (re, im) pairs keep each inner run contiguous.
        const double *xr = reinterpret_cast<const double *>(x.data());
        double *yr = reinterpret_cast<double *>(y.data());
        const Eigen::MatrixXd tt = t.transpose();
        for (std::int64_t o = 0; o < outer; ++o) {
            Eigen::Map<const Eigen::MatrixXd> a(xr + 2 * o * in_d * inner, 2 * inner, in_d);
            Eigen::Map<Eigen::MatrixXd> b(yr + 2 * o * out_d * inner, 2 * inner, out_d);
            b.noalias() = a * tt;
        }
    }
    shape[axis] = out_d;
    return y;
}

}  // namespace

void ChargeBasisConfig::validate() const {
    if (n_max < 3) {
        throw ConfigError("n_max must be at least 3 (got " + std::to_string(n_max) + ")");
    }
    if (num_eigenstates < 6) {
        throw ConfigError("num_eigenstates must be at least 6 (got " + std::to_string(num_eigenstates) + ")");
    }
    if (dimension() > kMaxDimension) {
        throw ConfigError("charge basis with n_max=" + std::to_string(n_max) + " exceeds the maximum dimension " +
                          std::to_string(kMaxDimension));
    }
    if (num_eigenstates >= dimension()) {
        throw ConfigError("num_eigenstates must be below the basis dimension");
    }
}

std::int64_t ChargeBasisConfig::dimension() const {
    if (n_max < 0) {
        throw ConfigError("n_max must be non-negative");
    }
    std::int64_t d = 2 * static_cast<std::int64_t>(n_max) + 1;
    std::int64_t dim = 1;
    for (int k = 0; k < 4; ++k) {
        if (dim > INT64_MAX / d) {
            throw ConfigError("charge basis dimension overflows for n_max=" + std::to_string(n_max));
        }
        dim *= d;
    }
    return dim;
}

FluxPoint FluxPoint::reduced() const {
    if (!std::isfinite(phi_ex)) {
        throw ConfigError("flux must be finite");
    }
    return {std::remainder(phi_ex, 1.0)};
}

cplx flux_phase(FluxPoint flux) {
    // Reduce to quarter turns so that 0, +-1/4, +-1/2 give exact unit phases.
    double x = flux.reduced().phi_ex * 4.0;
    double quarter = std::nearbyint(x);
    double frac = (x - quarter) * (constants::pi / 2.0);
    cplx base(std::cos(frac), -std::sin(frac));
    switch (static_cast<int>(quarter)) {
        case 1:
            return cplx(0, -1) * base;
        case -1:
            return cplx(0, 1) * base;
        case 2:
        case -2:
            return -base;
        default:
            return base;
    }
}

SingleModeOperators single_mode_operators(int n_max) {
    if (n_max < 1) {
        throw ConfigError("n_max must be at least 1");
    }
    const int d = 2 * n_max + 1;
    SingleModeOperators ops;
    ops.charge = Eigen::MatrixXd::Zero(d, d);
    ops.raise = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        ops.charge(k, k) = k - n_max;
        if (k + 1 < d) {
            ops.raise(k + 1, k) = 1.0;
        }
    }
    ops.cosine = 0.5 * (ops.raise + ops.raise.transpose());
    return ops;
}

SparseHermitianOperator::SparseHermitianOperator(std::int64_t dimension, std::vector<Entry> entries)
    : dimension_(dimension) {
    if (dimension <= 0 || dimension > INT32_MAX) {
        throw ConfigError("operator dimension out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Entry &a, const Entry &b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_ptr_.assign(dimension + 1, 0);
    cols_.reserve(entries.size());
    values_.reserve(entries.size());
    for (size_t k = 0; k < entries.size();) {
        const auto &e = entries[k];
        if (e.row < 0 || e.row >= dimension || e.col < 0 || e.col >= dimension) {
            throw ConfigError("operator entry index out of range");
        }
        cplx sum = 0;
        size_t j = k;
        while (j < entries.size() && entries[j].row == e.row && entries[j].col == e.col) {
            sum += entries[j].value;
            ++j;
        }
        cols_.push_back(static_cast<std::int32_t>(e.col));
        values_.push_back(sum);
        row_ptr_[e.row + 1]++;
        k = j;
    }
    std::partial_sum(row_ptr_.begin(), row_ptr_.end(), row_ptr_.begin());
}

void SparseHermitianOperator::apply(const Eigen::Ref<const Eigen::VectorXcd> &in,
                                    Eigen::Ref<Eigen::VectorXcd> out) const {
    for (std::int64_t r = 0; r < dimension_; ++r) {
        cplx acc = 0;
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            acc += values_[p] * in[cols_[p]];
        }
        out[r] = acc;
    }
}

Eigen::VectorXcd SparseHermitianOperator::apply(const Eigen::Ref<const Eigen::VectorXcd> &in) const {
    Eigen::VectorXcd out(dimension_);
    apply(in, out);
    return out;
}

cplx SparseHermitianOperator::entry(std::int64_t row, std::int64_t col) const {
    auto first = cols_.begin() + row_ptr_[row];
    auto last = cols_.begin() + row_ptr_[row + 1];
    auto it = std::lower_bound(first, last, static_cast<std::int32_t>(col));
    if (it == last || *it != col) {
        return 0;
    }
    return values_[it - cols_.begin()];
}

Eigen::VectorXd SparseHermitianOperator::diagonal() const {
    Eigen::VectorXd diag(dimension_);
    for (std::int64_t r = 0; r < dimension_; ++r) {
        diag[r] = entry(r, r).real();
    }
    return diag;
}

double SparseHermitianOperator::hermiticity_defect() const {
    double worst = 0;
    for_each([&](std::int64_t r, std::int64_t c, cplx v) {
        worst = std::max(worst, std::abs(v - std::conj(entry(c, r))));
    });
    return worst;
}

double SparseHermitianOperator::norm_bound() const {
    double best = 0;
    for (std::int64_t r = 0; r < dimension_; ++r) {
        double sum = 0;
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            sum += std::abs(values_[p]);
        }
        best = std::max(best, sum);
    }
    return best;
}

Eigen::MatrixXcd SparseHermitianOperator::to_dense() const {
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(dimension_, dimension_);
    for_each([&](std::int64_t r, std::int64_t c, cplx v) { dense(r, c) = v; });
    return dense;
}

void write_operator_dump(std::ostream &out, const SparseHermitianOperator &op, const ChargeBasisConfig &cfg,
                         FluxPoint flux) {
    out << "# dimension=" << op.dimension() << " n_max=" << cfg.n_max << " phi_ex=" << format_number(flux.phi_ex)
        << "\n";
    op.for_each([&](std::int64_t r, std::int64_t c, cplx v) {
        out << r << ' ' << c << ' ' << format_number(v.real()) << ' ' << format_number(v.imag()) << '\n';
    });
}

SparseHermitianOperator assemble_hamiltonian(const CircuitParams &params, FluxPoint flux,
                                             const ChargeBasisConfig &cfg) {
    return assemble_hamiltonian(make_model(params), flux, cfg);
}

SparseHermitianOperator assemble_hamiltonian(const CircuitModel &model, FluxPoint flux, const ChargeBasisConfig &cfg) {
    const std::int64_t dim = cfg.dimension();
    if (dim > kMaxDimension) {
        throw ConfigError("charge basis with n_max=" + std::to_string(cfg.n_max) + " exceeds the maximum dimension");
    }
    const int n_max = cfg.n_max;
    const std::int64_t d = cfg.states_per_node();
    const std::array<std::int64_t, 4> stride{d * d * d, d * d, d, 1};
    const auto &k = model.charging.ghz;
    const auto &ej = model.junctions.ej_GHz;
    const cplx jj5 = -0.5 * ej[4] * flux_phase(flux);

    std::vector<SparseHermitianOperator::Entry> entries;
    entries.reserve(static_cast<size_t>(dim) * 11);
    std::array<int, 4> n{};
    for (std::int64_t idx = 0; idx < dim; ++idx) {
        std::int64_t rest = idx;
        for (int i = 0; i < 4; ++i) {
            n[i] = static_cast<int>(rest / stride[i]) - n_max;
            rest %= stride[i];
        }
        double diag = 0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                diag += k(i, j) * n[i] * n[j];
            }
        }
        entries.push_back({idx, idx, diag});
        for (int i = 0; i < 4; ++i) {
            if (n[i] > -n_max) {
                entries.push_back({idx, idx - stride[i], -0.5 * ej[i]});
            }
            if (n[i] < n_max) {
                entries.push_back({idx, idx + stride[i], -0.5 * ej[i]});
            }
        }
        // Source state with n3 + 1, n4 - 1 is mapped onto this row by S4+ S3-.
        if (n[2] < n_max && n[3] > -n_max) {
            entries.push_back({idx, idx + stride[2] - stride[3], jj5});
        }
        if (n[2] > -n_max && n[3] < n_max) {
            entries.push_back({idx, idx - stride[2] + stride[3], std::conj(jj5)});
        }
    }
    return SparseHermitianOperator(dim, std::move(entries));
}

std::array<Eigen::MatrixXd, 4> uncoupled_hamiltonian(const CircuitParams &params, const ChargeBasisConfig &cfg) {
    return uncoupled_hamiltonian(make_model(params), cfg);
}

std::array<Eigen::MatrixXd, 4> uncoupled_hamiltonian(const CircuitModel &model, const ChargeBasisConfig &cfg) {
    auto ops = single_mode_operators(cfg.n_max);
    const int d = cfg.states_per_node();
    const Eigen::MatrixXd n2 = ops.charge * ops.charge;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    std::array<Eigen::MatrixXd, 4> out;
    for (int i = 0; i < 4; ++i) {
        out[i] = model.charging.ghz(i, i) * n2 - model.junctions.ej_GHz[i] * ops.cosine;
        if (i >= 2) {
            out[i] += model.junctions.ej_GHz[4] * (id - ops.cosine);
        }
    }
    return out;
}

ProductBasis::ProductBasis(const std::array<Eigen::MatrixXd, 4> &mode_hamiltonians) {
    d_ = static_cast<int>(mode_hamiltonians[0].rows());
    dimension_ = static_cast<std::int64_t>(d_) * d_ * d_ * d_;
    for (int i = 0; i < 4; ++i) {
        if (mode_hamiltonians[i].rows() != d_ || mode_hamiltonians[i].cols() != d_) {
            throw ConfigError("mode Hamiltonians must share one square size");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mode_hamiltonians[i]);
        energies_[i] = eig.eigenvalues();
        vectors_[i] = eig.eigenvectors();
        // Fix the sign so the largest-magnitude component of every eigenvector is positive.
        for (int c = 0; c < d_; ++c) {
            Eigen::Index at = 0;
            vectors_[i].col(c).cwiseAbs().maxCoeff(&at);
            if (vectors_[i](at, c) < 0) {
                vectors_[i].col(c) *= -1.0;
            }
        }
    }
    product_energies_.resize(dimension_);
    std::int64_t idx = 0;
    for (int a = 0; a < d_; ++a) {
        for (int b = 0; b < d_; ++b) {
            for (int c = 0; c < d_; ++c) {
                for (int e = 0; e < d_; ++e) {
                    product_energies_[idx++] = energies_[0][a] + energies_[1][b] + energies_[2][c] + energies_[3][e];
                }
            }
        }
    }
}

Eigen::VectorXcd ProductBasis::product_state(const std::array<int, 4> &occupation) const {
    Eigen::VectorXd v = vectors_[0].col(occupation[0]);
    for (int i = 1; i < 4; ++i) {
        Eigen::VectorXd next(v.size() * d_);
        const Eigen::VectorXd col = vectors_[i].col(occupation[i]);
        for (Eigen::Index a = 0; a < v.size(); ++a) {
            next.segment(a * d_, d_) = v[a] * col;
        }
        v = std::move(next);
    }
    return v.cast<cplx>();
}

Eigen::MatrixXcd ProductBasis::lowest_product_states(int count) const {
    std::vector<std::int64_t> order(dimension_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int64_t a, std::int64_t b) { return product_energies_[a] < product_energies_[b]; });
    Eigen::MatrixXcd out(dimension_, count);
    const std::int64_t d = d_;
    for (int c = 0; c < count; ++c) {
        std::int64_t flat = order[c];
        std::array<int, 4> occ{static_cast<int>(flat / (d * d * d)), static_cast<int>(flat / (d * d) % d),
                               static_cast<int>(flat / d % d), static_cast<int>(flat % d)};
        out.col(c) = product_state(occ);
    }
    return out;
}

Eigen::VectorXcd ProductBasis::project_low(const Eigen::Ref<const Eigen::VectorXcd> &v, int levels) const {
    Shape shape{d_, d_, d_, d_};
    Eigen::VectorXcd cur = v;
    for (int axis = 0; axis < 4; ++axis) {
        cur = transform_axis(cur, shape, axis, vectors_[axis].leftCols(levels).transpose());
    }
    return cur;
}

void ProductBasis::apply_shifted_inverse(double shift, Eigen::Ref<Eigen::VectorXcd> v, double floor) const {
    Shape shape{d_, d_, d_, d_};
    Eigen::VectorXcd cur = v;
    for (int axis = 0; axis < 4; ++axis) {
        cur = transform_axis(cur, shape, axis, vectors_[axis].transpose());
    }
    for (std::int64_t k = 0; k < dimension_; ++k) {
        double denom = product_energies_[k] - shift;
        if (std::abs(denom) < floor) {
            denom = denom < 0 ? -floor : floor;
        }
        cur[k] /= denom;
    }
    for (int axis = 0; axis < 4; ++axis) {
        cur = transform_axis(cur, shape, axis, vectors_[axis]);
    }
    v = cur;
}


CouplerBlockReference::CouplerBlockReference(const CircuitModel &model, FluxPoint flux,
                                             const ChargeBasisConfig &cfg) {
    auto ops = single_mode_operators(cfg.n_max);
    d_ = cfg.states_per_node();
    dimension_ = cfg.dimension();
    const auto &k = model.charging.ghz;
    const auto &ej = model.junctions.ej_GHz;
    const Eigen::MatrixXd n2 = ops.charge * ops.charge;
    for (int q = 0; q < 2; ++q) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k(q, q) * n2 - ej[q] * ops.cosine);
        qubit_energies_[q] = eig.eigenvalues();
        qubit_vectors_[q] = eig.eigenvectors();
    }
    // Coupler pair, node 3 slow and node 4 fast.
    const int dd = d_ * d_;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d_, d_);
    auto kron = [](const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
        Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            }
        }
        return out;
    };
    Eigen::MatrixXcd pair = (k(2, 2) * kron(n2, id) + k(3, 3) * kron(id, n2) +
                             2.0 * k(2, 3) * kron(ops.charge, ops.charge) - ej[2] * kron(ops.cosine, id) -
                             ej[3] * kron(id, ops.cosine))
                                .cast<cplx>();
    const Eigen::MatrixXcd hop = kron(ops.raise.transpose(), ops.raise).cast<cplx>();  // S3- S4+
    const cplx jj5 = -0.5 * ej[4] * flux_phase(flux);
    pair += jj5 * hop + std::conj(jj5) * hop.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(pair);
    const int kept = std::min(kCouplerStatesKept, dd - 1);
    coupler_energies_ = eig.eigenvalues().head(kept);
    coupler_vectors_ = eig.eigenvectors().leftCols(kept);
    coupler_cutoff_ = eig.eigenvalues()[kept];

    energies_.resize(dimension_);
    std::int64_t idx = 0;
    for (int a = 0; a < d_; ++a) {
        for (int b = 0; b < d_; ++b) {
            for (int c = 0; c < dd; ++c) {
                energies_[idx++] = qubit_energies_[0][a] + qubit_energies_[1][b] +
                                   (c < coupler_energies_.size() ? coupler_energies_[c] : coupler_cutoff_);
            }
        }
    }
}

void CouplerBlockReference::apply_shifted_inverse(double shift, Eigen::Ref<Eigen::VectorXcd> v, double floor) const {
    const std::int64_t dd = static_cast<std::int64_t>(d_) * d_;
    Shape shape{d_, d_, d_, d_};
    Eigen::VectorXcd cur = transform_axis(v, shape, 0, qubit_vectors_[0].transpose());
    cur = transform_axis(cur, shape, 1, qubit_vectors_[1].transpose());
    {
        // Exact on the lowest coupler states; the complement sees the first excluded energy.
        Eigen::Map<Eigen::MatrixXcd> m(cur.data(), dd, dd);
        const Eigen::Index kept = coupler_vectors_.cols();
        Eigen::MatrixXcd low = coupler_vectors_.adjoint() * m;
        m.noalias() -= coupler_vectors_ * low;
        auto clamp = [floor](double denom) {
            return std::abs(denom) < floor ? (denom < 0 ? -floor : floor) : denom;
        };
        for (std::int64_t c = 0; c < dd; ++c) {
            const double qubits = qubit_energies_[0][c / d_] + qubit_energies_[1][c % d_];
            m.col(c) /= clamp(qubits + coupler_cutoff_ - shift);
            for (Eigen::Index r = 0; r < kept; ++r) {
                low(r, c) /= clamp(qubits + coupler_energies_[r] - shift);
            }
        }
        m.noalias() += coupler_vectors_ * low;
    }
    cur = transform_axis(cur, shape, 1, qubit_vectors_[1]);
    v = transform_axis(cur, shape, 0, qubit_vectors_[0]);
}

Eigen::MatrixXcd CouplerBlockReference::lowest_states(int count) const {
    std::vector<std::int64_t> order(dimension_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int64_t a, std::int64_t b) { return energies_[a] < energies_[b]; });
    const std::int64_t dd = static_cast<std::int64_t>(d_) * d_;
    Eigen::MatrixXcd out(dimension_, count);
    for (int c = 0; c < count; ++c) {
        std::int64_t flat = order[c];
        std::int64_t a = flat / (d_ * dd);
        std::int64_t b = flat / dd % d_;
        std::int64_t pair = flat % dd;
        if (pair >= coupler_vectors_.cols()) {
            throw ConfigError("requested more reference states than the truncated coupler basis holds");
        }
        for (int i = 0; i < d_; ++i) {
            for (int j = 0; j < d_; ++j) {
                out.col(c).segment((i * d_ + j) * dd, dd) =
                    (qubit_vectors_[0](i, a) * qubit_vectors_[1](j, b)) * coupler_vectors_.col(pair);
            }
        }
    }
    return out;
}

}  // namespace csdtc
