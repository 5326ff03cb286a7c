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

#ifndef CSDTC_HAMILTONIAN_H
#define CSDTC_HAMILTONIAN_H

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "csdtc/circuit.h"

namespace csdtc {

using cplx = std::complex<double>;

/// Truncated charge basis: each node carries Cooper-pair numbers -n_max..n_max.
struct ChargeBasisConfig {
    int n_max = 7;
    int num_eigenstates = 16;

    /// Throws ConfigError for n_max < 3, k < 6, or a dimension too large to hold.
    void validate() const;
    int states_per_node() const {
        return 2 * n_max + 1;
    }
    /// (2 n_max + 1)^4, computed with overflow checking.
    std::int64_t dimension() const;
};

/// Largest Hilbert-space dimension accepted by the assembler.
inline constexpr std::int64_t kMaxDimension = 20'000'000;

/// External coupler flux in units of the flux quantum (phi_ex / 2pi).
struct FluxPoint {
    double phi_ex = 0;

    /// Periodic image in [-0.5, 0.5].
    FluxPoint reduced() const;
};

/// exp(-2 pi i phi) with exact values at multiples of 1/4.
cplx flux_phase(FluxPoint flux);

/// Charge-basis operators of one node, indexed by n + n_max.
struct SingleModeOperators {
    Eigen::MatrixXd charge;
    Eigen::MatrixXd cosine;
    /// |n> -> |n+1>, with the top state sent to zero.
    Eigen::MatrixXd raise;
};

SingleModeOperators single_mode_operators(int n_max);

/// Hermitian operator in compressed sparse row form. Values are frequencies in GHz.
class SparseHermitianOperator {
   public:
    struct Entry {
        std::int64_t row;
        std::int64_t col;
        cplx value;
    };

    SparseHermitianOperator() = default;
    /// Duplicate (row, col) entries are summed. Does not check Hermiticity.
    SparseHermitianOperator(std::int64_t dimension, std::vector<Entry> entries);

    std::int64_t dimension() const {
        return dimension_;
    }
    std::int64_t nonzeros() const {
        return static_cast<std::int64_t>(values_.size());
    }

    /// out = H * in.
    void apply(const Eigen::Ref<const Eigen::VectorXcd> &in, Eigen::Ref<Eigen::VectorXcd> out) const;
    Eigen::VectorXcd apply(const Eigen::Ref<const Eigen::VectorXcd> &in) const;

    cplx entry(std::int64_t row, std::int64_t col) const;
    Eigen::VectorXd diagonal() const;
    /// max |H_ij - conj(H_ji)| over stored entries.
    double hermiticity_defect() const;
    /// Largest absolute row sum; an upper bound on the spectral norm.
    double norm_bound() const;
    Eigen::MatrixXcd to_dense() const;

    /// Visits stored entries in row-major order.
    template <typename F>
    void for_each(F &&f) const {
        for (std::int64_t r = 0; r < dimension_; ++r) {
            for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
                f(r, static_cast<std::int64_t>(cols_[p]), values_[p]);
            }
        }
    }

   private:
    std::int64_t dimension_ = 0;
    std::vector<std::int64_t> row_ptr_{0};
    std::vector<std::int32_t> cols_;
    std::vector<cplx> values_;
};

/// Coordinate dump for external cross-checks:
///
///     # dimension=<N> n_max=<n> phi_ex=<phi>
///     row col re im
///
/// with zero-based indices, one stored entry per line.
void write_operator_dump(std::ostream &out, const SparseHermitianOperator &op, const ChargeBasisConfig &cfg,
                         FluxPoint flux);

/// Full circuit Hamiltonian H/h in the product charge basis, node order (1, 2, 3, 4) with node 1 slowest:
///
///     sum_ij K_ij n_i n_j - sum_i EJ_i cos(phi_i) - EJ5 [e^{-2 pi i phi_ex} S4+ S3- + h.c.] / 2
SparseHermitianOperator assemble_hamiltonian(const CircuitParams &params, FluxPoint flux,
                                             const ChargeBasisConfig &cfg);
SparseHermitianOperator assemble_hamiltonian(const CircuitModel &model, FluxPoint flux, const ChargeBasisConfig &cfg);

/// Single-node reference Hamiltonians used to label dressed states. Mode i is
/// K_ii n^2 - EJ_i cos(phi); the coupler nodes additionally carry EJ5 (1 - cos(phi)),
/// the quadratic share of junction 5 at zero flux.
std::array<Eigen::MatrixXd, 4> uncoupled_hamiltonian(const CircuitParams &params, const ChargeBasisConfig &cfg);
std::array<Eigen::MatrixXd, 4> uncoupled_hamiltonian(const CircuitModel &model, const ChargeBasisConfig &cfg);

/// Eigendecomposition of the uncoupled reference and the product basis it spans.
class ProductBasis {
   public:
    explicit ProductBasis(const std::array<Eigen::MatrixXd, 4> &mode_hamiltonians);

    int states_per_node() const {
        return d_;
    }
    std::int64_t dimension() const {
        return dimension_;
    }
    /// Ascending single-mode energies of mode i, GHz.
    const Eigen::VectorXd &mode_energies(int i) const {
        return energies_[i];
    }
    /// Columns are single-mode eigenvectors of mode i in the charge basis.
    const Eigen::MatrixXd &mode_vectors(int i) const {
        return vectors_[i];
    }
    /// Sum of mode energies for every product state, in flat product-state order.
    const Eigen::VectorXd &product_energies() const {
        return product_energies_;
    }

    /// Charge-basis vector of the product state with the given occupations.
    Eigen::VectorXcd product_state(const std::array<int, 4> &occupation) const;
    /// Product states with the `count` lowest uncoupled energies (ties broken by flat index).
    Eigen::MatrixXcd lowest_product_states(int count) const;

    /// Amplitudes of `v` on product states with every occupation below `levels`,
    /// flattened with mode 1 slowest.
    Eigen::VectorXcd project_low(const Eigen::Ref<const Eigen::VectorXcd> &v, int levels) const;

    /// In place: v <- (H0 - shift)^-1 v, where H0 is the separable reference Hamiltonian.
    /// Denominators smaller than `floor` in magnitude are clamped to +-floor.
    void apply_shifted_inverse(double shift, Eigen::Ref<Eigen::VectorXcd> v, double floor = 1e-3) const;

   private:
    int d_ = 0;
    std::int64_t dimension_ = 0;
    std::array<Eigen::VectorXd, 4> energies_;
    std::array<Eigen::MatrixXd, 4> vectors_;
    Eigen::VectorXd product_energies_;
};


/// Separable approximation used to precondition eigensolves: the two data qubits as
/// independent transmons and the coupler nodes 3 and 4 solved exactly together, including
/// their mutual charging term and junction 5 at the given flux. Only the qubit-coupler and
/// qubit-qubit charging terms are left out.
class CouplerBlockReference {
   public:
    /// Coupler-pair eigenstates treated exactly; the rest share the first excluded energy.
    static constexpr int kCouplerStatesKept = 48;

    CouplerBlockReference(const CircuitModel &model, FluxPoint flux, const ChargeBasisConfig &cfg);

    /// In place: v <- (H_ref - shift)^-1 v, denominators clamped to at least `floor` in magnitude.
    void apply_shifted_inverse(double shift, Eigen::Ref<Eigen::VectorXcd> v, double floor = 1e-3) const;
    /// Reference eigenstates with the `count` lowest energies, as charge-basis vectors.
    Eigen::MatrixXcd lowest_states(int count) const;

   private:
    int d_ = 0;
    std::int64_t dimension_ = 0;
    Eigen::VectorXd qubit_energies_[2];
    Eigen::MatrixXd qubit_vectors_[2];
    Eigen::VectorXd coupler_energies_;
    Eigen::MatrixXcd coupler_vectors_;
    double coupler_cutoff_ = 0;
    Eigen::VectorXd energies_;
};

}  // namespace csdtc

#endif  // CSDTC_HAMILTONIAN_H
