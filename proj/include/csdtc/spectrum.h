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

#ifndef CSDTC_SPECTRUM_H
#define CSDTC_SPECTRUM_H

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "csdtc/circuit.h"
#include "csdtc/eigensolver.h"
#include "csdtc/errors.h"
#include "csdtc/hamiltonian.h"

namespace csdtc {

/// Occupations (nQ1, nQ2, nC3, nC4) of an uncoupled product state.
using Occupation = std::array<int, 4>;

/// Labels below this overlap are reported but flagged.
inline constexpr double kAmbiguityThreshold = 0.5;

/// Highest occupation per mode considered when labeling.
inline constexpr int kMaxLabelOccupation = 2;

inline constexpr Occupation kState0000{0, 0, 0, 0};
inline constexpr Occupation kState1000{1, 0, 0, 0};
inline constexpr Occupation kState0100{0, 1, 0, 0};
inline constexpr Occupation kState1100{1, 1, 0, 0};

/// "1000" style rendering.
std::string occupation_string(const Occupation &occ);

struct DressedLabel {
    Occupation occupations{};
    /// |<product state|eigenstate>|^2.
    double overlap = 0;

    bool ambiguous() const {
        return overlap < kAmbiguityThreshold;
    }
};

struct SpectrumResult {
    /// Ascending, relative to the ground state (first entry 0), GHz.
    Eigen::VectorXd frequencies_GHz;
    /// One entry per eigenstate; empty when no candidate product state was left for it.
    std::vector<std::optional<DressedLabel>> labels;
    FluxPoint flux;
    ChargeBasisConfig basis;
    /// Eigensolver residual norms, GHz.
    Eigen::VectorXd residual_norms;

    /// Index of the eigenstate carrying `occ`, if any.
    std::optional<int> find(const Occupation &occ) const;
    /// Frequency of the labeled state; throws LabelingError when absent.
    double frequency_of(const Occupation &occ) const;
    /// Overlap of the labeled state; NaN when absent.
    double overlap_of(const Occupation &occ) const;
};

/// A required computational label could not be assigned at all.
struct LabelingError : NumericalError {
    using NumericalError::NumericalError;
};

/// ZZ requested for a spectrum whose computational labels are below the overlap threshold.
struct AmbiguousLabelError : NumericalError {
    AmbiguousLabelError(const std::string &what, SpectrumResult s) : NumericalError(what), spectrum(std::move(s)) {
    }
    SpectrumResult spectrum;
};

/// Greedy unique assignment on descending overlap with product states of the uncoupled
/// reference having every occupation <= kMaxLabelOccupation. Ties go to the lower
/// eigenstate. Throws LabelingError if one of the four computational labels stays unassigned.
std::vector<std::optional<DressedLabel>> label_states(const Eigen::MatrixXcd &eigenvectors,
                                                      const ProductBasis &reference);

/// Lowest cfg.num_eigenstates levels of the circuit, labeled.
SpectrumResult compute_spectrum(const CircuitModel &model, FluxPoint flux, const ChargeBasisConfig &cfg);
SpectrumResult compute_spectrum(const CircuitParams &params, FluxPoint flux, const ChargeBasisConfig &cfg);

struct ZZResult {
    /// zeta / 2pi, kHz.
    double zeta_kHz = 0;
    FluxPoint flux;
    /// Set when a convergence study produced this value.
    std::optional<double> convergence_delta_kHz;
    SpectrumResult spectrum;
};

/// E_1100 - E_1000 - E_0100 + E_0000 from a labeled spectrum. Throws AmbiguousLabelError.
double zz_from_spectrum(const SpectrumResult &spectrum);

ZZResult zz_interaction(const CircuitModel &model, FluxPoint flux, const ChargeBasisConfig &cfg);
ZZResult zz_interaction(const CircuitParams &params, FluxPoint flux, const ChargeBasisConfig &cfg);

/// One grid point of a sweep. Exactly one of `result` and `error` is meaningful; an
/// ambiguous-label failure still carries the spectrum.
struct SweepPoint {
    double x = 0;
    std::optional<ZZResult> result;
    std::optional<SpectrumResult> spectrum;
    std::string error;

    bool ok() const {
        return result.has_value();
    }
};

struct SweepResult {
    std::vector<SweepPoint> points;
    /// Adjacent successful grid points between which zeta changes sign.
    std::vector<std::pair<double, double>> sign_changes;

    std::size_t failures() const;
};

/// Evaluates f(0..count-1) on up to `threads` workers (0 = hardware concurrency).
/// Results keep index order regardless of completion order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &f, unsigned threads = 0);

/// ZZ along a flux grid. Point failures are recorded and the sweep continues.
SweepResult sweep_flux(const CircuitParams &params, const std::vector<double> &flux_grid, const ChargeBasisConfig &cfg,
                       unsigned threads = 0);

/// ZZ along a grid of shunt capacitances (fF) at one flux. `zero_parasitics` clears C12, C14, C23.
SweepResult sweep_c34(const CircuitParams &params, const std::vector<double> &c34_grid_fF, FluxPoint flux,
                      const ChargeBasisConfig &cfg, bool zero_parasitics, unsigned threads = 0);

struct ConvergenceStudy {
    std::vector<int> n_max;
    std::vector<double> zeta_kHz;
    /// |zeta(n_max[i+1]) - zeta(n_max[i])|.
    std::vector<double> deltas_kHz;
    double final_delta_kHz = 0;
    bool converged = false;
};

/// Converged when the final delta is below this, kHz.
inline constexpr double kConvergenceThreshold_kHz = 1.0;

/// Re-runs zz_interaction for each basis size. Needs at least two strictly ascending n_max values.
ConvergenceStudy convergence_study(const CircuitModel &model, FluxPoint flux, const std::vector<int> &n_max_list,
                                   int num_eigenstates = 16);
ConvergenceStudy convergence_study(const CircuitParams &params, FluxPoint flux, const std::vector<int> &n_max_list,
                                   int num_eigenstates = 16);

}  // namespace csdtc

#endif  // CSDTC_SPECTRUM_H
