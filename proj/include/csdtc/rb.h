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

#ifndef CSDTC_RB_H
#define CSDTC_RB_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "csdtc/errors.h"

/// Randomized-benchmarking decay fits and the CZ error budget built from them.
namespace csdtc::rb {

enum class TraceKind {
    /// Population left in the computational subspace.
    population_X1,
    /// Population returned to |0000>.
    population_0000,
    /// d/(d-1) (tr rho^2 - 1/d); may fall below zero when population leaks.
    normalized_purity,
    /// P_0000 - P_X1 / d, built by subtract_traces.
    subtracted_0000,
};

enum class Variant { SRB, IRB };

std::string_view to_string(TraceKind kind);
std::string_view to_string(Variant variant);
/// Throws ValidationError for unknown names. `subtracted_0000` is internal and not accepted.
TraceKind parse_kind(std::string_view text);
Variant parse_variant(std::string_view text);

/// Purity decays as lambda^(2m), every other kind as lambda^m.
int exponent_scale(TraceKind kind);

struct RBTrace {
    std::vector<int> lengths;
    std::vector<double> values;
    /// Empty when the data carry no uncertainties.
    std::vector<double> std_errs;
    TraceKind kind = TraceKind::population_X1;
    Variant variant = Variant::SRB;

    /// Throws ValidationError: at least 4 points, lengths positive and strictly increasing,
    /// matching sizes, non-negative finite std errors, populations inside [0, 1].
    void validate() const;
};

/// offset + amplitude * lambda^(s m).
struct DecayModel {
    double offset = 0;
    double amplitude = 0;
    double lambda = 1;

    double operator()(int m, int scale) const;
};

struct DecayFit {
    DecayModel model;
    TraceKind kind = TraceKind::population_X1;
    Variant variant = Variant::SRB;
    int exponent_scale = 1;
    /// Parameter order (offset, amplitude, lambda).
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
    /// sqrt of the weighted residual sum of squares.
    double residual_norm = 0;
    int iterations = 0;
    /// False when the decay is too flat (or the normal matrix too singular) to pin lambda down.
    bool lambda_identifiable = true;
    /// True when the optimum sits on lambda = 1.
    bool lambda_at_bound = false;

    double sigma_offset() const;
    double sigma_amplitude() const;
    double sigma_lambda() const;
};

struct FitError : NumericalError {
    FitError(const std::string &what, std::vector<double> residuals)
        : NumericalError(what), residual_trace(std::move(residuals)) {
    }
    /// Weighted residual norm after each accepted step.
    std::vector<double> residual_trace;
};

/// Weighted nonlinear least squares (weights 1/std^2, unit weights without std errors)
/// by Levenberg-Marquardt with lambda kept in (0, 1]. The covariance is (J^T W J)^-1,
/// scaled by the reduced chi-square when no std errors were given.
DecayFit fit_decay(const RBTrace &trace, std::optional<int> exponent_scale_override = std::nullopt);

/// A value with its one-sigma uncertainty.
struct Estimate {
    double value = 0;
    double sigma = 0;
};

struct LeakageBudget {
    Estimate l1_srb;
    Estimate l1_irb;
    Estimate l1_cz;
};

/// L1 = (1 - offset)(1 - lambda) per variant, then L1_cz = 1 - (1 - L1_irb)/(1 - L1_srb).
LeakageBudget leakage_budget(const DecayFit &srb, const DecayFit &irb);

/// (d-1)/d (1 - lambda_irb / lambda_srb) from purity fits.
Estimate incoherent_budget(const DecayFit &srb, const DecayFit &irb, int d = 4);

/// Same ratio formula on fits of P_0000 - P_X1/d.
Estimate gate_error_budget(const DecayFit &srb, const DecayFit &irb, int d = 4);

/// P_0000 - P_X1 / d on a shared set of lengths, std errors combined in quadrature.
RBTrace subtract_traces(const RBTrace &p0000, const RBTrace &px1, int d = 4);

struct ErrorBudget {
    std::optional<Estimate> l1_cz;
    std::optional<Estimate> r_incoh_cz;
    std::optional<Estimate> r_coh_cz;
    std::optional<Estimate> r_cz;
    std::optional<Estimate> fidelity;
    int d = 4;
    std::vector<std::string> warnings;
};

/// r_coh = r - r_incoh - 0.75 L1 and F = 1 - r - L1/4. A negative r_coh is kept and warned about.
ErrorBudget assemble_budget(Estimate r_cz, Estimate r_incoh_cz, Estimate l1_cz, int d = 4);

/// Fills whatever the available pieces determine; the rest stays empty.
ErrorBudget assemble_partial_budget(std::optional<Estimate> r_cz, std::optional<Estimate> r_incoh_cz,
                                    std::optional<Estimate> l1_cz, int d = 4);

/// d/(d-1) (tr rho^2 - 1/d). Throws ValidationError for a non-square, wrong-sized or
/// non-Hermitian matrix.
double normalized_purity_from_density(const Eigen::MatrixXcd &rho, int d = 4);

/// Model values plus seeded Gaussian noise (Box-Muller on mt19937_64, identical on every
/// platform). Population kinds are clipped to [0, 1]. sigma = 0 gives exact values and no std errors.
RBTrace synth_trace(const DecayModel &model, TraceKind kind, Variant variant, const std::vector<int> &lengths,
                    double sigma, std::uint64_t seed);

/// The six traces of a full CZ benchmark. Any slot may be empty for a partial budget.
struct TraceBundle {
    std::optional<RBTrace> x1_srb;
    std::optional<RBTrace> x1_irb;
    std::optional<RBTrace> purity_srb;
    std::optional<RBTrace> purity_irb;
    std::optional<RBTrace> p0000_srb;
    std::optional<RBTrace> p0000_irb;
};

/// Names of the bundle slots, in declaration order: "x1-srb", "x1-irb", ...
inline constexpr std::array<std::string_view, 6> kBundleSlots{"x1-srb",     "x1-irb",     "purity-srb",
                                                              "purity-irb", "p0000-srb", "p0000-irb"};

/// Generator parameters for synth_bundle. The P_0000 traces are built so that
/// P_0000 - P_X1/d follows `subtracted` exactly.
struct BundleModel {
    DecayModel x1_srb{0.02, 0.95, 0.9995};
    DecayModel x1_irb{0.02, 0.95, 0.999};
    DecayModel purity_srb{0.0, 0.95, 0.995};
    DecayModel purity_irb{0.0, 0.95, 0.993};
    DecayModel subtracted_srb{0.01, 0.7, 0.995};
    DecayModel subtracted_irb{0.01, 0.7, 0.992};
};

/// Six synthetic traces on shared lengths; trace i uses its own seed derived from `seed`.
TraceBundle synth_bundle(const BundleModel &model, const std::vector<int> &lengths, double sigma, std::uint64_t seed,
                         int d = 4);

struct BundleBudget {
    ErrorBudget budget;
    /// Fits that were performed, keyed by slot name ("x1-srb", ..., "subtracted-srb", "subtracted-irb").
    std::vector<std::pair<std::string, DecayFit>> fits;
};

/// Fits every available pair and assembles the budget. Without `allow_partial` all six traces
/// are required. Throws ValidationError naming the slot when a trace has the wrong kind or variant.
BundleBudget budget_from_bundle(const TraceBundle &bundle, int d = 4, bool allow_partial = false);

}  // namespace csdtc::rb

#endif  // CSDTC_RB_H
