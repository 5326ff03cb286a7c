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

#include "csdtc/rb.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "csdtc/constants.h"
#include "csdtc/text_format.h"

namespace csdtc::rb {

namespace {

constexpr double kLambdaFloor = 1e-12;
constexpr int kMaxFitIterations = 200;

bool is_population(TraceKind kind) {
    return kind == TraceKind::population_X1 || kind == TraceKind::population_0000;
}

struct Problem {
    Eigen::ArrayXd m;
    Eigen::ArrayXd y;
    Eigen::ArrayXd w;
    int scale = 1;
};

Eigen::ArrayXd evaluate(const Problem &pb, const Eigen::Vector3d &p) {
    return p[0] + p[1] * (pb.scale * pb.m * std::log(p[2])).exp();
}

double cost(const Problem &pb, const Eigen::Vector3d &p) {
    return (pb.w * (pb.y - evaluate(pb, p)).square()).sum();
}

Eigen::MatrixXd jacobian(const Problem &pb, const Eigen::Vector3d &p) {
    const Eigen::ArrayXd decay = (pb.scale * pb.m * std::log(p[2])).exp();
    Eigen::MatrixXd j(pb.m.size(), 3);
    j.col(0).setOnes();
    j.col(1) = decay.matrix();
    j.col(2) = (p[1] * pb.scale * pb.m * decay / p[2]).matrix();
    return j;
}

// Best offset and amplitude for a fixed lambda (weighted linear least squares).
Eigen::Vector3d linear_solve(const Problem &pb, double lambda) {
    Eigen::MatrixXd a(pb.m.size(), 2);
    a.col(0).setOnes();
    a.col(1) = (pb.scale * pb.m * std::log(lambda)).exp().matrix();
    const Eigen::VectorXd sw = pb.w.sqrt().matrix();
    const Eigen::MatrixXd aw = sw.asDiagonal() * a;
    const Eigen::VectorXd yw = sw.asDiagonal() * pb.y.matrix();
    const Eigen::Vector2d c = aw.completeOrthogonalDecomposition().solve(yw);
    return {c[0], c[1], lambda};
}

Eigen::Vector3d initial_guess(const Problem &pb) {
    const Eigen::Index n = pb.y.size();
    const double offset = 0.5 * (pb.y[n - 1] + pb.y[n - 2]);
    const Eigen::Index j = n / 2;
    const double ratio = (pb.y[j] - offset) / (pb.y[0] - offset);
    double lambda = 0.99;
    if (std::isfinite(ratio) && ratio > 0 && ratio < 1) {
        lambda = std::pow(ratio, 1.0 / (pb.scale * (pb.m[j] - pb.m[0])));
    }
    lambda = std::clamp(lambda, 1e-6, 1.0 - 1e-9);
    const double amplitude = (pb.y[0] - offset) / std::pow(lambda, pb.scale * pb.m[0]);
    Eigen::Vector3d guess(offset, amplitude, lambda);

    // Guard against a poor heuristic with a coarse scan of the reduced (variable projection) cost.
    double best = cost(pb, guess);
    for (int i = 0; i <= 120; ++i) {
        const double lam = 1.0 - std::pow(10.0, -7.0 + 7.0 * i / 120.0);
        if (lam <= 0) {
            continue;
        }
        const Eigen::Vector3d cand = linear_solve(pb, lam);
        const double c = cost(pb, cand);
        if (std::isfinite(c) && c < best) {
            best = c;
            guess = cand;
        }
    }
    return guess;
}

std::string describe_residuals(const std::vector<double> &trace) {
    std::ostringstream out;
    out << "residual norms:";
    for (double r : trace) {
        out << ' ' << r;
    }
    return out.str();
}

Estimate ratio_rate(const DecayFit &srb, const DecayFit &irb, int d) {
    if (d < 2) {
        throw ValidationError("dimension d must be at least 2 (got " + std::to_string(d) + ")");
    }
    const double ls = srb.model.lambda;
    const double li = irb.model.lambda;
    if (!(ls != 0) || !std::isfinite(ls)) {
        throw ValidationError("SRB decay constant is zero");
    }
    const double pref = (d - 1.0) / d;
    const double ds = pref * li / (ls * ls);
    const double di = -pref / ls;
    const double var = ds * ds * srb.sigma_lambda() * srb.sigma_lambda() +
                       di * di * irb.sigma_lambda() * irb.sigma_lambda();
    return {pref * (1.0 - li / ls), std::sqrt(var)};
}

void require_pair(const DecayFit &srb, const DecayFit &irb, TraceKind kind, const char *what) {
    if (srb.kind != kind || irb.kind != kind) {
        throw ValidationError(std::string(what) + " needs fits of " + std::string(to_string(kind)) + " traces");
    }
    if (srb.variant != Variant::SRB || irb.variant != Variant::IRB) {
        throw ValidationError(std::string(what) + " needs one SRB and one IRB fit, in that order");
    }
}

}  // namespace

std::string_view to_string(TraceKind kind) {
    switch (kind) {
        case TraceKind::population_X1:
            return "population_X1";
        case TraceKind::population_0000:
            return "population_0000";
        case TraceKind::normalized_purity:
            return "normalized_purity";
        case TraceKind::subtracted_0000:
            return "subtracted_0000";
    }
    return "unknown";
}

std::string_view to_string(Variant variant) {
    return variant == Variant::SRB ? "SRB" : "IRB";
}

TraceKind parse_kind(std::string_view text) {
    for (auto kind : {TraceKind::population_X1, TraceKind::population_0000, TraceKind::normalized_purity}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    throw ValidationError("unknown trace kind '" + std::string(text) +
                          "' (expected population_X1, population_0000 or normalized_purity)");
}

Variant parse_variant(std::string_view text) {
    if (text == "SRB") {
        return Variant::SRB;
    }
    if (text == "IRB") {
        return Variant::IRB;
    }
    throw ValidationError("unknown RB variant '" + std::string(text) + "' (expected SRB or IRB)");
}

int exponent_scale(TraceKind kind) {
    return kind == TraceKind::normalized_purity ? 2 : 1;
}

void RBTrace::validate() const {
    if (lengths.size() != values.size()) {
        throw ValidationError("trace has " + std::to_string(lengths.size()) + " lengths but " +
                              std::to_string(values.size()) + " values");
    }
    if (!std_errs.empty() && std_errs.size() != values.size()) {
        throw ValidationError("trace std_err column has the wrong length");
    }
    if (values.size() < 4) {
        throw ValidationError("trace needs at least 4 points (got " + std::to_string(values.size()) + ")");
    }
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] <= 0) {
            throw ValidationError("sequence lengths must be positive");
        }
        if (i > 0 && lengths[i] <= lengths[i - 1]) {
            throw ValidationError("sequence lengths must be strictly increasing (" + std::to_string(lengths[i - 1]) +
                                  " then " + std::to_string(lengths[i]) + ")");
        }
        if (!std::isfinite(values[i])) {
            throw ValidationError("trace value at m=" + std::to_string(lengths[i]) + " is not finite");
        }
        if (is_population(kind) && (values[i] < 0 || values[i] > 1)) {
            throw ValidationError("population at m=" + std::to_string(lengths[i]) + " is outside [0, 1] (" +
                                  format_number(values[i]) + ")");
        }
        if (!std_errs.empty() && (!std::isfinite(std_errs[i]) || std_errs[i] < 0)) {
            throw ValidationError("std_err at m=" + std::to_string(lengths[i]) + " must be finite and non-negative");
        }
    }
}

double DecayModel::operator()(int m, int scale) const {
    return offset + amplitude * std::pow(lambda, static_cast<double>(scale) * m);
}

double DecayFit::sigma_offset() const {
    return std::sqrt(std::max(covariance(0, 0), 0.0));
}

double DecayFit::sigma_amplitude() const {
    return std::sqrt(std::max(covariance(1, 1), 0.0));
}

double DecayFit::sigma_lambda() const {
    return std::sqrt(std::max(covariance(2, 2), 0.0));
}

DecayFit fit_decay(const RBTrace &trace, std::optional<int> exponent_scale_override) {
    trace.validate();
    Problem pb;
    pb.scale = exponent_scale_override ? *exponent_scale_override : exponent_scale(trace.kind);
    if (pb.scale != 1 && pb.scale != 2) {
        throw ValidationError("exponent scale must be 1 or 2");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(trace.values.size());
    pb.m.resize(n);
    pb.y.resize(n);
    pb.w.setOnes(n);
    const bool weighted = !trace.std_errs.empty() &&
                          std::all_of(trace.std_errs.begin(), trace.std_errs.end(), [](double s) { return s > 0; });
    for (Eigen::Index i = 0; i < n; ++i) {
        pb.m[i] = trace.lengths[i];
        pb.y[i] = trace.values[i];
        if (weighted) {
            pb.w[i] = 1.0 / (trace.std_errs[i] * trace.std_errs[i]);
        }
    }

    Eigen::Vector3d p = initial_guess(pb);
    double c = cost(pb, p);
    double mu = 1e-3;
    std::vector<double> history{std::sqrt(c)};
    bool converged = c == 0;
    for (int iter = 0; iter < kMaxFitIterations && !converged; ++iter) {
        const Eigen::MatrixXd j = jacobian(pb, p);
        const Eigen::VectorXd r = (pb.y - evaluate(pb, p)).matrix();
        const Eigen::Matrix3d jtj = j.transpose() * pb.w.matrix().asDiagonal() * j;
        const Eigen::Vector3d jtr = j.transpose() * (pb.w.matrix().asDiagonal() * r);
        bool accepted = false;
        for (int tries = 0; tries < 40 && !accepted; ++tries) {
            Eigen::Matrix3d a = jtj;
            for (int k = 0; k < 3; ++k) {
                a(k, k) += mu * std::max(jtj(k, k), 1e-300);
            }
            Eigen::Vector3d trial = p + a.completeOrthogonalDecomposition().solve(jtr);
            trial[2] = std::clamp(trial[2], kLambdaFloor, 1.0);
            const double tc = cost(pb, trial);
            if (std::isfinite(tc) && tc <= c) {
                const double step = (trial - p).cwiseAbs().maxCoeff();
                const double gain = c - tc;
                p = trial;
                c = tc;
                mu = std::max(mu / 10.0, 1e-15);
                accepted = true;
                history.push_back(std::sqrt(c));
                converged = c == 0 || gain <= 1e-15 * (c + gain) ||
                            step <= 1e-15 * (p.cwiseAbs().maxCoeff() + 1e-300);
            } else {
                mu *= 10.0;
            }
        }
        // No downhill step at any damping: stationary to working precision.
        converged = converged || !accepted;
    }
    if (!p.allFinite() || !std::isfinite(c)) {
        throw FitError("decay fit diverged; " + describe_residuals(history), history);
    }
    if (!converged) {
        throw FitError("decay fit did not converge in " + std::to_string(kMaxFitIterations) + " iterations; " +
                           describe_residuals(history),
                       history);
    }

    DecayFit fit;
    fit.model = {p[0], p[1], p[2]};
    fit.kind = trace.kind;
    fit.variant = trace.variant;
    fit.exponent_scale = pb.scale;
    fit.residual_norm = std::sqrt(c);
    fit.iterations = static_cast<int>(history.size()) - 1;
    fit.lambda_at_bound = p[2] >= 1.0;

    const Eigen::MatrixXd j = jacobian(pb, p);
    const Eigen::Matrix3d jtj = j.transpose() * pb.w.matrix().asDiagonal() * j;
    // Judge conditioning on the column-equilibrated normal matrix.
    const Eigen::Vector3d scale = jtj.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    const Eigen::Matrix3d eq = scale.asDiagonal() * jtj * scale.asDiagonal();
    const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(eq, Eigen::EigenvaluesOnly).eigenvalues();
    const double y_scale = std::max(pb.y.abs().maxCoeff(), 1e-300);
    fit.lambda_identifiable = ev[0] > 1e-12 * ev[2] && std::abs(p[1]) > 1e-9 * y_scale;
    Eigen::Matrix3d cov = jtj.completeOrthogonalDecomposition().pseudoInverse();
    if (!weighted && n > 3) {
        cov *= c / static_cast<double>(n - 3);
    }
    fit.covariance = 0.5 * (cov + cov.transpose());
    return fit;
}

LeakageBudget leakage_budget(const DecayFit &srb, const DecayFit &irb) {
    require_pair(srb, irb, TraceKind::population_X1, "leakage budget");
    auto per_variant = [](const DecayFit &f) {
        const double a = f.model.offset;
        const double lam = f.model.lambda;
        const Eigen::Vector2d grad(-(1.0 - lam), -(1.0 - a));
        Eigen::Matrix2d cov;
        cov << f.covariance(0, 0), f.covariance(0, 2), f.covariance(2, 0), f.covariance(2, 2);
        return Estimate{(1.0 - a) * (1.0 - lam), std::sqrt(std::max(grad.dot(cov * grad), 0.0))};
    };
    LeakageBudget out;
    out.l1_srb = per_variant(srb);
    out.l1_irb = per_variant(irb);
    const double ls = out.l1_srb.value;
    const double li = out.l1_irb.value;
    if (!(ls < 1)) {
        throw ValidationError("SRB leakage per Clifford must be below 1 (got " + format_number(ls) + ")");
    }
    const double d_li = 1.0 / (1.0 - ls);
    const double d_ls = -(1.0 - li) / ((1.0 - ls) * (1.0 - ls));
    out.l1_cz.value = 1.0 - (1.0 - li) / (1.0 - ls);
    out.l1_cz.sigma = std::sqrt(d_li * d_li * out.l1_irb.sigma * out.l1_irb.sigma +
                                d_ls * d_ls * out.l1_srb.sigma * out.l1_srb.sigma);
    return out;
}

Estimate incoherent_budget(const DecayFit &srb, const DecayFit &irb, int d) {
    require_pair(srb, irb, TraceKind::normalized_purity, "incoherent budget");
    return ratio_rate(srb, irb, d);
}

Estimate gate_error_budget(const DecayFit &srb, const DecayFit &irb, int d) {
    require_pair(srb, irb, TraceKind::subtracted_0000, "gate error budget");
    return ratio_rate(srb, irb, d);
}

RBTrace subtract_traces(const RBTrace &p0000, const RBTrace &px1, int d) {
    if (d < 2) {
        throw ValidationError("dimension d must be at least 2 (got " + std::to_string(d) + ")");
    }
    if (p0000.kind != TraceKind::population_0000 || px1.kind != TraceKind::population_X1) {
        throw ValidationError("subtraction needs a population_0000 and a population_X1 trace");
    }
    if (p0000.variant != px1.variant) {
        throw ValidationError("subtraction needs traces of the same RB variant");
    }
    if (p0000.lengths != px1.lengths) {
        throw ValidationError("population_0000 and population_X1 traces have different sequence lengths");
    }
    RBTrace out;
    out.kind = TraceKind::subtracted_0000;
    out.variant = p0000.variant;
    out.lengths = p0000.lengths;
    const bool with_err = !p0000.std_errs.empty() && !px1.std_errs.empty();
    for (std::size_t i = 0; i < p0000.values.size(); ++i) {
        out.values.push_back(p0000.values[i] - px1.values[i] / d);
        if (with_err) {
            out.std_errs.push_back(std::hypot(p0000.std_errs[i], px1.std_errs[i] / d));
        }
    }
    return out;
}

ErrorBudget assemble_partial_budget(std::optional<Estimate> r_cz, std::optional<Estimate> r_incoh_cz,
                                    std::optional<Estimate> l1_cz, int d) {
    if (d < 2) {
        throw ValidationError("dimension d must be at least 2 (got " + std::to_string(d) + ")");
    }
    for (const auto *e : {&r_cz, &r_incoh_cz, &l1_cz}) {
        if (*e && (!std::isfinite((*e)->value) || !std::isfinite((*e)->sigma))) {
            throw ValidationError("budget inputs must be finite");
        }
    }
    ErrorBudget b;
    b.d = d;
    b.r_cz = r_cz;
    b.r_incoh_cz = r_incoh_cz;
    b.l1_cz = l1_cz;
    if (r_cz && r_incoh_cz && l1_cz) {
        Estimate coh;
        coh.value = r_cz->value - r_incoh_cz->value - 0.75 * l1_cz->value;
        coh.sigma = std::sqrt(r_cz->sigma * r_cz->sigma + r_incoh_cz->sigma * r_incoh_cz->sigma +
                              0.5625 * l1_cz->sigma * l1_cz->sigma);
        if (coh.value < 0) {
            std::ostringstream msg;
            msg << "coherent error is negative (" << format_number(coh.value) << " +- " << format_number(coh.sigma)
                << ")";
            if (-coh.value > 2.0 * coh.sigma) {
                msg << " and more than two standard deviations below zero; the inputs look inconsistent";
            }
            b.warnings.push_back(msg.str());
        }
        b.r_coh_cz = coh;
    }
    if (r_cz && l1_cz) {
        b.fidelity = Estimate{1.0 - r_cz->value - l1_cz->value / 4.0,
                              std::sqrt(r_cz->sigma * r_cz->sigma + l1_cz->sigma * l1_cz->sigma / 16.0)};
    }
    return b;
}

ErrorBudget assemble_budget(Estimate r_cz, Estimate r_incoh_cz, Estimate l1_cz, int d) {
    return assemble_partial_budget(r_cz, r_incoh_cz, l1_cz, d);
}

double normalized_purity_from_density(const Eigen::MatrixXcd &rho, int d) {
    if (d < 2) {
        throw ValidationError("dimension d must be at least 2 (got " + std::to_string(d) + ")");
    }
    if (rho.rows() != d || rho.cols() != d) {
        throw ValidationError("density matrix must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    const double defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (!(defect <= 1e-12 * std::max(1.0, rho.cwiseAbs().maxCoeff()))) {
        throw ValidationError("density matrix is not Hermitian (defect " + format_number(defect) + ")");
    }
    const double purity = (rho * rho).trace().real();
    return d / (d - 1.0) * (purity - 1.0 / d);
}

RBTrace synth_trace(const DecayModel &model, TraceKind kind, Variant variant, const std::vector<int> &lengths,
                    double sigma, std::uint64_t seed) {
    if (!(model.lambda > 0) || model.lambda > 1) {
        throw ValidationError("lambda must lie in (0, 1] (got " + format_number(model.lambda) + ")");
    }
    if (!(sigma >= 0) || !std::isfinite(sigma)) {
        throw ValidationError("noise sigma must be finite and non-negative");
    }
    std::mt19937_64 rng(seed);
    // 53-bit uniform in (0, 1]; avoids the implementation-defined std distributions.
    auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
    RBTrace t;
    t.kind = kind;
    t.variant = variant;
    t.lengths = lengths;
    const int scale = exponent_scale(kind);
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        double v = model(lengths[i], scale);
        if (sigma > 0) {
            const double u1 = uniform();
            const double u2 = uniform();
            const double gauss = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * constants::pi * u2);
            v += sigma * gauss;
            if (is_population(kind)) {
                v = std::clamp(v, 0.0, 1.0);
            }
            t.std_errs.push_back(sigma);
        }
        t.values.push_back(v);
    }
    return t;
}

TraceBundle synth_bundle(const BundleModel &model, const std::vector<int> &lengths, double sigma, std::uint64_t seed,
                         int d) {
    if (d < 2) {
        throw ValidationError("dimension d must be at least 2 (got " + std::to_string(d) + ")");
    }
    auto seed_for = [seed](std::uint64_t slot) { return seed + slot * 0x9E3779B97F4A7C15ULL; };
    TraceBundle b;
    b.x1_srb = synth_trace(model.x1_srb, TraceKind::population_X1, Variant::SRB, lengths, sigma, seed_for(0));
    b.x1_irb = synth_trace(model.x1_irb, TraceKind::population_X1, Variant::IRB, lengths, sigma, seed_for(1));
    b.purity_srb = synth_trace(model.purity_srb, TraceKind::normalized_purity, Variant::SRB, lengths, sigma, seed_for(2));
    b.purity_irb = synth_trace(model.purity_irb, TraceKind::normalized_purity, Variant::IRB, lengths, sigma, seed_for(3));
    auto p0000 = [&](const DecayModel &sub, const DecayModel &x1, Variant v, std::uint64_t slot) {
        // Noise goes on top of the exact P_0000; the X1 trace's own noise is independent.
        RBTrace t = synth_trace(sub, TraceKind::subtracted_0000, v, lengths, sigma, seed_for(slot));
        t.kind = TraceKind::population_0000;
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            t.values[i] = std::clamp(t.values[i] + x1(lengths[i], 1) / d, 0.0, 1.0);
        }
        return t;
    };
    b.p0000_srb = p0000(model.subtracted_srb, model.x1_srb, Variant::SRB, 4);
    b.p0000_irb = p0000(model.subtracted_irb, model.x1_irb, Variant::IRB, 5);
    return b;
}

BundleBudget budget_from_bundle(const TraceBundle &bundle, int d, bool allow_partial) {
    const std::array<const std::optional<RBTrace> *, 6> slots{&bundle.x1_srb,     &bundle.x1_irb,
                                                              &bundle.purity_srb, &bundle.purity_irb,
                                                              &bundle.p0000_srb,  &bundle.p0000_irb};
    const std::array<TraceKind, 6> kinds{TraceKind::population_X1,     TraceKind::population_X1,
                                         TraceKind::normalized_purity, TraceKind::normalized_purity,
                                         TraceKind::population_0000,   TraceKind::population_0000};
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto &slot = *slots[i];
        if (!slot) {
            missing.emplace_back(kBundleSlots[i]);
            continue;
        }
        const Variant want = i % 2 == 0 ? Variant::SRB : Variant::IRB;
        if (slot->kind != kinds[i] || slot->variant != want) {
            throw ValidationError("trace for " + std::string(kBundleSlots[i]) + " is " +
                                  std::string(to_string(slot->kind)) + "/" + std::string(to_string(slot->variant)) +
                                  ", expected " + std::string(to_string(kinds[i])) + "/" +
                                  std::string(to_string(want)));
        }
    }
    if (!missing.empty() && !allow_partial) {
        std::string msg = "missing traces:";
        for (const auto &m : missing) {
            msg += " " + m;
        }
        throw ValidationError(msg + " (a partial budget must be requested explicitly)");
    }

    BundleBudget out;
    auto fit = [&](const std::string &name, const RBTrace &t) {
        out.fits.emplace_back(name, fit_decay(t));
        return out.fits.back().second;
    };
    std::optional<Estimate> l1;
    std::optional<Estimate> r_incoh;
    std::optional<Estimate> r;
    if (bundle.x1_srb && bundle.x1_irb) {
        l1 = leakage_budget(fit("x1-srb", *bundle.x1_srb), fit("x1-irb", *bundle.x1_irb)).l1_cz;
    }
    if (bundle.purity_srb && bundle.purity_irb) {
        r_incoh = incoherent_budget(fit("purity-srb", *bundle.purity_srb), fit("purity-irb", *bundle.purity_irb), d);
    }
    if (bundle.p0000_srb && bundle.p0000_irb && bundle.x1_srb && bundle.x1_irb) {
        const DecayFit s = fit("subtracted-srb", subtract_traces(*bundle.p0000_srb, *bundle.x1_srb, d));
        const DecayFit i = fit("subtracted-irb", subtract_traces(*bundle.p0000_irb, *bundle.x1_irb, d));
        r = gate_error_budget(s, i, d);
    }
    out.budget = assemble_partial_budget(r, r_incoh, l1, d);
    return out;
}

}  // namespace csdtc::rb
