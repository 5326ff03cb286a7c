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

#include "csdtc/perturbative.h"

#include <cmath>
#include <sstream>

#include "csdtc/constants.h"
#include "csdtc/text_format.h"

namespace csdtc {

namespace {

double to_rad_per_s(double ghz) {
    return 2.0 * constants::pi * ghz * constants::giga;
}

// Eigen-decomposition of a symmetric 2x2 with column 0 the one weighted on row 0 and a
// non-negative diagonal.
void ordered_eigen(const Eigen::Matrix2d &m, Eigen::Vector2d &values, Eigen::Matrix2d &vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m);
    values = eig.eigenvalues();
    vectors = eig.eigenvectors();
    if (std::abs(vectors(0, 1)) > std::abs(vectors(0, 0))) {
        std::swap(values[0], values[1]);
        vectors.col(0).swap(vectors.col(1));
    }
    for (int c = 0; c < 2; ++c) {
        if (vectors(c, c) < 0) {
            vectors.col(c) *= -1.0;
        }
    }
}

}  // namespace

BlockModes block_normal_modes(const CircuitParams &params, BlockId block, double ej_norm_GHz) {
    if (!(ej_norm_GHz > 0) || !std::isfinite(ej_norm_GHz)) {
        throw ValidationError("normalization energy must be positive (got " + format_number(ej_norm_GHz) + " GHz)");
    }
    const auto ej = derive_junction_energies(params).ej_GHz;
    const auto &mc = params.mutual_caps_fF;
    const int q = block == BlockId::k13 ? 0 : 1;
    const int c = block == BlockId::k13 ? 2 : 3;
    const double c_qc = (block == BlockId::k13 ? mc.c13 : mc.c24) * constants::femto;
    const double c34 = mc.c34 * constants::femto;

    Eigen::Matrix2d m;
    m << params.node_caps_fF[q] * constants::femto + c_qc, -c_qc, -c_qc,
        params.node_caps_fF[c] * constants::femto + c_qc + c34;

    BlockModes out;
    out.block = block;
    out.ej_norm_GHz = ej_norm_GHz;
    out.r_a = std::sqrt(ej[q] / ej_norm_GHz);
    out.r_b = std::sqrt((ej[c] + ej[4]) / ej_norm_GHz);
    const Eigen::Vector2d r_inv(1.0 / out.r_a, 1.0 / out.r_b);
    const Eigen::Matrix2d normalized = r_inv.asDiagonal() * m * r_inv.asDiagonal();

    Eigen::Vector2d caps;
    ordered_eigen(normalized, caps, out.U);
    out.c_a_F = caps[0];
    out.c_b_F = caps[1];
    if (!(out.c_a_F > 0) || !(out.c_b_F > 0)) {
        std::ostringstream msg;
        msg << "block " << static_cast<int>(block) << " has a non-positive eigen-capacitance (" << out.c_a_F << ", "
            << out.c_b_F << " F)";
        throw ModelValidityError(msg.str());
    }
    return out;
}

EffectiveParameters effective_parameters(const BlockModes &b13, const BlockModes &b24, const CircuitParams &params) {
    const auto ej = derive_junction_energies(params).ej_GHz;
    EffectiveParameters eff;
    eff.k_ur = b13.U(1, 0) * b24.U(1, 0) / (b13.r_b * b24.r_b);
    eff.c34_eff_F = eff.k_ur * params.mutual_caps_fF.c34 * constants::femto;
    eff.ej5_eff_GHz = eff.k_ur * ej[4];
    eff.ej5_kerr_GHz = eff.k_ur * eff.k_ur * ej[4];
    eff.ej1_kerr_GHz = ej[0] * std::pow(b13.U(0, 0) / b13.r_a, 4);
    eff.ej2_kerr_GHz = ej[1] * std::pow(b24.U(0, 0) / b24.r_a, 4);
    return eff;
}

ModeCoupling mode_frequencies_and_g12(const EffectiveParameters &eff, const BlockModes &b13, const BlockModes &b24) {
    Eigen::Matrix2d mc;
    mc << b13.c_a_F, -eff.c34_eff_F, -eff.c34_eff_F, b24.c_a_F;
    Eigen::LLT<Eigen::Matrix2d> llt(mc);
    if (llt.info() != Eigen::Success || !(mc.determinant() > 0)) {
        std::ostringstream msg;
        msg << "two-mode capacitance matrix is not positive definite (C1=" << mc(0, 0) << " F, C2=" << mc(1, 1)
            << " F, C34'=" << eff.c34_eff_F << " F)";
        throw ModelValidityError(msg.str());
    }
    const double e = constants::elementary_charge;
    ModeCoupling out;
    out.W = (e * e / (2.0 * constants::hbar)) * mc.inverse();
    const double omega_j = to_rad_per_s(b13.ej_norm_GHz);
    out.omega1 = std::sqrt(8.0 * out.W(0, 0) * omega_j);
    out.omega2 = std::sqrt(8.0 * out.W(1, 1) * omega_j);
    const double w11w22 = out.W(0, 0) * out.W(1, 1);
    const double omega_prod = out.omega1 * out.omega2;
    out.g12 = 0.5 * std::sqrt(omega_prod / w11w22) *
              (out.W(0, 1) - 8.0 * to_rad_per_s(eff.ej5_eff_GHz) * w11w22 / omega_prod);
    return out;
}

Eigen::Matrix2d two_mode_rotation(const ModeCoupling &m) {
    if (m.g12 == 0.0) {
        return Eigen::Matrix2d::Identity();
    }
    Eigen::Matrix2d a;
    a << m.omega1, m.g12, m.g12, m.omega2;
    Eigen::Vector2d values;
    Eigen::Matrix2d u;
    ordered_eigen(a, values, u);
    return u;
}

double zz_perturbative(const EffectiveParameters &eff, const ModeCoupling &m, const Eigen::Matrix2d &u) {
    const double x1 = 8.0 * m.W(0, 0) / m.omega1;
    const double x2 = 8.0 * m.W(1, 1) / m.omega2;
    const double u11 = u(0, 0) * u(0, 0);
    const double u12 = u(0, 1) * u(0, 1);
    const double u21 = u(1, 0) * u(1, 0);
    const double u22 = u(1, 1) * u(1, 1);
    const double zeta = -(to_rad_per_s(eff.ej1_kerr_GHz) / 4.0) * x1 * x1 * u11 * u12 -
                        (to_rad_per_s(eff.ej2_kerr_GHz) / 4.0) * x2 * x2 * u21 * u22 -
                        (to_rad_per_s(eff.ej5_kerr_GHz) / 4.0) * x1 * x2 * u11 * u22;
    return zeta / (2.0 * constants::pi * constants::kilo);
}

PerturbativeResult run_perturbative(const CircuitParams &params, std::optional<double> ej_norm_GHz) {
    auto report = validate_params(params);
    if (!report.ok()) {
        throw ValidationError("invalid circuit parameters: " + report.str());
    }
    const double norm = ej_norm_GHz ? *ej_norm_GHz : derive_junction_energies(params).ej_GHz[0];
    PerturbativeResult out;
    out.block13 = block_normal_modes(params, BlockId::k13, norm);
    out.block24 = block_normal_modes(params, BlockId::k24, norm);
    out.effective = effective_parameters(out.block13, out.block24, params);
    out.coupling = mode_frequencies_and_g12(out.effective, out.block13, out.block24);
    out.u12 = two_mode_rotation(out.coupling);
    out.zeta_pert_kHz = zz_perturbative(out.effective, out.coupling, out.u12);
    return out;
}

ZeroCouplingResult zero_coupling_c34(const CircuitParams &params, const ZeroCouplingOptions &options) {
    const double lj5 = derive_junction_energies(params).lj5_nH * constants::nano;
    ZeroCouplingResult out;
    double c34 = params.mutual_caps_fF.c34;
    out.trace_fF.push_back(c34);
    auto describe = [&](const std::string &why) {
        std::ostringstream msg;
        msg << "zero-coupling iteration " << why << "; C34 trace (fF):";
        for (double c : out.trace_fF) {
            msg << ' ' << c;
        }
        return msg.str();
    };
    for (int it = 1; it <= options.max_iterations; ++it) {
        PerturbativeResult r;
        try {
            r = run_perturbative(with_c34(params, c34));
        } catch (const std::exception &e) {
            throw ZeroCouplingError(describe(std::string("left the model domain (") + e.what() + ")"), out.trace_fF);
        }
        const double next = 1.0 / (lj5 * r.coupling.omega1 * r.coupling.omega2) / constants::femto;
        out.trace_fF.push_back(next);
        if (!std::isfinite(next) || !(next > 0)) {
            throw ZeroCouplingError(describe("produced a non-positive capacitance"), out.trace_fF);
        }
        const double step = std::abs(next - c34);
        c34 = next;
        if (step < options.tolerance_fF) {
            const PerturbativeResult at = run_perturbative(with_c34(params, c34));
            out.c34_fF = c34;
            out.iterations = it;
            out.g12 = at.coupling.g12;
            out.omega1 = at.coupling.omega1;
            out.omega2 = at.coupling.omega2;
            if (std::abs(out.g12) >= 1e-5 * std::sqrt(out.omega1 * out.omega2)) {
                throw ZeroCouplingError(describe("converged in C34 but g12 is not small"), out.trace_fF);
            }
            return out;
        }
    }
    throw ZeroCouplingError(describe("did not converge in " + std::to_string(options.max_iterations) + " steps"),
                            out.trace_fF);
}

double zero_coupling_c34_fixed_frequency(double lj5_nH, double f1_GHz, double f2_GHz) {
    if (!(lj5_nH > 0) || !(f1_GHz > 0) || !(f2_GHz > 0)) {
        throw ValidationError("inductance and frequencies must be positive");
    }
    return 1.0 / (lj5_nH * constants::nano * to_rad_per_s(f1_GHz) * to_rad_per_s(f2_GHz)) / constants::femto;
}

}  // namespace csdtc
