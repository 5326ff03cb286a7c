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

#ifndef CSDTC_PERTURBATIVE_H
#define CSDTC_PERTURBATIVE_H

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "csdtc/circuit.h"
#include "csdtc/errors.h"

/// Analytic two-mode model of the coupler.
///
/// Each qubit is first merged with its neighbouring coupler node (blocks 13 and 24) by
/// diagonalizing the capacitance matrix in coordinates where every junction has the same
/// quadratic stiffness E_J. The two qubit-like modes then couple through an effective shunt
/// capacitance and an effective junction, and the cross-Kerr coefficient follows from the
/// quartic junction terms. Parasitic capacitances C12, C14 and C23 are ignored throughout.
namespace csdtc {

enum class BlockId { k13 = 13, k24 = 24 };

struct BlockModes {
    BlockId block = BlockId::k13;
    /// Eigen-capacitances of the normalized block matrix: qubit-like (a) and coupler-like (b), F.
    double c_a_F = 0;
    double c_b_F = 0;
    /// Orthogonal; column 0 is the qubit-like mode. Each diagonal entry is non-negative.
    Eigen::Matrix2d U = Eigen::Matrix2d::Identity();
    /// sqrt(E_Jqubit / E_J) and sqrt((E_Jcoupler + E_J5) / E_J).
    double r_a = 1;
    double r_b = 1;
    /// Normalization energy E_J / h, GHz.
    double ej_norm_GHz = 0;
};

/// Normal modes of block 13 (Q1 with C3) or 24 (Q2 with C4). Throws ModelValidityError when
/// an eigen-capacitance is not positive.
BlockModes block_normal_modes(const CircuitParams &params, BlockId block, double ej_norm_GHz);

struct EffectiveParameters {
    double k_ur = 0;
    /// k_ur * C34, F.
    double c34_eff_F = 0;
    /// k_ur * E_J5 and k_ur^2 * E_J5, GHz.
    double ej5_eff_GHz = 0;
    double ej5_kerr_GHz = 0;
    /// E_Ji (U11 / r_Ji)^4 of the respective block, GHz.
    double ej1_kerr_GHz = 0;
    double ej2_kerr_GHz = 0;
};

EffectiveParameters effective_parameters(const BlockModes &b13, const BlockModes &b24, const CircuitParams &params);

struct ModeCoupling {
    /// (e^2 / 2 hbar) Mc^-1, rad/s.
    Eigen::Matrix2d W = Eigen::Matrix2d::Zero();
    /// rad/s.
    double omega1 = 0;
    double omega2 = 0;
    double g12 = 0;
};

/// Mode frequencies and the transverse coupling. Throws ModelValidityError if the
/// two-mode capacitance matrix is not positive definite.
ModeCoupling mode_frequencies_and_g12(const EffectiveParameters &eff, const BlockModes &b13, const BlockModes &b24);

/// Orthogonal matrix diagonalizing [[omega1, g12], [g12, omega2]]; column 0 is the mode
/// dominated by qubit 1. Identity when g12 = 0.
Eigen::Matrix2d two_mode_rotation(const ModeCoupling &m);

/// Cross-Kerr coefficient zeta / 2pi, kHz.
double zz_perturbative(const EffectiveParameters &eff, const ModeCoupling &m, const Eigen::Matrix2d &u12);

struct PerturbativeResult {
    BlockModes block13;
    BlockModes block24;
    EffectiveParameters effective;
    ModeCoupling coupling;
    Eigen::Matrix2d u12 = Eigen::Matrix2d::Identity();
    double zeta_pert_kHz = 0;
};

/// Full pipeline. The normalization energy defaults to E_J1; results other than the
/// normalized intermediates do not depend on it.
PerturbativeResult run_perturbative(const CircuitParams &params, std::optional<double> ej_norm_GHz = std::nullopt);

struct ZeroCouplingOptions {
    double tolerance_fF = 0.01;
    int max_iterations = 100;
};

struct ZeroCouplingResult {
    double c34_fF = 0;
    int iterations = 0;
    /// C34 after each update, starting with the initial value, fF.
    std::vector<double> trace_fF;
    /// g12 and the mode frequencies at the returned C34, rad/s.
    double g12 = 0;
    double omega1 = 0;
    double omega2 = 0;
};

struct ZeroCouplingError : NumericalError {
    ZeroCouplingError(const std::string &what, std::vector<double> trace)
        : NumericalError(what), trace_fF(std::move(trace)) {
    }
    std::vector<double> trace_fF;
};

/// Fixed point of C34 <- 1 / (L_J5 omega1(C34) omega2(C34)), started from the C34 in `params`.
ZeroCouplingResult zero_coupling_c34(const CircuitParams &params, const ZeroCouplingOptions &options = {});

/// 1 / (L_J5 omega1 omega2) for given mode frequencies, fF.
double zero_coupling_c34_fixed_frequency(double lj5_nH, double f1_GHz, double f2_GHz);

}  // namespace csdtc

#endif  // CSDTC_PERTURBATIVE_H
