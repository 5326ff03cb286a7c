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

#ifndef CSDTC_CIRCUIT_H
#define CSDTC_CIRCUIT_H

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace csdtc {

/// Mutual capacitances between the four nodes (Q1, Q2, C3, C4), fF.
struct MutualCaps {
    double c12 = 0;
    double c13 = 0;
    double c14 = 0;
    double c23 = 0;
    double c24 = 0;
    double c34 = 0;

    /// Capacitance between nodes i and j (0-based, i != j).
    double between(int i, int j) const;
    double &between(int i, int j);
};

/// The lumped 4-node circuit: two data transmons and the shunted double-transmon coupler.
///
/// Node order is fixed everywhere: 0 = Q1, 1 = Q2, 2 = coupler transmon C3,
/// 3 = coupler transmon C4. Junction 5 connects nodes 2 and 3.
struct CircuitParams {
    std::array<double, 4> node_caps_fF{};
    MutualCaps mutual_caps_fF{};
    std::array<double, 5> critical_currents_nA{};
};

/// The fitted device used throughout the tests and shipped as configs/reference_device.json.
CircuitParams reference_device();

/// Copy of `params` with the parasitic capacitances C12, C14 and C23 set to zero.
CircuitParams without_parasitics(CircuitParams params);

/// Copy of `params` with the shunt capacitance C34 replaced.
CircuitParams with_c34(CircuitParams params, double c34_fF);

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const {
        return violations.empty();
    }
    std::string str() const;
};

/// Lists every violated invariant; an empty report means the parameters are admissible.
ValidationReport validate_params(const CircuitParams &params);

/// Josephson energies (as frequencies E_J/h) and the linear inductance of junction 5.
struct JunctionEnergies {
    std::array<double, 5> ej_GHz{};
    double lj5_nH = 0;
};

/// E_J = Phi0 Ic / 2pi and L_J5 = (Phi0/2pi) / Ic5. Throws ValidationError naming the
/// offending current when any Ic is not strictly positive.
JunctionEnergies derive_junction_energies(const CircuitParams &params);

/// Maxwell capacitance matrix in farads: C_ii = node cap + all mutuals at i, C_ij = -C_ij.
struct CapacitanceMatrix {
    Eigen::Matrix4d farads;
};

CapacitanceMatrix build_capacitance_matrix(const CircuitParams &params);

/// Coefficient matrix of n_i n_j in H/h, i.e. (4e^2/2) C^-1 / h, in GHz.
struct ChargingMatrix {
    Eigen::Matrix4d ghz;
};

ChargingMatrix charging_matrix(const CapacitanceMatrix &cmat);

/// Everything the Hamiltonian needs from a circuit.
struct CircuitModel {
    ChargingMatrix charging;
    JunctionEnergies junctions;
};

CircuitModel make_model(const CircuitParams &params);

}  // namespace csdtc

#endif  // CSDTC_CIRCUIT_H
