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

#include "csdtc/circuit.h"

#include <cmath>
#include <sstream>

#include "csdtc/constants.h"
#include "csdtc/errors.h"

namespace csdtc {

namespace {

constexpr std::array<const char *, 4> kNodeCapNames{"C11", "C22", "C33", "C44"};
constexpr std::array<const char *, 5> kCurrentNames{"Ic1", "Ic2", "Ic3", "Ic4", "Ic5"};

struct MutualSlot {
    int i;
    int j;
    const char *name;
    double MutualCaps::*member;
};

constexpr std::array<MutualSlot, 6> kMutualSlots{{
    {0, 1, "C12", &MutualCaps::c12},
    {0, 2, "C13", &MutualCaps::c13},
    {0, 3, "C14", &MutualCaps::c14},
    {1, 2, "C23", &MutualCaps::c23},
    {1, 3, "C24", &MutualCaps::c24},
    {2, 3, "C34", &MutualCaps::c34},
}};

double MutualCaps::*slot_member(int i, int j) {
    if (i > j) {
        std::swap(i, j);
    }
    for (const auto &slot : kMutualSlots) {
        if (slot.i == i && slot.j == j) {
            return slot.member;
        }
    }
    throw std::out_of_range("no mutual capacitance between a node and itself");
}

Eigen::Matrix4d assemble(const CircuitParams &params) {
    Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i) {
        c(i, i) = params.node_caps_fF[i];
    }
    for (const auto &slot : kMutualSlots) {
        double v = params.mutual_caps_fF.*slot.member;
        c(slot.i, slot.i) += v;
        c(slot.j, slot.j) += v;
        c(slot.i, slot.j) = -v;
        c(slot.j, slot.i) = -v;
    }
    return c * constants::femto;
}

}  // namespace

double MutualCaps::between(int i, int j) const {
    return this->*slot_member(i, j);
}

double &MutualCaps::between(int i, int j) {
    return this->*slot_member(i, j);
}

CircuitParams reference_device() {
    CircuitParams p;
    p.node_caps_fF = {108.0, 80.0, 90.0, 90.0};
    p.mutual_caps_fF = {.c12 = 0.002, .c13 = 12.6, .c14 = 0.06, .c23 = 0.06, .c24 = 12.6, .c34 = 30.3};
    p.critical_currents_nA = {26.7, 26.6, 55.2, 55.2, 11.9};
    return p;
}

CircuitParams without_parasitics(CircuitParams params) {
    params.mutual_caps_fF.c12 = 0;
    params.mutual_caps_fF.c14 = 0;
    params.mutual_caps_fF.c23 = 0;
    return params;
}

CircuitParams with_c34(CircuitParams params, double c34_fF) {
    params.mutual_caps_fF.c34 = c34_fF;
    return params;
}

std::string ValidationReport::str() const {
    std::ostringstream out;
    for (size_t k = 0; k < violations.size(); ++k) {
        out << (k ? "; " : "") << violations[k];
    }
    return out.str();
}

ValidationReport validate_params(const CircuitParams &params) {
    ValidationReport report;
    auto &v = report.violations;
    for (int i = 0; i < 4; ++i) {
        double c = params.node_caps_fF[i];
        if (!std::isfinite(c) || c <= 0) {
            v.push_back(std::string(kNodeCapNames[i]) + " must be a positive capacitance (got " + std::to_string(c) +
                        " fF)");
        }
    }
    for (const auto &slot : kMutualSlots) {
        double c = params.mutual_caps_fF.*slot.member;
        if (!std::isfinite(c) || c < 0) {
            v.push_back(std::string(slot.name) + " must be a non-negative capacitance (got " + std::to_string(c) +
                        " fF)");
        }
    }
    for (int i = 0; i < 5; ++i) {
        double ic = params.critical_currents_nA[i];
        if (!std::isfinite(ic) || ic <= 0) {
            v.push_back(std::string(kCurrentNames[i]) + " must be a positive critical current (got " +
                        std::to_string(ic) + " nA)");
        }
    }
    if (v.empty()) {
        Eigen::LLT<Eigen::Matrix4d> llt(assemble(params));
        if (llt.info() != Eigen::Success) {
            v.push_back("capacitance matrix is not positive definite");
        }
    }
    return report;
}

JunctionEnergies derive_junction_energies(const CircuitParams &params) {
    JunctionEnergies out;
    for (int i = 0; i < 5; ++i) {
        double ic = params.critical_currents_nA[i];
        if (!std::isfinite(ic) || ic <= 0) {
            throw ValidationError(std::string(kCurrentNames[i]) + " must be a positive critical current (got " +
                                  std::to_string(ic) + " nA)");
        }
        // E_J / h = Phi0 Ic / (2 pi h) = Ic / (4 pi e).
        double ej_hz = ic * constants::nano / (4.0 * constants::pi * constants::elementary_charge);
        out.ej_GHz[i] = ej_hz / constants::giga;
    }
    double lj5 = constants::reduced_flux_quantum / (params.critical_currents_nA[4] * constants::nano);
    out.lj5_nH = lj5 / constants::nano;
    return out;
}

CapacitanceMatrix build_capacitance_matrix(const CircuitParams &params) {
    auto report = validate_params(params);
    if (!report.ok()) {
        throw ValidationError("invalid circuit parameters: " + report.str());
    }
    return {assemble(params)};
}

ChargingMatrix charging_matrix(const CapacitanceMatrix &cmat) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(cmat.farads, Eigen::EigenvaluesOnly);
    double lo = eig.eigenvalues().minCoeff();
    double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0) || hi / lo > 1e14) {
        std::ostringstream msg;
        msg << "capacitance matrix is singular or indefinite (eigenvalues " << lo << " .. " << hi
            << " F, condition number " << (lo > 0 ? hi / lo : INFINITY) << ")";
        throw NumericalError(msg.str());
    }
    Eigen::Matrix4d inv = cmat.farads.llt().solve(Eigen::Matrix4d::Identity());
    inv = 0.5 * (inv + inv.transpose());
    const double e = constants::elementary_charge;
    return {(4.0 * e * e / 2.0) * inv / constants::planck / constants::giga};
}

CircuitModel make_model(const CircuitParams &params) {
    return {charging_matrix(build_capacitance_matrix(params)), derive_junction_energies(params)};
}

}  // namespace csdtc
