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

#include <atomic>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "csdtc/spectrum.h"

namespace csdtc {
namespace {

// No charge coupling and no junction 5, with every node distinct.
CircuitModel separable_model() {
    auto model = make_model(reference_device());
    Eigen::Vector4d diag = model.charging.ghz.diagonal();
    diag[3] *= 1.13;
    model.charging.ghz = diag.asDiagonal();
    model.junctions.ej_GHz[3] *= 0.91;
    model.junctions.ej_GHz[4] = 0.0;
    return model;
}

TEST(Spectrum, OccupationString) {
    EXPECT_EQ(occupation_string(kState1100), "1100");
    EXPECT_EQ(occupation_string({0, 2, 1, 0}), "0210");
}

TEST(Spectrum, ReferencePointIsConfidentlyLabeled) {
    const auto s = compute_spectrum(reference_device(), {0.0}, {5, 16});
    EXPECT_EQ(s.frequencies_GHz[0], 0.0);
    for (const auto &occ : {kState0000, kState1000, kState0100, kState1100}) {
        ASSERT_TRUE(s.find(occ).has_value()) << occupation_string(occ);
        EXPECT_GT(s.overlap_of(occ), 0.9) << occupation_string(occ);
    }
    EXPECT_EQ(*s.find(kState0000), 0);
    // Each product state is used at most once.
    std::vector<std::string> seen;
    for (const auto &l : s.labels) {
        if (!l) continue;
        const auto str = occupation_string(l->occupations);
        EXPECT_EQ(std::count(seen.begin(), seen.end(), str), 0) << str;
        seen.push_back(str);
    }
}

TEST(Spectrum, SeparableCircuitHasNoZZ) {
    const auto model = separable_model();
    const auto r = zz_interaction(model, {0.0}, {5, 12});
    EXPECT_NEAR(r.zeta_kHz, 0.0, 1e-3);
    for (const auto &occ : {kState0000, kState1000, kState0100, kState1100}) {
        EXPECT_NEAR(r.spectrum.overlap_of(occ), 1.0, 1e-8);
    }
}

TEST(Spectrum, SeparableCircuitLevelsAreModeSums) {
    const auto model = separable_model();
    const ChargeBasisConfig cfg{5, 12};
    const auto s = compute_spectrum(model, {0.0}, cfg);
    const auto modes = uncoupled_hamiltonian(model, cfg);
    std::array<double, 4> f01{};
    for (int i = 0; i < 4; ++i) {
        const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(modes[i]).eigenvalues();
        f01[i] = e[1] - e[0];
    }
    EXPECT_NEAR(s.frequency_of(kState1000), f01[0], 1e-8);
    EXPECT_NEAR(s.frequency_of(kState0100), f01[1], 1e-8);
    EXPECT_NEAR(s.frequency_of(kState1100), f01[0] + f01[1], 1e-8);
}

TEST(Spectrum, ZZFromSpectrumArithmetic) {
    SpectrumResult s;
    s.frequencies_GHz = Eigen::Vector4d(0.0, 4.0, 4.5, 8.4999);
    s.labels = {DressedLabel{kState0000, 0.99}, DressedLabel{kState1000, 0.98}, DressedLabel{kState0100, 0.97},
                DressedLabel{kState1100, 0.96}};
    EXPECT_NEAR(zz_from_spectrum(s), -100.0, 1e-6);

    s.labels[3]->overlap = 0.4;
    EXPECT_THROW(zz_from_spectrum(s), AmbiguousLabelError);
    s.labels[3].reset();
    EXPECT_THROW(zz_from_spectrum(s), LabelingError);
}

TEST(Spectrum, LabelingTiesGoToLowerEigenstate) {
    // Two eigenvectors sharing the same overlap with the ground product state.
    const auto modes = uncoupled_hamiltonian(reference_device(), {2, 16});
    const ProductBasis basis(modes);
    Eigen::MatrixXcd v = basis.lowest_product_states(4);
    const Eigen::VectorXcd a = v.col(0), b = v.col(1);
    v.col(0) = (a + b) / std::sqrt(2.0);
    v.col(1) = (a - b) / std::sqrt(2.0);
    const auto labels = label_states(v, basis);
    ASSERT_TRUE(labels[0] && labels[1]);
    EXPECT_EQ(labels[0]->occupations, kState0000);
    EXPECT_NEAR(labels[0]->overlap, 0.5, 1e-12);
    EXPECT_NE(labels[1]->occupations, kState0000);
}

TEST(Spectrum, ZZIsEvenAndPeriodicInFlux) {
    const ChargeBasisConfig cfg{4, 16};
    const auto p = reference_device();
    for (double phi : {0.1, 0.23}) {
        const double z = zz_interaction(p, {phi}, cfg).zeta_kHz;
        EXPECT_NEAR(zz_interaction(p, {-phi}, cfg).zeta_kHz, z, 1e-6 * std::abs(z) + 1e-6);
        EXPECT_NEAR(zz_interaction(p, {phi + 1.0}, cfg).zeta_kHz, z, 1e-6 * std::abs(z) + 1e-6);
    }
}

TEST(Spectrum, StrongCouplingNearHalfFlux) {
    const ChargeBasisConfig cfg{5, 16};
    const auto p = reference_device();
    const double z0 = zz_interaction(p, {0.0}, cfg).zeta_kHz;
    const double zh = zz_interaction(p, {0.5}, cfg).zeta_kHz;
    EXPECT_LT(z0, 0.0);
    EXPECT_GT(std::abs(zh), 100.0 * std::abs(z0));
}

TEST(Spectrum, AmbiguousPointCarriesSpectrum) {
    try {
        zz_interaction(reference_device(), {0.45}, {7, 16});
        FAIL() << "expected AmbiguousLabelError";
    } catch (const AmbiguousLabelError &e) {
        double lowest = 1.0;
        for (const auto &occ : {kState0000, kState1000, kState0100, kState1100}) {
            lowest = std::min(lowest, e.spectrum.overlap_of(occ));
        }
        EXPECT_LT(lowest, kAmbiguityThreshold);
    }
}

TEST(Spectrum, ParallelForCoversEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(97);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 4);
    for (const auto &h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Spectrum, SweepMatchesPointEvaluation) {
    const ChargeBasisConfig cfg{4, 16};
    const auto p = reference_device();
    const auto sweep = sweep_flux(p, {0.0, 0.1}, cfg, 2);
    ASSERT_EQ(sweep.points.size(), 2u);
    EXPECT_EQ(sweep.failures(), 0u);
    EXPECT_DOUBLE_EQ(sweep.points[0].x, 0.0);
    EXPECT_NEAR(sweep.points[1].result->zeta_kHz, zz_interaction(p, {0.1}, cfg).zeta_kHz, 1e-9);
}

TEST(Spectrum, C34SweepRejectsNonPositiveValues) {
    EXPECT_THROW(sweep_c34(reference_device(), {10.0, 0.0}, {0.0}, {3, 16}, true), ConfigError);
}

TEST(Spectrum, ConvergenceStudyNeedsAscendingCutoffs) {
    const auto p = reference_device();
    EXPECT_THROW(convergence_study(p, {0.0}, {5}), ConfigError);
    EXPECT_THROW(convergence_study(p, {0.0}, {5, 5}), ConfigError);
    EXPECT_THROW(convergence_study(p, {0.0}, {6, 5}), ConfigError);
}

TEST(Spectrum, ConvergenceStudyReportsDeltas) {
    const auto study = convergence_study(reference_device(), {0.0}, {3, 4, 5});
    ASSERT_EQ(study.zeta_kHz.size(), 3u);
    ASSERT_EQ(study.deltas_kHz.size(), 2u);
    EXPECT_NEAR(study.deltas_kHz[1], std::abs(study.zeta_kHz[2] - study.zeta_kHz[1]), 1e-12);
    EXPECT_EQ(study.final_delta_kHz, study.deltas_kHz[1]);
    EXPECT_EQ(study.converged, study.final_delta_kHz < kConvergenceThreshold_kHz);
}

}  // namespace
}  // namespace csdtc
