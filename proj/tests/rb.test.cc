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

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "csdtc/rb.h"
#include "csdtc/rb_io.h"

namespace csdtc::rb {
namespace {

std::vector<int> standard_lengths() {
    std::vector<int> m{1};
    for (int v = 5; v <= 300; v += 5) m.push_back(v);
    return m;
}

// A fit result with the given parameters and no uncertainty.
DecayFit make_fit(TraceKind kind, Variant variant, double offset, double lambda) {
    DecayFit f;
    f.kind = kind;
    f.variant = variant;
    f.exponent_scale = exponent_scale(kind);
    f.model = {offset, 0.5, lambda};
    return f;
}

TEST(RbTrace, ParseNames) {
    EXPECT_EQ(parse_kind("population_X1"), TraceKind::population_X1);
    EXPECT_EQ(parse_kind("normalized_purity"), TraceKind::normalized_purity);
    EXPECT_EQ(parse_variant("IRB"), Variant::IRB);
    EXPECT_THROW(parse_kind("subtracted_0000"), ValidationError);
    EXPECT_THROW(parse_variant("xrb"), ValidationError);
    EXPECT_EQ(exponent_scale(TraceKind::normalized_purity), 2);
    EXPECT_EQ(exponent_scale(TraceKind::population_0000), 1);
}

TEST(RbTrace, Validation) {
    RBTrace t{{1, 2, 3, 4}, {0.9, 0.8, 0.7, 0.6}, {}, TraceKind::population_X1, Variant::SRB};
    EXPECT_NO_THROW(t.validate());
    auto bad = t;
    bad.lengths = {1, 2, 2, 4};
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = t;
    bad.values[2] = 1.2;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad.kind = TraceKind::normalized_purity;
    bad.values[2] = -0.2;
    EXPECT_NO_THROW(bad.validate());
    bad = t;
    bad.lengths.pop_back();
    bad.values.pop_back();
    EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(RbFit, NoiselessRoundTripEveryKind) {
    const DecayModel truth{0.25, 0.72, 0.995};
    for (auto kind : {TraceKind::population_X1, TraceKind::population_0000, TraceKind::normalized_purity}) {
        const auto trace = synth_trace(truth, kind, Variant::SRB, standard_lengths(), 0.0, 1);
        ASSERT_TRUE(trace.std_errs.empty());
        const auto fit = fit_decay(trace);
        EXPECT_NEAR(fit.model.offset, truth.offset, 1e-9) << to_string(kind);
        EXPECT_NEAR(fit.model.amplitude, truth.amplitude, 1e-9) << to_string(kind);
        EXPECT_NEAR(fit.model.lambda, truth.lambda, 1e-9) << to_string(kind);
        EXPECT_TRUE(fit.lambda_identifiable);
    }
}

TEST(RbFit, SyntheticValuesAreTheModel) {
    const DecayModel truth{0.1, 0.8, 0.97};
    const auto trace = synth_trace(truth, TraceKind::normalized_purity, Variant::IRB, {1, 4, 9, 16}, 0.0, 3);
    for (std::size_t i = 0; i < trace.lengths.size(); ++i) {
        EXPECT_DOUBLE_EQ(trace.values[i], 0.1 + 0.8 * std::pow(0.97, 2 * trace.lengths[i]));
    }
    const auto flat = synth_trace({0.1, 0.8, 1.0}, TraceKind::population_X1, Variant::SRB, {1, 2, 3, 4}, 0.0, 3);
    for (double v : flat.values) EXPECT_DOUBLE_EQ(v, 0.9);
}

TEST(RbFit, PurityExponentIsDoubled) {
    const auto trace = synth_trace({0.0, 0.9, 0.99}, TraceKind::normalized_purity, Variant::SRB, standard_lengths(),
                                   0.0, 1);
    EXPECT_NEAR(fit_decay(trace).model.lambda, 0.99, 1e-9);
    // Forcing the single exponent recovers the squared constant instead.
    EXPECT_NEAR(fit_decay(trace, 1).model.lambda, 0.9801, 1e-9);
}

TEST(RbFit, OnePhysicalLambdaAcrossChannels) {
    const double lambda = 0.993;
    const auto pop = synth_trace({0.05, 0.9, lambda}, TraceKind::population_X1, Variant::SRB, standard_lengths(), 0, 1);
    const auto pur =
        synth_trace({0.0, 0.9, lambda}, TraceKind::normalized_purity, Variant::SRB, standard_lengths(), 0, 1);
    EXPECT_NEAR(fit_decay(pop).model.lambda, fit_decay(pur).model.lambda, 1e-9);
}

TEST(RbFit, ConstantTraceIsFlagged) {
    RBTrace t{standard_lengths(), {}, {}, TraceKind::population_X1, Variant::SRB};
    t.values.assign(t.lengths.size(), 0.25);
    const auto fit = fit_decay(t);
    EXPECT_FALSE(fit.lambda_identifiable);
    EXPECT_NEAR(fit.model.offset + fit.model.amplitude, 0.25, 1e-9);
}

TEST(RbFit, SyntheticNoiseIsDeterministic) {
    const DecayModel truth{0.25, 0.72, 0.995};
    const auto a = synth_trace(truth, TraceKind::population_X1, Variant::SRB, standard_lengths(), 0.01, 42);
    const auto b = synth_trace(truth, TraceKind::population_X1, Variant::SRB, standard_lengths(), 0.01, 42);
    const auto c = synth_trace(truth, TraceKind::population_X1, Variant::SRB, standard_lengths(), 0.01, 43);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
    ASSERT_EQ(a.std_errs.size(), a.values.size());
    EXPECT_DOUBLE_EQ(a.std_errs[0], 0.01);
}

TEST(RbFit, NoisyLambdaIsUnbiased) {
    const DecayModel truth{0.25, 0.6, 0.99};
    const int runs = 200;
    std::vector<double> lambdas;
    double mean_reported_sigma = 0;
    for (int seed = 0; seed < runs; ++seed) {
        const auto trace =
            synth_trace(truth, TraceKind::population_X1, Variant::SRB, standard_lengths(), 0.01, 1000 + seed);
        const auto fit = fit_decay(trace);
        lambdas.push_back(fit.model.lambda);
        mean_reported_sigma += fit.sigma_lambda() / runs;
    }
    const double mean = std::accumulate(lambdas.begin(), lambdas.end(), 0.0) / runs;
    double var = 0;
    for (double l : lambdas) var += (l - mean) * (l - mean) / (runs - 1);
    const double sem = std::sqrt(var / runs);
    EXPECT_LT(std::abs(mean - truth.lambda), 2.0 * sem);
    // Reported uncertainty agrees with the observed scatter.
    EXPECT_NEAR(mean_reported_sigma, std::sqrt(var), 0.25 * std::sqrt(var));
}

TEST(RbBudget, LeakageArithmetic) {
    const auto srb = make_fit(TraceKind::population_X1, Variant::SRB, 0.9, 0.999);
    const auto irb = make_fit(TraceKind::population_X1, Variant::IRB, 0.9, 0.998);
    const auto l = leakage_budget(srb, irb);
    EXPECT_NEAR(l.l1_srb.value, 1e-4, 1e-15);
    EXPECT_NEAR(l.l1_irb.value, 2e-4, 1e-15);
    EXPECT_NEAR(l.l1_cz.value, 1.0 - (1.0 - 2e-4) / (1.0 - 1e-4), 1e-15);
    EXPECT_NEAR(l.l1_cz.value, 1.0001e-4, 1e-8);

    const auto none = leakage_budget(make_fit(TraceKind::population_X1, Variant::SRB, 0.2, 1.0),
                                     make_fit(TraceKind::population_X1, Variant::IRB, 0.2, 1.0));
    EXPECT_EQ(none.l1_cz.value, 0.0);
    EXPECT_THROW(leakage_budget(irb, srb), ValidationError);
    EXPECT_THROW(leakage_budget(make_fit(TraceKind::normalized_purity, Variant::SRB, 0, 0.99), irb), ValidationError);
}

TEST(RbBudget, LeakageUncertaintyByPropagation) {
    auto srb = make_fit(TraceKind::population_X1, Variant::SRB, 0.9, 0.999);
    auto irb = make_fit(TraceKind::population_X1, Variant::IRB, 0.9, 0.998);
    srb.covariance(2, 2) = 1e-8;  // sigma_lambda = 1e-4
    const auto l = leakage_budget(srb, irb);
    // dL1/dlambda = -(1 - offset).
    EXPECT_NEAR(l.l1_srb.sigma, 0.1 * 1e-4, 1e-15);
    EXPECT_EQ(l.l1_irb.sigma, 0.0);
    // dL1cz/dL1srb = -(1 - L1irb) / (1 - L1srb)^2.
    const double d = (1 - 2e-4) / std::pow(1 - 1e-4, 2);
    EXPECT_NEAR(l.l1_cz.sigma, d * 1e-5, 1e-15);
}

TEST(RbBudget, RatioFormulas) {
    const auto p_srb = make_fit(TraceKind::normalized_purity, Variant::SRB, 0, 0.99);
    const auto p_irb = make_fit(TraceKind::normalized_purity, Variant::IRB, 0, 0.98);
    EXPECT_NEAR(incoherent_budget(p_srb, p_irb).value, 0.75 * (1 - 0.98 / 0.99), 1e-15);
    EXPECT_NEAR(incoherent_budget(p_srb, p_irb).value, 7.576e-3, 1e-6);
    EXPECT_NEAR(incoherent_budget(p_srb, p_irb, 2).value, 0.5 * (1 - 0.98 / 0.99), 1e-15);
    EXPECT_THROW(incoherent_budget(p_srb, p_irb, 1), ValidationError);

    const auto s_srb = make_fit(TraceKind::subtracted_0000, Variant::SRB, 0, 0.995);
    const auto s_irb = make_fit(TraceKind::subtracted_0000, Variant::IRB, 0, 0.990);
    EXPECT_NEAR(gate_error_budget(s_srb, s_irb).value, 3.769e-3, 1e-6);
    EXPECT_EQ(gate_error_budget(s_srb, make_fit(TraceKind::subtracted_0000, Variant::IRB, 0, 0.995)).value, 0.0);
    EXPECT_THROW(gate_error_budget(p_srb, p_irb), ValidationError);
}

TEST(RbBudget, AssembleIdentity) {
    const auto b = assemble_budget({0.0014, 0}, {0.0012, 0}, {0.0001, 0});
    EXPECT_NEAR(b.r_coh_cz->value, 1.25e-4, 1e-15);
    EXPECT_NEAR(b.fidelity->value, 1.0 - 0.0014 - 0.000025, 1e-15);
    EXPECT_EQ(b.r_cz->value, b.r_incoh_cz->value + b.r_coh_cz->value + 0.75 * b.l1_cz->value);
    EXPECT_TRUE(b.warnings.empty());

    const auto published = assemble_budget({0.0014, 0}, {0.0, 0}, {0.0001, 0});
    EXPECT_NEAR(published.fidelity->value, 0.998575, 1e-12);

    const auto same = assemble_budget({0.002, 0}, {0.002, 0}, {0.0, 0});
    EXPECT_EQ(same.r_coh_cz->value, 0.0);

    const auto neg = assemble_budget({0.001, 0}, {0.002, 0}, {0.0, 0});
    EXPECT_LT(neg.r_coh_cz->value, 0.0);
    EXPECT_FALSE(neg.warnings.empty());
}

TEST(RbBudget, PartialBudgetKeepsWhatIsDetermined) {
    const auto b = assemble_partial_budget(std::nullopt, Estimate{0.001, 0}, Estimate{0.0002, 0});
    EXPECT_FALSE(b.r_cz);
    EXPECT_FALSE(b.r_coh_cz);
    EXPECT_FALSE(b.fidelity);
    EXPECT_TRUE(b.r_incoh_cz);
    EXPECT_TRUE(b.l1_cz);
}

TEST(RbBudget, NormalizedPurity) {
    EXPECT_NEAR(normalized_purity_from_density(Eigen::MatrixXcd::Identity(4, 4) / 4.0), 0.0, 1e-15);
    Eigen::VectorXcd psi(4);
    psi << 1, std::complex<double>(0, 1), -1, 0.5;
    psi.normalize();
    const Eigen::MatrixXcd pure = psi * psi.adjoint();
    EXPECT_NEAR(normalized_purity_from_density(pure), 1.0, 1e-14);
    EXPECT_NEAR(normalized_purity_from_density(0.9 * pure), 4.0 / 3.0 * (0.81 - 0.25), 1e-14);
    Eigen::MatrixXcd bad = pure;
    bad(0, 1) += 0.1;
    EXPECT_THROW(normalized_purity_from_density(bad), ValidationError);
    EXPECT_THROW(normalized_purity_from_density(Eigen::MatrixXcd::Identity(3, 3) / 3.0), ValidationError);
}

TEST(RbBudget, SubtractTraces) {
    RBTrace p0{{1, 2, 3, 4}, {0.9, 0.8, 0.7, 0.6}, {0.03, 0.03, 0.03, 0.03}, TraceKind::population_0000, Variant::SRB};
    RBTrace px{{1, 2, 3, 4}, {0.96, 0.92, 0.88, 0.84}, {0.04, 0.04, 0.04, 0.04}, TraceKind::population_X1,
               Variant::SRB};
    const auto s = subtract_traces(p0, px);
    EXPECT_EQ(s.kind, TraceKind::subtracted_0000);
    EXPECT_NEAR(s.values[0], 0.9 - 0.24, 1e-15);
    EXPECT_NEAR(s.std_errs[0], std::hypot(0.03, 0.01), 1e-15);
    px.variant = Variant::IRB;
    EXPECT_THROW(subtract_traces(p0, px), ValidationError);
}

TEST(RbBudget, BundleRecoversGeneratorBudget) {
    const BundleModel model;
    const auto bundle = synth_bundle(model, standard_lengths(), 0.0, 7);
    const auto result = budget_from_bundle(bundle);
    const auto &b = result.budget;
    const double l1s = (1 - model.x1_srb.offset) * (1 - model.x1_srb.lambda);
    const double l1i = (1 - model.x1_irb.offset) * (1 - model.x1_irb.lambda);
    EXPECT_NEAR(b.l1_cz->value, 1 - (1 - l1i) / (1 - l1s), 1e-9);
    EXPECT_NEAR(b.r_incoh_cz->value, 0.75 * (1 - model.purity_irb.lambda / model.purity_srb.lambda), 1e-9);
    EXPECT_NEAR(b.r_cz->value, 0.75 * (1 - model.subtracted_irb.lambda / model.subtracted_srb.lambda), 1e-9);
    EXPECT_EQ(b.r_cz->value, b.r_incoh_cz->value + b.r_coh_cz->value + 0.75 * b.l1_cz->value);
    EXPECT_EQ(result.fits.size(), 6u);
}

TEST(RbBudget, BundleRejectsMisplacedAndMissingTraces) {
    auto bundle = synth_bundle(BundleModel{}, standard_lengths(), 0.0, 7);
    auto swapped = bundle;
    std::swap(swapped.x1_srb, swapped.purity_srb);
    try {
        budget_from_bundle(swapped);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError &e) {
        EXPECT_NE(std::string(e.what()).find("x1-srb"), std::string::npos) << e.what();
    }
    bundle.p0000_irb.reset();
    EXPECT_THROW(budget_from_bundle(bundle), ValidationError);
    const auto partial = budget_from_bundle(bundle, 4, true).budget;
    EXPECT_TRUE(partial.l1_cz);
    EXPECT_TRUE(partial.r_incoh_cz);
    EXPECT_FALSE(partial.r_cz);
    EXPECT_FALSE(partial.fidelity);
}

TEST(RbIo, CsvRoundTrip) {
    const auto trace =
        synth_trace({0.25, 0.72, 0.995}, TraceKind::population_X1, Variant::IRB, standard_lengths(), 0.01, 5);
    std::stringstream ss;
    write_trace_csv(ss, trace);
    const auto back = parse_trace_csv(ss, "mem");
    EXPECT_EQ(back.kind, trace.kind);
    EXPECT_EQ(back.variant, trace.variant);
    EXPECT_EQ(back.lengths, trace.lengths);
    EXPECT_EQ(back.values, trace.values);
    EXPECT_EQ(back.std_errs, trace.std_errs);
}

TEST(RbIo, CsvErrorsNameTheSource) {
    const auto expect_error = [](const std::string &text) {
        std::istringstream in(text);
        try {
            parse_trace_csv(in, "trace.csv");
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ValidationError &e) {
            EXPECT_NE(std::string(e.what()).find("trace.csv"), std::string::npos) << e.what();
        }
    };
    expect_error("");
    expect_error("kind=population_X1\n1,0.9\n2,0.8\n3,0.7\n4,0.6\n");
    expect_error("kind=bogus,variant=SRB\n1,0.9\n2,0.8\n3,0.7\n4,0.6\n");
    expect_error("kind=population_X1,variant=SRB\n1,0.9\n2,abc\n3,0.7\n4,0.6\n");
    expect_error("kind=population_X1,variant=SRB\n1,0.9,0.01\n2,0.8\n3,0.7,0.01\n4,0.6,0.01\n");
    expect_error("kind=population_X1,variant=SRB\n1,0.9\n2,0.8\n");

    std::istringstream ok("kind=normalized_purity,variant=SRB\nm,value\n1,0.9\n2,0.8\n3,0.7\n4,0.6\n");
    EXPECT_EQ(parse_trace_csv(ok, "ok").values.size(), 4u);
}

TEST(RbIo, MissingFileIsConfigError) {
    EXPECT_THROW(read_trace_csv("/nonexistent/trace.csv"), ConfigError);
}

TEST(RbIo, BudgetJsonUsesNullForAbsentEntries) {
    const auto j = budget_to_json(assemble_partial_budget(std::nullopt, Estimate{0.001, 1e-4}, std::nullopt));
    EXPECT_TRUE(j.at("r_cz").is_null());
    EXPECT_TRUE(j.at("fidelity").is_null());
    EXPECT_TRUE(j.at("L1_cz").is_null());
    EXPECT_DOUBLE_EQ(j.at("r_incoh_cz").get<double>(), 0.001);
    EXPECT_DOUBLE_EQ(j.at("uncertainties").at("r_incoh_cz").get<double>(), 1e-4);
    EXPECT_EQ(j.at("d").get<int>(), 4);

    const auto full = budget_to_json(assemble_budget({0.0014, 0}, {0.0012, 0}, {0.0001, 0}));
    EXPECT_NEAR(full.at("r_coh_cz").get<double>(), 1.25e-4, 1e-15);
}

}  // namespace
}  // namespace csdtc::rb
