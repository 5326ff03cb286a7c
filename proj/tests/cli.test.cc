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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.h"

namespace csdtc::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

fs::path scratch_dir(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("csdtc_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

TEST(Cli, HelpAndUsageErrors) {
    EXPECT_EQ(invoke({"--help"}).code, kExitOk);
    EXPECT_EQ(invoke({}).code, kExitUsage);
    EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(invoke({"--n-max", "2", "zz"}).code, kExitUsage);
    EXPECT_EQ(invoke({"--params", "/nonexistent.json", "zz", "--flux-grid", "0:0:1"}).code, kExitUsage);
}

TEST(Cli, SpectrumWritesOneRowPerFlux) {
    const auto r = invoke({"--n-max", "3", "spectrum", "--flux-grid", "0:0.2:3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "phi_ex,E_0000_GHz,E_1000_GHz,E_0100_GHz,E_1100_GHz,label_overlaps");
    EXPECT_EQ(rows[1].rfind("0,0,", 0), 0u) << rows[1];
}

TEST(Cli, FluxOutsideHalfPeriodIsRejected) {
    EXPECT_EQ(invoke({"--n-max", "3", "spectrum", "--flux-grid", "0:0.7:3"}).code, kExitUsage);
}

TEST(Cli, MalformedGridsAreUsageErrors) {
    EXPECT_EQ(invoke({"--n-max", "3", "zz", "--flux-grid", "0:0.1"}).code, kExitUsage);
    EXPECT_EQ(invoke({"--n-max", "3", "zz", "--flux-grid", ""}).code, kExitUsage);
    EXPECT_EQ(invoke({"--n-max", "3", "zz", "--flux-grid", "a:b:3"}).code, kExitUsage);
    EXPECT_EQ(invoke({"--n-max", "3", "zz", "--c34-grid", "0:10:3"}).code, kExitUsage);
    EXPECT_EQ(invoke({"--n-max", "3", "zz", "--flux-grid", "0:0:1", "--c34-grid", "10:20:2"}).code, kExitUsage);
}

TEST(Cli, ZZSweepsAreDeterministic) {
    const std::vector<std::string> args{"--n-max", "3", "--threads", "2", "zz", "--flux-grid", "-0.1:0.1:3"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto rows = lines(a.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "phi_ex,zeta_kHz,ambiguous_flag");
    // Even in flux: first and last rows carry the same zeta.
    const auto value = [](const std::string &row) {
        const auto a = row.find(',');
        return row.substr(a + 1, row.find(',', a + 1) - a - 1);
    };
    EXPECT_EQ(value(rows[1]), value(rows[3]));
}

TEST(Cli, C34SweepWithPerturbativeColumns) {
    const auto r = invoke({"--n-max", "3", "zz", "--c34-grid", "40:50:2", "--zero-parasitics"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], "C34_fF,zeta_exact_kHz,zeta_pert_kHz,g12_MHz,ambiguous_flag");

    const auto cmp = invoke({"--n-max", "3", "pert-compare", "--c34-grid", "40:50:2"});
    ASSERT_EQ(cmp.code, kExitOk) << cmp.err;
    EXPECT_EQ(lines(cmp.out).size(), 3u);
}

TEST(Cli, OutputFile) {
    const auto dir = scratch_dir("out");
    const auto path = dir / "zz.csv";
    const auto r = invoke({"--n-max", "3", "--out", path.string(), "zz", "--flux-grid", "0:0:1"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(lines(ss.str()).size(), 2u);
}

TEST(Cli, FixedFrequencyDesign) {
    const auto r = invoke({"design", "--fixed-frequency", "--f1", "4", "--f2", "4"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("c34_star_fF").get<double>(), 57.24, 0.01);
    EXPECT_TRUE(j.at("argmin_c34_exact_fF").is_null());
}

TEST(Cli, DesignBracketWithoutInteriorMinimum) {
    const auto r = invoke({"--n-max", "3", "design", "--zero-parasitics", "--bracket", "10:30"});
    EXPECT_EQ(r.code, kExitNumerical) << r.err;
    EXPECT_EQ(invoke({"design", "--bracket", "50:20"}).code, kExitUsage);
}

TEST(Cli, SynthesizedBundleGivesFullBudget) {
    const auto dir = scratch_dir("bundle");
    const auto synth = invoke({"--seed", "11", "rb-synth", "--out-dir", dir.string(), "--sigma", "0.002"});
    ASSERT_EQ(synth.code, kExitOk) << synth.err;
    std::vector<std::string> args{"rb-budget"};
    for (const char *slot : {"x1-srb", "x1-irb", "purity-srb", "purity-irb", "p0000-srb", "p0000-irb"}) {
        ASSERT_TRUE(fs::exists(dir / (std::string(slot) + ".csv"))) << slot;
        args.push_back(std::string("--") + slot);
        args.push_back((dir / (std::string(slot) + ".csv")).string());
    }
    const auto r = invoke(args);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    const double rcz = j.at("r_cz").get<double>();
    const double sum = j.at("r_incoh_cz").get<double>() + j.at("r_coh_cz").get<double>() +
                       0.75 * j.at("L1_cz").get<double>();
    EXPECT_DOUBLE_EQ(rcz, sum);

    // Same seed, same files.
    const auto again_dir = scratch_dir("bundle2");
    ASSERT_EQ(invoke({"--seed", "11", "rb-synth", "--out-dir", again_dir.string(), "--sigma", "0.002"}).code, kExitOk);
    std::ifstream a(dir / "x1-srb.csv"), b(again_dir / "x1-srb.csv");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(Cli, PartialBudgetReportsNulls) {
    const auto dir = scratch_dir("partial");
    ASSERT_EQ(invoke({"rb-synth", "--out-dir", dir.string()}).code, kExitOk);
    const std::vector<std::string> base{"rb-budget", "--x1-srb", (dir / "x1-srb.csv").string(), "--x1-irb",
                                        (dir / "x1-irb.csv").string()};
    EXPECT_EQ(invoke(base).code, kExitUsage);
    auto args = base;
    args.push_back("--partial");
    const auto r = invoke(args);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.at("r_cz").is_null());
    EXPECT_TRUE(j.at("fidelity").is_null());
    EXPECT_FALSE(j.at("L1_cz").is_null());
}

TEST(Cli, MisassignedTraceNamesTheFile) {
    const auto dir = scratch_dir("swap");
    ASSERT_EQ(invoke({"rb-synth", "--out-dir", dir.string()}).code, kExitOk);
    const auto wrong = (dir / "purity-srb.csv").string();
    const auto r = invoke({"rb-budget", "--partial", "--x1-srb", wrong, "--x1-irb", (dir / "x1-irb.csv").string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find(wrong), std::string::npos) << r.err;
}

}  // namespace
}  // namespace csdtc::cli
