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

#include "cli.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "csdtc/circuit_io.h"
#include "csdtc/constants.h"
#include "csdtc/design.h"
#include "csdtc/perturbative.h"
#include "csdtc/rb_io.h"
#include "csdtc/spectrum.h"
#include "csdtc/text_format.h"

namespace csdtc::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Globals {
    std::string params_path;
    std::string out = "-";
    int n_max = 7;
    int k = 16;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    CircuitParams params() const {
        return params_path.empty() ? reference_device() : load_params(params_path);
    }
    ChargeBasisConfig basis() const {
        ChargeBasisConfig cfg{n_max, k};
        cfg.validate();
        return cfg;
    }
};

// Collects a command's data and writes it to --out (or the default stream) in one go.
class Sink {
   public:
    Sink(const std::string &path, std::ostream &fallback) : path_(path), fallback_(fallback) {
        if (!to_stdout()) {
            const auto parent = std::filesystem::path(path_).parent_path();
            if (!parent.empty() && !std::filesystem::is_directory(parent)) {
                throw ConfigError("output directory does not exist: " + parent.string());
            }
        }
    }
    std::ostream &stream() {
        return buffer_;
    }
    void flush() {
        if (to_stdout()) {
            fallback_ << buffer_.str();
            fallback_.flush();
            return;
        }
        std::ofstream file(path_, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw ConfigError("cannot write " + path_);
        }
        file << buffer_.str();
        if (!file) {
            throw ConfigError("failed writing " + path_);
        }
    }

   private:
    bool to_stdout() const {
        return path_.empty() || path_ == "-";
    }
    std::string path_;
    std::ostream &fallback_;
    std::ostringstream buffer_;
};

std::vector<double> grid_or_throw(const std::string &text, const char *name) {
    try {
        return parse_grid(text);
    } catch (const ConfigError &e) {
        throw ConfigError(std::string(name) + ": " + e.what());
    }
}

// "lo:hi" with lo < hi.
std::array<double, 2> parse_bracket(const std::string &text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos || text.find(':', colon + 1) != std::string::npos) {
        throw ConfigError("--bracket must be lo:hi, got '" + text + "'");
    }
    std::array<double, 2> b{};
    try {
        b = {parse_number(std::string_view(text).substr(0, colon)),
             parse_number(std::string_view(text).substr(colon + 1))};
    } catch (const ConfigError &e) {
        throw ConfigError(std::string("--bracket: ") + e.what());
    }
    if (!(b[0] > 0 && b[0] < b[1])) {
        throw ConfigError("--bracket needs 0 < lo < hi, got '" + text + "'");
    }
    return b;
}

void require_flux_range(const std::vector<double> &grid) {
    for (double phi : grid) {
        if (!(phi >= -0.5 && phi <= 0.5)) {
            throw ConfigError("flux grid values must lie in [-0.5, 0.5] (got " + format_number(phi) + ")");
        }
    }
}

// Reports failed points and turns too many of them into a numerical-failure exit code.
int finish_sweep(const SweepResult &sweep, const char *axis, std::ostream &err) {
    const std::size_t failed = sweep.failures();
    for (const auto &p : sweep.points) {
        if (!p.ok()) {
            err << "failed at " << axis << "=" << format_number(p.x) << ": " << p.error << '\n';
        }
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto &p : sweep.points) {
        if (p.ok()) {
            lo = std::min(lo, p.result->zeta_kHz);
            hi = std::max(hi, p.result->zeta_kHz);
        }
    }
    err << "zeta over " << sweep.points.size() - failed << " of " << sweep.points.size() << " points: ";
    if (failed == sweep.points.size()) {
        err << "none computed\n";
    } else {
        err << "min " << format_number(lo) << " kHz, max " << format_number(hi) << " kHz\n";
    }
    for (const auto &[a, b] : sweep.sign_changes) {
        err << "zeta changes sign between " << axis << "=" << format_number(a) << " and " << format_number(b) << '\n';
    }
    return static_cast<double>(failed) > kMaxFailedFraction * static_cast<double>(sweep.points.size())
               ? kExitNumerical
               : kExitOk;
}

std::string zeta_cell(const SweepPoint &p) {
    return format_number(p.ok() ? p.result->zeta_kHz : kNaN);
}

std::string ambiguous_cell(const SweepPoint &p) {
    return p.ok() ? "0" : "1";
}

int cmd_spectrum(const Globals &g, const std::string &grid_text, std::ostream &out, std::ostream &err) {
    const auto grid = grid_or_throw(grid_text, "--flux-grid");
    require_flux_range(grid);
    const auto params = g.params();
    const auto cfg = g.basis();
    Sink sink(g.out, out);
    const SweepResult sweep = sweep_flux(params, grid, cfg, g.threads);

    auto &csv = sink.stream();
    csv << "phi_ex,E_0000_GHz,E_1000_GHz,E_0100_GHz,E_1100_GHz,label_overlaps\n";
    const std::array<Occupation, 4> states{kState0000, kState1000, kState0100, kState1100};
    for (const auto &p : sweep.points) {
        csv << format_number(p.x);
        std::string overlaps;
        for (const auto &occ : states) {
            double e = kNaN;
            double o = kNaN;
            if (p.spectrum && p.spectrum->find(occ)) {
                e = p.spectrum->frequency_of(occ);
                o = p.spectrum->overlap_of(occ);
            }
            csv << ',' << format_number(e);
            overlaps += (overlaps.empty() ? "" : ";") + format_number(o);
        }
        csv << ',' << overlaps << '\n';
    }
    sink.flush();
    return finish_sweep(sweep, "phi_ex", err);
}

struct ZZOptions {
    std::optional<std::string> flux_grid;
    std::optional<std::string> c34_grid;
    double flux = 0;
    bool zero_parasitics = false;
    bool compare = false;
};

int cmd_zz(const Globals &g, const ZZOptions &o, std::ostream &out, std::ostream &err) {
    const auto params = g.params();
    const auto cfg = g.basis();
    if (!o.c34_grid) {
        if (o.compare) {
            throw ConfigError("pert-compare needs --c34-grid");
        }
        const auto grid = grid_or_throw(o.flux_grid.value_or("0"), "--flux-grid");
        require_flux_range(grid);
        const CircuitParams base = o.zero_parasitics ? without_parasitics(params) : params;
        Sink sink(g.out, out);
        const SweepResult sweep = sweep_flux(base, grid, cfg, g.threads);
        sink.stream() << "phi_ex,zeta_kHz,ambiguous_flag\n";
        for (const auto &p : sweep.points) {
            sink.stream() << format_number(p.x) << ',' << zeta_cell(p) << ',' << ambiguous_cell(p) << '\n';
        }
        sink.flush();
        return finish_sweep(sweep, "phi_ex", err);
    }

    const auto grid = grid_or_throw(*o.c34_grid, "--c34-grid");
    Sink sink(g.out, out);
    const SweepResult sweep = sweep_c34(params, grid, {o.flux}, cfg, o.zero_parasitics, g.threads);
    auto &csv = sink.stream();
    const bool compare = o.compare || o.zero_parasitics;
    if (!compare) {
        csv << "C34_fF,zeta_kHz,ambiguous_flag\n";
        for (const auto &p : sweep.points) {
            csv << format_number(p.x) << ',' << zeta_cell(p) << ',' << ambiguous_cell(p) << '\n';
        }
    } else {
        csv << "C34_fF,zeta_exact_kHz,zeta_pert_kHz,g12_MHz,ambiguous_flag\n";
        for (const auto &p : sweep.points) {
            double zp = kNaN;
            double g12 = kNaN;
            try {
                const auto r = run_perturbative(with_c34(params, p.x));
                zp = r.zeta_pert_kHz;
                g12 = r.coupling.g12 / (2.0 * constants::pi * constants::mega);
            } catch (const NumericalError &e) {
                err << "perturbative model failed at C34_fF=" << format_number(p.x) << ": " << e.what() << '\n';
            }
            csv << format_number(p.x) << ',' << zeta_cell(p) << ',' << format_number(zp) << ','
                << format_number(g12) << ',' << ambiguous_cell(p) << '\n';
        }
    }
    sink.flush();
    return finish_sweep(sweep, "C34_fF", err);
}

struct DesignOptions {
    std::string bracket = "20:80";
    double tol_fF = 0.25;
    double flux = 0;
    bool zero_parasitics = false;
    bool fixed_frequency = false;
    std::optional<double> f1_GHz;
    std::optional<double> f2_GHz;
};

nlohmann::json trace_json(const std::vector<std::pair<double, double>> &trace) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &[x, y] : trace) {
        arr.push_back({x, y});
    }
    return arr;
}

int cmd_design(const Globals &g, const DesignOptions &o, std::ostream &out, std::ostream &err) {
    CircuitParams params = g.params();
    if (o.zero_parasitics) {
        params = without_parasitics(params);
    }
    Sink sink(g.out, out);
    nlohmann::json doc;
    const double lj5 = derive_junction_energies(params).lj5_nH;
    if (o.fixed_frequency) {
        double f1 = 0;
        double f2 = 0;
        if (o.f1_GHz && o.f2_GHz) {
            f1 = *o.f1_GHz;
            f2 = *o.f2_GHz;
        } else if (!o.f1_GHz && !o.f2_GHz) {
            const auto r = run_perturbative(params);
            f1 = r.coupling.omega1 / (2.0 * constants::pi * constants::giga);
            f2 = r.coupling.omega2 / (2.0 * constants::pi * constants::giga);
        } else {
            throw ConfigError("--f1 and --f2 must be given together");
        }
        doc["mode"] = "fixed_frequency";
        doc["f1_GHz"] = f1;
        doc["f2_GHz"] = f2;
        doc["lj5_nH"] = lj5;
        doc["c34_star_fF"] = zero_coupling_c34_fixed_frequency(lj5, f1, f2);
        doc["g12_residual"] = nullptr;
        doc["zeta_at_star_kHz"] = nullptr;
        doc["argmin_c34_exact_fF"] = nullptr;
        sink.stream() << doc.dump(2) << '\n';
        sink.flush();
        return kExitOk;
    }

    const auto bracket = parse_bracket(o.bracket);
    const auto cfg = g.basis();
    const ZeroCouplingResult star = zero_coupling_c34(params);
    const ZZResult at_star = zz_interaction(with_c34(params, star.c34_fF), {o.flux}, cfg);
    const MinimizeResult argmin = argmin_abs_zeta_c34(params, bracket[0], bracket[1], {o.flux}, cfg, o.tol_fF);

    doc["mode"] = "fixed_point";
    doc["c34_star_fF"] = star.c34_fF;
    doc["g12_residual"] = star.g12 / (2.0 * constants::pi * constants::mega);
    doc["g12_residual_unit"] = "MHz";
    doc["fixed_point_iterations"] = star.iterations;
    doc["fixed_point_trace_fF"] = star.trace_fF;
    doc["zeta_at_star_kHz"] = at_star.zeta_kHz;
    doc["zeta_pert_at_star_kHz"] = run_perturbative(with_c34(params, star.c34_fF)).zeta_pert_kHz;
    doc["argmin_c34_exact_fF"] = argmin.x;
    doc["abs_zeta_at_argmin_kHz"] = argmin.fx;
    doc["argmin_trace"] = trace_json(argmin.trace);
    doc["relative_difference"] = std::abs(star.c34_fF - argmin.x) / argmin.x;
    sink.stream() << doc.dump(2) << '\n';
    sink.flush();
    err << "C34* = " << format_number(star.c34_fF) << " fF, exact argmin = " << format_number(argmin.x) << " fF\n";
    return kExitOk;
}

struct RBOptions {
    std::array<std::string, 6> files;
    bool partial = false;
    int d = 4;
};

int cmd_rb_budget(const Globals &g, const RBOptions &o, std::ostream &out, std::ostream &err) {
    rb::TraceBundle bundle;
    std::array<std::optional<rb::RBTrace> *, 6> slots{&bundle.x1_srb,     &bundle.x1_irb,    &bundle.purity_srb,
                                                      &bundle.purity_irb, &bundle.p0000_srb, &bundle.p0000_irb};
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!o.files[i].empty()) {
            *slots[i] = rb::read_trace_csv(o.files[i]);
        }
    }
    rb::BundleBudget result;
    try {
        result = rb::budget_from_bundle(bundle, o.d, o.partial);
    } catch (const ValidationError &e) {
        // Point at the offending file when the message names a slot.
        std::string msg = e.what();
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (!o.files[i].empty() && msg.find(std::string(rb::kBundleSlots[i])) != std::string::npos) {
                msg += " [file " + o.files[i] + "]";
            }
        }
        throw ValidationError(msg);
    }
    Sink sink(g.out, out);
    nlohmann::json doc = rb::budget_to_json(result.budget);
    nlohmann::json fits = nlohmann::json::object();
    for (const auto &[name, f] : result.fits) {
        fits[name] = {{"offset", f.model.offset},
                      {"amplitude", f.model.amplitude},
                      {"lambda", f.model.lambda},
                      {"sigma_lambda", f.sigma_lambda()},
                      {"lambda_identifiable", f.lambda_identifiable}};
    }
    doc["fits"] = fits;
    sink.stream() << doc.dump(2) << '\n';
    sink.flush();
    for (const auto &w : result.budget.warnings) {
        err << "warning: " << w << '\n';
    }
    return kExitOk;
}

int cmd_rb_synth(const Globals &g, const std::string &out_dir, const std::string &lengths_text, double sigma, int d,
                 std::ostream &err) {
    const auto grid = grid_or_throw(lengths_text, "--lengths");
    std::vector<int> lengths;
    for (double m : grid) {
        if (m != std::round(m) || m <= 0) {
            throw ConfigError("--lengths must produce positive integers (got " + format_number(m) + ")");
        }
        lengths.push_back(static_cast<int>(m));
    }
    if (!std::filesystem::is_directory(out_dir)) {
        throw ConfigError("output directory does not exist: " + out_dir);
    }
    const rb::TraceBundle bundle = rb::synth_bundle(rb::BundleModel{}, lengths, sigma, g.seed, d);
    const std::array<const std::optional<rb::RBTrace> *, 6> slots{&bundle.x1_srb,     &bundle.x1_irb,
                                                                  &bundle.purity_srb, &bundle.purity_irb,
                                                                  &bundle.p0000_srb,  &bundle.p0000_irb};
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto path = std::filesystem::path(out_dir) / (std::string(rb::kBundleSlots[i]) + ".csv");
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw ConfigError("cannot write " + path.string());
        }
        rb::write_trace_csv(file, **slots[i]);
        err << "wrote " << path.string() << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Spectrum, ZZ and benchmarking analysis for a double-transmon coupler circuit", "csdtc"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--params", g.params_path, "Circuit parameter JSON (default: built-in reference device)");
    app.add_option("--out", g.out, "Output file, '-' for stdout");
    app.add_option("--n-max", g.n_max, "Charge cutoff per node")->check(CLI::Range(3, 40));
    app.add_option("--k", g.k, "Number of eigenstates")->check(CLI::Range(6, 200));
    app.add_option("--seed", g.seed, "Seed for synthetic data");
    app.add_option("--threads", g.threads, "Worker threads for sweeps (0 = all cores)");

    std::string spectrum_grid = "-0.5:0.5:101";
    auto *spectrum = app.add_subcommand("spectrum", "Dressed computational levels along a flux grid");
    spectrum->add_option("--flux-grid", spectrum_grid, "start:stop:count or a single value");

    ZZOptions zz;
    auto add_zz_options = [](CLI::App *sub, ZZOptions &o) {
        auto *fg = sub->add_option("--flux-grid", o.flux_grid, "Flux grid start:stop:count");
        auto *cg = sub->add_option("--c34-grid", o.c34_grid, "Shunt capacitance grid in fF");
        fg->excludes(cg);
        sub->add_option("--flux", o.flux, "Flux for C34 sweeps");
        sub->add_flag("--zero-parasitics", o.zero_parasitics, "Set C12, C14 and C23 to zero");
    };
    auto *zz_cmd = app.add_subcommand("zz", "ZZ interaction along a flux or C34 grid");
    add_zz_options(zz_cmd, zz);
    ZZOptions compare;
    compare.compare = true;
    compare.c34_grid = "5:100:96";
    auto *compare_cmd = app.add_subcommand("pert-compare", "Exact and perturbative ZZ along a C34 grid");
    add_zz_options(compare_cmd, compare);

    DesignOptions design;
    auto *design_cmd = app.add_subcommand("design", "Zero-coupling shunt capacitance and the exact |ZZ| minimum");
    design_cmd->add_option("--bracket", design.bracket, "C34 search bracket lo:hi in fF");
    design_cmd->add_option("--tol", design.tol_fF, "Search tolerance in fF");
    design_cmd->add_option("--flux", design.flux, "Flux for the exact search");
    design_cmd->add_flag("--zero-parasitics", design.zero_parasitics, "Set C12, C14 and C23 to zero");
    design_cmd->add_flag("--fixed-frequency", design.fixed_frequency, "Closed form 1/(L_J5 w1 w2) only");
    design_cmd->add_option("--f1", design.f1_GHz, "Mode 1 frequency for --fixed-frequency, GHz");
    design_cmd->add_option("--f2", design.f2_GHz, "Mode 2 frequency for --fixed-frequency, GHz");

    RBOptions rb_opts;
    auto *rb_cmd = app.add_subcommand("rb-budget", "CZ error budget from benchmarking traces");
    for (std::size_t i = 0; i < rb::kBundleSlots.size(); ++i) {
        rb_cmd->add_option("--" + std::string(rb::kBundleSlots[i]), rb_opts.files[i], "Trace CSV");
    }
    rb_cmd->add_flag("--partial", rb_opts.partial, "Allow missing traces");
    rb_cmd->add_option("--d", rb_opts.d, "Subspace dimension")->check(CLI::Range(2, 1 << 20));

    std::string synth_dir;
    std::string synth_lengths = "1:1501:61";
    double synth_sigma = 0;
    int synth_d = 4;
    auto *synth_cmd = app.add_subcommand("rb-synth", "Write a synthetic six-trace bundle");
    synth_cmd->add_option("--out-dir", synth_dir, "Directory for the six CSV files")->required();
    synth_cmd->add_option("--lengths", synth_lengths, "Sequence lengths start:stop:count");
    synth_cmd->add_option("--sigma", synth_sigma, "Gaussian noise level")->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--d", synth_d, "Subspace dimension")->check(CLI::Range(2, 1 << 20));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (spectrum->parsed()) {
            return cmd_spectrum(g, spectrum_grid, out, err);
        }
        if (zz_cmd->parsed()) {
            return cmd_zz(g, zz, out, err);
        }
        if (compare_cmd->parsed()) {
            return cmd_zz(g, compare, out, err);
        }
        if (design_cmd->parsed()) {
            return cmd_design(g, design, out, err);
        }
        if (rb_cmd->parsed()) {
            return cmd_rb_budget(g, rb_opts, out, err);
        }
        if (synth_cmd->parsed()) {
            return cmd_rb_synth(g, synth_dir, synth_lengths, synth_sigma, synth_d, err);
        }
    } catch (const std::invalid_argument &e) {
        // ConfigError and ValidationError.
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace csdtc::cli
