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

#include "csdtc/spectrum.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "csdtc/constants.h"
#include "csdtc/text_format.h"

namespace csdtc {

namespace {

constexpr int kLabelLevels = kMaxLabelOccupation + 1;
constexpr int kGuardVectors = 4;

Occupation decode(int flat) {
    Occupation occ{};
    for (int i = 3; i >= 0; --i) {
        occ[i] = flat % kLabelLevels;
        flat /= kLabelLevels;
    }
    return occ;
}

int encode(const Occupation &occ) {
    int flat = 0;
    for (int i = 0; i < 4; ++i) {
        flat = flat * kLabelLevels + occ[i];
    }
    return flat;
}

constexpr std::array<Occupation, 4> kComputational{kState0000, kState1000, kState0100, kState1100};

}  // namespace

std::string occupation_string(const Occupation &occ) {
    std::string s;
    for (int n : occ) {
        s += std::to_string(n);
    }
    return s;
}

std::optional<int> SpectrumResult::find(const Occupation &occ) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] && labels[i]->occupations == occ) {
            return static_cast<int>(i);
        }
    }
    return std::nullopt;
}

double SpectrumResult::frequency_of(const Occupation &occ) const {
    auto idx = find(occ);
    if (!idx) {
        throw LabelingError("no eigenstate labeled " + occupation_string(occ));
    }
    return frequencies_GHz[*idx];
}

double SpectrumResult::overlap_of(const Occupation &occ) const {
    auto idx = find(occ);
    return idx ? labels[*idx]->overlap : std::numeric_limits<double>::quiet_NaN();
}

std::vector<std::optional<DressedLabel>> label_states(const Eigen::MatrixXcd &eigenvectors,
                                                      const ProductBasis &reference) {
    if (reference.states_per_node() < kLabelLevels) {
        throw ConfigError("reference basis must hold occupations up to " + std::to_string(kMaxLabelOccupation));
    }
    const int states = static_cast<int>(eigenvectors.cols());
    constexpr int candidates = kLabelLevels * kLabelLevels * kLabelLevels * kLabelLevels;
    Eigen::MatrixXd overlaps(states, candidates);
    for (int s = 0; s < states; ++s) {
        overlaps.row(s) = reference.project_low(eigenvectors.col(s), kLabelLevels).cwiseAbs2().transpose();
    }

    struct Pair {
        double overlap;
        int state;
        int candidate;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(states) * candidates);
    for (int s = 0; s < states; ++s) {
        for (int c = 0; c < candidates; ++c) {
            pairs.push_back({overlaps(s, c), s, c});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair &a, const Pair &b) {
        if (a.overlap != b.overlap) {
            return a.overlap > b.overlap;
        }
        if (a.state != b.state) {
            return a.state < b.state;
        }
        return a.candidate < b.candidate;
    });

    std::vector<std::optional<DressedLabel>> labels(states);
    std::vector<bool> taken(candidates, false);
    int assigned = 0;
    for (const auto &p : pairs) {
        if (assigned == std::min(states, candidates)) {
            break;
        }
        if (labels[p.state] || taken[p.candidate]) {
            continue;
        }
        labels[p.state] = DressedLabel{decode(p.candidate), p.overlap};
        taken[p.candidate] = true;
        ++assigned;
    }

    for (const auto &occ : kComputational) {
        if (!taken[encode(occ)]) {
            // List the eigenstates that overlap most with the missing product state.
            const int c = encode(occ);
            std::vector<int> order(states);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int a, int b) { return overlaps(a, c) > overlaps(b, c); });
            std::ostringstream msg;
            msg << "label " << occupation_string(occ) << " could not be assigned; candidates:";
            for (int i = 0; i < std::min(states, 3); ++i) {
                msg << " state " << order[i] << " (overlap " << overlaps(order[i], c) << ", labeled "
                    << (labels[order[i]] ? occupation_string(labels[order[i]]->occupations) : "-") << ")";
            }
            throw LabelingError(msg.str());
        }
    }
    return labels;
}

SpectrumResult compute_spectrum(const CircuitModel &model, FluxPoint flux, const ChargeBasisConfig &cfg) {
    cfg.validate();
    const auto h = assemble_hamiltonian(model, flux, cfg);
    const CouplerBlockReference preconditioner(model, flux, cfg);

    SolverOptions options;
    options.guard_vectors = kGuardVectors;
    options.preconditioner = [&preconditioner](double shift, Eigen::Ref<Eigen::VectorXcd> v) {
        preconditioner.apply_shifted_inverse(shift, v);
    };
    const int wanted = static_cast<int>(std::min<std::int64_t>(cfg.num_eigenstates + kGuardVectors, h.dimension()));
    try {
        options.initial_guess = preconditioner.lowest_states(wanted);
    } catch (const ConfigError &) {
        // More states than the truncated coupler basis offers; fall back to unit vectors.
    }
    const EigenPairs pairs = solve_lowest(h, cfg.num_eigenstates, options);

    SpectrumResult out;
    out.flux = flux;
    out.basis = cfg;
    out.frequencies_GHz = pairs.values.array() - pairs.values[0];
    out.frequencies_GHz[0] = 0.0;
    out.residual_norms = pairs.residual_norms;
    out.labels = label_states(pairs.vectors, ProductBasis(uncoupled_hamiltonian(model, cfg)));
    return out;
}

SpectrumResult compute_spectrum(const CircuitParams &params, FluxPoint flux, const ChargeBasisConfig &cfg) {
    return compute_spectrum(make_model(params), flux, cfg);
}

double zz_from_spectrum(const SpectrumResult &spectrum) {
    std::vector<std::string> weak;
    for (const auto &occ : kComputational) {
        auto idx = spectrum.find(occ);
        if (!idx) {
            throw LabelingError("no eigenstate labeled " + occupation_string(occ));
        }
        if (spectrum.labels[*idx]->ambiguous()) {
            weak.push_back(occupation_string(occ) + " (overlap " + format_number(spectrum.labels[*idx]->overlap) + ")");
        }
    }
    if (!weak.empty()) {
        std::string msg = "ambiguous computational labels at phi_ex=" + format_number(spectrum.flux.phi_ex) + ":";
        for (const auto &w : weak) {
            msg += " " + w;
        }
        throw AmbiguousLabelError(msg, spectrum);
    }
    const double zeta = spectrum.frequency_of(kState1100) - spectrum.frequency_of(kState1000) -
                        spectrum.frequency_of(kState0100) + spectrum.frequency_of(kState0000);
    return zeta * constants::ghz_to_khz;
}

ZZResult zz_interaction(const CircuitModel &model, FluxPoint flux, const ChargeBasisConfig &cfg) {
    ZZResult out;
    out.flux = flux;
    out.spectrum = compute_spectrum(model, flux, cfg);
    out.zeta_kHz = zz_from_spectrum(out.spectrum);
    return out;
}

ZZResult zz_interaction(const CircuitParams &params, FluxPoint flux, const ChargeBasisConfig &cfg) {
    return zz_interaction(make_model(params), flux, cfg);
}

std::size_t SweepResult::failures() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto &p) { return !p.ok(); }));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &f, unsigned threads) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            f(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &w : workers) {
        w.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

namespace {

SweepPoint evaluate_point(double x, const CircuitModel &model, FluxPoint flux, const ChargeBasisConfig &cfg) {
    SweepPoint point;
    point.x = x;
    try {
        point.result = zz_interaction(model, flux, cfg);
        point.spectrum = point.result->spectrum;
    } catch (const AmbiguousLabelError &e) {
        point.error = e.what();
        point.spectrum = e.spectrum;
    } catch (const NumericalError &e) {
        point.error = e.what();
    }
    return point;
}

void locate_sign_changes(SweepResult &sweep) {
    const SweepPoint *prev = nullptr;
    for (const auto &p : sweep.points) {
        if (!p.ok()) {
            continue;
        }
        if (prev && std::signbit(prev->result->zeta_kHz) != std::signbit(p.result->zeta_kHz)) {
            sweep.sign_changes.emplace_back(prev->x, p.x);
        }
        prev = &p;
    }
}

}  // namespace

SweepResult sweep_flux(const CircuitParams &params, const std::vector<double> &flux_grid, const ChargeBasisConfig &cfg,
                       unsigned threads) {
    if (flux_grid.empty()) {
        throw ConfigError("flux grid is empty");
    }
    cfg.validate();
    const CircuitModel model = make_model(params);
    SweepResult sweep;
    sweep.points.resize(flux_grid.size());
    parallel_for(
        flux_grid.size(),
        [&](std::size_t i) { sweep.points[i] = evaluate_point(flux_grid[i], model, {flux_grid[i]}, cfg); }, threads);
    locate_sign_changes(sweep);
    return sweep;
}

SweepResult sweep_c34(const CircuitParams &params, const std::vector<double> &c34_grid_fF, FluxPoint flux,
                      const ChargeBasisConfig &cfg, bool zero_parasitics, unsigned threads) {
    if (c34_grid_fF.empty()) {
        throw ConfigError("C34 grid is empty");
    }
    for (double c : c34_grid_fF) {
        if (!(c > 0) || !std::isfinite(c)) {
            throw ConfigError("C34 grid values must be positive (got " + format_number(c) + ")");
        }
    }
    cfg.validate();
    const CircuitParams base = zero_parasitics ? without_parasitics(params) : params;
    SweepResult sweep;
    sweep.points.resize(c34_grid_fF.size());
    parallel_for(
        c34_grid_fF.size(),
        [&](std::size_t i) {
            const double c = c34_grid_fF[i];
            sweep.points[i] = evaluate_point(c, make_model(with_c34(base, c)), flux, cfg);
        },
        threads);
    locate_sign_changes(sweep);
    return sweep;
}

ConvergenceStudy convergence_study(const CircuitModel &model, FluxPoint flux, const std::vector<int> &n_max_list,
                                   int num_eigenstates) {
    if (n_max_list.size() < 2) {
        throw ConfigError("a convergence study needs at least two n_max values");
    }
    if (!std::is_sorted(n_max_list.begin(), n_max_list.end(), std::less_equal<>())) {
        throw ConfigError("n_max values must be strictly ascending");
    }
    ConvergenceStudy study;
    study.n_max = n_max_list;
    for (int n : n_max_list) {
        study.zeta_kHz.push_back(zz_interaction(model, flux, {n, num_eigenstates}).zeta_kHz);
    }
    for (std::size_t i = 1; i < study.zeta_kHz.size(); ++i) {
        study.deltas_kHz.push_back(std::abs(study.zeta_kHz[i] - study.zeta_kHz[i - 1]));
    }
    study.final_delta_kHz = study.deltas_kHz.back();
    study.converged = study.final_delta_kHz < kConvergenceThreshold_kHz;
    return study;
}

ConvergenceStudy convergence_study(const CircuitParams &params, FluxPoint flux, const std::vector<int> &n_max_list,
                                   int num_eigenstates) {
    return convergence_study(make_model(params), flux, n_max_list, num_eigenstates);
}

}  // namespace csdtc
