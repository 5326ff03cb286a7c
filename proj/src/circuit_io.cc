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

#include "csdtc/circuit_io.h"

#include <fstream>
#include <set>

#include "csdtc/errors.h"

namespace csdtc {

namespace {

constexpr std::array<const char *, 6> kMutualKeys{"C12", "C13", "C14", "C23", "C24", "C34"};
constexpr std::array<std::pair<int, int>, 6> kMutualNodes{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

void reject_unknown_keys(const nlohmann::json &obj, const std::set<std::string> &allowed, const std::string &where) {
    for (const auto &item : obj.items()) {
        if (!allowed.contains(item.key())) {
            throw ValidationError("unknown key '" + item.key() + "' in " + where);
        }
    }
    for (const auto &key : allowed) {
        if (!obj.contains(key)) {
            throw ValidationError("missing key '" + key + "' in " + where);
        }
    }
}

template <size_t N>
std::array<double, N> read_array(const nlohmann::json &doc, const char *key) {
    const auto &arr = doc.at(key);
    if (!arr.is_array() || arr.size() != N) {
        throw ValidationError(std::string(key) + " must be an array of " + std::to_string(N) + " numbers");
    }
    std::array<double, N> out{};
    for (size_t k = 0; k < N; ++k) {
        if (!arr[k].is_number()) {
            throw ValidationError(std::string(key) + "[" + std::to_string(k) + "] is not a number");
        }
        out[k] = arr[k].get<double>();
    }
    return out;
}

}  // namespace

CircuitParams params_from_json(const nlohmann::json &doc) {
    if (!doc.is_object()) {
        throw ValidationError("parameter document must be a JSON object");
    }
    reject_unknown_keys(doc, {"node_caps_fF", "mutual_caps_fF", "critical_currents_nA"}, "parameter document");
    CircuitParams p;
    p.node_caps_fF = read_array<4>(doc, "node_caps_fF");
    p.critical_currents_nA = read_array<5>(doc, "critical_currents_nA");
    const auto &mut = doc.at("mutual_caps_fF");
    if (!mut.is_object()) {
        throw ValidationError("mutual_caps_fF must be an object");
    }
    reject_unknown_keys(mut, {kMutualKeys.begin(), kMutualKeys.end()}, "mutual_caps_fF");
    for (size_t k = 0; k < kMutualKeys.size(); ++k) {
        const auto &v = mut.at(kMutualKeys[k]);
        if (!v.is_number()) {
            throw ValidationError(std::string("mutual_caps_fF.") + kMutualKeys[k] + " is not a number");
        }
        p.mutual_caps_fF.between(kMutualNodes[k].first, kMutualNodes[k].second) = v.get<double>();
    }
    auto report = validate_params(p);
    if (!report.ok()) {
        throw ValidationError("invalid circuit parameters: " + report.str());
    }
    return p;
}

nlohmann::json params_to_json(const CircuitParams &params) {
    nlohmann::json mut = nlohmann::json::object();
    for (size_t k = 0; k < kMutualKeys.size(); ++k) {
        mut[kMutualKeys[k]] = params.mutual_caps_fF.between(kMutualNodes[k].first, kMutualNodes[k].second);
    }
    return {
        {"node_caps_fF", params.node_caps_fF},
        {"mutual_caps_fF", mut},
        {"critical_currents_nA", params.critical_currents_nA},
    };
}

CircuitParams load_params(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open parameter file " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    try {
        return params_from_json(doc);
    } catch (const ValidationError &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

}  // namespace csdtc
