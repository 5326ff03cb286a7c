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

#include "csdtc/rb_io.h"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "csdtc/text_format.h"

namespace csdtc::rb {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) {
            return out;
        }
        start = comma + 1;
    }
}

}  // namespace

RBTrace parse_trace_csv(std::istream &in, const std::string &source) {
    auto fail = [&](int line_no, const std::string &why) {
        return ValidationError(source + ":" + std::to_string(line_no) + ": " + why);
    };
    RBTrace trace;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    std::optional<bool> with_err;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto fields = split(line);
        if (!have_header) {
            std::optional<TraceKind> kind;
            std::optional<Variant> variant;
            for (const auto &f : fields) {
                const auto eq = f.find('=');
                if (eq == std::string::npos) {
                    throw fail(line_no, "expected a 'kind=...,variant=...' header, got '" + line + "'");
                }
                const std::string key = trim(f.substr(0, eq));
                const std::string value = trim(f.substr(eq + 1));
                try {
                    if (key == "kind") {
                        kind = parse_kind(value);
                    } else if (key == "variant") {
                        variant = parse_variant(value);
                    } else {
                        throw ValidationError("unknown header key '" + key + "'");
                    }
                } catch (const ValidationError &e) {
                    throw fail(line_no, e.what());
                }
            }
            if (!kind || !variant) {
                throw fail(line_no, "header must set both kind and variant");
            }
            trace.kind = *kind;
            trace.variant = *variant;
            have_header = true;
            continue;
        }
        if (fields[0] == "m") {
            continue;  // Column header.
        }
        if (fields.size() != 2 && fields.size() != 3) {
            throw fail(line_no, "expected 'm,value' or 'm,value,std_err'");
        }
        const bool row_err = fields.size() == 3;
        if (with_err && *with_err != row_err) {
            throw fail(line_no, "std_err must be given on every row or on none");
        }
        with_err = row_err;
        try {
            const double m = parse_number(fields[0]);
            if (m != static_cast<int>(m)) {
                throw ValidationError("sequence length must be an integer");
            }
            trace.lengths.push_back(static_cast<int>(m));
            trace.values.push_back(parse_number(fields[1]));
            if (row_err) {
                trace.std_errs.push_back(parse_number(fields[2]));
            }
        } catch (const std::invalid_argument &e) {
            throw fail(line_no, e.what());
        }
    }
    if (!have_header) {
        throw ValidationError(source + ": missing 'kind=...,variant=...' header");
    }
    try {
        trace.validate();
    } catch (const ValidationError &e) {
        throw ValidationError(source + ": " + e.what());
    }
    return trace;
}

RBTrace read_trace_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open trace file " + path.string());
    }
    return parse_trace_csv(in, path.string());
}

void write_trace_csv(std::ostream &out, const RBTrace &trace) {
    const bool with_err = !trace.std_errs.empty();
    out << "kind=" << to_string(trace.kind) << ",variant=" << to_string(trace.variant) << '\n';
    out << (with_err ? "m,value,std_err\n" : "m,value\n");
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        out << trace.lengths[i] << ',' << format_number(trace.values[i]);
        if (with_err) {
            out << ',' << format_number(trace.std_errs[i]);
        }
        out << '\n';
    }
}

nlohmann::json budget_to_json(const ErrorBudget &budget) {
    nlohmann::json doc;
    nlohmann::json sigma;
    auto put = [&](const char *key, const std::optional<Estimate> &e) {
        doc[key] = e ? nlohmann::json(e->value) : nlohmann::json(nullptr);
        sigma[key] = e ? nlohmann::json(e->sigma) : nlohmann::json(nullptr);
    };
    put("L1_cz", budget.l1_cz);
    put("r_incoh_cz", budget.r_incoh_cz);
    put("r_coh_cz", budget.r_coh_cz);
    put("r_cz", budget.r_cz);
    put("fidelity", budget.fidelity);
    doc["uncertainties"] = sigma;
    doc["d"] = budget.d;
    doc["warnings"] = budget.warnings;
    return doc;
}

}  // namespace csdtc::rb
