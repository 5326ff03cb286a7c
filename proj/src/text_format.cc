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

#include "csdtc/text_format.h"

#include <charconv>
#include <cmath>

#include "csdtc/errors.h"

namespace csdtc {

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

double parse_number(std::string_view text) {
    double value = 0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw ConfigError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

std::vector<double> linspace(double start, double stop, int count) {
    if (count < 1) {
        throw ConfigError("grid needs at least one point");
    }
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = start;
        return out;
    }
    for (int k = 0; k < count; ++k) {
        // Endpoints exact; interior points from the start so the grid is reproducible.
        out[k] = (k == count - 1) ? stop : start + (stop - start) * k / (count - 1);
    }
    return out;
}

std::vector<double> parse_grid(std::string_view text) {
    if (text.empty()) {
        throw ConfigError("empty grid");
    }
    auto first = text.find(':');
    if (first == std::string_view::npos) {
        return {parse_number(text)};
    }
    auto second = text.find(':', first + 1);
    if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
        throw ConfigError("grid must be 'start:stop:count' or a single value, got '" + std::string(text) + "'");
    }
    double start = parse_number(text.substr(0, first));
    double stop = parse_number(text.substr(first + 1, second - first - 1));
    auto count_text = text.substr(second + 1);
    int count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size() || count < 1) {
        throw ConfigError("grid count must be a positive integer, got '" + std::string(count_text) + "'");
    }
    if (count == 1 && start != stop) {
        throw ConfigError("a one-point grid needs start == stop");
    }
    return linspace(start, stop, count);
}

}  // namespace csdtc
