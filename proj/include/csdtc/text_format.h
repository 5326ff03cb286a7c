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

#ifndef CSDTC_TEXT_FORMAT_H
#define CSDTC_TEXT_FORMAT_H

#include <string>
#include <string_view>
#include <vector>

namespace csdtc {

/// Shortest round-trip decimal representation, independent of the global locale.
/// Non-finite values print as "nan", "inf" and "-inf".
std::string format_number(double value);

/// Locale-free parse of a complete decimal number. Throws ConfigError on junk.
double parse_number(std::string_view text);

/// Parses a grid "start:stop:count" (inclusive endpoints) or a single value "x".
std::vector<double> parse_grid(std::string_view text);

/// `count` evenly spaced points over [start, stop], endpoints included.
std::vector<double> linspace(double start, double stop, int count);

}  // namespace csdtc

#endif  // CSDTC_TEXT_FORMAT_H
