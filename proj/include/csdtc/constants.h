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

#ifndef CSDTC_CONSTANTS_H
#define CSDTC_CONSTANTS_H

#include <numbers>

/// Physical constants (CODATA 2018 exact SI values) and unit scales.
///
/// Internally energies are carried as frequencies E/h in GHz, capacitances in
/// farads and inductances in henries. Unit conversion only happens where data
/// enters or leaves the library (JSON, CSV, CLI).
namespace csdtc::constants {

inline constexpr double pi = std::numbers::pi;

/// Elementary charge, C (exact).
inline constexpr double elementary_charge = 1.602176634e-19;
/// Planck constant, J s (exact).
inline constexpr double planck = 6.62607015e-34;
/// Reduced Planck constant, J s.
inline constexpr double hbar = planck / (2.0 * pi);
/// Magnetic flux quantum h/2e, Wb.
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge);
/// Reduced flux quantum hbar/2e, Wb.
inline constexpr double reduced_flux_quantum = hbar / (2.0 * elementary_charge);

inline constexpr double femto = 1e-15;
inline constexpr double nano = 1e-9;
inline constexpr double giga = 1e9;
inline constexpr double mega = 1e6;
inline constexpr double kilo = 1e3;

/// GHz -> kHz.
inline constexpr double ghz_to_khz = 1e6;
/// GHz -> MHz.
inline constexpr double ghz_to_mhz = 1e3;

}  // namespace csdtc::constants

#endif  // CSDTC_CONSTANTS_H
