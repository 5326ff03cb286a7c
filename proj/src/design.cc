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

#include "csdtc/design.h"

#include <cmath>
#include <sstream>

#include "csdtc/spectrum.h"
#include "csdtc/text_format.h"

namespace csdtc {

MinimizeResult golden_section_minimize(const std::function<double(double)> &f, double lo, double hi, double tol) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ConfigError("bracket must satisfy lo < hi (got " + format_number(lo) + ", " + format_number(hi) + ")");
    }
    if (!(tol > 0)) {
        throw ConfigError("tolerance must be positive");
    }
    MinimizeResult out;
    auto eval = [&](double x) {
        const double y = f(x);
        out.trace.emplace_back(x, y);
        ++out.evaluations;
        return y;
    };
    const double f_lo = eval(lo);
    const double f_hi = eval(hi);

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
    }
    if (fc < fd) {
        out.x = c;
        out.fx = fc;
    } else {
        out.x = d;
        out.fx = fd;
    }
    if (!(out.fx < f_lo && out.fx < f_hi) || out.x - lo <= tol || hi - out.x <= tol) {
        std::ostringstream msg;
        msg << "no interior minimum in [" << format_number(lo) << ", " << format_number(hi) << "]: f(lo)=" << f_lo
            << ", f(hi)=" << f_hi << ", best interior f(" << out.x << ")=" << out.fx;
        throw BracketError(msg.str(), out.trace);
    }
    return out;
}

MinimizeResult argmin_abs_zeta_c34(const CircuitParams &params, double lo_fF, double hi_fF, FluxPoint flux,
                                   const ChargeBasisConfig &cfg, double tol_fF) {
    if (!(lo_fF > 0)) {
        throw ConfigError("C34 bracket must be positive");
    }
    return golden_section_minimize(
        [&](double c34) { return std::abs(zz_interaction(with_c34(params, c34), flux, cfg).zeta_kHz); }, lo_fF, hi_fF,
        tol_fF);
}

}  // namespace csdtc
