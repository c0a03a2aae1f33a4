// SPDX-License-Identifier: Apache-2.0
//
// hfmc - hyperbolic frequency multicarrier simulation library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hfmc/waveform.hpp"

#include <sstream>

namespace hfmc {

void HfmSignalDef::validate() const {
    if (!(fm_rate > 0.0)) throw DomainError("HFM FM rate must be positive");
    if (!(ref_time > 0.0)) throw DomainError("HFM reference time must be positive");
}

Complex hfm_eval(const HfmSignalDef& def, double t) {
    const double x = 1.0 + t / def.ref_time;
    if (!(x > 0.0)) {
        std::ostringstream os;
        os << "hfm_eval: 1 + t/T0 = " << x << " is not positive (t = " << t << ")";
        throw DomainError(os.str());
    }
    const double phase = kTwoPi * def.fm_rate * std::log(x);
    return std::polar(1.0 / x, phase);
}

Complex hfm_scaled_via_delay(const HfmSignalDef& def, double scaling, double t) {
    const double one_a = 1.0 + scaling;
    const double shift = scaling * def.ref_time / one_a;
    const Complex gain = std::polar(1.0 / one_a, kTwoPi * def.fm_rate * std::log1p(scaling));
    return gain * hfm_eval(def, t - shift);
}

double stationary_phase_ratio(const HfmSignalDef& def, double symbol_time) {
    const double T0 = def.ref_time;
    return def.fm_rate * symbol_time * symbol_time / (T0 * (T0 + symbol_time));
}

bool stationary_phase_valid(const HfmSignalDef& def, double symbol_time, double min_ratio) {
    return stationary_phase_ratio(def, symbol_time) >= min_ratio;
}

SubcarrierIndexMap index_map(const HfmcParams& params) {
    return {params.tx_range(), params.rx_range()};
}

std::string check_invariants(const HfmcParams& p) {
    std::ostringstream os;
    if (!(p.fm_rate > 0.0) || !(p.t0_ref > 0.0) || !(p.symbol_time > 0.0)) {
        return "fm_rate, t0_ref and symbol_time must be positive";
    }
    const double tr = (p.t0_ref + p.symbol_time) * p.t0_ref / (p.fm_rate * p.symbol_time);
    if (std::abs(tr - p.delay_res) > 1e-12 * tr) {
        os << "delay_res " << p.delay_res << " differs from (T0+T)T0/(KT) = " << tr;
        return os.str();
    }
    if (p.num_rx != p.num_tx + p.q_neg + p.q_pos) return "num_rx != num_tx + q_neg + q_pos";
    if (p.num_tx < 1) return "num_tx must be at least 1";
    const double bound = p.epsilon * p.t0_ref;
    for (int m = 0; m < p.num_tx; ++m) {
        if (!(std::abs(p.delay(m)) < bound)) {
            os << "|t_" << m << "| = " << std::abs(p.delay(m)) << " is not below eps*T0 = " << bound;
            return os.str();
        }
    }
    const double tol = 1e-9 * bound;
    const double lo = p.delay(0) - p.a_max * p.t0_ref;
    const double hi = p.delay(p.num_tx - 1) + p.max_delay + p.a_max * p.t0_ref;
    if (lo < -bound - tol) {
        os << "equivalent delay t_0 - a_max*T0 = " << lo << " is below -eps*T0 = " << -bound;
        return os.str();
    }
    if (hi > bound + tol) {
        os << "equivalent delay t_{M-1} + tau_max + a_max*T0 = " << hi << " exceeds eps*T0 = " << bound;
        return os.str();
    }
    return {};
}

std::vector<double> delay_grid(const HfmcParams& params) {
    const IndexRange rx = params.rx_range();
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(rx.size()));
    for (int m = rx.first; m <= rx.last; ++m) grid.push_back(params.delay(m));
    return grid;
}

double subcarrier_amplitude(const HfmcParams& p, int m) {
    const double tm = p.delay(m);
    const double T0 = p.t0_ref;
    const double T = p.symbol_time;
    return std::sqrt((T0 + T - tm) * (T0 - tm) / (T0 * T0 * T));
}

Complex subcarrier_eval(const HfmcParams& p, int m, double t) {
    return subcarrier_amplitude(p, m) * hfm_eval(p.signal(), t - p.delay(m));
}

double instantaneous_frequency(const HfmcParams& p, int m, double t) {
    return p.fm_rate / (p.t0_ref + t - p.delay(m));
}

double correlation_phase(const HfmcParams& p, int n, int m) {
    const double T0 = p.t0_ref;
    const double T = p.symbol_time;
    const double tn = p.delay(n);
    const double tm = p.delay(m);
    return std::log((T0 - tm) * (T0 + T - tm) / ((T0 - tn) * (T0 + T - tn)));
}

Complex correlation_closed_form(const HfmcParams& p, int n, int m) {
    const double T0 = p.t0_ref;
    const double T = p.symbol_time;
    const double K = p.fm_rate;
    const double tn = p.delay(n);
    const double tm = p.delay(m);
    const double denom = (T0 + T - tn) * (T0 - tm);
    const double z = (tm - tn) * T / denom;
    // sin(pi K ln(1+z)) / (pi K z), continuous at z = 0
    const double ratio = (z == 0.0) ? 1.0 : std::sin(kPi * K * std::log1p(z)) / (kPi * K * z);
    const double mag = subcarrier_amplitude(p, m) * subcarrier_amplitude(p, n) * T0 * T0 * T / denom;
    return std::polar(mag * ratio, kPi * K * correlation_phase(p, n, m));
}

Complex correlation_approx(const HfmcParams& p, int n, int m) {
    const double bound = p.epsilon * p.t0_ref;
    if (!(std::abs(p.delay(n)) < bound) || !(std::abs(p.delay(m)) < bound)) {
        std::ostringstream os;
        os << "correlation_approx: |t_n| or |t_m| not below eps*T0 = " << bound << " (n=" << n
           << ", m=" << m << ")";
        throw FeasibilityError(os.str());
    }
    return correlation_approx_unchecked(p, n, m);
}

Complex correlation_approx_unchecked(const HfmcParams& p, int n, int m) {
    const double T0 = p.t0_ref;
    const double T = p.symbol_time;
    const double arg = p.fm_rate * (p.delay(n) - p.delay(m)) * T / ((T0 + T) * T0);
    const double s = (n == m) ? 1.0 : sinc(arg);
    return std::polar(s, kPi * p.fm_rate * correlation_phase(p, n, m));
}

} // namespace hfmc
