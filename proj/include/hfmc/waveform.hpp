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

#pragma once

#include "hfmc/core.hpp"

#include <string>
#include <vector>

namespace hfmc {

/**
 * Hyperbolic frequency modulated (linear period modulated) reference signal
 *
 *   g(t) = 1 / (1 + t/T0) * exp(j 2 pi K ln(1 + t/T0))
 *
 * K is the FM rate (dimensionless), T0 the reference time in seconds. The
 * instantaneous frequency is K / (T0 + t), so the period grows linearly in t.
 */
struct HfmSignalDef {
    double fm_rate = 0.0;  // K
    double ref_time = 0.0; // T0 [s]

    void validate() const;
};

// Evaluates g(t). Throws DomainError when 1 + t/T0 <= 0.
Complex hfm_eval(const HfmSignalDef& def, double t);

// Right-hand side of the scaling identity g((1+a)t) = e^{j2piK ln(1+a)}/(1+a) * g(t - a T0/(1+a)).
Complex hfm_scaled_via_delay(const HfmSignalDef& def, double scaling, double t);

// Time-bandwidth ratio K T^2 / (T0 (T0 + T)) governing the stationary-phase approximation.
double stationary_phase_ratio(const HfmSignalDef& def, double symbol_time);
bool stationary_phase_valid(const HfmSignalDef& def, double symbol_time, double min_ratio = 100.0);

/**
 * Derived HFMC waveform parameters.
 *
 * Transmit subcarrier m in [0, M-1] is A_m g(t - t_m) with t_m = t_0 + m t_r.
 * Receive filters cover n in [-Q1, M + Q2 - 1] on the same grid.
 */
struct HfmcParams {
    double epsilon = 0.0;      // approximation error threshold
    double t0_ref = 0.0;       // T0 [s]
    double fm_rate = 0.0;      // K
    double delay_res = 0.0;    // t_r [s]
    double delay_origin = 0.0; // t_0 [s]
    int num_tx = 0;            // M
    int capacity = 0;          // maximum M permitted by the band constraints
    int q_extra = 4;           // Q, sinc sidelobes kept beyond the equivalent delay spread
    int q_neg = 0;             // Q1
    int q_pos = 0;             // Q2
    int num_rx = 0;            // N = M + Q1 + Q2

    // Physical context copied from the system configuration.
    double symbol_time = 0.0; // T [s]
    double prefix_time = 0.0; // T_p [s]
    double a_max = 0.0;
    double max_delay = 0.0;   // tau_max [s] used for Q2 and G

    [[nodiscard]] HfmSignalDef signal() const { return {fm_rate, t0_ref}; }
    [[nodiscard]] IndexRange tx_range() const { return {0, num_tx - 1}; }
    [[nodiscard]] IndexRange rx_range() const { return {-q_neg, num_tx + q_pos - 1}; }
    [[nodiscard]] double delay(int m) const { return delay_origin + m * delay_res; }
    // Transmit support [-T_p, (1 + a_max) T].
    [[nodiscard]] Interval transmit_support() const {
        return {-prefix_time, (1.0 + a_max) * symbol_time};
    }
};

struct SubcarrierIndexMap {
    IndexRange tx_range;
    IndexRange rx_range;
};

SubcarrierIndexMap index_map(const HfmcParams& params);

// Checks the structural invariants: t_r formula, N = M + Q1 + Q2, |t_m| < eps T0 on the transmit
// grid, and the equivalent-delay envelope [t_0 - a_max T0, t_{M-1} + tau_max + a_max T0] inside
// [-eps T0, eps T0] (the lower end sits on the boundary by construction, so a 1e-9 relative
// tolerance applies). The extra receive rows that only catch sinc leakage are not constrained.
// Returns an empty string when all hold, otherwise a description of the first violation.
std::string check_invariants(const HfmcParams& params);

// t_m = t_0 + m t_r for every m in the receive range, ordered by m.
std::vector<double> delay_grid(const HfmcParams& params);

// Power normalization A_m = sqrt((T0 + T - t_m)(T0 - t_m) / (T0^2 T)).
double subcarrier_amplitude(const HfmcParams& params, int m);

// phi_m(t) = A_m g(t - t_m).
Complex subcarrier_eval(const HfmcParams& params, int m, double t);

// K / (T0 + t - t_m) [Hz].
double instantaneous_frequency(const HfmcParams& params, int m, double t);

// Exact closed form of the cross-correlation integral over [0, T] of conj(phi_n) phi_m.
Complex correlation_closed_form(const HfmcParams& params, int n, int m);

// Large-T0 form exp(j pi K theta_nm) sinc(K (t_n - t_m) T / ((T0 + T) T0)).
// Throws FeasibilityError when |t_n| or |t_m| is not below eps T0.
Complex correlation_approx(const HfmcParams& params, int n, int m);

// Same expression without the precondition; used for error metrics over the full grid.
Complex correlation_approx_unchecked(const HfmcParams& params, int n, int m);

// Subcarrier phase rotation theta_nm.
double correlation_phase(const HfmcParams& params, int n, int m);

} // namespace hfmc
