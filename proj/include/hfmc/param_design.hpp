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

#include "hfmc/waveform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hfmc {

// Physical and system parameters. Defaults are the underwater acoustic reference setup
// (50 kHz carrier, 5 kHz band, 10 kn over 1500 m/s).
struct SystemConfig {
    double carrier = 50e3;       // f_c [Hz]
    double bandwidth = 5e3;      // B [Hz]
    double symbol_time = 0.1024; // T [s]
    double prefix_time = 0.0256; // T_p [s]
    double a_max = 3.43e-3;      // maximum Doppler scaling factor
    int min_subcarriers = 256;   // M_s
    double step_eps = 1e-3;
    double step_ct0 = 1e-2;
    int oversample = 8;          // F_s = oversample * B
    int sim_oversample = 8;      // F_sim = sim_oversample * F_s
    int q_extra = 4;             // Q
    std::optional<double> tau_max; // defaults to prefix_time

    [[nodiscard]] double sample_rate() const { return oversample * bandwidth; }
    [[nodiscard]] double sim_rate() const { return sim_oversample * sample_rate(); }
    [[nodiscard]] double max_delay() const { return tau_max.value_or(prefix_time); }
    [[nodiscard]] double f_low() const { return carrier - 0.5 * bandwidth; }
    [[nodiscard]] double f_high() const { return carrier + 0.5 * bandwidth; }

    // Throws FeasibilityError naming the first violated requirement.
    void validate() const;
};

// a_max = v_max / c. Throws DomainError unless 0 <= v_max < c.
double a_max_from_velocity(double v_max, double medium_speed);

struct FeasibilityRanges {
    double eps_min = 0.0, eps_max = 0.0;
    double ct0_min = 0.0, ct0_max = 0.0; // bounds on T0/T at the chosen eps
    double k_min = 0.0, k_max = 0.0;     // bounds on K at the chosen T0
};

// {eps_min, eps_max}. Throws FeasibilityError when empty.
Interval epsilon_bounds(const SystemConfig& cfg);
// {ct0_min, ct0_max} at eps. Throws FeasibilityError when empty or when eps is outside the
// epsilon bounds.
Interval ct0_bounds(const SystemConfig& cfg, double eps);
// Open interval of admissible K for a given (eps, T0).
Interval k_bounds(const SystemConfig& cfg, double eps, double t0_ref);
// Smallest K for which the band constraints leave room for any subcarrier.
double k_lower_spectrum(const SystemConfig& cfg);
FeasibilityRanges feasibility_ranges(const SystemConfig& cfg, double eps, double t0_ref);

// Largest admissible K: (f_c - B/2)((1 - a_max + eps) T0 + (1 + a_max) T).
double k_from_t0(const SystemConfig& cfg, double eps, double t0_ref);
// (T0 + T) T0 / (K T)
double delay_resolution(const SystemConfig& cfg, double fm_rate, double t0_ref);
// Lowest admissible delay T0 + (1 + a_max) T - K/(f_c - B/2).
double delay_origin(const SystemConfig& cfg, double fm_rate, double t0_ref);
// Real-valued subcarrier count before the ceiling.
double subcarrier_quotient(const SystemConfig& cfg, double fm_rate, double t0_ref);
// ceil(subcarrier_quotient); nonpositive means no subcarrier fits.
int max_subcarriers(const SystemConfig& cfg, double fm_rate, double t0_ref);

struct DiversityBandwidth {
    double tau_prime_max = 0.0; // equivalent delay spread [s]
    double order = 0.0;         // G = tau'_max / t_r
};
DiversityBandwidth diversity_bandwidth(const HfmcParams& params, double tau_max);

struct LeakageRanges {
    int q_neg = 0;
    int q_pos = 0;
};
LeakageRanges leakage_ranges(const HfmcParams& params, double tau_max, int q_extra);

// Full parameter set at a given (eps, T0) with K at its upper bound. num_tx < 0 means use the
// capacity. Throws FeasibilityError when no subcarrier fits.
HfmcParams design_at(const SystemConfig& cfg, double eps, double t0_ref, int num_tx = -1);

// Two-phase greedy search: eps on the step lattice with T0 at its upper bound until the capacity
// reaches M_s, then T0/T upward from its lower bound until it does again. Returned num_tx = M_s;
// capacity holds the attained ceiling. Throws FeasibilityError if either loop exhausts its range.
HfmcParams select_parameters(const SystemConfig& cfg);

// Second phase only, at a fixed eps (T0/T capped at its upper bound). Used by eps sweeps.
HfmcParams design_at_epsilon(const SystemConfig& cfg, double eps);

struct TradeoffPoint {
    double ct0 = 0.0;
    double quotient = 0.0; // real-valued M before the ceiling
    int capacity = 0;
    double order = 0.0;    // G
};
// Evaluates (M, G) at each T0/T with K at its upper bound.
std::vector<TradeoffPoint> tradeoff_sweep(const SystemConfig& cfg, double eps,
                                          const std::vector<double>& ct0_values);
// num_points values evenly spaced strictly inside (ct0_min, ct0_max).
std::vector<double> ct0_grid(const SystemConfig& cfg, double eps, int num_points);

// f(lambda) = (c lambda^2 + d lambda + e) / (lambda (lambda + 1)).
struct RationalForm {
    double c = 0.0, d = 0.0, e = 0.0;

    [[nodiscard]] double operator()(double lambda) const {
        return (c * lambda * lambda + d * lambda + e) / (lambda * (lambda + 1.0));
    }
    // Sufficient conditions for monotonicity on (0, inf).
    [[nodiscard]] bool proves_increasing() const { return c > d && e < 0.0; }
    [[nodiscard]] bool proves_decreasing() const { return c < d && e > 0.0; }
};
// Subcarrier quotient as a function of lambda = T0/T (K at its upper bound).
RationalForm capacity_form(const SystemConfig& cfg, double eps);
// G / ((f_c - B/2) T) as a function of lambda.
RationalForm bandwidth_form(const SystemConfig& cfg, double eps, double tau_max);

struct DesignCheck {
    std::string name;
    double margin = 0.0; // positive when satisfied
    bool ok = false;
};
struct DesignAudit {
    std::vector<DesignCheck> checks;
    [[nodiscard]] bool ok() const;
    // Names of failed checks joined by "; ".
    [[nodiscard]] std::string failures() const;
};
DesignAudit audit_design(const SystemConfig& cfg, const HfmcParams& params);

} // namespace hfmc
