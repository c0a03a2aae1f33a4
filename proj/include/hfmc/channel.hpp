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

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace hfmc {

// One propagation path: r(t) += gain * s((1 + scaling) t - delay).
struct Path {
    Complex gain{1.0, 0.0};
    double delay = 0.0;   // tau_i [s]
    double scaling = 0.0; // a_i
};

struct ChannelRealization {
    std::vector<Path> paths;

    [[nodiscard]] double total_power() const;
    [[nodiscard]] double max_delay() const;
    [[nodiscard]] double max_abs_scaling() const;
};

struct ChannelStats {
    int num_paths = 15;
    double mean_interarrival = 1e-3; // [s]
    double decay_db = 20.0;          // power decay across the guard window
    double guard = 0.0256;           // all delays stay below this [s]
    double a_max = 3.43e-3;

    void validate() const;
};

// Draws a realization: tau_1 = 0 with exponential inter-arrivals (the whole draw is redrawn if
// any delay reaches the guard), Rayleigh gains with an exponential power-delay profile, uniform
// phases, a_i = a_max cos(theta_i) with theta_i ~ U(-pi, pi). Gains are normalized so that
// sum |h_i|^2 = 1 exactly.
ChannelRealization draw_realization(const ChannelStats& stats, std::uint64_t seed);

// Expected path power at delay tau relative to tau = 0.
double power_profile(const ChannelStats& stats, double tau);

// Anything that can be evaluated exactly at arbitrary instants inside its support.
class AnalyticSignal {
public:
    virtual ~AnalyticSignal() = default;
    [[nodiscard]] virtual Interval support() const = 0;
    // out[k] = s(t[k]). Implementations may assume every t[k] lies inside support().
    virtual void evaluate(std::span<const double> t, std::span<Complex> out) const = 0;
};

// r[k] = sum_i h_i s((1 + a_i) t_k - tau_i). Throws GuardViolation if any warped instant leaves
// the signal's support.
std::vector<Complex> apply_channel(const AnalyticSignal& tx, const ChannelRealization& ch,
                                   std::span<const double> t_grid);

// Sample instants k / rate for k in [0, round(duration * rate)).
std::vector<double> sample_grid(double duration, double rate);

struct NoiseSpec {
    double snr_db = std::numeric_limits<double>::infinity();
    double sim_rate = 0.0; // F_sim [Hz]

    [[nodiscard]] double n0() const;              // 10^(-snr/10), 0 at infinite SNR
    [[nodiscard]] double sample_variance() const; // N0 * F_sim
};

// Adds circular complex Gaussian noise in place. Infinite SNR leaves r untouched.
void add_awgn(std::span<Complex> r, const NoiseSpec& noise, std::uint64_t seed);

// Replaces each gain by h_i + e_i with e_i ~ CN(0, nmse * sum|h|^2 / P). Delays and scalings are
// copied unchanged. Throws DomainError unless 0 <= nmse < 1.
ChannelRealization perturb_csi(const ChannelRealization& ch, double nmse, std::uint64_t seed);

// Plain-text form: one path per line "re(h) im(h) tau a"; '#' starts a comment line.
void write_realization(std::ostream& os, const ChannelRealization& ch);
ChannelRealization read_realization(std::istream& is);

} // namespace hfmc
