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

#include "hfmc/channel.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace hfmc {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return std::mt19937_64(seq);
}

constexpr int kMaxRedraws = 100000;

} // namespace

double ChannelRealization::total_power() const {
    double s = 0.0;
    for (const auto& p : paths) s += std::norm(p.gain);
    return s;
}

double ChannelRealization::max_delay() const {
    double m = 0.0;
    for (const auto& p : paths) m = std::max(m, p.delay);
    return m;
}

double ChannelRealization::max_abs_scaling() const {
    double m = 0.0;
    for (const auto& p : paths) m = std::max(m, std::abs(p.scaling));
    return m;
}

void ChannelStats::validate() const {
    if (num_paths < 1) throw DomainError("num_paths must be >= 1");
    if (!(mean_interarrival > 0.0)) throw DomainError("mean_interarrival must be positive");
    if (!(decay_db > 0.0)) throw DomainError("decay_db must be positive");
    if (!(guard > 0.0)) throw DomainError("guard must be positive");
    if (!(a_max >= 0.0)) throw DomainError("a_max must be non-negative");
}

double power_profile(const ChannelStats& stats, double tau) {
    return std::pow(10.0, -stats.decay_db / 10.0 * tau / stats.guard);
}

ChannelRealization draw_realization(const ChannelStats& stats, std::uint64_t seed) {
    stats.validate();
    auto eng = make_engine(seed);
    std::exponential_distribution<double> gap(1.0 / stats.mean_interarrival);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> angle(-kPi, kPi);

    const auto P = static_cast<std::size_t>(stats.num_paths);
    std::vector<double> delays(P, 0.0);
    bool fits = false;
    for (int attempt = 0; attempt < kMaxRedraws && !fits; ++attempt) {
        for (std::size_t i = 1; i < P; ++i) delays[i] = delays[i - 1] + gap(eng);
        fits = delays.back() < stats.guard;
    }
    if (!fits) {
        throw FeasibilityError("channel draw: delays keep exceeding the guard window; "
                               "reduce num_paths or mean_interarrival");
    }

    ChannelRealization ch;
    ch.paths.resize(P);
    for (std::size_t i = 0; i < P; ++i) {
        const double sigma = std::sqrt(0.5 * power_profile(stats, delays[i]));
        const double re = gauss(eng), im = gauss(eng);
        ch.paths[i].gain = Complex(sigma * re, sigma * im);
        ch.paths[i].delay = delays[i];
        ch.paths[i].scaling = stats.a_max * std::cos(angle(eng));
    }
    const double norm = std::sqrt(ch.total_power());
    for (auto& p : ch.paths) p.gain /= norm;
    return ch;
}

std::vector<Complex> apply_channel(const AnalyticSignal& tx, const ChannelRealization& ch,
                                   std::span<const double> t_grid) {
    const Interval sup = tx.support();
    const double tol = 1e-12 * std::max(std::abs(sup.lo), std::abs(sup.hi));
    std::vector<Complex> r(t_grid.size(), Complex{});
    std::vector<double> warped(t_grid.size());
    std::vector<Complex> vals(t_grid.size());
    for (const auto& p : ch.paths) {
        for (std::size_t k = 0; k < t_grid.size(); ++k) {
            const double w = (1.0 + p.scaling) * t_grid[k] - p.delay;
            if (!sup.contains(w, tol)) {
                std::ostringstream os;
                os << "apply_channel: warped instant " << w << " outside transmit support [" << sup.lo
                   << ", " << sup.hi << "] (tau = " << p.delay << ", a = " << p.scaling << ")";
                throw GuardViolation(os.str());
            }
            warped[k] = std::clamp(w, sup.lo, sup.hi);
        }
        tx.evaluate(warped, vals);
        for (std::size_t k = 0; k < r.size(); ++k) r[k] += p.gain * vals[k];
    }
    return r;
}

std::vector<double> sample_grid(double duration, double rate) {
    const auto n = static_cast<std::size_t>(std::llround(duration * rate));
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = static_cast<double>(k) / rate;
    return t;
}

double NoiseSpec::n0() const {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    return std::pow(10.0, -snr_db / 10.0);
}

double NoiseSpec::sample_variance() const { return n0() * sim_rate; }

void add_awgn(std::span<Complex> r, const NoiseSpec& noise, std::uint64_t seed) {
    const double var = noise.sample_variance();
    if (var == 0.0) return;
    auto eng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * var));
    for (auto& v : r) {
        const double re = gauss(eng), im = gauss(eng);
        v += Complex(re, im);
    }
}

ChannelRealization perturb_csi(const ChannelRealization& ch, double nmse, std::uint64_t seed) {
    if (!(nmse >= 0.0 && nmse < 1.0)) throw DomainError("perturb_csi: nmse must be in [0, 1)");
    ChannelRealization out = ch;
    if (nmse == 0.0 || ch.paths.empty()) return out;
    auto eng = make_engine(seed);
    const double var = nmse * ch.total_power() / static_cast<double>(ch.paths.size());
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * var));
    for (auto& p : out.paths) {
        const double re = gauss(eng), im = gauss(eng);
        p.gain += Complex(re, im);
    }
    return out;
}

void write_realization(std::ostream& os, const ChannelRealization& ch) {
    const auto old = os.precision(17);
    os << "# re(h) im(h) tau a\n";
    for (const auto& p : ch.paths) {
        os << p.gain.real() << ' ' << p.gain.imag() << ' ' << p.delay << ' ' << p.scaling << '\n';
    }
    os.precision(old);
}

ChannelRealization read_realization(std::istream& is) {
    ChannelRealization ch;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        double re = 0, im = 0, tau = 0, a = 0;
        if (!(ls >> re >> im >> tau >> a)) {
            throw std::invalid_argument("read_realization: malformed line " + std::to_string(lineno));
        }
        ch.paths.push_back({Complex(re, im), tau, a});
    }
    return ch;
}

} // namespace hfmc
