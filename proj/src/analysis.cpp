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

#include "hfmc/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>

namespace hfmc {

namespace {

// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// In-place forward FFT of a complex vector.
void fft_inplace(std::vector<Complex>& data) {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
}

} // namespace

Interval subcarrier_span(const HfmcParams& p, int m) {
    const double tm = p.delay(m);
    return {p.fm_rate / (p.t0_ref + (1.0 + p.a_max) * p.symbol_time - tm),
            p.fm_rate / (p.t0_ref - p.prefix_time - tm)};
}

SpectrumEstimate spectrum_stationary_phase(const HfmcParams& p, int m, const std::vector<double>& freq,
                                           double min_ratio) {
    SpectrumEstimate s;
    s.method = "stationary_phase";
    s.freq = freq;
    s.valid = stationary_phase_valid(p.signal(), p.symbol_time, min_ratio);
    const Interval span = subcarrier_span(p, m);
    const double K = p.fm_rate, T0 = p.t0_ref, tm = p.delay(m);
    const double mag = subcarrier_amplitude(p, m) * T0 / std::sqrt(K);
    s.value.reserve(freq.size());
    for (double f : freq) {
        if (f < span.lo || f > span.hi) {
            s.value.emplace_back();
            continue;
        }
        const double theta = K * std::log(K / (f * T0)) - K - f * (tm - T0);
        s.value.push_back(std::polar(mag, kTwoPi * theta - 0.25 * kPi));
    }
    return s;
}

SpectrumEstimate spectrum_dft(const HfmcParams& p, int m, double sim_rate, double resolution) {
    const Interval sup = p.transmit_support();
    const auto n = static_cast<std::size_t>(std::floor(sup.length() * sim_rate)) + 1;
    std::size_t L = 1;
    while (L < n || sim_rate / static_cast<double>(L) > resolution) L <<= 1;
    std::vector<Complex> buf(L, Complex{});
    for (std::size_t k = 0; k < n; ++k) buf[k] = subcarrier_eval(p, m, sup.lo + static_cast<double>(k) / sim_rate);
    fft_inplace(buf);
    SpectrumEstimate s;
    s.method = "dft";
    s.freq.resize(L);
    s.value.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        const double f = static_cast<double>(l) * sim_rate / static_cast<double>(L);
        s.freq[l] = f;
        // shift the time origin from sup.lo back to 0
        s.value[l] = buf[l] / sim_rate * std::polar(1.0, -kTwoPi * f * sup.lo);
    }
    return s;
}

Confinement measure_confinement(const HfmcParams& p, int m, double sim_rate, double resolution, double guard,
                                double edge_margin) {
    const SpectrumEstimate s = spectrum_dft(p, m, sim_rate, resolution);
    const Interval span = subcarrier_span(p, m);
    const double W = span.length();
    const double ref = subcarrier_amplitude(p, m) * p.t0_ref / std::sqrt(p.fm_rate);
    const double df = s.freq.size() > 1 ? s.freq[1] - s.freq[0] : 1.0;

    double total = 0.0, outside = 0.0, ratio_sum = 0.0;
    double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
    std::size_t count = 0;
    for (std::size_t l = 0; l < s.freq.size(); ++l) {
        const double f = s.freq[l];
        const double e = std::norm(s.value[l]);
        total += e;
        if (f < span.lo - guard * W || f > span.hi + guard * W) outside += e;
        if (f >= span.lo + edge_margin * W && f <= span.hi - edge_margin * W) {
            const double r = std::abs(s.value[l]) / ref;
            const double db = 20.0 * std::log10(r);
            rmin = std::min(rmin, db);
            rmax = std::max(rmax, db);
            ratio_sum += r;
            ++count;
        }
    }
    // time-domain energy on the same sample set
    const Interval sup = p.transmit_support();
    const auto n = static_cast<std::size_t>(std::floor(sup.length() * sim_rate)) + 1;
    double et = 0.0;
    for (std::size_t k = 0; k < n; ++k) et += std::norm(subcarrier_eval(p, m, sup.lo + static_cast<double>(k) / sim_rate));
    et /= sim_rate;

    Confinement c;
    c.out_of_band_fraction = total > 0.0 ? outside / total : 0.0;
    c.ripple_min_db = rmin;
    c.ripple_max_db = rmax;
    c.mean_ratio = count ? ratio_sum / static_cast<double>(count) : 0.0;
    c.parseval_error = std::abs(total * df - et) / et;
    return c;
}

Eigen::MatrixXcd gram_closed_form(const HfmcParams& p, IndexRange range) {
    const int n = range.size();
    Eigen::MatrixXcd g(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) g(i, j) = correlation_closed_form(p, range.first + i, range.first + j);
    }
    return g;
}

Eigen::MatrixXcd gram_quadrature(const HfmcParams& p, IndexRange range, double rate) {
    const auto ns = static_cast<Eigen::Index>(std::llround(p.symbol_time * rate));
    const int n = range.size();
    // Trapezoid weights on k = 0..ns, sqrt-split so the Gram is a plain product.
    Eigen::MatrixXcd phi(ns + 1, n);
    for (Eigen::Index k = 0; k <= ns; ++k) {
        const double t = static_cast<double>(k) / rate;
        const double w = std::sqrt(((k == 0 || k == ns) ? 0.5 : 1.0) / rate);
        for (int j = 0; j < n; ++j) phi(k, j) = w * subcarrier_eval(p, range.first + j, t);
    }
    return phi.adjoint() * phi;
}

Eigen::MatrixXd gram_matrix_db(const Eigen::MatrixXcd& g, double floor_db) {
    Eigen::MatrixXd out(g.rows(), g.cols());
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            const double v = std::norm(g(i, j));
            out(i, j) = v > 0.0 ? std::max(to_db(v), floor_db) : floor_db;
        }
    }
    return out;
}

namespace {

void diag_off_power(const Eigen::MatrixXcd& g, double& diag, double& off) {
    diag = 0.0;
    off = 0.0;
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) (i == j ? diag : off) += std::norm(g(i, j));
    }
}

} // namespace

double sir_db(const Eigen::MatrixXcd& g) {
    double d, o;
    diag_off_power(g, d, o);
    const auto n = static_cast<double>(g.rows());
    return to_db((d / n) / (o / (n * (n - 1.0))));
}

double aggregate_sir_db(const Eigen::MatrixXcd& g) {
    double d, o;
    diag_off_power(g, d, o);
    return to_db(d / o);
}

double sir_db(const HfmcParams& p) { return sir_db(gram_closed_form(p, p.tx_range())); }
double aggregate_sir_db(const HfmcParams& p) { return aggregate_sir_db(gram_closed_form(p, p.tx_range())); }

double approx_mse_correlation_db(const HfmcParams& p) {
    double acc = 0.0;
    for (int m = 0; m < p.num_tx; ++m) {
        for (int n = 0; n < p.num_tx; ++n) {
            acc += std::norm(correlation_approx_unchecked(p, n, m) - correlation_closed_form(p, n, m));
        }
    }
    return to_db(acc / (static_cast<double>(p.num_tx) * p.num_tx));
}

double approx_mse_channel_db(const HfmcParams& p, const std::vector<ChannelRealization>& channels) {
    const IndexRange rx = p.rx_range();
    double acc = 0.0;
    double count = 0.0;
    for (const auto& ch : channels) {
        for (const auto& path : ch.paths) {
            for (int m = 0; m < p.num_tx; ++m) {
                for (int n = rx.first; n <= rx.last; ++n) {
                    const Complex a = path_coefficient(p, n, m, path.delay, path.scaling, AnalyticForm::approx);
                    const Complex e = path_coefficient(p, n, m, path.delay, path.scaling, AnalyticForm::exact);
                    acc += std::norm(a - e);
                }
            }
            count += static_cast<double>(rx.size()) * p.num_tx;
        }
    }
    return to_db(acc / count);
}

double matrix_mse_db(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return to_db((a - b).squaredNorm() / static_cast<double>(a.size()));
}

void write_spectrum_csv(std::ostream& os, const SpectrumEstimate& s, double f_lo, double f_hi) {
    os << "f_hz,mag_db\n" << std::fixed;
    for (std::size_t l = 0; l < s.freq.size(); ++l) {
        if (s.freq[l] < f_lo || s.freq[l] > f_hi) continue;
        const double v = std::norm(s.value[l]);
        os << std::setprecision(3) << s.freq[l] << ',' << std::setprecision(4) << (v > 0.0 ? std::max(to_db(v), -200.0) : -200.0)
           << '\n';
    }
    os << std::defaultfloat;
}

void write_gram_csv(std::ostream& os, const Eigen::MatrixXd& db, int first_index) {
    os << "n,m,db\n" << std::fixed << std::setprecision(4);
    for (Eigen::Index j = 0; j < db.cols(); ++j) {
        for (Eigen::Index i = 0; i < db.rows(); ++i) {
            os << (i + first_index) << ',' << (j + first_index) << ',' << db(i, j) << '\n';
        }
    }
    os << std::defaultfloat;
}

} // namespace hfmc
