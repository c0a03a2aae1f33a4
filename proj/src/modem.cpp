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

#include "hfmc/modem.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hfmc {

std::string to_string(WaveformKind kind) {
    switch (kind) {
    case WaveformKind::hfmc: return "hfmc";
    case WaveformKind::ofdm: return "ofdm";
    case WaveformKind::sc: return "sc";
    case WaveformKind::oddm: return "oddm";
    }
    return "?";
}

WaveformKind parse_waveform(const std::string& name) {
    if (name == "hfmc") return WaveformKind::hfmc;
    if (name == "ofdm") return WaveformKind::ofdm;
    if (name == "sc") return WaveformKind::sc;
    if (name == "oddm") return WaveformKind::oddm;
    throw std::invalid_argument("unknown waveform '" + name + "' (expected hfmc|ofdm|sc|oddm)");
}

void Basis::eval_span(int first, double t, std::span<Complex> out) const {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = eval(first + static_cast<int>(j), t);
}

// ---- HFMC -------------------------------------------------------------------

HfmcBasis::HfmcBasis(HfmcParams params) : params_(std::move(params)) {
    const IndexRange rx = params_.rx_range();
    amp_.reserve(static_cast<std::size_t>(rx.size()));
    for (int m = rx.first; m <= rx.last; ++m) amp_.push_back(subcarrier_amplitude(params_, m));
}

Complex HfmcBasis::eval(int m, double t) const { return subcarrier_eval(params_, m, t); }

void HfmcBasis::eval_span(int first, double t, std::span<Complex> out) const {
    const IndexRange rx = params_.rx_range();
    const double T0 = params_.t0_ref;
    const double w = kTwoPi * params_.fm_rate;
    for (std::size_t j = 0; j < out.size(); ++j) {
        const int m = first + static_cast<int>(j);
        const double x = 1.0 + (t - params_.delay(m)) / T0;
        if (!(x > 0.0)) throw DomainError("HFMC subcarrier evaluated where 1 + (t - t_m)/T0 <= 0");
        const double amp = rx.contains(m) ? amp_[static_cast<std::size_t>(m - rx.first)]
                                          : subcarrier_amplitude(params_, m);
        out[j] = std::polar(amp / x, w * std::log(x));
    }
}

// ---- OFDM -------------------------------------------------------------------

OfdmBasis::OfdmBasis(BaselineGeometry g) : g_(g) {
    if (g_.num_tx < 1) throw std::invalid_argument("OfdmBasis: num_tx must be >= 1");
}

Interval OfdmBasis::support() const { return {-g_.prefix_time, (1.0 + g_.a_max) * g_.symbol_time}; }

double OfdmBasis::subcarrier_frequency(int m) const {
    return g_.carrier - 0.5 * g_.bandwidth + m * spacing();
}

Complex OfdmBasis::eval(int m, double t) const {
    return std::polar(1.0 / std::sqrt(g_.symbol_time), kTwoPi * subcarrier_frequency(m) * t);
}

void OfdmBasis::eval_span(int first, double t, std::span<Complex> out) const {
    // Phase recurrence across subcarriers, re-anchored every 32 steps to bound round-off.
    const Complex step = std::polar(1.0, kTwoPi * spacing() * t);
    Complex v;
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (j % 32 == 0) {
            v = eval(first + static_cast<int>(j), t);
        } else {
            v *= step;
        }
        out[j] = v;
    }
}

// ---- single carrier ----------------------------------------------------------

SingleCarrierBasis::SingleCarrierBasis(BaselineGeometry g) : g_(g) {
    if (g_.num_tx < 1) throw std::invalid_argument("SingleCarrierBasis: num_tx must be >= 1");
}

Interval SingleCarrierBasis::support() const {
    return {-g_.prefix_time, (1.0 + g_.a_max) * g_.symbol_time};
}

int SingleCarrierBasis::chip_at(double t) const {
    const double T = g_.symbol_time;
    double u = std::fmod(t, T);
    if (u < 0.0) u += T;
    // Small bias so sample instants that land on a chip boundary (up to round-off) fall in the
    // chip that starts there.
    const int c = static_cast<int>(std::floor(u / T * g_.num_tx + 1e-9));
    return c % g_.num_tx;
}

Complex SingleCarrierBasis::carrier_at(double t) const { return std::polar(1.0, kTwoPi * g_.carrier * t); }

double SingleCarrierBasis::chip_amplitude() const { return std::sqrt(g_.num_tx / g_.symbol_time); }

Complex SingleCarrierBasis::eval(int m, double t) const {
    if (chip_at(t) != m) return {};
    return chip_amplitude() * carrier_at(t);
}

void SingleCarrierBasis::eval_span(int first, double t, std::span<Complex> out) const {
    std::fill(out.begin(), out.end(), Complex{});
    const int c = chip_at(t) - first;
    if (c >= 0 && c < static_cast<int>(out.size())) out[static_cast<std::size_t>(c)] = chip_amplitude() * carrier_at(t);
}

// ---- ODDM --------------------------------------------------------------------

OddmBasis::OddmBasis(BaselineGeometry g, int delay_bins, int doppler_bins)
    : chips_(g), md_(delay_bins), nd_(doppler_bins) {
    if (md_ < 1 || nd_ < 1 || md_ * nd_ != g.num_tx) {
        throw std::invalid_argument("OddmBasis: delay_bins * doppler_bins must equal num_tx");
    }
}

Complex OddmBasis::eval(int m, double t) const {
    const int l = m / nd_, k = m % nd_;
    const int c = chips_.chip_at(t);
    if (c % md_ != l) return {};
    const int n = c / md_;
    const Complex base = chips_.chip_amplitude() / std::sqrt(static_cast<double>(nd_)) * chips_.carrier_at(t);
    return base * std::polar(1.0, kTwoPi * n * k / nd_);
}

void OddmBasis::eval_span(int first, double t, std::span<Complex> out) const {
    std::fill(out.begin(), out.end(), Complex{});
    const int c = chips_.chip_at(t);
    const int l = c % md_, n = c / md_;
    const Complex base = chips_.chip_amplitude() / std::sqrt(static_cast<double>(nd_)) * chips_.carrier_at(t);
    for (int k = 0; k < nd_; ++k) {
        const int j = l * nd_ + k - first;
        if (j >= 0 && j < static_cast<int>(out.size())) {
            out[static_cast<std::size_t>(j)] = base * std::polar(1.0, kTwoPi * ((n * k) % nd_) / nd_);
        }
    }
}

std::pair<int, int> default_oddm_grid(int num_tx) {
    int md = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_tx))));
    md = std::max(md, 1);
    while (num_tx % md != 0) --md;
    return {md, num_tx / md};
}

// ---- alphabets -----------------------------------------------------------------

SymbolAlphabet::SymbolAlphabet(int order) : order_(order) {
    if (order == 4) {
        bits_ = 2;
        const double s = 1.0 / std::sqrt(2.0);
        for (unsigned p = 0; p < 4; ++p) {
            const double i = 1.0 - 2.0 * ((p >> 1) & 1u);
            const double q = 1.0 - 2.0 * (p & 1u);
            points_.emplace_back(s * i, s * q);
        }
    } else if (order == 16) {
        bits_ = 4;
        const double s = 1.0 / std::sqrt(10.0);
        // Per axis: sign bit then magnitude bit (0 -> 3, 1 -> 1), giving Gray order 3, 1, -1, -3.
        auto level = [](unsigned hi, unsigned lo) { return (1.0 - 2.0 * hi) * (lo ? 1.0 : 3.0); };
        for (unsigned p = 0; p < 16; ++p) {
            const double i = level((p >> 3) & 1u, (p >> 2) & 1u);
            const double q = level((p >> 1) & 1u, p & 1u);
            points_.emplace_back(s * i, s * q);
        }
    } else {
        throw std::invalid_argument("SymbolAlphabet: order must be 4 or 16");
    }
}

SymbolAlphabet parse_alphabet(const std::string& name) {
    if (name == "qpsk" || name == "QPSK" || name == "4") return SymbolAlphabet(4);
    if (name == "16qam" || name == "16QAM" || name == "16") return SymbolAlphabet(16);
    throw std::invalid_argument("unknown alphabet '" + name + "' (expected qpsk|16qam)");
}

std::vector<Complex> map_bits(std::span<const std::uint8_t> bits, const SymbolAlphabet& alphabet) {
    const auto b = static_cast<std::size_t>(alphabet.bits_per_symbol());
    if (bits.size() % b != 0) throw std::invalid_argument("map_bits: bit count not a multiple of bits/symbol");
    std::vector<Complex> out;
    out.reserve(bits.size() / b);
    for (std::size_t i = 0; i < bits.size(); i += b) {
        unsigned p = 0;
        for (std::size_t j = 0; j < b; ++j) p = (p << 1) | (bits[i + j] & 1u);
        out.push_back(alphabet.point(p));
    }
    return out;
}

std::vector<std::uint8_t> demap_symbols(std::span<const Complex> symbols, const SymbolAlphabet& alphabet) {
    const int b = alphabet.bits_per_symbol();
    std::vector<std::uint8_t> out;
    out.reserve(symbols.size() * static_cast<std::size_t>(b));
    const auto& pts = alphabet.points();
    for (const Complex& s : symbols) {
        unsigned best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (unsigned p = 0; p < pts.size(); ++p) {
            const double d = std::norm(s - pts[p]);
            if (d < bd) {
                bd = d;
                best = p;
            }
        }
        for (int j = b - 1; j >= 0; --j) out.push_back(static_cast<std::uint8_t>((best >> j) & 1u));
    }
    return out;
}

// ---- frames ------------------------------------------------------------------

AnalyticFrame::AnalyticFrame(const Basis& basis, std::vector<Complex> symbols)
    : basis_(&basis), x_(std::move(symbols)) {
    if (static_cast<int>(x_.size()) != basis.tx_count()) {
        throw std::invalid_argument("AnalyticFrame: symbol count differs from basis tx_count");
    }
}

void AnalyticFrame::evaluate(std::span<const double> t, std::span<Complex> out) const {
    std::vector<Complex> row(x_.size());
    const Interval sup = support();
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (!sup.contains(t[k], 1e-12 * std::max(std::abs(sup.lo), std::abs(sup.hi)))) {
            std::ostringstream os;
            os << "AnalyticFrame: t = " << t[k] << " outside support [" << sup.lo << ", " << sup.hi << "]";
            throw GuardViolation(os.str());
        }
        basis_->eval_span(0, t[k], row);
        Complex acc{};
        for (std::size_t m = 0; m < row.size(); ++m) acc += x_[m] * row[m];
        out[k] = acc;
    }
}

Complex AnalyticFrame::operator()(double t) const {
    Complex v;
    evaluate(std::span<const double>(&t, 1), std::span<Complex>(&v, 1));
    return v;
}

AnalyticFrame modulate(const Basis& basis, std::vector<Complex> symbols) {
    return AnalyticFrame(basis, std::move(symbols));
}

// ---- matched filtering -------------------------------------------------------

MatchedFilterBank::MatchedFilterBank(const Basis& basis, double sim_rate)
    : t_(sample_grid(basis.symbol_time(), sim_rate)), rate_(sim_rate), rx_(basis.rx_range()) {
    const auto ns = static_cast<Eigen::Index>(t_.size());
    phi_h_.resize(rx_.size(), ns);
    std::vector<Complex> row(static_cast<std::size_t>(rx_.size()));
    for (Eigen::Index k = 0; k < ns; ++k) {
        basis.eval_span(rx_.first, t_[static_cast<std::size_t>(k)], row);
        for (int j = 0; j < rx_.size(); ++j) phi_h_(j, k) = std::conj(row[static_cast<std::size_t>(j)]);
    }
}

Eigen::VectorXcd MatchedFilterBank::demodulate(std::span<const Complex> r) const {
    if (static_cast<Eigen::Index>(r.size()) != phi_h_.cols()) {
        throw std::invalid_argument("demodulate: received length differs from the sample grid");
    }
    const Eigen::Map<const Eigen::VectorXcd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
    return (phi_h_ * rv) / rate_;
}

Eigen::MatrixXcd MatchedFilterBank::project(const Eigen::MatrixXcd& d) const {
    if (d.rows() != phi_h_.cols()) throw std::invalid_argument("project: row count differs from the sample grid");
    return (phi_h_ * d) / rate_;
}

Eigen::VectorXcd demodulate(std::span<const Complex> r, const Basis& basis, double sim_rate) {
    return MatchedFilterBank(basis, sim_rate).demodulate(r);
}

// ---- equivalent channels -------------------------------------------------------

std::vector<Eigen::MatrixXcd> received_basis(const Basis& basis, std::span<const double> t_grid,
                                             const std::vector<ChannelRealization>& gain_sets) {
    if (gain_sets.empty()) return {};
    const auto& ref = gain_sets.front().paths;
    for (const auto& g : gain_sets) {
        if (g.paths.size() != ref.size()) throw std::invalid_argument("received_basis: path count mismatch");
        for (std::size_t i = 0; i < ref.size(); ++i) {
            if (g.paths[i].delay != ref[i].delay || g.paths[i].scaling != ref[i].scaling) {
                throw std::invalid_argument("received_basis: gain sets must share delays and scalings");
            }
        }
    }
    const int M = basis.tx_count();
    const auto ns = static_cast<Eigen::Index>(t_grid.size());
    // Accumulate transposed (M x N_s) so each sample instant writes a contiguous column.
    std::vector<Eigen::MatrixXcd> dt(gain_sets.size(), Eigen::MatrixXcd::Zero(M, ns));
    const Interval sup = basis.support();
    const double tol = 1e-12 * std::max(std::abs(sup.lo), std::abs(sup.hi));
    std::vector<Complex> row(static_cast<std::size_t>(M));
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double a = ref[i].scaling, tau = ref[i].delay;
        for (Eigen::Index k = 0; k < ns; ++k) {
            const double w = (1.0 + a) * t_grid[static_cast<std::size_t>(k)] - tau;
            if (!sup.contains(w, tol)) {
                std::ostringstream os;
                os << "received_basis: warped instant " << w << " outside transmit support";
                throw GuardViolation(os.str());
            }
            basis.eval_span(0, std::clamp(w, sup.lo, sup.hi), row);
            const Eigen::Map<const Eigen::VectorXcd> rv(row.data(), M);
            for (std::size_t g = 0; g < gain_sets.size(); ++g) {
                dt[g].col(k) += gain_sets[g].paths[i].gain * rv;
            }
        }
    }
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(dt.size());
    for (auto& m : dt) out.emplace_back(m.transpose());
    return out;
}

EquivalentChannel equivalent_channel_numerical(const Basis& basis, const MatchedFilterBank& bank,
                                               const ChannelRealization& ch) {
    const auto d = received_basis(basis, bank.grid(), {ch});
    return {bank.project(d.front()), bank.rx_range().first, "numerical"};
}

double equivalent_delay_taps(const HfmcParams& p, double delay, double scaling) {
    return (delay + scaling * p.t0_ref) / p.delay_res;
}

Complex path_coefficient(const HfmcParams& p, int n, int m, double tau, double a, AnalyticForm form) {
    const double T0 = p.t0_ref, T = p.symbol_time, K = p.fm_rate;
    const double tn = p.delay(n), tm = p.delay(m);
    const double amp = subcarrier_amplitude(p, m) * subcarrier_amplitude(p, n) * T0 * T0 * T;
    switch (form) {
    case AnalyticForm::exact: {
        // Scaling absorbed into a gain and a subcarrier-dependent delay t'.
        const double tp = (tau + tm + a * T0) / (1.0 + a);
        const double denom = (T0 + T - tn) * (T0 - tp);
        const double z = T * (tp - tn) / denom;
        const double eta = std::log((T0 - tp) * (T0 + T - tp) / ((T0 - tn) * (T0 + T - tn)));
        const double ratio = (z == 0.0) ? 1.0 : std::sin(kPi * K * std::log1p(z)) / (kPi * K * z);
        const double phase = kPi * K * eta + kTwoPi * K * std::log1p(a);
        return std::polar(amp / denom * ratio / (1.0 + a), phase);
    }
    case AnalyticForm::sinc: {
        const double D = (T0 + T - tn) * (T0 - tm - tau);
        const double theta = std::log((T0 - tm - tau) * (T0 + (1.0 + a) * T - tm - tau) /
                                      ((T0 - tn) * (T0 + T - tn)));
        const double s = sinc(K * T * ((1.0 + a) * tn - tm - (tau + a * T0)) / D);
        return std::polar(amp / D * s, kPi * K * theta);
    }
    case AnalyticForm::approx: {
        const double theta = std::log((T0 - tm - tau) * (T0 + (1.0 + a) * T - tm - tau) /
                                      ((T0 - tn) * (T0 + T - tn)));
        const double s = sinc(K * T * (tn - tm - (tau + a * T0)) / ((T0 + T) * T0));
        return std::polar(s, kPi * K * theta);
    }
    }
    return {};
}

EquivalentChannel equivalent_channel_analytic(const HfmcParams& p, const ChannelRealization& ch,
                                              AnalyticForm form) {
    const IndexRange rx = p.rx_range();
    const double T0 = p.t0_ref;
    for (const auto& path : ch.paths) {
        if (!(path.delay + p.delay(p.num_tx - 1) < T0) || !(p.delay(rx.last) < T0)) {
            throw FeasibilityError("equivalent_channel_analytic: delays not small against T0");
        }
    }
    EquivalentChannel h;
    h.q = Eigen::MatrixXcd::Zero(rx.size(), p.num_tx);
    h.row_first = rx.first;
    h.tag = form == AnalyticForm::exact ? "analytic" : (form == AnalyticForm::sinc ? "analytic-sinc" : "analytic-approx");
    for (int m = 0; m < p.num_tx; ++m) {
        for (int n = rx.first; n <= rx.last; ++n) {
            Complex acc{};
            for (const auto& path : ch.paths) acc += path.gain * path_coefficient(p, n, m, path.delay, path.scaling, form);
            h.q(n - rx.first, m) = acc;
        }
    }
    return h;
}

BandOccupancy band_occupancy(const EquivalentChannel& h, double energy_fraction) {
    const auto N = static_cast<int>(h.q.rows()), M = static_cast<int>(h.q.cols());
    // offset d = row - col in [-(M-1), N-1]
    std::vector<double> e(static_cast<std::size_t>(N + M - 1), 0.0);
    double total = 0.0;
    for (int m = 0; m < M; ++m) {
        for (int j = 0; j < N; ++j) {
            const double v = std::norm(h.q(j, m));
            e[static_cast<std::size_t>(j - m + M - 1)] += v;
            total += v;
        }
    }
    BandOccupancy b;
    if (total == 0.0) return b;
    const auto peak = std::max_element(e.begin(), e.end()) - e.begin();
    b.center = static_cast<int>(peak) - (M - 1) + h.row_first;
    double acc = e[static_cast<std::size_t>(peak)];
    int w = 0;
    const int maxw = N + M;
    while (acc < energy_fraction * total && w < maxw) {
        ++w;
        const long lo = peak - w, hi = peak + w;
        if (lo >= 0) acc += e[static_cast<std::size_t>(lo)];
        if (hi < static_cast<long>(e.size())) acc += e[static_cast<std::size_t>(hi)];
    }
    b.halfwidth = w;
    b.fraction = acc / total;
    return b;
}

void write_channel_csv(std::ostream& os, const EquivalentChannel& h) {
    os << "n,m,re,im\n" << std::setprecision(10) << std::scientific;
    for (Eigen::Index m = 0; m < h.q.cols(); ++m) {
        for (Eigen::Index j = 0; j < h.q.rows(); ++j) {
            os << (j + h.row_first) << ',' << m << ',' << h.q(j, m).real() << ',' << h.q(j, m).imag() << '\n';
        }
    }
    os << std::defaultfloat;
}

void write_channel_db_csv(std::ostream& os, const EquivalentChannel& h, double floor_db) {
    os << "n,m,db\n" << std::fixed << std::setprecision(4);
    for (Eigen::Index m = 0; m < h.q.cols(); ++m) {
        for (Eigen::Index j = 0; j < h.q.rows(); ++j) {
            const double p = std::norm(h.q(j, m));
            const double db = p > 0.0 ? std::max(to_db(p), floor_db) : floor_db;
            os << (j + h.row_first) << ',' << m << ',' << db << '\n';
        }
    }
    os << std::defaultfloat;
}

} // namespace hfmc
