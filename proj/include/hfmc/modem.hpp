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

#include "hfmc/channel.hpp"
#include "hfmc/waveform.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hfmc {

enum class WaveformKind { hfmc, ofdm, sc, oddm };

std::string to_string(WaveformKind kind);
// Accepts "hfmc", "ofdm", "sc", "oddm". Throws std::invalid_argument otherwise.
WaveformKind parse_waveform(const std::string& name);

// A linear modulation basis: transmit functions phi_m, m in [0, M), and matched receive filters
// over rx_range() (a superset of the transmit indices).
class Basis {
public:
    virtual ~Basis() = default;

    [[nodiscard]] virtual WaveformKind kind() const = 0;
    [[nodiscard]] std::string name() const { return to_string(kind()); }
    [[nodiscard]] virtual int tx_count() const = 0;
    [[nodiscard]] virtual IndexRange rx_range() const { return {0, tx_count() - 1}; }
    [[nodiscard]] int rx_count() const { return rx_range().size(); }
    [[nodiscard]] virtual double symbol_time() const = 0;
    // Transmit support [-T_p, (1 + a_max) T].
    [[nodiscard]] virtual Interval support() const = 0;

    [[nodiscard]] virtual Complex eval(int m, double t) const = 0;
    // out[j] = eval(first + j, t). Overridden where a cheaper joint evaluation exists.
    virtual void eval_span(int first, double t, std::span<Complex> out) const;
};

class HfmcBasis final : public Basis {
public:
    explicit HfmcBasis(HfmcParams params);

    [[nodiscard]] WaveformKind kind() const override { return WaveformKind::hfmc; }
    [[nodiscard]] int tx_count() const override { return params_.num_tx; }
    [[nodiscard]] IndexRange rx_range() const override { return params_.rx_range(); }
    [[nodiscard]] double symbol_time() const override { return params_.symbol_time; }
    [[nodiscard]] Interval support() const override { return params_.transmit_support(); }
    [[nodiscard]] Complex eval(int m, double t) const override;
    void eval_span(int first, double t, std::span<Complex> out) const override;

    [[nodiscard]] const HfmcParams& params() const { return params_; }

private:
    HfmcParams params_;
    std::vector<double> amp_; // A_m over the receive range
};

// Geometry shared by the baselines.
struct BaselineGeometry {
    int num_tx = 64;
    double symbol_time = 0.1024;
    double prefix_time = 0.0256;
    double a_max = 3.43e-3;
    double carrier = 50e3;
    double bandwidth = 5e3;
};

// phi_m(t) = exp(j 2 pi (f_c - B/2 + m B/M) t) / sqrt(T); the prefix is the natural continuation,
// which is the cyclic extension when (f_c - B/2) T and B T / M are integers.
class OfdmBasis final : public Basis {
public:
    explicit OfdmBasis(BaselineGeometry g);

    [[nodiscard]] WaveformKind kind() const override { return WaveformKind::ofdm; }
    [[nodiscard]] int tx_count() const override { return g_.num_tx; }
    [[nodiscard]] double symbol_time() const override { return g_.symbol_time; }
    [[nodiscard]] Interval support() const override;
    [[nodiscard]] Complex eval(int m, double t) const override;
    void eval_span(int first, double t, std::span<Complex> out) const override;

    [[nodiscard]] double subcarrier_frequency(int m) const;
    [[nodiscard]] double spacing() const { return g_.bandwidth / g_.num_tx; }

private:
    BaselineGeometry g_;
};

// Rectangular chips of width T/M, unit energy, cyclic in baseband and carried by exp(j 2 pi f_c t).
class SingleCarrierBasis final : public Basis {
public:
    explicit SingleCarrierBasis(BaselineGeometry g);

    [[nodiscard]] WaveformKind kind() const override { return WaveformKind::sc; }
    [[nodiscard]] int tx_count() const override { return g_.num_tx; }
    [[nodiscard]] double symbol_time() const override { return g_.symbol_time; }
    [[nodiscard]] Interval support() const override;
    [[nodiscard]] Complex eval(int m, double t) const override;
    void eval_span(int first, double t, std::span<Complex> out) const override;

    // Index of the chip active at t (cyclic), and the carrier value there.
    [[nodiscard]] int chip_at(double t) const;
    [[nodiscard]] Complex carrier_at(double t) const;
    [[nodiscard]] double chip_amplitude() const;

private:
    BaselineGeometry g_;
};

// Single-carrier chips precoded by the inverse discrete Zak transform on an M_d x N_d
// delay-Doppler grid: chip l + n M_d carries N_d^{-1/2} sum_k X[l, k] exp(j 2 pi n k / N_d).
// Symbol index m = l N_d + k.
class OddmBasis final : public Basis {
public:
    OddmBasis(BaselineGeometry g, int delay_bins, int doppler_bins);

    [[nodiscard]] WaveformKind kind() const override { return WaveformKind::oddm; }
    [[nodiscard]] int tx_count() const override { return chips_.tx_count(); }
    [[nodiscard]] double symbol_time() const override { return chips_.symbol_time(); }
    [[nodiscard]] Interval support() const override { return chips_.support(); }
    [[nodiscard]] Complex eval(int m, double t) const override;
    void eval_span(int first, double t, std::span<Complex> out) const override;

    [[nodiscard]] int delay_bins() const { return md_; }
    [[nodiscard]] int doppler_bins() const { return nd_; }

private:
    SingleCarrierBasis chips_;
    int md_;
    int nd_;
};

// Default delay-Doppler factorization for M chips: M_d = round(sqrt(M)) adjusted to a divisor.
std::pair<int, int> default_oddm_grid(int num_tx);

// Gray-coded constellations with unit average energy.
class SymbolAlphabet {
public:
    explicit SymbolAlphabet(int order); // 4 or 16

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] int bits_per_symbol() const { return bits_; }
    [[nodiscard]] const std::vector<Complex>& points() const { return points_; }
    // Constellation point for the bit pattern b (first bit most significant).
    [[nodiscard]] Complex point(unsigned pattern) const { return points_[pattern]; }

private:
    int order_;
    int bits_;
    std::vector<Complex> points_;
};

SymbolAlphabet parse_alphabet(const std::string& name); // "qpsk" | "16qam"

std::vector<Complex> map_bits(std::span<const std::uint8_t> bits, const SymbolAlphabet& alphabet);
// Minimum-distance hard decisions.
std::vector<std::uint8_t> demap_symbols(std::span<const Complex> symbols, const SymbolAlphabet& alphabet);

// s(t) = sum_m x_m phi_m(t) on the basis support.
class AnalyticFrame final : public AnalyticSignal {
public:
    AnalyticFrame(const Basis& basis, std::vector<Complex> symbols);

    [[nodiscard]] Interval support() const override { return basis_->support(); }
    void evaluate(std::span<const double> t, std::span<Complex> out) const override;
    // Single-point evaluation; throws GuardViolation outside the support.
    [[nodiscard]] Complex operator()(double t) const;

    [[nodiscard]] const Basis& basis() const { return *basis_; }
    [[nodiscard]] const std::vector<Complex>& symbols() const { return x_; }

private:
    const Basis* basis_;
    std::vector<Complex> x_;
};

AnalyticFrame modulate(const Basis& basis, std::vector<Complex> symbols);

// Sampled receive filters. Phi is N_s x N with column j holding phi_{rx.first + j} at t_k = k / F_sim;
// the bank stores Phi^H (N x N_s).
class MatchedFilterBank {
public:
    MatchedFilterBank(const Basis& basis, double sim_rate);

    [[nodiscard]] const Eigen::MatrixXcd& filters_adjoint() const { return phi_h_; }
    [[nodiscard]] const std::vector<double>& grid() const { return t_; }
    [[nodiscard]] double sim_rate() const { return rate_; }
    [[nodiscard]] IndexRange rx_range() const { return rx_; }

    // y = Phi^H r / F_sim. Throws std::invalid_argument on a length mismatch.
    [[nodiscard]] Eigen::VectorXcd demodulate(std::span<const Complex> r) const;
    // Phi^H D / F_sim for a received-basis matrix D (N_s x M).
    [[nodiscard]] Eigen::MatrixXcd project(const Eigen::MatrixXcd& d) const;

private:
    std::vector<double> t_;
    double rate_;
    IndexRange rx_;
    Eigen::MatrixXcd phi_h_;
};

// Convenience wrapper building a bank on the fly.
Eigen::VectorXcd demodulate(std::span<const Complex> r, const Basis& basis, double sim_rate);

struct EquivalentChannel {
    Eigen::MatrixXcd q; // N x M, storage row j is receive index row_first + j
    int row_first = 0;
    std::string tag;    // "numerical" | "analytic" | ...

    [[nodiscard]] Complex at(int n, int m) const { return q(n - row_first, m); }
};

// Received basis D = sum_i h_i Phi_i with Phi_i[k, m] = phi_m((1 + a_i) t_k - tau_i), one matrix
// per gain set. All gain sets must share delays and scalings (e.g. true and perturbed CSI).
std::vector<Eigen::MatrixXcd> received_basis(const Basis& basis, std::span<const double> t_grid,
                                             const std::vector<ChannelRealization>& gain_sets);

// q_nm = sum_i h_i (1/F) sum_k conj(phi_n(t_k)) phi_m((1 + a_i) t_k - tau_i).
EquivalentChannel equivalent_channel_numerical(const Basis& basis, const MatchedFilterBank& bank,
                                               const ChannelRealization& ch);

enum class AnalyticForm {
    exact,      // closed form of the single-path integral
    sinc,       // sinc with exact denominators
    approx      // large-T0 sinc on the equivalent delay
};

// Single-path coefficient q^i_nm for a path (tau, a), gain excluded.
Complex path_coefficient(const HfmcParams& params, int n, int m, double delay, double scaling,
                         AnalyticForm form = AnalyticForm::exact);

EquivalentChannel equivalent_channel_analytic(const HfmcParams& params, const ChannelRealization& ch,
                                              AnalyticForm form = AnalyticForm::exact);

// Row offset n - m on which a path's energy concentrates: (tau + a T0) / t_r.
double equivalent_delay_taps(const HfmcParams& params, double delay, double scaling);

struct BandOccupancy {
    int center = 0;    // dominant index offset n - m (storage offset + row_first)
    int halfwidth = 0; // smallest halfwidth capturing the energy fraction
    double fraction = 0.0;
};
BandOccupancy band_occupancy(const EquivalentChannel& h, double energy_fraction = 0.999);

// CSV (n, m, re, im) and dB grid (n, m, db) exports.
void write_channel_csv(std::ostream& os, const EquivalentChannel& h);
void write_channel_db_csv(std::ostream& os, const EquivalentChannel& h, double floor_db = -100.0);

} // namespace hfmc
