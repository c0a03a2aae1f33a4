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
#include "hfmc/modem.hpp"
#include "hfmc/waveform.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace hfmc {

struct SpectrumEstimate {
    std::vector<double> freq;    // [Hz]
    std::vector<Complex> value;  // psi(f) [s]
    std::string method;          // "stationary_phase" | "dft"
    bool valid = true;           // stationary-phase validity flag (always true for "dft")
};

// Frequency span [f_s, f_e] = [K/(T0 + (1+a_max)T - t_m), K/(T0 - T_p - t_m)].
Interval subcarrier_span(const HfmcParams& params, int m);

// Flat approximation A_m T0 / sqrt(K) e^{-j pi/4} e^{j 2 pi theta(f)} inside the span, 0 outside.
// valid is false when K T^2 / (T0 (T0 + T)) < min_ratio.
SpectrumEstimate spectrum_stationary_phase(const HfmcParams& params, int m, const std::vector<double>& freq,
                                           double min_ratio = 100.0);

// Windowless DFT of phi_m sampled at sim_rate over [-T_p, (1 + a_max) T], zero-padded to the
// next power of two giving a bin spacing <= resolution. Bins cover [0, sim_rate).
SpectrumEstimate spectrum_dft(const HfmcParams& params, int m, double sim_rate, double resolution);

struct Confinement {
    double out_of_band_fraction = 0.0; // energy outside the span widened by the guard
    double ripple_min_db = 0.0;        // in-band magnitude relative to A_m T0 / sqrt(K)
    double ripple_max_db = 0.0;
    double mean_ratio = 0.0;           // mean in-band |psi| / (A_m T0 / sqrt(K))
    double parseval_error = 0.0;       // relative time/frequency energy mismatch
};

// guard and edge_margin are fractions of the span width: out-of-band energy is measured beyond
// span +- guard, flatness inside span shrunk by edge_margin at both ends.
Confinement measure_confinement(const HfmcParams& params, int m, double sim_rate, double resolution,
                                double guard = 0.02, double edge_margin = 0.05);

// Gram matrix over the given index range: closed form, or trapezoid-rule quadrature at rate.
Eigen::MatrixXcd gram_closed_form(const HfmcParams& params, IndexRange range);
Eigen::MatrixXcd gram_quadrature(const HfmcParams& params, IndexRange range, double rate);
Eigen::MatrixXd gram_matrix_db(const Eigen::MatrixXcd& g, double floor_db = -100.0);

// Mean diagonal power over mean off-diagonal power (transmit Gram, closed form).
double sir_db(const HfmcParams& params);
double sir_db(const Eigen::MatrixXcd& g);
// Total diagonal power over total off-diagonal power.
double aggregate_sir_db(const HfmcParams& params);
double aggregate_sir_db(const Eigen::MatrixXcd& g);

// Mean |approx - exact|^2 over all transmit pairs (sinc form vs exact correlation).
double approx_mse_correlation_db(const HfmcParams& params);
// Mean |approx - exact|^2 over all (n, m) of the N x M grid and over all paths of all channels
// (single-path coefficients, gains excluded).
double approx_mse_channel_db(const HfmcParams& params, const std::vector<ChannelRealization>& channels);
// Mean |a - b|^2 over all entries.
double matrix_mse_db(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

void write_spectrum_csv(std::ostream& os, const SpectrumEstimate& s, double f_lo, double f_hi);
void write_gram_csv(std::ostream& os, const Eigen::MatrixXd& db, int first_index);

} // namespace hfmc
