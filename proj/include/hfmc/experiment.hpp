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

#include "hfmc/config.hpp"
#include "hfmc/detect.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace hfmc {

// HFMC design for the configured system (two-phase search, num_tx = M_s).
HfmcParams design_for(const ExperimentConfig& cfg);

// Baselines share M, T, T_p, a_max and the band with the HFMC design.
BaselineGeometry baseline_geometry(const ExperimentConfig& cfg, int num_tx);
std::unique_ptr<Basis> make_basis(WaveformKind kind, const ExperimentConfig& cfg, const HfmcParams& params);

struct BerPoint {
    WaveformKind waveform = WaveformKind::hfmc;
    double csi_nmse = 0.0;
    double snr_db = 0.0;
    ErrorCounts counts;
};

struct SimResult {
    std::vector<BerPoint> points; // ordered by waveform, csi pass, snr
    int trials_run = 0;
    int redraws = 0;       // channel redraws after conditioning alarms / guard violations
    int failed_trials = 0; // trials that exhausted max_redraws (excluded from the counts)
    std::vector<std::string> alarms;

    [[nodiscard]] const BerPoint* find(WaveformKind w, double snr_db, double csi_nmse = 0.0) const;
};

using ProgressFn = std::function<void(int done, int total)>;

// Monte Carlo BER. Per trial: one channel draw and one bit frame shared by every waveform, one noise
// draw per SNR shared likewise; perfect CSI always, plus a csi_nmse pass when it is positive.
// Deterministic in (cfg, seed) regardless of cfg.workers.
SimResult run_ber(const ExperimentConfig& cfg, const ProgressFn& progress = {});

// 95% Wilson score interval for k errors out of n.
struct BinomialInterval {
    double lo = 0.0, hi = 0.0;
};
BinomialInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

// SNR at which BER crosses target, by log-linear interpolation over the given points (sorted by
// SNR). Returns NaN when the curve never reaches the target.
double snr_at_ber(const std::vector<BerPoint>& curve, double target);
std::vector<BerPoint> curve(const SimResult& r, WaveformKind w, double csi_nmse);

// Generic string table for sweeps.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

Table ber_table(const SimResult& r);
Table design_table(const SystemConfig& sys, const HfmcParams& params);
// Per-eps design at fixed eps: SIR, aggregate SIR, both approximation MSEs, M, G.
Table sweep_epsilon(const ExperimentConfig& cfg, std::vector<double> values);
// M quotient, capacity and G over T0/T at the design eps.
Table sweep_ct0(const ExperimentConfig& cfg, std::vector<double> values);
// BER per path count (channel.num_paths overridden).
Table sweep_paths(const ExperimentConfig& cfg, std::vector<double> values, const ProgressFn& progress = {});
Table sweep_snr(const ExperimentConfig& cfg, std::vector<double> values, const ProgressFn& progress = {});

// "# key: value" comment block: version, command, config hash, seed.
void write_metadata(std::ostream& os, const ExperimentConfig& cfg, const std::string& command);
// CSV with a metadata comment block (version, command, config hash, seed).
void write_csv(std::ostream& os, const ExperimentConfig& cfg, const std::string& command, const Table& t);

// Formatting used for every CSV cell.
std::string cell(double x, int precision = 6);

} // namespace hfmc
