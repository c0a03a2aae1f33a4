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
#include "hfmc/param_design.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hfmc {

inline constexpr const char* kVersion = "0.3.0";

// Everything a run needs. Serialized as flat "key = value" lines; see README for the schema.
struct ExperimentConfig {
    SystemConfig system;
    std::vector<WaveformKind> waveforms{WaveformKind::hfmc, WaveformKind::ofdm, WaveformKind::sc,
                                        WaveformKind::oddm};
    std::string alphabet = "qpsk";
    std::vector<double> snr_db{8, 10, 12, 14, 16, 20, 25};
    int trials = 200;
    std::uint64_t seed = 1;
    ChannelStats channel;  // a_max and guard follow the system block (see sync())
    double csi_nmse = 0.0; // > 0 adds an imperfect-CSI pass next to the perfect one
    int oddm_delay_bins = 0;   // 0 picks default_oddm_grid
    int oddm_doppler_bins = 0;
    bool numerical_h = false;  // HFMC H by quadrature instead of the closed form
    int max_redraws = 10;      // per trial, for conditioning alarms and guard violations
    std::vector<double> sweep_values; // empty: per-variable defaults
    std::vector<int> spectrum_subcarriers; // empty: first, middle, last
    double spectrum_resolution = 1.0;      // [Hz]
    std::string out_dir = "out";
    int workers = 1;

    // Copies a_max and the delay guard from the system block into the channel statistics.
    void sync();
    // Throws std::invalid_argument / FeasibilityError.
    void validate() const;
};

// "desk": M_s = 64, 200 trials per point. "paper": M_s = 256 (reference geometry).
ExperimentConfig make_preset(const std::string& name);

// Applies one key/value pair. Throws std::invalid_argument on an unknown key or bad value.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Reads "key = value" lines ('#' comments, blank lines ignored) on top of base.
ExperimentConfig parse_config(std::istream& is, ExperimentConfig base);
ExperimentConfig load_config(const std::string& path, ExperimentConfig base);

// Canonical serialization of every field that affects results (excludes out_dir and workers).
std::string canonical_config(const ExperimentConfig& cfg);
// FNV-1a 64 of canonical_config.
std::uint64_t config_hash(const ExperimentConfig& cfg);

} // namespace hfmc
