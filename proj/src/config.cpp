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

#include "hfmc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace hfmc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty()) throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
    return x;
}

long long to_int(const std::string& key, const std::string& v) {
    long long x = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end) throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: '" + key + "' expects a boolean, got '" + v + "'");
}

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += f(v[i]);
    }
    return s;
}

} // namespace

void ExperimentConfig::sync() {
    channel.a_max = system.a_max;
    channel.guard = system.max_delay();
}

void ExperimentConfig::validate() const {
    system.validate();
    channel.validate();
    if (waveforms.empty()) throw std::invalid_argument("config: waveform list is empty");
    if (snr_db.empty()) throw std::invalid_argument("config: snr grid is empty");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (!(csi_nmse >= 0.0 && csi_nmse < 1.0)) throw std::invalid_argument("config: csi_nmse must be in [0, 1)");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (max_redraws < 0) throw std::invalid_argument("config: max_redraws must be >= 0");
    if (!(spectrum_resolution > 0.0)) throw std::invalid_argument("config: spectrum_resolution must be > 0");
    (void)parse_alphabet(alphabet);
}

ExperimentConfig make_preset(const std::string& name) {
    ExperimentConfig cfg;
    if (name == "desk") {
        cfg.system.min_subcarriers = 64;
        cfg.trials = 200;
    } else if (name == "paper") {
        cfg.system.min_subcarriers = 256;
        cfg.trials = 200;
    } else {
        throw std::invalid_argument("unknown preset '" + name + "' (expected desk or paper)");
    }
    cfg.sync();
    return cfg;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    auto& s = cfg.system;
    auto num = [&] { return to_double(key, value); };
    auto integer = [&] { return static_cast<int>(to_int(key, value)); };

    if (key == "carrier") s.carrier = num();
    else if (key == "bandwidth") s.bandwidth = num();
    else if (key == "symbol_time") s.symbol_time = num();
    else if (key == "prefix_time") s.prefix_time = num();
    else if (key == "a_max") s.a_max = num();
    else if (key == "v_max") s.a_max = a_max_from_velocity(num(), 1500.0);
    else if (key == "min_subcarriers") s.min_subcarriers = integer();
    else if (key == "step_eps") s.step_eps = num();
    else if (key == "step_ct0") s.step_ct0 = num();
    else if (key == "oversample") s.oversample = integer();
    else if (key == "sim_oversample") s.sim_oversample = integer();
    else if (key == "q_extra") s.q_extra = integer();
    else if (key == "tau_max") s.tau_max = num();
    else if (key == "waveforms") {
        cfg.waveforms.clear();
        for (const auto& w : split_list(value)) cfg.waveforms.push_back(parse_waveform(w));
    } else if (key == "alphabet") {
        (void)parse_alphabet(value);
        cfg.alphabet = value;
    } else if (key == "snr_db") {
        cfg.snr_db.clear();
        for (const auto& v : split_list(value)) cfg.snr_db.push_back(to_double(key, v));
    } else if (key == "trials") cfg.trials = integer();
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "num_paths") cfg.channel.num_paths = integer();
    else if (key == "mean_interarrival") cfg.channel.mean_interarrival = num();
    else if (key == "decay_db") cfg.channel.decay_db = num();
    else if (key == "csi_nmse") cfg.csi_nmse = num();
    else if (key == "oddm_delay_bins") cfg.oddm_delay_bins = integer();
    else if (key == "oddm_doppler_bins") cfg.oddm_doppler_bins = integer();
    else if (key == "numerical_h") cfg.numerical_h = to_bool(key, value);
    else if (key == "max_redraws") cfg.max_redraws = integer();
    else if (key == "sweep_values") {
        cfg.sweep_values.clear();
        for (const auto& v : split_list(value)) cfg.sweep_values.push_back(to_double(key, v));
    } else if (key == "spectrum_subcarriers") {
        cfg.spectrum_subcarriers.clear();
        for (const auto& v : split_list(value)) cfg.spectrum_subcarriers.push_back(static_cast<int>(to_int(key, v)));
    } else if (key == "spectrum_resolution") cfg.spectrum_resolution = num();
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "workers") cfg.workers = integer();
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& is, ExperimentConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        }
        apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    base.sync();
    return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

std::string canonical_config(const ExperimentConfig& c) {
    const auto& s = c.system;
    std::ostringstream os;
    os << "a_max=" << fmt(s.a_max) << '\n'
       << "alphabet=" << c.alphabet << '\n'
       << "bandwidth=" << fmt(s.bandwidth) << '\n'
       << "carrier=" << fmt(s.carrier) << '\n'
       << "csi_nmse=" << fmt(c.csi_nmse) << '\n'
       << "decay_db=" << fmt(c.channel.decay_db) << '\n'
       << "max_redraws=" << c.max_redraws << '\n'
       << "mean_interarrival=" << fmt(c.channel.mean_interarrival) << '\n'
       << "min_subcarriers=" << s.min_subcarriers << '\n'
       << "num_paths=" << c.channel.num_paths << '\n'
       << "numerical_h=" << (c.numerical_h ? 1 : 0) << '\n'
       << "oddm_delay_bins=" << c.oddm_delay_bins << '\n'
       << "oddm_doppler_bins=" << c.oddm_doppler_bins << '\n'
       << "oversample=" << s.oversample << '\n'
       << "prefix_time=" << fmt(s.prefix_time) << '\n'
       << "q_extra=" << s.q_extra << '\n'
       << "seed=" << c.seed << '\n'
       << "sim_oversample=" << s.sim_oversample << '\n'
       << "snr_db=" << join(c.snr_db, fmt) << '\n'
       << "spectrum_resolution=" << fmt(c.spectrum_resolution) << '\n'
       << "spectrum_subcarriers=" << join(c.spectrum_subcarriers, [](int v) { return std::to_string(v); }) << '\n'
       << "step_ct0=" << fmt(s.step_ct0) << '\n'
       << "step_eps=" << fmt(s.step_eps) << '\n'
       << "sweep_values=" << join(c.sweep_values, fmt) << '\n'
       << "symbol_time=" << fmt(s.symbol_time) << '\n'
       << "tau_max=" << fmt(s.max_delay()) << '\n'
       << "trials=" << c.trials << '\n'
       << "waveforms=" << join(c.waveforms, [](WaveformKind k) { return to_string(k); }) << '\n';
    return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_config(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace hfmc
