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

#include "hfmc/experiment.hpp"

#include "hfmc/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace hfmc {

HfmcParams design_for(const ExperimentConfig& cfg) { return select_parameters(cfg.system); }

BaselineGeometry baseline_geometry(const ExperimentConfig& cfg, int num_tx) {
    const auto& s = cfg.system;
    return {num_tx, s.symbol_time, s.prefix_time, s.a_max, s.carrier, s.bandwidth};
}

std::unique_ptr<Basis> make_basis(WaveformKind kind, const ExperimentConfig& cfg, const HfmcParams& params) {
    const BaselineGeometry g = baseline_geometry(cfg, params.num_tx);
    switch (kind) {
    case WaveformKind::hfmc: return std::make_unique<HfmcBasis>(params);
    case WaveformKind::ofdm: return std::make_unique<OfdmBasis>(g);
    case WaveformKind::sc: return std::make_unique<SingleCarrierBasis>(g);
    case WaveformKind::oddm: {
        auto [md, nd] = default_oddm_grid(g.num_tx);
        if (cfg.oddm_delay_bins > 0 && cfg.oddm_doppler_bins > 0) {
            md = cfg.oddm_delay_bins;
            nd = cfg.oddm_doppler_bins;
        }
        return std::make_unique<OddmBasis>(g, md, nd);
    }
    }
    throw std::invalid_argument("make_basis: unknown waveform");
}

const BerPoint* SimResult::find(WaveformKind w, double snr_db, double csi_nmse) const {
    for (const auto& p : points) {
        if (p.waveform == w && p.snr_db == snr_db && p.csi_nmse == csi_nmse) return &p;
    }
    return nullptr;
}

namespace {

// Detection-side noise floor for noiseless runs.
constexpr double kNoiselessN0 = 1e-9;

struct TrialOutcome {
    std::vector<ErrorCounts> counts; // [w][c][s]
    int redraws = 0;
    bool failed = false;
    std::vector<std::string> alarms;
};

} // namespace

SimResult run_ber(const ExperimentConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    const HfmcParams params = design_for(cfg);
    const SymbolAlphabet alphabet = parse_alphabet(cfg.alphabet);
    const int M = params.num_tx;
    const int bps = alphabet.bits_per_symbol();
    const double rate = cfg.system.sim_rate();
    const std::size_t W = cfg.waveforms.size(), S = cfg.snr_db.size();
    const std::size_t C = cfg.csi_nmse > 0.0 ? 2 : 1;

    std::vector<std::unique_ptr<Basis>> bases;
    std::vector<std::unique_ptr<MatchedFilterBank>> banks;
    for (auto w : cfg.waveforms) {
        bases.push_back(make_basis(w, cfg, params));
        banks.push_back(std::make_unique<MatchedFilterBank>(*bases.back(), rate));
    }
    const std::vector<double>& grid = banks.front()->grid();
    const std::size_t ns = grid.size();

    auto evaluate = [&](const ChannelRealization& ch, const ChannelRealization& chp, const Eigen::VectorXcd& x,
                        const std::vector<std::uint8_t>& bits, const std::vector<std::vector<Complex>>& noise) {
        std::vector<ErrorCounts> out(W * C * S);
        for (std::size_t w = 0; w < W; ++w) {
            const Basis& basis = *bases[w];
            const MatchedFilterBank& bank = *banks[w];
            const bool analytic = basis.kind() == WaveformKind::hfmc && !cfg.numerical_h;
            std::vector<ChannelRealization> sets{ch};
            if (C == 2 && !analytic) sets.push_back(chp);
            const auto d = received_basis(basis, grid, sets);

            const Eigen::VectorXcd r = d[0] * x;
            const Eigen::VectorXcd y0 = bank.demodulate({r.data(), static_cast<std::size_t>(r.size())});
            std::vector<Eigen::MatrixXcd> h(C);
            for (std::size_t c = 0; c < C; ++c) {
                h[c] = analytic ? equivalent_channel_analytic(params, c == 0 ? ch : chp).q : bank.project(d[c]);
            }
            for (std::size_t s = 0; s < S; ++s) {
                Eigen::VectorXcd y = y0;
                if (!noise[s].empty()) y += bank.demodulate(noise[s]);
                const double n0 = std::isfinite(cfg.snr_db[s]) ? NoiseSpec{cfg.snr_db[s], rate}.n0() : kNoiselessN0;
                for (std::size_t c = 0; c < C; ++c) {
                    const Eigen::VectorXcd xh = lmmse_equalize({h[c], y, n0});
                    const auto det = demap_symbols({xh.data(), static_cast<std::size_t>(xh.size())}, alphabet);
                    out[(w * C + c) * S + s] = count_errors(det, bits, bps);
                }
            }
        }
        return out;
    };

    auto run_trial = [&](int t) {
        TrialOutcome o;
        const auto tt = static_cast<std::uint64_t>(t);
        std::mt19937_64 bit_rng(derive_seed(cfg.seed, {tt, 1}));
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(M * bps));
        for (auto& b : bits) b = static_cast<std::uint8_t>(bit_rng() >> 63);
        const auto sym = map_bits(bits, alphabet);
        const Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(sym.data(), M);

        std::vector<std::vector<Complex>> noise(S);
        for (std::size_t s = 0; s < S; ++s) {
            if (!std::isfinite(cfg.snr_db[s])) continue;
            noise[s].assign(ns, Complex{});
            add_awgn(noise[s], NoiseSpec{cfg.snr_db[s], rate}, derive_seed(cfg.seed, {tt, 2, s}));
        }

        for (int attempt = 0; attempt <= cfg.max_redraws; ++attempt) {
            const auto at = static_cast<std::uint64_t>(attempt);
            try {
                const ChannelRealization ch = draw_realization(cfg.channel, derive_seed(cfg.seed, {tt, 0, at}));
                const ChannelRealization chp =
                    C == 2 ? perturb_csi(ch, cfg.csi_nmse, derive_seed(cfg.seed, {tt, 3, at})) : ch;
                o.counts = evaluate(ch, chp, x, bits, noise);
                o.redraws = attempt;
                return o;
            } catch (const ConditioningError& e) {
                o.alarms.push_back("trial " + std::to_string(t) + ": " + e.what());
            } catch (const GuardViolation& e) {
                o.alarms.push_back("trial " + std::to_string(t) + ": " + e.what());
            }
        }
        o.failed = true;
        o.redraws = cfg.max_redraws;
        return o;
    };

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
    std::atomic<int> next{0};
    std::atomic<int> done{0};
    std::mutex progress_mutex;
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (int t; (t = next.fetch_add(1)) < cfg.trials;) {
            try {
                outcomes[static_cast<std::size_t>(t)] = run_trial(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = cfg.trials;
                return;
            }
            const int d = ++done;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(d, cfg.trials);
            }
        }
    };
    const int nworkers = std::min(cfg.workers, cfg.trials);
    if (nworkers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    SimResult res;
    std::vector<ErrorCounts> total(W * C * S);
    for (const auto& o : outcomes) {
        res.redraws += o.redraws;
        for (const auto& a : o.alarms) {
            if (res.alarms.size() < 50) res.alarms.push_back(a);
        }
        if (o.failed) {
            ++res.failed_trials;
            continue;
        }
        ++res.trials_run;
        for (std::size_t i = 0; i < total.size(); ++i) total[i] = merge(total[i], o.counts[i]);
    }
    for (std::size_t w = 0; w < W; ++w) {
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t s = 0; s < S; ++s) {
                res.points.push_back({cfg.waveforms[w], c == 0 ? 0.0 : cfg.csi_nmse, cfg.snr_db[s],
                                      total[(w * C + c) * S + s]});
            }
        }
    }
    return res;
}

BinomialInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double den = 1.0 + z2 / nn;
    const double mid = (p + z2 / (2.0 * nn)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / den;
    return {std::max(0.0, mid - half), std::min(1.0, mid + half)};
}

std::vector<BerPoint> curve(const SimResult& r, WaveformKind w, double csi_nmse) {
    std::vector<BerPoint> c;
    for (const auto& p : r.points) {
        if (p.waveform == w && p.csi_nmse == csi_nmse) c.push_back(p);
    }
    std::sort(c.begin(), c.end(), [](const BerPoint& a, const BerPoint& b) { return a.snr_db < b.snr_db; });
    return c;
}

double snr_at_ber(const std::vector<BerPoint>& c, double target) {
    auto ber = [](const BerPoint& p) {
        // zero-error points sit at half a count so the log stays finite
        const double b = p.counts.ber();
        return b > 0.0 ? b : 0.5 / static_cast<double>(std::max<std::uint64_t>(1, p.counts.bits_total));
    };
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const double b0 = ber(c[i]), b1 = ber(c[i + 1]);
        if (b0 >= target && b1 < target) {
            const double f = (std::log(b0) - std::log(target)) / (std::log(b0) - std::log(b1));
            return c[i].snr_db + f * (c[i + 1].snr_db - c[i].snr_db);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string cell(double x, int precision) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(precision) << x;
    return os.str();
}

Table ber_table(const SimResult& r) {
    Table t;
    t.columns = {"waveform", "csi_nmse", "snr_db", "bits_total", "bits_error", "ber", "ber_ci_lo",
                 "ber_ci_hi", "symbols_total", "symbols_error", "ser", "frames"};
    for (const auto& p : r.points) {
        const auto ci = wilson_interval(p.counts.bits_error, p.counts.bits_total);
        t.rows.push_back({to_string(p.waveform), cell(p.csi_nmse), cell(p.snr_db), std::to_string(p.counts.bits_total),
                          std::to_string(p.counts.bits_error), cell(p.counts.ber()), cell(ci.lo), cell(ci.hi),
                          std::to_string(p.counts.symbols_total), std::to_string(p.counts.symbols_error),
                          cell(p.counts.ser()), std::to_string(p.counts.frames)});
    }
    return t;
}

Table design_table(const SystemConfig& sys, const HfmcParams& p) {
    Table t;
    t.columns = {"quantity", "value"};
    auto add = [&](const std::string& k, double v, int prec = 10) { t.rows.push_back({k, cell(v, prec)}); };
    const Interval eb = epsilon_bounds(sys);
    add("epsilon", p.epsilon);
    add("eps_min", eb.lo);
    add("eps_max", eb.hi);
    add("t0_ref_s", p.t0_ref);
    add("ct0", p.t0_ref / p.symbol_time);
    try {
        const Interval cb = ct0_bounds(sys, p.epsilon);
        add("ct0_min", cb.lo);
        add("ct0_max", cb.hi);
    } catch (const FeasibilityError&) {
    }
    add("fm_rate", p.fm_rate);
    add("delay_res_s", p.delay_res);
    add("delay_origin_s", p.delay_origin);
    add("t_first_s", p.delay(0));
    add("t_last_s", p.delay(p.num_tx - 1));
    add("num_tx", p.num_tx);
    add("capacity", p.capacity);
    add("q_neg", p.q_neg);
    add("q_pos", p.q_pos);
    add("num_rx", p.num_rx);
    add("diversity_order", diversity_bandwidth(p, p.max_delay).order);
    add("stationary_phase_ratio", stationary_phase_ratio(p.signal(), p.symbol_time));
    for (const auto& c : audit_design(sys, p).checks) add("margin:" + c.name, c.margin);
    return t;
}

Table sweep_epsilon(const ExperimentConfig& cfg, std::vector<double> values) {
    if (values.empty()) {
        const double e0 = design_for(cfg).epsilon;
        for (int k = 0; k < 9; ++k) values.push_back(e0 + 0.002 * k);
    }
    std::vector<ChannelRealization> channels;
    for (std::uint64_t k = 0; k < 3; ++k) channels.push_back(draw_realization(cfg.channel, derive_seed(cfg.seed, {7, k})));

    Table t;
    t.columns = {"epsilon", "t0_ref_s", "num_tx", "capacity", "sir_db", "aggregate_sir_db", "mse_correlation_db",
                 "mse_channel_db", "diversity_order"};
    for (double eps : values) {
        try {
            const HfmcParams p = design_at_epsilon(cfg.system, eps);
            const Eigen::MatrixXcd g = gram_closed_form(p, p.tx_range());
            t.rows.push_back({cell(eps), cell(p.t0_ref, 8), std::to_string(p.num_tx), std::to_string(p.capacity),
                              cell(sir_db(g)), cell(aggregate_sir_db(g)), cell(approx_mse_correlation_db(p)),
                              cell(approx_mse_channel_db(p, channels)),
                              cell(diversity_bandwidth(p, p.max_delay).order)});
        } catch (const FeasibilityError&) {
            t.rows.push_back({cell(eps), "infeasible", "", "", "", "", "", "", ""});
        }
    }
    return t;
}

Table sweep_ct0(const ExperimentConfig& cfg, std::vector<double> values) {
    const double eps = design_for(cfg).epsilon;
    if (values.empty()) values = ct0_grid(cfg.system, eps, 9);
    Table t;
    t.columns = {"ct0", "epsilon", "quotient", "capacity", "diversity_order"};
    for (const auto& pt : tradeoff_sweep(cfg.system, eps, values)) {
        t.rows.push_back({cell(pt.ct0, 8), cell(eps), cell(pt.quotient, 8), std::to_string(pt.capacity),
                          cell(pt.order, 8)});
    }
    return t;
}

Table sweep_paths(const ExperimentConfig& cfg, std::vector<double> values, const ProgressFn& progress) {
    if (values.empty()) values = {6, 9, 12, 15};
    Table t;
    t.columns = {"num_paths", "waveform", "csi_nmse", "snr_db", "bits_total", "bits_error", "ber"};
    for (double v : values) {
        ExperimentConfig c = cfg;
        c.channel.num_paths = static_cast<int>(std::lround(v));
        const SimResult r = run_ber(c, progress);
        for (const auto& p : r.points) {
            t.rows.push_back({std::to_string(c.channel.num_paths), to_string(p.waveform), cell(p.csi_nmse),
                              cell(p.snr_db), std::to_string(p.counts.bits_total),
                              std::to_string(p.counts.bits_error), cell(p.counts.ber())});
        }
    }
    return t;
}

Table sweep_snr(const ExperimentConfig& cfg, std::vector<double> values, const ProgressFn& progress) {
    ExperimentConfig c = cfg;
    if (!values.empty()) c.snr_db = std::move(values);
    return ber_table(run_ber(c, progress));
}

void write_metadata(std::ostream& os, const ExperimentConfig& cfg, const std::string& command) {
    std::ostringstream h;
    h << std::hex << std::setw(16) << std::setfill('0') << config_hash(cfg);
    os << "# hfmc " << kVersion << '\n'
       << "# command: " << command << '\n'
       << "# config_hash: " << h.str() << '\n'
       << "# seed: " << cfg.seed << '\n';
}

void write_csv(std::ostream& os, const ExperimentConfig& cfg, const std::string& command, const Table& t) {
    write_metadata(os, cfg, command);
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
}

} // namespace hfmc
