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
//
// Command-line driver: design sheets, Monte Carlo BER, spectra, Gram grids,
// equivalent-channel dumps and parameter sweeps. Every subcommand writes CSV
// files plus run_manifest.txt into --out.

#include "hfmc/analysis.hpp"
#include "hfmc/experiment.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace hfmc;

namespace {

struct CommonOptions {
    std::string config;
    std::string preset = "desk";
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string out;
    bool numerical_h = false;
    bool quiet = false;
};

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config, "Flat key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--preset", o.preset, "Base preset")->check(CLI::IsMember({"desk", "paper"}));
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--workers", o.workers, "Worker threads for Monte Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "Output directory");
    sub->add_flag("--numerical-h", o.numerical_h, "Build the HFMC channel matrix by quadrature");
    sub->add_flag("-q,--quiet", o.quiet, "No progress or summary output");
}

ExperimentConfig resolve(const CommonOptions& o) {
    ExperimentConfig cfg = make_preset(o.preset);
    if (!o.config.empty()) cfg = load_config(o.config, cfg);
    if (o.seed) cfg.seed = *o.seed;
    if (o.workers) cfg.workers = *o.workers;
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.numerical_h) cfg.numerical_h = true;
    cfg.sync();
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    const fs::path p = fs::path(cfg.out_dir) / name;
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
}

void emit(const ExperimentConfig& cfg, const std::string& command, const std::string& name, const Table& t) {
    auto os = open_out(cfg, name);
    write_csv(os, cfg, command, t);
}

void manifest(const ExperimentConfig& cfg, const std::string& command, double seconds,
              const std::vector<std::string>& files, const std::vector<std::string>& notes = {}) {
    auto os = open_out(cfg, "run_manifest.txt");
    os << "hfmc " << kVersion << '\n'
       << "command: " << command << '\n'
       << "seed: " << cfg.seed << '\n'
       << "workers: " << cfg.workers << '\n'
       << "wall_time_s: " << seconds << '\n'
       << "files:";
    for (const auto& f : files) os << ' ' << f;
    os << "\n\n[config]\n" << canonical_config(cfg);
    if (!notes.empty()) {
        os << "\n[notes]\n";
        for (const auto& n : notes) os << n << '\n';
    }
}

ProgressFn progress_printer(bool quiet) {
    if (quiet) return {};
    return [](int done, int total) {
        if (done == total || done % std::max(1, total / 20) == 0) std::cerr << "  trials " << done << '/' << total << '\n';
    };
}

bool g_quiet = false; // -q also silences the stdout summaries

void print_table(const Table& t) {
    if (g_quiet) return;
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "  " : "") << r[i];
        std::cout << '\n';
    }
}

std::vector<std::string> sim_notes(const SimResult& r) {
    std::vector<std::string> n{"trials_run: " + std::to_string(r.trials_run),
                               "redraws: " + std::to_string(r.redraws),
                               "failed_trials: " + std::to_string(r.failed_trials)};
    for (const auto& a : r.alarms) n.push_back("alarm: " + a);
    return n;
}

int cmd_design(const ExperimentConfig& cfg) {
    const HfmcParams p = design_for(cfg);
    const Table t = design_table(cfg.system, p);
    print_table(t);
    emit(cfg, "design", "design.csv", t);
    const std::string bad = check_invariants(p);
    if (!bad.empty()) std::cerr << "warning: " << bad << '\n';
    return 0;
}

std::vector<std::string> cmd_ber(const ExperimentConfig& cfg, bool quiet) {
    const SimResult r = run_ber(cfg, progress_printer(quiet));
    const Table t = ber_table(r);
    emit(cfg, "ber", "ber.csv", t);
    if (!quiet) {
        for (const auto& p : r.points) {
            std::cout << to_string(p.waveform) << " csi_nmse=" << p.csi_nmse << " snr=" << p.snr_db
                      << " ber=" << p.counts.ber() << " (" << p.counts.bits_error << '/' << p.counts.bits_total << ")\n";
        }
    }
    return sim_notes(r);
}

int cmd_spectrum(const ExperimentConfig& cfg, std::vector<std::string>& files) {
    const HfmcParams p = design_for(cfg);
    std::vector<int> ms = cfg.spectrum_subcarriers;
    if (ms.empty()) ms = {0, p.num_tx / 2, p.num_tx - 1};
    const double rate = cfg.system.sim_rate();
    Table spans;
    spans.columns = {"m", "f_start_hz", "f_end_hz", "inside_band", "oob_fraction", "ripple_min_db", "ripple_max_db",
                     "mean_ratio", "parseval_error"};
    for (int m : ms) {
        if (!p.tx_range().contains(m)) throw std::invalid_argument("spectrum: subcarrier " + std::to_string(m) + " outside the transmit range");
        const Interval span = subcarrier_span(p, m);
        const SpectrumEstimate s = spectrum_dft(p, m, rate, cfg.spectrum_resolution);
        const double w = span.length();
        {
            const std::string name = "spectrum_m" + std::to_string(m) + ".csv";
            auto os = open_out(cfg, name);
            write_metadata(os, cfg, "spectrum");
            write_spectrum_csv(os, s, span.lo - 0.5 * w, span.hi + 0.5 * w);
            files.push_back(name);
        }
        const Confinement c = measure_confinement(p, m, rate, cfg.spectrum_resolution);
        const bool inside = span.lo > cfg.system.f_low() * (1 - 1e-9) && span.hi < cfg.system.f_high() * (1 + 1e-9);
        spans.rows.push_back({std::to_string(m), cell(span.lo, 10), cell(span.hi, 10), inside ? "1" : "0",
                              cell(c.out_of_band_fraction), cell(c.ripple_min_db), cell(c.ripple_max_db),
                              cell(c.mean_ratio), cell(c.parseval_error)});
    }
    emit(cfg, "spectrum", "spectrum_spans.csv", spans);
    files.push_back("spectrum_spans.csv");
    print_table(spans);
    return 0;
}

int cmd_orth(const ExperimentConfig& cfg) {
    const HfmcParams p = design_for(cfg);
    const Eigen::MatrixXcd g = gram_closed_form(p, p.tx_range());
    {
        auto os = open_out(cfg, "orth_gram_db.csv");
        write_metadata(os, cfg, "orth");
        write_gram_csv(os, gram_matrix_db(g), 0);
    }
    Table t;
    t.columns = {"quantity", "value"};
    t.rows.push_back({"epsilon", cell(p.epsilon)});
    t.rows.push_back({"num_tx", std::to_string(p.num_tx)});
    t.rows.push_back({"sir_db", cell(sir_db(g))});
    t.rows.push_back({"aggregate_sir_db", cell(aggregate_sir_db(g))});
    t.rows.push_back({"mse_correlation_db", cell(approx_mse_correlation_db(p))});
    emit(cfg, "orth", "orth_summary.csv", t);
    print_table(t);
    return 0;
}

int cmd_chanmat(const ExperimentConfig& cfg) {
    const HfmcParams p = design_for(cfg);
    const ChannelRealization ch = draw_realization(cfg.channel, derive_seed(cfg.seed, {0, 0, 0}));
    EquivalentChannel h = equivalent_channel_analytic(p, ch);
    if (cfg.numerical_h) {
        const HfmcBasis basis(p);
        const MatchedFilterBank bank(basis, cfg.system.sim_rate());
        h = equivalent_channel_numerical(basis, bank, ch);
    }
    {
        auto os = open_out(cfg, "channel.txt");
        write_realization(os, ch);
    }
    {
        auto os = open_out(cfg, "chanmat.csv");
        write_metadata(os, cfg, "chanmat");
        write_channel_csv(os, h);
    }
    {
        auto os = open_out(cfg, "chanmat_db.csv");
        write_metadata(os, cfg, "chanmat");
        write_channel_db_csv(os, h);
    }
    const BandOccupancy occ = band_occupancy(h);
    const double g = diversity_bandwidth(p, p.max_delay).order;
    Table t;
    t.columns = {"quantity", "value"};
    t.rows.push_back({"construction", h.tag});
    t.rows.push_back({"num_paths", std::to_string(ch.paths.size())});
    t.rows.push_back({"band_center", std::to_string(occ.center)});
    t.rows.push_back({"band_halfwidth", std::to_string(occ.halfwidth)});
    t.rows.push_back({"band_energy_fraction", cell(occ.fraction)});
    t.rows.push_back({"occupied_width", std::to_string(2 * occ.halfwidth + 1)});
    t.rows.push_back({"bound_g_plus_2q", cell(g + 2.0 * p.q_extra)});
    emit(cfg, "chanmat", "chanmat_summary.csv", t);
    print_table(t);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hfmc: hyperbolic frequency multicarrier design and simulation"};
    app.require_subcommand(1);
    CommonOptions o;
    std::string var;
    std::vector<double> values;

    auto* design = app.add_subcommand("design", "Parameter selection sheet");
    auto* ber = app.add_subcommand("ber", "Monte Carlo BER for every configured waveform");
    auto* spectrum = app.add_subcommand("spectrum", "Subcarrier spectra and confinement metrics");
    auto* orth = app.add_subcommand("orth", "Transmit Gram matrix (dB) and SIR");
    auto* chanmat = app.add_subcommand("chanmat", "Equivalent channel matrix for one channel draw");
    auto* sweep = app.add_subcommand("sweep", "Sweep one variable");
    for (auto* s : {design, ber, spectrum, orth, chanmat, sweep}) add_common(s, o);
    sweep->add_option("variable,--var", var, "epsilon | ct0 | paths | snr")
        ->required()
        ->check(CLI::IsMember({"epsilon", "ct0", "paths", "snr"}));
    sweep->add_option("--values", values, "Grid values (defaults depend on the variable)")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        const auto t0 = std::chrono::steady_clock::now();
        g_quiet = o.quiet;
        ExperimentConfig cfg = resolve(o);
        std::vector<std::string> files;
        std::vector<std::string> notes;
        std::string command;
        if (design->parsed()) {
            command = "design";
            cmd_design(cfg);
            files = {"design.csv"};
        } else if (ber->parsed()) {
            command = "ber";
            notes = cmd_ber(cfg, o.quiet);
            files = {"ber.csv"};
        } else if (spectrum->parsed()) {
            command = "spectrum";
            cmd_spectrum(cfg, files);
        } else if (orth->parsed()) {
            command = "orth";
            cmd_orth(cfg);
            files = {"orth_gram_db.csv", "orth_summary.csv"};
        } else if (chanmat->parsed()) {
            command = "chanmat";
            cmd_chanmat(cfg);
            files = {"channel.txt", "chanmat.csv", "chanmat_db.csv", "chanmat_summary.csv"};
        } else if (sweep->parsed()) {
            command = "sweep " + var;
            if (!values.empty()) cfg.sweep_values = values;
            const auto prog = progress_printer(o.quiet);
            Table t;
            if (var == "epsilon") t = sweep_epsilon(cfg, cfg.sweep_values);
            else if (var == "ct0") t = sweep_ct0(cfg, cfg.sweep_values);
            else if (var == "paths") t = sweep_paths(cfg, cfg.sweep_values, prog);
            else t = sweep_snr(cfg, cfg.sweep_values, prog);
            const std::string name = "sweep_" + var + ".csv";
            emit(cfg, command, name, t);
            files = {name};
            if (!o.quiet) print_table(t);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        manifest(cfg, command, secs, files, notes);
    } catch (const FeasibilityError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
