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

#include <doctest.h>

#include <sstream>

using namespace hfmc;

namespace {

ExperimentConfig parse(const std::string& text, const std::string& preset = "desk") {
    std::istringstream in(text);
    return parse_config(in, make_preset(preset));
}

double num(const std::string& s) { return std::stod(s); }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("config files") {
    const auto c = parse("# comment\n"
                         "carrier = 40000   # trailing\n"
                         "\n"
                         "waveforms = hfmc, sc\n"
                         "snr_db = 5, inf\n"
                         "v_max = 3\n"
                         "tau_max = 0.02\n"
                         "numerical_h = yes\n");
    CHECK(c.system.carrier == 40000.0);
    CHECK(c.waveforms == std::vector<WaveformKind>{WaveformKind::hfmc, WaveformKind::sc});
    CHECK(c.snr_db.size() == 2);
    CHECK(std::isinf(c.snr_db[1]));
    CHECK(c.system.a_max == doctest::Approx(0.002));
    CHECK(c.numerical_h);
    // the channel block follows the system block
    CHECK(c.channel.a_max == c.system.a_max);
    CHECK(c.channel.guard == doctest::Approx(0.02));

    CHECK_THROWS_WITH_AS(parse("colour = red\n"), doctest::Contains("colour"), std::invalid_argument);
    CHECK_THROWS_AS(parse("trials = many\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("carrier 5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("alphabet = 64qam\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("numerical_h = maybe\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg", make_preset("desk")), std::invalid_argument);
}

TEST_CASE("presets and validation") {
    CHECK(make_preset("desk").system.min_subcarriers == 64);
    CHECK(make_preset("paper").system.min_subcarriers == 256);
    CHECK_THROWS_AS(make_preset("lab"), std::invalid_argument);
    auto c = make_preset("desk");
    c.validate();
    c.trials = 0;
    CHECK_THROWS(c.validate());
    c = make_preset("desk");
    c.csi_nmse = 1.0;
    CHECK_THROWS(c.validate());
}

TEST_CASE("config hash tracks results-relevant fields only") {
    const auto a = make_preset("desk");
    auto b = a;
    b.out_dir = "elsewhere";
    b.workers = 4;
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a) != config_hash(make_preset("paper")));
    // the canonical form round-trips through the parser
    std::istringstream in(canonical_config(a));
    CHECK(config_hash(parse_config(in, make_preset("paper"))) == config_hash(a));
}

TEST_CASE("Wilson score interval") {
    const auto z = wilson_interval(0, 100);
    CHECK(std::abs(z.lo) < 1e-15);
    CHECK(z.hi == doctest::Approx(3.841458820694124 / 103.841458820694124).epsilon(1e-12));
    const auto w = wilson_interval(10, 100);
    CHECK(w.lo == doctest::Approx(0.05523).epsilon(1e-3));
    CHECK(w.hi == doctest::Approx(0.17437).epsilon(1e-3));
    const auto all = wilson_interval(50, 50);
    CHECK(all.hi == doctest::Approx(1.0));
}

TEST_CASE("SNR at a target BER") {
    auto pt = [](double snr, std::uint64_t err) {
        BerPoint p;
        p.snr_db = snr;
        p.counts.bits_total = 100000;
        p.counts.bits_error = err;
        return p;
    };
    const std::vector<BerPoint> c{pt(0, 10000), pt(10, 100), pt(20, 0)};
    CHECK(snr_at_ber(c, 1e-2) == doctest::Approx(5.0));
    CHECK(snr_at_ber(c, 1e-1) == doctest::Approx(0.0));
    CHECK(std::isnan(snr_at_ber(std::vector<BerPoint>{pt(0, 50000), pt(5, 40000)}, 1e-3)));
}

TEST_CASE("design table") {
    const auto cfg = make_preset("paper");
    const Table t = design_table(cfg.system, design_for(cfg));
    CHECK(t.columns == std::vector<std::string>{"quantity", "value"});
    auto get = [&](const std::string& k) {
        for (const auto& r : t.rows)
            if (r[0] == k) return r[1];
        FAIL("missing row " << k);
        return std::string{};
    };
    CHECK(num(get("num_tx")) == 256);
    CHECK(num(get("q_neg")) == 22);
    CHECK(num(get("epsilon")) == doctest::Approx(0.034));
    for (const auto& r : t.rows)
        if (r[0].rfind("margin:", 0) == 0) CHECK(num(r[1]) >= 0.0); // non-strict bounds sit at 0
}

TEST_CASE("noiseless HFMC frames are error free") {
    auto cfg = make_preset("desk");
    cfg.waveforms = {WaveformKind::hfmc};
    cfg.snr_db = {std::numeric_limits<double>::infinity()};
    cfg.trials = 10;
    const auto r = run_ber(cfg);
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0].counts.bits_total == 10u * 2u * 64u);
    CHECK(r.points[0].counts.bits_error == 0);
    CHECK(r.failed_trials == 0);
}

TEST_CASE("results do not depend on the worker count") {
    auto cfg = make_preset("desk");
    cfg.waveforms = {WaveformKind::hfmc, WaveformKind::ofdm};
    cfg.snr_db = {6, 12};
    cfg.trials = 3;
    cfg.csi_nmse = 0.01;
    cfg.workers = 1;
    const Table a = ber_table(run_ber(cfg));
    cfg.workers = 3;
    const Table b = ber_table(run_ber(cfg));
    CHECK(a.rows == b.rows);
    CHECK(a.rows.size() == 2 * 2 * 2);
}

TEST_CASE("tradeoff sweep on the desk design") {
    const auto cfg = make_preset("desk");
    const Table t = sweep_ct0(cfg, {});
    REQUIRE(t.rows.size() == 9);
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        CHECK(num(t.rows[i][2]) > num(t.rows[i - 1][2]));
        CHECK(num(t.rows[i][4]) < num(t.rows[i - 1][4]));
    }
}

TEST_CASE("epsilon sweep on the desk design") {
    const auto cfg = make_preset("desk");
    const double e0 = design_for(cfg).epsilon;
    const Table t = sweep_epsilon(cfg, {e0, e0 + 0.01, 0.5});
    REQUIRE(t.rows.size() == 3);
    CHECK(num(t.rows[0][4]) > num(t.rows[1][4])); // SIR falls with eps
    CHECK(num(t.rows[0][6]) < num(t.rows[1][6])); // approximation error grows
    CHECK(t.rows[2][1] == "infeasible");
}

TEST_CASE("CSV output carries a metadata block") {
    const auto cfg = make_preset("desk");
    Table t;
    t.columns = {"a", "b"};
    t.rows = {{"1", "2"}};
    std::ostringstream os;
    write_csv(os, cfg, "hfmc test", t);
    const std::string s = os.str();
    CHECK(s.find("# hfmc ") == 0);
    CHECK(s.find("# command: hfmc test") != std::string::npos);
    CHECK(s.find("# seed: 1") != std::string::npos);
    CHECK(s.find("\na,b\n1,2\n") != std::string::npos);
    CHECK(cell(0.5) == "0.5");
}

} // TEST_SUITE
