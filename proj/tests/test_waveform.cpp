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

#include "fixtures.hpp"

#include "hfmc/analysis.hpp"
#include "hfmc/waveform.hpp"

#include <doctest.h>

#include <random>

using namespace hfmc;
using hfmc::test::desk_design;
using hfmc::test::reference_design;

TEST_SUITE("waveform") {

TEST_CASE("hfm signal at the origin is unity") {
    const HfmSignalDef g{1234.5, 2.0};
    const Complex v = hfm_eval(g, 0.0);
    CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(v.imag()) < 1e-15);
}

TEST_CASE("hfm signal where the log term equals one") {
    const HfmSignalDef g{1000.25, 1.5};
    const double t = (std::exp(1.0) - 1.0) * g.ref_time;
    const Complex expect = std::polar(1.0 / std::exp(1.0), kTwoPi * g.fm_rate);
    CHECK(std::abs(hfm_eval(g, t) - expect) < 1e-9);
}

TEST_CASE("hfm signal at the half-cycle phase point") {
    // 2 pi K ln(1 + t/T0) = pi  <=>  t = T0 (e^{1/(2K)} - 1)
    const HfmSignalDef g{73005.49, 1.4122};
    const double t = g.ref_time * std::expm1(0.5 / g.fm_rate);
    const Complex v = hfm_eval(g, t);
    CHECK(std::abs(v) == doctest::Approx(std::exp(-0.5 / g.fm_rate)).epsilon(1e-12));
    CHECK(std::abs(std::abs(std::arg(v)) - kPi) < 1e-8);
}

TEST_CASE("hfm signal rejects the logarithm domain boundary") {
    const HfmSignalDef g{100.0, 1.0};
    CHECK_THROWS_AS(hfm_eval(g, -1.0), DomainError);
    CHECK_THROWS_AS(hfm_eval(g, -2.0), DomainError);
    CHECK_NOTHROW(hfm_eval(g, -0.999));
    CHECK_THROWS(HfmSignalDef{-1.0, 1.0}.validate());
    CHECK_THROWS(HfmSignalDef{1.0, 0.0}.validate());
}

TEST_CASE("amplitude with the delay at zero") {
    HfmcParams p = desk_design();
    p.delay_origin = 0.0;
    const double T0 = p.t0_ref, T = p.symbol_time;
    CHECK(subcarrier_amplitude(p, 0) == doctest::Approx(std::sqrt((T0 + T) / (T0 * T))).epsilon(1e-14));
}

TEST_CASE("reference design amplitude and unit energy") {
    const HfmcParams& p = reference_design();
    const double T0 = p.t0_ref, T = p.symbol_time, t0 = p.delay(0);
    const double a0 = std::sqrt((T0 + T - t0) * (T0 - t0) / (T0 * T0 * T));
    CHECK(subcarrier_amplitude(p, 0) == doctest::Approx(a0).epsilon(1e-14));
    CHECK(a0 == doctest::Approx(3.2836).epsilon(1e-4));
    // energy oracle at 2x the simulation rate, trapezoid rule
    const double rate = 640e3;
    const auto n = static_cast<long>(std::llround(T * rate));
    for (int m : {0, 100, 255}) {
        double e = 0.0;
        for (long k = 0; k <= n; ++k) {
            const double w = (k == 0 || k == n) ? 0.5 : 1.0;
            e += w * std::norm(subcarrier_eval(p, m, static_cast<double>(k) / rate));
        }
        CHECK(e / rate == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("every transmit subcarrier has unit energy at the simulation rate") {
    const HfmcParams& p = desk_design();
    for (int m = 0; m < p.num_tx; ++m) {
        const double e = hfmc::test::energy([&](double t) { return subcarrier_eval(p, m, t); }, p.symbol_time, 320e3);
        CHECK(e == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("subcarrier equals its amplitude at its own delay") {
    const HfmcParams& p = reference_design();
    for (int m : {-p.q_neg, 0, 17, p.num_tx - 1, p.num_tx + p.q_pos - 1}) {
        const Complex v = subcarrier_eval(p, m, p.delay(m));
        CHECK(v.real() == doctest::Approx(subcarrier_amplitude(p, m)).epsilon(1e-15));
        CHECK(std::abs(v.imag()) < 1e-15);
    }
}

TEST_CASE("subcarrier is a shifted scaled copy of the reference signal") {
    const HfmcParams& p = desk_design();
    const auto g = p.signal();
    for (int m : {0, 31, 63}) {
        for (double t = -p.prefix_time; t < p.symbol_time; t += 1.37e-3) {
            const Complex a = subcarrier_eval(p, m, t);
            const Complex b = subcarrier_amplitude(p, m) * hfm_eval(g, t - p.delay(m));
            CHECK(std::abs(a - b) <= 1e-14 * std::abs(b));
        }
    }
}

TEST_CASE("instantaneous frequency matches the phase slope") {
    const HfmcParams& p = reference_design();
    const double rate = 320e3, dt = 1.0 / rate;
    for (int m : {0, 128, 255}) {
        for (double t : {0.0, 0.03, 0.07, 0.1}) {
            // central difference of the unwrapped phase over one sample each side
            const Complex a = subcarrier_eval(p, m, t - dt), b = subcarrier_eval(p, m, t + dt);
            const double dphi = std::arg(b * std::conj(a));
            // the phase advances more than 2 pi per 2 dt at ~50 kHz: add the known whole turns
            const double f_est_aliased = dphi / (kTwoPi * 2.0 * dt);
            const double f = instantaneous_frequency(p, m, t);
            const double turns = std::round((f - f_est_aliased) * 2.0 * dt);
            const double f_est = f_est_aliased + turns / (2.0 * dt);
            CHECK(f_est == doctest::Approx(f).epsilon(1e-3));
        }
    }
}

TEST_CASE("closed-form correlation is one on the diagonal") {
    const HfmcParams& p = reference_design();
    for (int m : {-p.q_neg, 0, 100, p.num_tx + p.q_pos - 1}) {
        const Complex v = correlation_closed_form(p, m, m);
        CHECK(std::abs(v - Complex(1.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("closed-form correlation agrees with fine quadrature") {
    const HfmcParams& p = reference_design();
    const IndexRange r{120, 135};
    const Eigen::MatrixXcd q = gram_quadrature(p, r, 640e3);
    const Eigen::MatrixXcd c = gram_closed_form(p, r);
    CHECK((q - c).cwiseAbs().maxCoeff() < 1e-6);
    // adjacent and edge pairs too
    const IndexRange edge{0, 5};
    CHECK((gram_quadrature(p, edge, 640e3) - gram_closed_form(p, edge)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("closed-form correlation is Hermitian") {
    const HfmcParams& p = desk_design();
    for (int n = -3; n < 8; ++n) {
        for (int m = -3; m < 8; ++m) {
            CHECK(std::abs(correlation_closed_form(p, n, m) - std::conj(correlation_closed_form(p, m, n))) < 1e-11);
        }
    }
}

TEST_CASE("sinc approximation: unity on the diagonal, zero on the grid") {
    const HfmcParams& p = reference_design();
    CHECK(std::abs(correlation_approx(p, 40, 40) - Complex(1.0, 0.0)) < 1e-15);
    for (int n : {0, 1, 2, 37, 255}) {
        for (int m : {3, 90, 254}) {
            if (n == m) continue;
            CHECK(std::abs(correlation_approx(p, n, m)) < 1e-11);
        }
    }
}

TEST_CASE("sinc approximation refuses delays outside the validity region") {
    const HfmcParams& p = reference_design();
    // the leftmost leakage row sits below -eps T0 (see check_invariants)
    REQUIRE(std::abs(p.delay(-p.q_neg)) >= p.epsilon * p.t0_ref);
    CHECK_THROWS_AS(correlation_approx(p, -p.q_neg, 0), FeasibilityError);
    CHECK_NOTHROW(correlation_approx_unchecked(p, -p.q_neg, 0));
}

TEST_CASE("delay grid") {
    const HfmcParams& p = reference_design();
    const auto grid = delay_grid(p);
    REQUIRE(grid.size() == static_cast<std::size_t>(p.num_rx));
    const double fl = 47.5e3;
    const double t0 = p.t0_ref + (1.0 + p.a_max) * p.symbol_time - p.fm_rate / fl;
    CHECK(p.delay(0) == doctest::Approx(t0).epsilon(1e-12));
    CHECK(grid[static_cast<std::size_t>(p.q_neg)] == p.delay(0));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] - grid[i - 1] == doctest::Approx(p.delay_res).epsilon(1e-9));
    const double tr = (p.t0_ref + p.symbol_time) * p.t0_ref / (p.fm_rate * p.symbol_time);
    CHECK(p.delay_res == doctest::Approx(tr).epsilon(1e-14));
    CHECK(p.delay_res == doctest::Approx(5.014e-4).epsilon(1e-3));
    CHECK(p.delay(0) == doctest::Approx(-0.077).epsilon(0.01));
    CHECK(p.delay(p.num_tx - 1) == doctest::Approx(0.051).epsilon(0.01));
}

TEST_CASE("index map and structural invariants") {
    for (const HfmcParams* p : {&reference_design(), &desk_design()}) {
        const auto map = index_map(*p);
        CHECK(map.rx_range.contains(map.tx_range));
        CHECK(p->num_rx == p->num_tx + p->q_neg + p->q_pos);
        CHECK(check_invariants(*p).empty());
    }
    HfmcParams bad = desk_design();
    bad.num_rx += 1;
    CHECK_FALSE(check_invariants(bad).empty());
}

TEST_CASE("scaling identity holds pointwise") {
    const HfmcParams& p = reference_design();
    const auto g = p.signal();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, p.symbol_time);
    for (double a : {p.a_max, -p.a_max, 0.5 * p.a_max, -0.5 * p.a_max, 0.0}) {
        for (int k = 0; k < 2000; ++k) {
            const double t = u(rng);
            const Complex lhs = hfm_eval(g, (1.0 + a) * t);
            const Complex rhs = hfm_scaled_via_delay(g, a, t);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(lhs));
        }
    }
}

TEST_CASE("stationary-phase validity ratio") {
    const HfmcParams& p = reference_design();
    const double ratio = stationary_phase_ratio(p.signal(), p.symbol_time);
    CHECK(ratio == doctest::Approx(p.fm_rate * p.symbol_time * p.symbol_time / (p.t0_ref * (p.t0_ref + p.symbol_time))));
    CHECK(stationary_phase_valid(p.signal(), p.symbol_time));
    CHECK_FALSE(stationary_phase_valid(HfmSignalDef{10.0, 2.5}, 0.1024));
}

TEST_CASE("sinc-form error grows with the threshold") {
    SystemConfig c = hfmc::test::reference_system();
    double prev = -1e9;
    for (double eps : {0.034, 0.038, 0.042, 0.046, 0.05}) {
        const double mse = approx_mse_correlation_db(design_at_epsilon(c, eps));
        CHECK(mse >= prev - 1e-9);
        prev = mse;
    }
}

} // TEST_SUITE
