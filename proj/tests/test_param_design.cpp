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

#include <doctest.h>

#include <cstring>

using namespace hfmc;
using hfmc::test::reference_design;
using hfmc::test::reference_system;

namespace {

// Independent arithmetic for the reference setup.
struct RefNumbers {
    double fc = 50e3, B = 5e3, T = 0.1024, Tp = 0.0256, a = 3.43e-3;
    double fl() const { return fc - B / 2; }
    double fh() const { return fc + B / 2; }
    double c1() const { return fl() * (1 + a) / B; }
    double c2() const { return c1() + fh() / B * Tp / T; }
};

} // namespace

TEST_SUITE("param_design") {

TEST_CASE("doppler scaling from velocity") {
    CHECK(a_max_from_velocity(10 * 1852.0 / 3600.0, 1500.0) == doctest::Approx(3.43e-3).epsilon(1e-3));
    CHECK(a_max_from_velocity(0.0, 1500.0) == 0.0);
    CHECK(a_max_from_velocity(15.0, 1500.0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK_THROWS_AS(a_max_from_velocity(-1.0, 1500.0), DomainError);
    CHECK_THROWS_AS(a_max_from_velocity(1500.0, 1500.0), DomainError);
}

TEST_CASE("threshold bounds") {
    const RefNumbers r;
    const Interval e = epsilon_bounds(reference_system());
    CHECK(e.hi == doctest::Approx(r.a + r.B / (2 * r.fc)).epsilon(1e-14));
    CHECK(e.hi == doctest::Approx(0.0534).epsilon(1e-3));
    CHECK(r.c1() == doctest::Approx(9.533).epsilon(1e-3));
    CHECK(r.c2() == doctest::Approx(12.158).epsilon(1e-3));
    const double c1 = r.c1(), c2 = r.c2(), k = r.fc / r.B;
    const double eps_min = (c2 + 2 * r.a * c2 * k + c1 * r.a - c1) / (c1 + 2 * c2 * k);
    CHECK(e.lo == doctest::Approx(eps_min).epsilon(1e-12));
    CHECK(e.lo == doctest::Approx(0.0138).epsilon(3e-3));

    SystemConfig narrow = reference_system();
    narrow.bandwidth = 1.0;
    CHECK(epsilon_bounds(narrow).hi == doctest::Approx(narrow.a_max).epsilon(1e-4));
}

TEST_CASE("reference-time ratio bounds") {
    const RefNumbers r;
    const Interval c = ct0_bounds(reference_system(), 0.034);
    CHECK(c.hi == doctest::Approx(r.fl() * (1 + r.a) / (r.B + 2 * r.fc * (r.a - 0.034))).epsilon(1e-13));
    CHECK(c.hi == doctest::Approx(24.53).epsilon(2e-4));
    const double lo = (r.fl() / r.B * (1 + r.a) + r.fh() / r.B * r.Tp / r.T) / (1 - r.a + 0.034);
    CHECK(c.lo == doctest::Approx(lo).epsilon(1e-13));
    // eps below its lower bound is refused
    const SystemConfig s = reference_system();
    CHECK_THROWS_AS(ct0_bounds(s, 0.001), FeasibilityError);
}

TEST_CASE("fm rate from the reference time") {
    const RefNumbers r;
    const HfmcParams& p = reference_design();
    const double K = r.fl() * ((1 - r.a + p.epsilon) * p.t0_ref + (1 + r.a) * r.T);
    CHECK(k_from_t0(reference_system(), p.epsilon, p.t0_ref) == doctest::Approx(K).epsilon(1e-14));
    CHECK(p.fm_rate == doctest::Approx(1.278e5).epsilon(1e-3));
    CHECK(k_from_t0(reference_system(), 0.034, 0.0) == doctest::Approx(r.fl() * (1 + r.a) * r.T).epsilon(1e-14));
    const Interval kb = k_bounds(reference_system(), p.epsilon, p.t0_ref);
    CHECK(p.fm_rate <= kb.hi * (1 + 1e-12));
    CHECK(p.fm_rate > kb.lo);
}

TEST_CASE("subcarrier capacity") {
    const RefNumbers r;
    const HfmcParams& p = reference_design();
    const double q = (p.fm_rate * r.B / (r.fl() * r.fh()) - r.Tp - (1 + r.a) * r.T) / p.delay_res;
    CHECK(subcarrier_quotient(reference_system(), p.fm_rate, p.t0_ref) == doctest::Approx(q).epsilon(1e-12));
    CHECK(max_subcarriers(reference_system(), p.fm_rate, p.t0_ref) == 256);
    CHECK(p.capacity == 256);
    // at the spectral minimum of K the numerator vanishes
    const double kmin = k_lower_spectrum(reference_system());
    CHECK(std::abs(subcarrier_quotient(reference_system(), kmin, p.t0_ref)) < 1e-6);
    CHECK(max_subcarriers(reference_system(), kmin, p.t0_ref) <= 1);
}

TEST_CASE("diversity order and leakage ranges at 25 ms spread") {
    const HfmcParams& p = reference_design();
    const auto d = diversity_bandwidth(p, 0.025);
    CHECK(d.tau_prime_max == doctest::Approx(0.025 + 2 * p.a_max * p.t0_ref).epsilon(1e-14));
    CHECK(d.tau_prime_max == doctest::Approx(0.0422).epsilon(1e-3));
    CHECK(d.order == doctest::Approx(84.2).epsilon(1e-3));
    const auto q = leakage_ranges(p, 0.025, 4);
    CHECK(q.q_neg == 22);
    CHECK(q.q_pos == 72);
    CHECK(q.q_pos >= q.q_neg);

    HfmcParams still = p;
    still.a_max = 0.0;
    CHECK(diversity_bandwidth(still, 0.02).tau_prime_max == 0.02);
    const auto q0 = leakage_ranges(still, 0.0, 4);
    CHECK(q0.q_neg == 4);
    CHECK(q0.q_pos == 4);
}

TEST_CASE("two-phase selection reproduces the reference design") {
    const HfmcParams& p = reference_design();
    CHECK(p.epsilon == doctest::Approx(0.034).epsilon(1e-12));
    CHECK(std::abs(p.t0_ref - 2.511) < 0.005);
    CHECK(p.t0_ref / p.symbol_time == doctest::Approx(24.52).epsilon(5e-4));
    CHECK(p.num_tx == 256);
    CHECK(p.q_neg == 22);
    CHECK(p.q_pos == 73); // tau_max = T_p
    const auto audit = audit_design(reference_system(), p);
    CHECK_MESSAGE(audit.ok(), audit.failures());
}

TEST_CASE("selection with one required subcarrier stops at the first feasible step") {
    SystemConfig s = reference_system();
    s.min_subcarriers = 1;
    const HfmcParams p = select_parameters(s);
    CHECK(p.num_tx == 1);
    CHECK(p.capacity >= 1);
    const double first = std::floor(epsilon_bounds(s).lo / s.step_eps) * s.step_eps + s.step_eps;
    CHECK(p.epsilon == doctest::Approx(first).epsilon(1e-12));
    CHECK(audit_design(s, p).ok());
}

TEST_CASE("selection is deterministic") {
    const HfmcParams a = select_parameters(reference_system());
    const HfmcParams b = select_parameters(reference_system());
    CHECK(std::memcmp(&a.epsilon, &b.epsilon, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.t0_ref, &b.t0_ref, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.fm_rate, &b.fm_rate, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.delay_origin, &b.delay_origin, sizeof(double)) == 0);
    CHECK(a.num_rx == b.num_rx);
}

TEST_CASE("degenerate design without Doppler") {
    SystemConfig s = reference_system();
    s.a_max = 0.0;
    s.min_subcarriers = 64;
    const HfmcParams p = select_parameters(s);
    CHECK(p.delay_res == doctest::Approx((p.t0_ref + p.symbol_time) * p.t0_ref / (p.fm_rate * p.symbol_time)));
    CHECK(p.num_tx == 64);
    CHECK(p.q_neg == p.q_extra);
}

TEST_CASE("bandwidth beyond twice the carrier is rejected") {
    SystemConfig s = reference_system();
    s.bandwidth = 120e3;
    CHECK_THROWS_AS(s.validate(), FeasibilityError);
    CHECK_THROWS_AS(select_parameters(s), FeasibilityError);
    try {
        s.validate();
    } catch (const FeasibilityError& e) {
        CHECK(std::string(e.what()).find("carrier") != std::string::npos);
    }
}

TEST_CASE("too many subcarriers exhausts the search") {
    SystemConfig s = reference_system();
    s.min_subcarriers = 100000;
    CHECK_THROWS_AS(select_parameters(s), FeasibilityError);
}

TEST_CASE("capacity grows and diversity order shrinks with the reference time") {
    const auto pts = tradeoff_sweep(reference_system(), 0.034, {13.0, 18.0, 24.0});
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].capacity < pts[1].capacity);
    CHECK(pts[1].capacity < pts[2].capacity);
    CHECK(pts[0].order > pts[1].order);
    CHECK(pts[1].order > pts[2].order);
}

TEST_CASE("rational form monotonicity") {
    const RationalForm inc{2.0, 1.0, -0.5};
    const RationalForm dec{1.0, 2.0, 0.5};
    CHECK(inc.proves_increasing());
    CHECK(dec.proves_decreasing());
    double pi = inc(0.1), pd = dec(0.1);
    for (double l = 0.2; l < 50.0; l *= 1.3) {
        CHECK(inc(l) > pi);
        CHECK(dec(l) < pd);
        pi = inc(l);
        pd = dec(l);
    }
}

TEST_CASE("rational forms reproduce the quotient and diversity order") {
    const SystemConfig s = reference_system();
    const double eps = 0.034;
    const RationalForm cap = capacity_form(s, eps);
    const RationalForm bw = bandwidth_form(s, eps, s.max_delay());
    CHECK(cap.proves_increasing());
    CHECK(bw.proves_decreasing());
    for (double ct0 : ct0_grid(s, eps, 7)) {
        const auto pt = tradeoff_sweep(s, eps, {ct0}).front();
        CHECK(cap(ct0) == doctest::Approx(pt.quotient).epsilon(1e-9));
        CHECK(bw(ct0) * s.f_low() * s.symbol_time == doctest::Approx(pt.order).epsilon(1e-9));
    }
}

TEST_CASE("audit names the violated inequality") {
    HfmcParams p = reference_design();
    p.num_tx = p.capacity + 5;
    const auto audit = audit_design(reference_system(), p);
    CHECK_FALSE(audit.ok());
    CHECK(audit.failures().find("capacity") != std::string::npos);
}

} // TEST_SUITE
