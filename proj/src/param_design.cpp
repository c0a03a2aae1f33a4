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

#include "hfmc/param_design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hfmc {

namespace {

// Loop guard for the greedy searches; far beyond any sensible grid.
constexpr long kMaxSteps = 10'000'000;

[[noreturn]] void infeasible(const std::string& what) { throw FeasibilityError(what); }

} // namespace

void SystemConfig::validate() const {
    if (!(bandwidth > 0.0)) infeasible("bandwidth > 0 violated");
    if (!(carrier > 0.5 * bandwidth)) infeasible("carrier > bandwidth/2 violated (band would include 0 Hz)");
    if (!(symbol_time > 0.0)) infeasible("symbol_time > 0 violated");
    if (!(prefix_time > 0.0)) infeasible("prefix_time > 0 violated");
    if (!(a_max >= 0.0 && a_max < 0.2)) infeasible("0 <= a_max < 0.2 violated");
    if (min_subcarriers < 1) infeasible("min_subcarriers >= 1 violated");
    if (!(step_eps > 0.0) || !(step_ct0 > 0.0)) infeasible("search steps must be positive");
    if (oversample < 2) infeasible("oversample >= 2 violated (F_s = oversample * B)");
    if (sim_oversample < 1) infeasible("sim_oversample >= 1 violated");
    if (q_extra < 0) infeasible("q_extra >= 0 violated");
    const double tm = max_delay();
    if (!(tm >= 0.0 && tm <= prefix_time)) infeasible("0 <= tau_max <= prefix_time violated");
}

double a_max_from_velocity(double v_max, double medium_speed) {
    if (!(medium_speed > 0.0)) throw DomainError("medium speed must be positive");
    if (!(v_max >= 0.0 && v_max < medium_speed)) throw DomainError("velocity must satisfy 0 <= v < c");
    return v_max / medium_speed;
}

Interval epsilon_bounds(const SystemConfig& cfg) {
    cfg.validate();
    const double fc = cfg.carrier, B = cfg.bandwidth, a = cfg.a_max;
    const double c1 = cfg.f_low() * (1.0 + a) / B;
    const double c2 = c1 + cfg.f_high() / B * cfg.prefix_time / cfg.symbol_time;
    const double eps_max = a + B / (2.0 * fc);
    const double eps_min = (c2 + 2.0 * a * c2 * fc / B + c1 * a - c1) / (c1 + 2.0 * c2 * fc / B);
    if (eps_min > eps_max) {
        std::ostringstream os;
        os << "eps_min <= eps_max violated (" << eps_min << " > " << eps_max << ")";
        infeasible(os.str());
    }
    return {eps_min, eps_max};
}

Interval ct0_bounds(const SystemConfig& cfg, double eps) {
    const Interval eb = epsilon_bounds(cfg);
    if (eps < eb.lo || eps > eb.hi) {
        std::ostringstream os;
        os << "eps in [eps_min, eps_max] violated (eps = " << eps << ", range [" << eb.lo << ", "
           << eb.hi << "])";
        infeasible(os.str());
    }
    const double B = cfg.bandwidth, a = cfg.a_max;
    const double denom = B + 2.0 * cfg.carrier * (a - eps);
    if (!(denom > 0.0)) infeasible("T0/T upper bound is unbounded at eps = eps_max");
    const double hi = cfg.f_low() * (1.0 + a) / denom;
    const double lo = (cfg.f_low() / B * (1.0 + a) + cfg.f_high() / B * cfg.prefix_time / cfg.symbol_time) /
                      (1.0 - a + eps);
    if (!(lo < hi)) {
        std::ostringstream os;
        os << "ct0_min < ct0_max violated (" << lo << " >= " << hi << ")";
        infeasible(os.str());
    }
    return {lo, hi};
}

Interval k_bounds(const SystemConfig& cfg, double eps, double t0_ref) {
    const double a = cfg.a_max;
    return {cfg.f_high() * (1.0 + a - eps) * t0_ref, k_from_t0(cfg, eps, t0_ref)};
}

double k_lower_spectrum(const SystemConfig& cfg) {
    return cfg.f_low() * cfg.f_high() / cfg.bandwidth * (cfg.prefix_time + (1.0 + cfg.a_max) * cfg.symbol_time);
}

FeasibilityRanges feasibility_ranges(const SystemConfig& cfg, double eps, double t0_ref) {
    FeasibilityRanges r;
    const Interval e = epsilon_bounds(cfg);
    const Interval c = ct0_bounds(cfg, eps);
    const Interval k = k_bounds(cfg, eps, t0_ref);
    r.eps_min = e.lo;
    r.eps_max = e.hi;
    r.ct0_min = c.lo;
    r.ct0_max = c.hi;
    r.k_min = k.lo;
    r.k_max = k.hi;
    return r;
}

double k_from_t0(const SystemConfig& cfg, double eps, double t0_ref) {
    const double a = cfg.a_max;
    return cfg.f_low() * ((1.0 - a + eps) * t0_ref + (1.0 + a) * cfg.symbol_time);
}

double delay_resolution(const SystemConfig& cfg, double fm_rate, double t0_ref) {
    return (t0_ref + cfg.symbol_time) * t0_ref / (fm_rate * cfg.symbol_time);
}

double delay_origin(const SystemConfig& cfg, double fm_rate, double t0_ref) {
    return t0_ref + (1.0 + cfg.a_max) * cfg.symbol_time - fm_rate / cfg.f_low();
}

double subcarrier_quotient(const SystemConfig& cfg, double fm_rate, double t0_ref) {
    const double window = fm_rate * cfg.bandwidth / (cfg.f_low() * cfg.f_high()) - cfg.prefix_time -
                          (1.0 + cfg.a_max) * cfg.symbol_time;
    return window / delay_resolution(cfg, fm_rate, t0_ref);
}

int max_subcarriers(const SystemConfig& cfg, double fm_rate, double t0_ref) {
    return static_cast<int>(std::ceil(subcarrier_quotient(cfg, fm_rate, t0_ref)));
}

DiversityBandwidth diversity_bandwidth(const HfmcParams& p, double tau_max) {
    DiversityBandwidth d;
    d.tau_prime_max = tau_max + 2.0 * p.a_max * p.t0_ref;
    d.order = d.tau_prime_max / p.delay_res;
    return d;
}

LeakageRanges leakage_ranges(const HfmcParams& p, double tau_max, int q_extra) {
    const double aT0 = p.a_max * p.t0_ref;
    return {q_extra + static_cast<int>(std::ceil(aT0 / p.delay_res)),
            q_extra + static_cast<int>(std::ceil((tau_max + aT0) / p.delay_res))};
}

HfmcParams design_at(const SystemConfig& cfg, double eps, double t0_ref, int num_tx) {
    cfg.validate();
    HfmcParams p;
    p.epsilon = eps;
    p.t0_ref = t0_ref;
    p.fm_rate = k_from_t0(cfg, eps, t0_ref);
    p.delay_res = delay_resolution(cfg, p.fm_rate, t0_ref);
    p.delay_origin = delay_origin(cfg, p.fm_rate, t0_ref);
    p.capacity = max_subcarriers(cfg, p.fm_rate, t0_ref);
    if (p.capacity < 1) {
        std::ostringstream os;
        os << "K > (f_c - B/2)(f_c + B/2)(T_p + (1 + a_max) T)/B violated (K = " << p.fm_rate
           << ", bound " << k_lower_spectrum(cfg) << ")";
        infeasible(os.str());
    }
    p.num_tx = num_tx < 0 ? p.capacity : num_tx;
    p.symbol_time = cfg.symbol_time;
    p.prefix_time = cfg.prefix_time;
    p.a_max = cfg.a_max;
    p.max_delay = cfg.max_delay();
    p.q_extra = cfg.q_extra;
    const LeakageRanges q = leakage_ranges(p, p.max_delay, cfg.q_extra);
    p.q_neg = q.q_neg;
    p.q_pos = q.q_pos;
    p.num_rx = p.num_tx + p.q_neg + p.q_pos;
    return p;
}

namespace {

// Second phase: T0/T from its lower bound upward until the capacity reaches M_s.
HfmcParams ct0_phase(const SystemConfig& cfg, double eps) {
    const Interval cb = ct0_bounds(cfg, eps);
    const double T = cfg.symbol_time;
    for (long j = 0; j < kMaxSteps; ++j) {
        double ct0 = cb.lo + static_cast<double>(j) * cfg.step_ct0;
        const bool last = ct0 >= cb.hi;
        if (last) ct0 = cb.hi;
        const double t0_ref = ct0 * T;
        const double K = k_from_t0(cfg, eps, t0_ref);
        if (max_subcarriers(cfg, K, t0_ref) >= cfg.min_subcarriers) {
            return design_at(cfg, eps, t0_ref, cfg.min_subcarriers);
        }
        if (last) break;
    }
    std::ostringstream os;
    os << "capacity >= M_s not reached for T0/T up to ct0_max = " << cb.hi << " at eps = " << eps;
    infeasible(os.str());
}

} // namespace

HfmcParams select_parameters(const SystemConfig& cfg) {
    const Interval eb = epsilon_bounds(cfg);
    const double T = cfg.symbol_time;
    // eps stays on the step lattice: start at the lattice point at or below eps_min, then step.
    const long k0 = static_cast<long>(std::floor(eb.lo / cfg.step_eps));
    for (long k = k0 + 1; k < k0 + kMaxSteps; ++k) {
        const double eps = static_cast<double>(k) * cfg.step_eps;
        if (eps >= eb.hi) break; // T0/T upper bound diverges at eps_max
        const double ct0 = ct0_bounds(cfg, std::max(eps, eb.lo)).hi;
        const double t0_ref = ct0 * T;
        const double K = k_from_t0(cfg, eps, t0_ref);
        if (max_subcarriers(cfg, K, t0_ref) >= cfg.min_subcarriers) return ct0_phase(cfg, eps);
    }
    std::ostringstream os;
    os << "capacity >= M_s = " << cfg.min_subcarriers << " not reached for eps up to eps_max = " << eb.hi;
    infeasible(os.str());
}

HfmcParams design_at_epsilon(const SystemConfig& cfg, double eps) {
    const Interval cb = ct0_bounds(cfg, eps);
    const double T = cfg.symbol_time;
    for (long j = 0; j < kMaxSteps; ++j) {
        double ct0 = cb.lo + static_cast<double>(j) * cfg.step_ct0;
        const bool last = ct0 >= cb.hi;
        if (last) ct0 = cb.hi;
        const double t0_ref = ct0 * T;
        const double K = k_from_t0(cfg, eps, t0_ref);
        const int cap = max_subcarriers(cfg, K, t0_ref);
        if (cap >= cfg.min_subcarriers) return design_at(cfg, eps, t0_ref, cfg.min_subcarriers);
        if (last) {
            if (cap < 1) break;
            return design_at(cfg, eps, t0_ref, cap);
        }
    }
    std::ostringstream os;
    os << "no subcarrier fits at eps = " << eps;
    infeasible(os.str());
}

std::vector<TradeoffPoint> tradeoff_sweep(const SystemConfig& cfg, double eps,
                                          const std::vector<double>& ct0_values) {
    std::vector<TradeoffPoint> out;
    out.reserve(ct0_values.size());
    for (double ct0 : ct0_values) {
        const double t0_ref = ct0 * cfg.symbol_time;
        TradeoffPoint pt;
        pt.ct0 = ct0;
        const double K = k_from_t0(cfg, eps, t0_ref);
        pt.quotient = subcarrier_quotient(cfg, K, t0_ref);
        pt.capacity = static_cast<int>(std::ceil(pt.quotient));
        const double tr = delay_resolution(cfg, K, t0_ref);
        pt.order = (cfg.max_delay() + 2.0 * cfg.a_max * t0_ref) / tr;
        out.push_back(pt);
    }
    return out;
}

std::vector<double> ct0_grid(const SystemConfig& cfg, double eps, int num_points) {
    const Interval cb = ct0_bounds(cfg, eps);
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(std::max(num_points, 0)));
    for (int i = 0; i < num_points; ++i) {
        g.push_back(cb.lo + (cb.hi - cb.lo) * (i + 1.0) / (num_points + 1.0));
    }
    return g;
}

RationalForm capacity_form(const SystemConfig& cfg, double eps) {
    const double fl = cfg.f_low(), fh = cfg.f_high(), B = cfg.bandwidth;
    const double T = cfg.symbol_time, Tp = cfg.prefix_time, a = cfg.a_max;
    const double s = 1.0 - a + eps;
    RationalForm f;
    f.c = fl / fh * B * T * s * s;
    f.d = fl * s * (2.0 * (1.0 + a) * B * T / fh - Tp - (1.0 + a) * T);
    f.e = -(1.0 + a) * fl * Tp - fl * T * (1.0 + a) * (1.0 + a) * fl / fh;
    return f;
}

RationalForm bandwidth_form(const SystemConfig& cfg, double eps, double tau_max) {
    const double a = cfg.a_max, r = tau_max / cfg.symbol_time;
    const double s = 1.0 - a + eps;
    return {2.0 * a * s, 2.0 * a * (1.0 + a) + s * r, (1.0 + a) * r};
}

bool DesignAudit::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const DesignCheck& c) { return c.ok; });
}

std::string DesignAudit::failures() const {
    std::string s;
    for (const auto& c : checks) {
        if (c.ok) continue;
        if (!s.empty()) s += "; ";
        s += c.name;
    }
    return s;
}

DesignAudit audit_design(const SystemConfig& cfg, const HfmcParams& p) {
    DesignAudit audit;
    const double T = cfg.symbol_time, Tp = cfg.prefix_time, a = cfg.a_max;
    const double T0 = p.t0_ref, K = p.fm_rate, eps = p.epsilon;
    const double fl = cfg.f_low(), fh = cfg.f_high();
    const double tau_max = p.max_delay;
    constexpr double rel = 1e-9;

    // Strict checks use margin > 0; boundary checks (attained by construction) accept a tiny
    // relative slack.
    auto strict = [&](std::string name, double margin) {
        audit.checks.push_back({std::move(name), margin, margin > 0.0});
    };
    auto boundary = [&](std::string name, double margin, double scale) {
        audit.checks.push_back({std::move(name), margin, margin >= -rel * std::abs(scale)});
    };

    const Interval eb = epsilon_bounds(cfg);
    strict("eps >= eps_min", eps - eb.lo + rel);
    strict("eps < eps_max", eb.hi - eps);
    strict("K > spectral minimum (f_c-B/2)(f_c+B/2)(T_p+(1+a_max)T)/B", K - k_lower_spectrum(cfg));
    strict("K > (f_c+B/2)(1+a_max-eps)T0", K - fh * (1.0 + a - eps) * T0);
    boundary("K <= (f_c-B/2)((1-a_max+eps)T0+(1+a_max)T)", k_from_t0(cfg, eps, T0) - K, K);
    strict("upper delay window: T0-T_p-K/(f_c+B/2)+tau_max+a_max*T0 < eps*T0",
           eps * T0 - (T0 - Tp - K / fh + tau_max + a * T0));
    boundary("lower delay window: T0+(1+a_max)T-K/(f_c-B/2)-a_max*T0 >= -eps*T0",
             (T0 + (1.0 + a) * T - K / fl - a * T0) + eps * T0, T0);
    // band constraints on every transmit subcarrier (lowest and highest delays suffice)
    boundary("band floor: t_0 >= T0+(1+a_max)T-K/(f_c-B/2)",
             p.delay(0) - (T0 + (1.0 + a) * T - K / fl), T0);
    strict("band ceiling: t_{M-1} < T0-T_p-K/(f_c+B/2)", (T0 - Tp - K / fh) - p.delay(p.num_tx - 1));
    strict("num_tx <= capacity", p.capacity - p.num_tx + 0.5);
    const std::string inv = check_invariants(p);
    audit.checks.push_back({inv.empty() ? "structural invariants" : "structural invariants: " + inv,
                            inv.empty() ? 1.0 : -1.0, inv.empty()});
    return audit;
}

} // namespace hfmc
