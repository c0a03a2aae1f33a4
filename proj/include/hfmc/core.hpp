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

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hfmc {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Argument outside the mathematical domain of a waveform (e.g. log of a non-positive value).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A design or approximation precondition is violated. The message names the violated inequality.
class FeasibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A waveform was evaluated outside its transmit support (prefix/suffix too short).
class GuardViolation : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Closed integer interval [first, last].
struct IndexRange {
    int first = 0;
    int last = -1;

    [[nodiscard]] int size() const { return last - first + 1; }
    [[nodiscard]] bool contains(int i) const { return i >= first && i <= last; }
    [[nodiscard]] bool contains(const IndexRange& other) const {
        return other.first >= first && other.last <= last;
    }
};

// Closed real interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double length() const { return hi - lo; }
    [[nodiscard]] bool contains(double x, double tol = 0.0) const {
        return x >= lo - tol && x <= hi + tol;
    }
};

// sin(pi x) / (pi x), with sinc(0) = 1.
inline double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

inline double to_db(double power) { return 10.0 * std::log10(power); }

// SplitMix64 finalizer; used to derive independent per-trial / per-stream seeds from a master seed
// so results do not depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix_seed(master);
    for (std::uint64_t p : path) s = mix_seed(s ^ mix_seed(p + 0x632be59bd9b4e019ULL));
    return s;
}

} // namespace hfmc
