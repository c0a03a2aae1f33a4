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

#include "hfmc/core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <stdexcept>

namespace hfmc {

// Conditioning alarm from a solver (non-finite output or failed factorization).
class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// H has entries outside the stated band above the tolerated energy fraction.
class BandAssumptionError : public std::runtime_error {
public:
    BandAssumptionError(const std::string& what, double excluded)
        : std::runtime_error(what), excluded_fraction(excluded) {}
    double excluded_fraction;
};

struct DetectionProblem {
    Eigen::MatrixXcd h; // N x M
    Eigen::VectorXcd y; // N
    double noise_var = 0.0;

    void validate() const;
};

// x = (H^H H + N0 I)^{-1} H^H y via Cholesky of the M x M system.
Eigen::VectorXcd lmmse_equalize(const DetectionProblem& p);

// x = (H^H H)^{-1} H^H y. Throws ConditioningError when H^H H is not positive definite.
Eigen::VectorXcd zero_forcing(const DetectionProblem& p);

// Band of an N x M matrix: entries with row - col in [center - halfwidth, center + halfwidth].
struct BandSpec {
    int center = 0;
    int halfwidth = 0;

    [[nodiscard]] bool contains(Eigen::Index row, Eigen::Index col) const {
        const auto d = row - col - center;
        return d >= -halfwidth && d <= halfwidth;
    }
};

// Fraction of |H|^2 outside the band.
double excluded_energy(const Eigen::MatrixXcd& h, const BandSpec& band);

// H with everything outside the band set to zero.
Eigen::MatrixXcd truncate_to_band(const Eigen::MatrixXcd& h, const BandSpec& band);

// LMMSE for the band-truncated H using a banded Hermitian Cholesky of H^H H + N0 I, whose
// half-bandwidth is 2 * halfwidth. Cost O(M halfwidth^2). Throws BandAssumptionError when the
// excluded energy exceeds max_excluded; falls back to the dense solver on a conditioning alarm.
Eigen::VectorXcd lmmse_banded(const DetectionProblem& p, const BandSpec& band, double max_excluded = 1e-4);

// Banded Hermitian positive-definite solve A x = b. The lower band is passed as ab (n x (kd+1))
// with ab(i, d) = A(i, i - d). Throws ConditioningError on a non-positive pivot.
Eigen::VectorXcd solve_banded_hpd(const Eigen::MatrixXcd& ab, const Eigen::VectorXcd& b);

// Lower band storage of a dense Hermitian matrix.
Eigen::MatrixXcd to_lower_band(const Eigen::MatrixXcd& a, int kd);

struct ErrorCounts {
    std::uint64_t bits_total = 0;
    std::uint64_t bits_error = 0;
    std::uint64_t symbols_total = 0;
    std::uint64_t symbols_error = 0;
    std::uint64_t frames = 0;

    [[nodiscard]] double ber() const;
    [[nodiscard]] double ser() const;
    bool operator==(const ErrorCounts&) const = default;
};

ErrorCounts merge(const ErrorCounts& a, const ErrorCounts& b);

// Hamming accounting for one frame; symbols are groups of bits_per_symbol bits.
ErrorCounts count_errors(std::span<const std::uint8_t> detected, std::span<const std::uint8_t> sent,
                         int bits_per_symbol = 1);

} // namespace hfmc
