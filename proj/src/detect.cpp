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

#include "hfmc/detect.hpp"

#include <algorithm>
#include <sstream>

namespace hfmc {

void DetectionProblem::validate() const {
    if (h.rows() != y.size()) throw std::invalid_argument("DetectionProblem: H rows differ from y length");
    if (h.cols() == 0) throw std::invalid_argument("DetectionProblem: H has no columns");
    if (!(noise_var >= 0.0)) throw std::invalid_argument("DetectionProblem: noise_var must be >= 0");
}

Eigen::VectorXcd lmmse_equalize(const DetectionProblem& p) {
    p.validate();
    Eigen::MatrixXcd a = p.h.adjoint() * p.h;
    a.diagonal().array() += p.noise_var;
    const Eigen::VectorXcd b = p.h.adjoint() * p.y;
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success) throw ConditioningError("lmmse_equalize: Cholesky failed");
    Eigen::VectorXcd x = llt.solve(b);
    if (!x.allFinite()) throw ConditioningError("lmmse_equalize: non-finite estimate");
    return x;
}

Eigen::VectorXcd zero_forcing(const DetectionProblem& p) {
    p.validate();
    const Eigen::MatrixXcd a = p.h.adjoint() * p.h;
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success) throw ConditioningError("zero_forcing: H^H H is not positive definite");
    Eigen::VectorXcd x = llt.solve(p.h.adjoint() * p.y);
    if (!x.allFinite()) throw ConditioningError("zero_forcing: non-finite estimate");
    return x;
}

double excluded_energy(const Eigen::MatrixXcd& h, const BandSpec& band) {
    double total = 0.0, out = 0.0;
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            const double v = std::norm(h(r, c));
            total += v;
            if (!band.contains(r, c)) out += v;
        }
    }
    return total > 0.0 ? out / total : 0.0;
}

Eigen::MatrixXcd truncate_to_band(const Eigen::MatrixXcd& h, const BandSpec& band) {
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, c + band.center - band.halfwidth);
        const Eigen::Index hi = std::min<Eigen::Index>(h.rows() - 1, c + band.center + band.halfwidth);
        for (Eigen::Index r = lo; r <= hi; ++r) t(r, c) = h(r, c);
    }
    return t;
}

Eigen::MatrixXcd to_lower_band(const Eigen::MatrixXcd& a, int kd) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXcd ab = Eigen::MatrixXcd::Zero(n, kd + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index d = 0; d <= std::min<Eigen::Index>(kd, i); ++d) ab(i, d) = a(i, i - d);
    }
    return ab;
}

Eigen::VectorXcd solve_banded_hpd(const Eigen::MatrixXcd& ab, const Eigen::VectorXcd& b) {
    const Eigen::Index n = ab.rows();
    const Eigen::Index w = ab.cols() - 1;
    if (b.size() != n || w < 0) throw std::invalid_argument("solve_banded_hpd: dimension mismatch");
    // In-place style Cholesky on band storage: l(i, d) = L(i, i - d).
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n, w + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j0 = std::max<Eigen::Index>(0, i - w);
        for (Eigen::Index j = j0; j <= i; ++j) {
            Complex s = ab(i, i - j);
            const Eigen::Index k0 = std::max<Eigen::Index>(j0, j - w);
            for (Eigen::Index k = k0; k < j; ++k) s -= l(i, i - k) * std::conj(l(j, j - k));
            if (j == i) {
                if (!(s.real() > 0.0) || !std::isfinite(s.real())) {
                    std::ostringstream os;
                    os << "solve_banded_hpd: non-positive pivot at " << i;
                    throw ConditioningError(os.str());
                }
                l(i, 0) = std::sqrt(s.real());
            } else {
                l(i, i - j) = s / l(j, 0).real();
            }
        }
    }
    Eigen::VectorXcd z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Complex s = b(i);
        for (Eigen::Index k = std::max<Eigen::Index>(0, i - w); k < i; ++k) s -= l(i, i - k) * z(k);
        z(i) = s / l(i, 0).real();
    }
    Eigen::VectorXcd x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        Complex s = z(i);
        for (Eigen::Index k = i + 1; k <= std::min(n - 1, i + w); ++k) s -= std::conj(l(k, k - i)) * x(k);
        x(i) = s / l(i, 0).real();
    }
    return x;
}

Eigen::VectorXcd lmmse_banded(const DetectionProblem& p, const BandSpec& band, double max_excluded) {
    p.validate();
    if (band.halfwidth < 0) throw std::invalid_argument("lmmse_banded: negative halfwidth");
    const double excl = excluded_energy(p.h, band);
    if (excl > max_excluded) {
        std::ostringstream os;
        os << "lmmse_banded: excluded energy fraction " << excl << " exceeds " << max_excluded;
        throw BandAssumptionError(os.str(), excl);
    }
    const Eigen::Index N = p.h.rows(), M = p.h.cols();
    // Half-bandwidth of Ht^H Ht, never more than the matrix itself.
    const Eigen::Index kd = std::min<Eigen::Index>(2 * band.halfwidth, M - 1);
    auto row_lo = [&](Eigen::Index c) { return std::max<Eigen::Index>(0, c + band.center - band.halfwidth); };
    auto row_hi = [&](Eigen::Index c) { return std::min<Eigen::Index>(N - 1, c + band.center + band.halfwidth); };

    // Lower band of A = Ht^H Ht + N0 I and b = Ht^H y from in-band entries only.
    Eigen::MatrixXcd ab = Eigen::MatrixXcd::Zero(M, kd + 1);
    Eigen::VectorXcd b(M);
    for (Eigen::Index i = 0; i < M; ++i) {
        Complex bi{};
        for (Eigen::Index r = row_lo(i); r <= row_hi(i); ++r) bi += std::conj(p.h(r, i)) * p.y(r);
        b(i) = bi;
        for (Eigen::Index j = std::max<Eigen::Index>(0, i - kd); j <= i; ++j) {
            Complex s{};
            const Eigen::Index lo = std::max(row_lo(i), row_lo(j)), hi = std::min(row_hi(i), row_hi(j));
            for (Eigen::Index r = lo; r <= hi; ++r) s += std::conj(p.h(r, i)) * p.h(r, j);
            ab(i, i - j) = s;
        }
        ab(i, 0) += p.noise_var;
    }
    try {
        Eigen::VectorXcd x = solve_banded_hpd(ab, b);
        if (x.allFinite()) return x;
    } catch (const ConditioningError&) {
    }
    // Conditioning alarm: dense pivoted factorization of the same truncated system.
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(M, M);
    for (Eigen::Index i = 0; i < M; ++i) {
        for (Eigen::Index d = 0; d <= std::min(kd, i); ++d) {
            a(i, i - d) = ab(i, d);
            a(i - d, i) = std::conj(ab(i, d));
        }
    }
    Eigen::VectorXcd x = a.fullPivLu().solve(b);
    if (!x.allFinite()) throw ConditioningError("lmmse_banded: dense fallback failed");
    return x;
}

double ErrorCounts::ber() const {
    return bits_total ? static_cast<double>(bits_error) / static_cast<double>(bits_total) : 0.0;
}

double ErrorCounts::ser() const {
    return symbols_total ? static_cast<double>(symbols_error) / static_cast<double>(symbols_total) : 0.0;
}

ErrorCounts merge(const ErrorCounts& a, const ErrorCounts& b) {
    return {a.bits_total + b.bits_total, a.bits_error + b.bits_error, a.symbols_total + b.symbols_total,
            a.symbols_error + b.symbols_error, a.frames + b.frames};
}

ErrorCounts count_errors(std::span<const std::uint8_t> detected, std::span<const std::uint8_t> sent,
                         int bits_per_symbol) {
    if (detected.size() != sent.size()) throw std::invalid_argument("count_errors: length mismatch");
    if (bits_per_symbol < 1 || sent.size() % static_cast<std::size_t>(bits_per_symbol) != 0) {
        throw std::invalid_argument("count_errors: length not a multiple of bits_per_symbol");
    }
    ErrorCounts c;
    c.bits_total = sent.size();
    c.symbols_total = sent.size() / static_cast<std::size_t>(bits_per_symbol);
    c.frames = 1;
    for (std::size_t s = 0; s < c.symbols_total; ++s) {
        bool any = false;
        for (int j = 0; j < bits_per_symbol; ++j) {
            const std::size_t i = s * static_cast<std::size_t>(bits_per_symbol) + static_cast<std::size_t>(j);
            if ((detected[i] & 1u) != (sent[i] & 1u)) {
                ++c.bits_error;
                any = true;
            }
        }
        if (any) ++c.symbols_error;
    }
    return c;
}

} // namespace hfmc
