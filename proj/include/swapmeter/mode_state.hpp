// Copyright 2026 The swapmeter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWAPMETER_MODE_STATE_HPP
#define SWAPMETER_MODE_STATE_HPP

#include <array>
#include <cmath>
#include <variant>
#include <vector>

#include "swapmeter/linalg.hpp"

namespace swapmeter {

/// One term w * (first (x) second) of a separable decomposition.
struct ProductTerm {
    double weight;
    DensityMatrix first;
    DensityMatrix second;
};

namespace detail {

/// S^l M S^r for the flip S on C^d (x) C^d, by index permutation.
inline CMatrix swap_sandwich(const CMatrix &m, std::size_t d, bool left, bool right) {
    const auto n = static_cast<Eigen::Index>(d * d);
    auto flip = [d](Eigen::Index i) {
        const auto u = static_cast<std::size_t>(i);
        return static_cast<Eigen::Index>((u % d) * d + u / d);
    };
    CMatrix out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index sj = right ? flip(j) : j;
        for (Eigen::Index i = 0; i < n; ++i) {
            out(i, j) = m(left ? flip(i) : i, sj);
        }
    }
    return out;
}

}  // namespace detail

/// State of the two probed modes. Held either as a dense joint density
/// matrix or as a finite mixture of product states; the factorized form
/// keeps uncorrelated inputs at O(D^2) memory regardless of cutoff.
class ModeState {
   public:
    /// Dense joint state; the space must have exactly two subsystems.
    static ModeState joint(DensityMatrix rho) {
        if (rho.space().num_subsystems() != 2) {
            throw DimensionError("joint mode state needs exactly two subsystems, got " + rho.space().to_string());
        }
        return ModeState(std::move(rho));
    }

    /// rho_a (x) rho_b. Each factor is treated as a single system.
    static ModeState product(const DensityMatrix &a, const DensityMatrix &b) {
        return mixture({ProductTerm{1.0, a, b}});
    }

    static ModeState mixture(std::vector<ProductTerm> terms) {
        if (terms.empty()) {
            throw DomainError("product mixture needs at least one term");
        }
        double total = 0.0;
        for (ProductTerm &t : terms) {
            if (!(t.weight >= 0.0)) {
                throw DomainError("product mixture weights must be non-negative");
            }
            total += t.weight;
            t.first = t.first.flattened();
            t.second = t.second.flattened();
            if (t.first.dim() != terms.front().first.dim() || t.second.dim() != terms.front().second.dim()) {
                throw DimensionError("product mixture terms have inconsistent dimensions");
            }
        }
        if (std::abs(total - 1.0) > kAlgebraTol) {
            throw DomainError("product mixture weights must sum to 1");
        }
        return ModeState(std::move(terms));
    }

    bool factorized() const { return std::holds_alternative<std::vector<ProductTerm>>(rep_); }

    const DensityMatrix *dense_if_joint() const { return std::get_if<DensityMatrix>(&rep_); }
    const std::vector<ProductTerm> *terms() const { return std::get_if<std::vector<ProductTerm>>(&rep_); }

    std::array<std::size_t, 2> local_dims() const {
        if (const auto *rho = dense_if_joint()) {
            return {rho->space().dims()[0], rho->space().dims()[1]};
        }
        const ProductTerm &t = terms()->front();
        return {t.first.dim(), t.second.dim()};
    }

    CompositeSpace space() const {
        const auto d = local_dims();
        return CompositeSpace{d[0], d[1]};
    }

    /// Common local dimension; throws when the two modes differ.
    std::size_t cutoff() const {
        const auto d = local_dims();
        if (d[0] != d[1]) {
            throw DimensionError("modes have different dimensions " + std::to_string(d[0]) + " and " +
                                 std::to_string(d[1]));
        }
        return d[0];
    }

    double trace() const {
        if (const auto *rho = dense_if_joint()) {
            return rho->matrix().trace().real();
        }
        double tr = 0.0;
        for (const ProductTerm &t : *terms()) {
            tr += t.weight * t.first.matrix().trace().real() * t.second.matrix().trace().real();
        }
        return tr;
    }

    /// Tr(rho S) with S the flip operator. Real for Hermitian rho.
    double swap_expectation() const {
        const std::size_t d = cutoff();
        if (const auto *rho = dense_if_joint()) {
            Complex acc = 0.0;
            const CMatrix &m = rho->matrix();
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b) {
                    acc += m(static_cast<Eigen::Index>(a * d + b), static_cast<Eigen::Index>(b * d + a));
                }
            }
            return acc.real();
        }
        double acc = 0.0;
        for (const ProductTerm &t : *terms()) {
            // Tr((X (x) Y) S) = Tr(X Y)
            acc += t.weight * (t.first.matrix().cwiseProduct(t.second.matrix().transpose())).sum().real();
        }
        return acc;
    }

    /// S rho S.
    ModeState swapped() const {
        if (const auto *rho = dense_if_joint()) {
            const auto d = local_dims();
            if (d[0] != d[1]) {
                return joint(
                    DensityMatrix::unchecked(CompositeSpace{d[1], d[0]}, swap_unequal(rho->matrix(), d[0], d[1])));
            }
            return joint(DensityMatrix::unchecked(rho->space(), detail::swap_sandwich(rho->matrix(), d[0], true, true)));
        }
        std::vector<ProductTerm> out;
        for (const ProductTerm &t : *terms()) {
            out.push_back({t.weight, t.second, t.first});
        }
        return ModeState(std::move(out));
    }

    /// (rho + S rho S) / 2.
    ModeState symmetrized() const {
        const std::size_t d = cutoff();
        if (const auto *rho = dense_if_joint()) {
            const CMatrix m = 0.5 * (rho->matrix() + detail::swap_sandwich(rho->matrix(), d, true, true));
            return joint(DensityMatrix::unchecked(rho->space(), m));
        }
        std::vector<ProductTerm> out;
        for (const ProductTerm &t : *terms()) {
            out.push_back({0.5 * t.weight, t.first, t.second});
            out.push_back({0.5 * t.weight, t.second, t.first});
        }
        return ModeState(std::move(out));
    }

    /// Reduced state of mode k (0 or 1).
    DensityMatrix marginal(std::size_t k) const {
        if (k > 1) {
            throw DimensionError("mode index must be 0 or 1");
        }
        if (const auto *rho = dense_if_joint()) {
            return partial_trace(*rho, {k});
        }
        const std::size_t d = local_dims()[k];
        CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (const ProductTerm &t : *terms()) {
            const DensityMatrix &kept = k == 0 ? t.first : t.second;
            const DensityMatrix &other = k == 0 ? t.second : t.first;
            m += t.weight * other.matrix().trace() * kept.matrix();
        }
        return DensityMatrix::unchecked(CompositeSpace({d}), m);
    }

    DensityMatrix dense() const {
        if (const auto *rho = dense_if_joint()) {
            return *rho;
        }
        const auto d = local_dims();
        const auto n = static_cast<Eigen::Index>(d[0] * d[1]);
        CMatrix m = CMatrix::Zero(n, n);
        for (const ProductTerm &t : *terms()) {
            m += t.weight * tensor(t.first.matrix(), t.second.matrix());
        }
        return DensityMatrix::unchecked(CompositeSpace{d[0], d[1]}, m);
    }

   private:
    explicit ModeState(DensityMatrix rho) : rep_(std::move(rho)) {}
    explicit ModeState(std::vector<ProductTerm> terms) : rep_(std::move(terms)) {}

    static CMatrix swap_unequal(const CMatrix &m, std::size_t d0, std::size_t d1) {
        const auto n = static_cast<Eigen::Index>(d0 * d1);
        CMatrix out(n, n);
        auto map = [d0, d1](Eigen::Index i) {  // index in {d1,d0} -> index in {d0,d1}
            const auto u = static_cast<std::size_t>(i);
            const std::size_t y = u / d0, x = u % d0;
            return static_cast<Eigen::Index>(x * d1 + y);
        };
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                out(i, j) = m(map(i), map(j));
            }
        }
        return out;
    }

    std::variant<DensityMatrix, std::vector<ProductTerm>> rep_;
};

/// Probability that the two modes hold D or more photons in total, i.e. the
/// weight outside the sectors where the truncated beamsplitter is exact.
inline double out_of_safe_sector_weight(const ModeState &state) {
    const std::size_t d = state.cutoff();
    double safe = 0.0;
    if (const auto *rho = state.dense_if_joint()) {
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; a + b < d; ++b) {
                const auto i = static_cast<Eigen::Index>(a * d + b);
                safe += rho->matrix()(i, i).real();
            }
        }
    } else {
        for (const ProductTerm &t : *state.terms()) {
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; a + b < d; ++b) {
                    safe += t.weight * t.first.matrix()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)).real() *
                            t.second.matrix()(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real();
                }
            }
        }
    }
    return std::max(0.0, state.trace() - safe);
}

}  // namespace swapmeter

#endif  // SWAPMETER_MODE_STATE_HPP
