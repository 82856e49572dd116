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

#ifndef SWAPMETER_STATES_HPP
#define SWAPMETER_STATES_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include "swapmeter/linalg.hpp"
#include "swapmeter/random.hpp"

// State constructors. Bosonic modes are truncated to Fock levels
// 0..cutoff-1; coherent and thermal states are renormalized after truncation.

namespace swapmeter::states {

inline void check_cutoff(std::size_t cutoff) {
    if (cutoff < 2) {
        throw DomainError("Fock cutoff must be >= 2, got " + std::to_string(cutoff));
    }
}

inline DensityMatrix projector(const CVector &v, CompositeSpace space) {
    return DensityMatrix::unchecked(std::move(space), v * v.adjoint());
}

/// Normalized state vector -> |v><v|. Throws on a zero vector.
inline DensityMatrix pure(const CVector &v, CompositeSpace space) {
    if (static_cast<std::size_t>(v.size()) != space.total()) {
        throw DimensionError("pure: vector length does not match space " + space.to_string());
    }
    const double norm = v.norm();
    if (!(norm > 1e-300) || !std::isfinite(norm)) {
        throw DomainError("pure: vector has zero or non-finite norm");
    }
    return projector(v / norm, std::move(space));
}

inline DensityMatrix pure(const CVector &v) { return pure(v, CompositeSpace({static_cast<std::size_t>(v.size())})); }

inline CVector basis_vector(std::size_t index, std::size_t dim) {
    if (index >= dim) {
        throw DomainError("basis index " + std::to_string(index) + " out of range for dimension " +
                          std::to_string(dim));
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

inline CVector fock_vector(std::size_t n, std::size_t cutoff) {
    check_cutoff(cutoff);
    return basis_vector(n, cutoff);
}

inline DensityMatrix fock(std::size_t n, std::size_t cutoff) {
    check_cutoff(cutoff);
    return projector(fock_vector(n, cutoff), CompositeSpace({cutoff}));
}

/// N * sum_{n<D} alpha^n / sqrt(n!) |n>, with N restoring unit norm.
inline CVector coherent_vector(Complex alpha, std::size_t cutoff) {
    check_cutoff(cutoff);
    CVector v(static_cast<Eigen::Index>(cutoff));
    v(0) = 1.0;
    for (Eigen::Index n = 1; n < v.size(); ++n) {
        v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    return v / v.norm();
}

inline DensityMatrix coherent(Complex alpha, std::size_t cutoff) {
    check_cutoff(cutoff);
    return projector(coherent_vector(alpha, cutoff), CompositeSpace({cutoff}));
}

/// Geometric photon-number distribution nbar^n / (1+nbar)^{n+1}, renormalized.
inline DensityMatrix thermal(double nbar, std::size_t cutoff) {
    check_cutoff(cutoff);
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
        throw DomainError("thermal: mean photon number must be finite and >= 0");
    }
    const auto d = static_cast<Eigen::Index>(cutoff);
    RVector p(d);
    const double ratio = nbar / (1.0 + nbar);
    p(0) = 1.0 / (1.0 + nbar);
    for (Eigen::Index n = 1; n < d; ++n) {
        p(n) = p(n - 1) * ratio;
    }
    p /= p.sum();
    return DensityMatrix::unchecked(CompositeSpace({cutoff}), p.cast<Complex>().asDiagonal());
}

inline DensityMatrix maximally_mixed(CompositeSpace space) {
    const auto n = static_cast<Eigen::Index>(space.total());
    return DensityMatrix::unchecked(std::move(space), CMatrix::Identity(n, n) / static_cast<double>(n));
}

inline DensityMatrix maximally_mixed(std::size_t dim) { return maximally_mixed(CompositeSpace({dim})); }

/// (|01> - |10>) / sqrt(2) on two qubits.
inline CVector singlet_vector() {
    CVector v = CVector::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return v;
}

inline DensityMatrix bell_singlet() { return projector(singlet_vector(), CompositeSpace{2, 2}); }

/// (|01><01| + |10><10|) / 2.
inline DensityMatrix classical_correlated() {
    CMatrix m = CMatrix::Zero(4, 4);
    m(1, 1) = 0.5;
    m(2, 2) = 0.5;
    return DensityMatrix::unchecked(CompositeSpace{2, 2}, m);
}

/// p * singlet + (1 - p) * I/4.
inline DensityMatrix werner(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("werner: weight must lie in [0, 1]");
    }
    const CMatrix m = p * bell_singlet().matrix() + (1.0 - p) * CMatrix::Identity(4, 4) / 4.0;
    return DensityMatrix::unchecked(CompositeSpace{2, 2}, m);
}

/// Random mixed state rho = G G^dag / Tr(G G^dag) with G a complex Gaussian
/// (dim x rank) matrix. Deterministic in `seed`.
inline DensityMatrix ginibre_mixed(CompositeSpace space, std::size_t rank, std::uint64_t seed) {
    if (rank < 1) {
        throw DomainError("ginibre_mixed: rank must be >= 1");
    }
    const auto d = static_cast<Eigen::Index>(space.total());
    Engine g = make_engine(seed);
    CMatrix gm(d, static_cast<Eigen::Index>(rank));
    for (Eigen::Index j = 0; j < gm.cols(); ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const double re = standard_normal(g);
            const double im = standard_normal(g);
            gm(i, j) = Complex(re, im);
        }
    }
    CMatrix rho = gm * gm.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix::unchecked(std::move(space), rho);
}

inline DensityMatrix ginibre_mixed(std::size_t dim, std::size_t rank, std::uint64_t seed) {
    return ginibre_mixed(CompositeSpace({dim}), rank, seed);
}

/// Haar-random pure state vector (normalized complex Gaussian).
inline CVector random_pure_vector(std::size_t dim, std::uint64_t seed) {
    Engine g = make_engine(seed, 1);
    CVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = standard_normal(g);
        const double im = standard_normal(g);
        v(i) = Complex(re, im);
    }
    return v / v.norm();
}

/// Zero-pad a single-system state into a larger Fock cutoff.
inline DensityMatrix pad_to_cutoff(const DensityMatrix &rho, std::size_t cutoff) {
    if (rho.space().num_subsystems() != 1 || rho.dim() > cutoff) {
        throw DimensionError("pad_to_cutoff: need a single system of dimension <= cutoff");
    }
    const auto d = static_cast<Eigen::Index>(cutoff);
    CMatrix m = CMatrix::Zero(d, d);
    const auto n = static_cast<Eigen::Index>(rho.dim());
    m.topLeftCorner(n, n) = rho.matrix();
    return DensityMatrix::unchecked(CompositeSpace({cutoff}), m);
}

}  // namespace swapmeter::states

#endif  // SWAPMETER_STATES_HPP
