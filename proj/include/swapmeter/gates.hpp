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

#ifndef SWAPMETER_GATES_HPP
#define SWAPMETER_GATES_HPP

#include <cmath>
#include <numbers>

#include "swapmeter/linalg.hpp"

// Ancilla basis ordering is (|up>, |down>): index 0 is |up>, index 1 is |down>.
// The device space is ancilla (x) mode0 (x) mode1.

namespace swapmeter::gates {

inline constexpr std::size_t kUp = 0;
inline constexpr std::size_t kDown = 1;

/// Mode that the controlled phase shift acts on by default. With the
/// beamsplitter generator a0^dag a1 - a1^dag a0, conjugating a pi phase on
/// mode 1 gives exactly the swap; on mode 0 it gives (-1)^N times the swap.
inline constexpr std::size_t kDefaultCpsMode = 1;

inline CompositeSpace device_space(std::size_t cutoff) { return CompositeSpace{2, cutoff, cutoff}; }

/// The ancilla rotation |up> -> (|up> + |down>)/sqrt2, |down> -> (|down> - |up>)/sqrt2.
///
/// This is a real rotation by pi/4, not the symmetric Hadamard: applying it
/// twice maps |up> -> |down> and |down> -> -|up>.
inline UnitaryGate hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix m(2, 2);
    m << s, -s,  //
        s, s;
    return UnitaryGate(CompositeSpace({2}), m);
}

/// |up> -> e^{i psi}|up>, |down> -> |down>.
inline UnitaryGate phase_shift(double psi) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = std::exp(kI * psi);
    m(1, 1) = 1.0;
    return UnitaryGate(CompositeSpace({2}), m);
}

/// Hermitian h with exp(-i h pi/4) = exp[pi/4 (a0^dag a1 - a1^dag a0)],
/// built from truncated annihilation operators on {D, D}.
inline CMatrix beamsplitter_generator(std::size_t cutoff) {
    const CMatrix a = annihilation(cutoff);
    const CMatrix id = CMatrix::Identity(a.rows(), a.cols());
    const CMatrix a0 = tensor(a, id);
    const CMatrix a1 = tensor(id, a);
    return kI * (a0.adjoint() * a1 - a1.adjoint() * a0);
}

/// 50:50 coupling exp[pi/4 (a0^dag a1 - a1^dag a0)] on the truncated two-mode
/// space. Exact on sectors with total photon number <= D-1.
inline UnitaryGate beamsplitter(std::size_t cutoff) {
    if (cutoff < 2) {
        throw DomainError("beamsplitter: cutoff must be >= 2");
    }
    return exp_unitary(beamsplitter_generator(cutoff), std::numbers::pi / 4.0, CompositeSpace{cutoff, cutoff});
}

/// exp(i theta n) on one mode.
inline UnitaryGate number_phase(double theta, std::size_t cutoff) {
    if (cutoff < 2) {
        throw DomainError("number_phase: cutoff must be >= 2");
    }
    CVector diag(static_cast<Eigen::Index>(cutoff));
    for (Eigen::Index n = 0; n < diag.size(); ++n) {
        diag(n) = std::exp(kI * theta * static_cast<double>(n));
    }
    return UnitaryGate(CompositeSpace({cutoff}), diag.asDiagonal());
}

/// exp(i pi n |up><up|) on ancilla (x) one mode, space {2, D}.
inline UnitaryGate cps(std::size_t cutoff) {
    if (cutoff < 2) {
        throw DomainError("cps: cutoff must be >= 2");
    }
    const auto d = static_cast<Eigen::Index>(cutoff);
    CVector diag = CVector::Ones(2 * d);
    for (Eigen::Index n = 1; n < d; n += 2) {
        diag(n) = -1.0;  // ancilla |up> block occupies indices 0..D-1
    }
    return UnitaryGate(CompositeSpace{2, cutoff}, diag.asDiagonal());
}

/// Controlled phase shift placed on the device space {2, D, D}.
inline UnitaryGate cps(std::size_t cutoff, std::size_t target_mode) {
    if (target_mode > 1) {
        throw DimensionError("cps: target mode must be 0 or 1");
    }
    return embed(cps(cutoff), device_space(cutoff), {0, 1 + target_mode});
}

/// |down>|a,b> -> |down>|a,b>, |up>|a,b> -> |up>|b,a> for all Fock levels.
inline UnitaryGate controlled_swap_ideal(std::size_t cutoff) {
    if (cutoff < 2) {
        throw DomainError("controlled_swap_ideal: cutoff must be >= 2");
    }
    const std::size_t dd = cutoff * cutoff;
    const auto n = static_cast<Eigen::Index>(2 * dd);
    CMatrix m = CMatrix::Zero(n, n);
    for (std::size_t a = 0; a < cutoff; ++a) {
        for (std::size_t b = 0; b < cutoff; ++b) {
            const std::size_t ab = a * cutoff + b;
            const std::size_t ba = b * cutoff + a;
            m(static_cast<Eigen::Index>(kUp * dd + ba), static_cast<Eigen::Index>(kUp * dd + ab)) = 1.0;
            m(static_cast<Eigen::Index>(kDown * dd + ab), static_cast<Eigen::Index>(kDown * dd + ab)) = 1.0;
        }
    }
    return UnitaryGate(device_space(cutoff), m);
}

/// U_R^dag CPS U_R assembled from the truncated gates.
inline UnitaryGate controlled_swap_physical(std::size_t cutoff, std::size_t target_mode = kDefaultCpsMode) {
    const CompositeSpace space = device_space(cutoff);
    const UnitaryGate bs = embed(beamsplitter(cutoff), space, {1, 2});
    return bs.adjoint() * cps(cutoff, target_mode) * bs;
}

/// The flip (swap) operator: S (x (x) y) = y (x) x on C^d (x) C^d.
inline CMatrix flip_operator(std::size_t d) {
    if (d < 2) {
        throw DomainError("flip_operator: dimension must be >= 2");
    }
    const auto n = static_cast<Eigen::Index>(d * d);
    CMatrix s = CMatrix::Zero(n, n);
    for (std::size_t x = 0; x < d; ++x) {
        for (std::size_t y = 0; y < d; ++y) {
            s(static_cast<Eigen::Index>(y * d + x), static_cast<Eigen::Index>(x * d + y)) = 1.0;
        }
    }
    return s;
}

struct PovmPair {
    CMatrix pi_plus;
    CMatrix pi_minus;

    CMatrix dichotomic() const { return pi_plus - pi_minus; }
};

/// Projectors onto the symmetric and antisymmetric subspaces, assembled from
/// |+-, m, n> = (|n>|m> +- |m>|n>)/sqrt2 in the computational basis. The
/// n == m terms enter pi_plus as |n n><n n|.
inline PovmPair povm_projectors(std::size_t d) {
    if (d < 2) {
        throw DomainError("povm_projectors: dimension must be >= 2");
    }
    const auto n = static_cast<Eigen::Index>(d * d);
    PovmPair out{CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t hi = 0; hi < d; ++hi) {
        for (std::size_t lo = 0; lo <= hi; ++lo) {
            const auto nm = static_cast<Eigen::Index>(hi * d + lo);
            const auto mn = static_cast<Eigen::Index>(lo * d + hi);
            if (hi == lo) {
                out.pi_plus(nm, nm) += 1.0;
                continue;
            }
            CVector plus = CVector::Zero(n);
            CVector minus = CVector::Zero(n);
            plus(nm) = s;
            plus(mn) = s;
            minus(nm) = s;
            minus(mn) = -s;
            out.pi_plus += plus * plus.adjoint();
            out.pi_minus += minus * minus.adjoint();
        }
    }
    return out;
}

}  // namespace swapmeter::gates

#endif  // SWAPMETER_GATES_HPP
