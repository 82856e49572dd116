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

#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "swapmeter/gates.hpp"
#include "swapmeter/states.hpp"

namespace sm = swapmeter;
namespace gt = swapmeter::gates;
using sm::CMatrix;
using sm::Complex;
using sm::CVector;

namespace {

constexpr double kPi = std::numbers::pi;

/// Projector onto two-mode Fock states with a + b <= D - 1.
CMatrix safe_projector(Eigen::Index d) {
    CMatrix p = CMatrix::Zero(d * d, d * d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; a + b < d; ++b) p(a * d + b, a * d + b) = 1.0;
    return p;
}

/// Total photon number a + b on {D, D}, as a diagonal matrix.
CMatrix total_number(Eigen::Index d) {
    CMatrix n = CMatrix::Zero(d * d, d * d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) n(a * d + b, a * d + b) = static_cast<double>(a + b);
    return n;
}

CVector fock2(Eigen::Index a, Eigen::Index b, Eigen::Index d) {
    CVector v = CVector::Zero(d * d);
    v(a * d + b) = 1.0;
    return v;
}

}  // namespace

// ---- ancilla gates --------------------------------------------------------

TEST(Hadamard, MapsUpToEqualSuperposition) {
    const CMatrix h = gt::hadamard().matrix();
    const double s = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(h(gt::kUp, gt::kUp) - s), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(h(gt::kDown, gt::kUp) - s), 0.0, 1e-15);
    // |down> -> (|down> - |up>)/sqrt2
    EXPECT_NEAR(std::abs(h(gt::kUp, gt::kDown) + s), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(h(gt::kDown, gt::kDown) - s), 0.0, 1e-15);
}

TEST(Hadamard, TwiceIsQuarterTurn) {
    const CMatrix h2 = gt::hadamard().matrix() * gt::hadamard().matrix();
    CMatrix expected(2, 2);
    expected << 0, -1, 1, 0;
    EXPECT_LE(oracle::max_abs_diff(h2, expected), 1e-15);
    // H^2 |up> = |down>
    EXPECT_NEAR(std::abs(h2(gt::kDown, gt::kUp) - 1.0), 0.0, 1e-15);
    EXPECT_LE(sm::unitarity_error(gt::hadamard().matrix()), 1e-15);
}

TEST(PhaseShift, Values) {
    EXPECT_LE(oracle::max_abs_diff(gt::phase_shift(0.0).matrix(), CMatrix::Identity(2, 2)), 0.0);
    CMatrix minus = CMatrix::Identity(2, 2);
    minus(0, 0) = -1.0;
    EXPECT_LE(oracle::max_abs_diff(gt::phase_shift(kPi).matrix(), minus), 1e-15);
    EXPECT_LE(oracle::max_abs_diff(gt::phase_shift(0.4).matrix() * gt::phase_shift(1.9).matrix(),
                                   gt::phase_shift(2.3).matrix()),
              1e-15);
}

// ---- beamsplitter ---------------------------------------------------------

TEST(Beamsplitter, VacuumInvariant) {
    const CMatrix u = gt::beamsplitter(5).matrix();
    const CVector out = u * fock2(0, 0, 5);
    EXPECT_NEAR(std::abs(out(0) - 1.0), 0.0, 1e-12);
}

TEST(Beamsplitter, SinglePhotonSplitsEvenly) {
    // exp[pi/4 (a0^dag a1 - a1^dag a0)] |1,0> = (|1,0> - |0,1>)/sqrt2
    const Eigen::Index d = 4;
    const CVector out = gt::beamsplitter(d).matrix() * fock2(1, 0, d);
    const double s = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(out(1 * d + 0) - s), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(out(0 * d + 1) + s), 0.0, 1e-12);
    EXPECT_NEAR(out.norm(), 1.0, 1e-12);
}

TEST(Beamsplitter, SquareSwapsSafeSectorUpToPhases) {
    const Eigen::Index d = 8;
    const CMatrix u2 = gt::beamsplitter(d).matrix() * gt::beamsplitter(d).matrix();
    oracle::Random rng(30);
    // Single-mode supports n <= (D - 1)/2 = 3.
    for (int trial = 0; trial < 5; ++trial) {
        CVector psi = CVector::Zero(d), phi = CVector::Zero(d);
        psi.head(4) = rng.pure(4);
        phi.head(4) = rng.pure(4);
        const CVector out = u2 * oracle::kron(psi, phi);
        // U_R^2 = exp[pi/2 (a0^dag a1 - h.c.)] maps a0 -> a1, a1 -> -a0, so
        // |n>|m> -> (-1)^n |m>|n>.
        CVector psi_signed = psi;
        for (Eigen::Index n = 0; n < d; ++n) psi_signed(n) *= (n % 2 == 0) ? 1.0 : -1.0;
        const CVector expected = oracle::kron(phi, psi_signed);
        EXPECT_LE((out - expected).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_NEAR(std::norm(expected.dot(out)), 1.0, 1e-10);
    }
}

TEST(Beamsplitter, ConservesTotalNumberOnSafeSectors) {
    for (Eigen::Index d : {2, 4, 7}) {
        const CMatrix u = gt::beamsplitter(d).matrix();
        const CMatrix p = safe_projector(d);
        const CMatrix n = total_number(d);
        EXPECT_LE(sm::max_abs((u * n - n * u) * p), 1e-10) << "d = " << d;
        EXPECT_LE(sm::unitarity_error(u), 1e-10);
    }
}

// ---- CPS, number phase ----------------------------------------------------

TEST(Cps, DownBranchUnchangedUpBranchSigns) {
    const std::size_t d = 5;
    const CMatrix c = gt::cps(d).matrix();
    const auto n = static_cast<Eigen::Index>(d);
    for (Eigen::Index k = 0; k < n; ++k) {
        EXPECT_EQ(c(gt::kDown * n + k, gt::kDown * n + k), Complex(1.0));
        EXPECT_EQ(c(gt::kUp * n + k, gt::kUp * n + k), Complex(k % 2 == 0 ? 1.0 : -1.0));
    }
    EXPECT_LE(oracle::max_abs_diff(c * c, CMatrix::Identity(2 * n, 2 * n)), 0.0);
    EXPECT_LE(sm::max_abs(c - CMatrix(c.diagonal().asDiagonal())), 0.0);
}

TEST(Cps, RejectsBadTarget) { EXPECT_THROW(gt::cps(3, 2), sm::DimensionError); }

TEST(NumberPhase, Values) {
    EXPECT_LE(oracle::max_abs_diff(gt::number_phase(0.0, 4).matrix(), CMatrix::Identity(4, 4)), 0.0);
    const CMatrix pi_phase = gt::number_phase(kPi, 6).matrix();
    const CMatrix up_block = gt::cps(6).matrix().topLeftCorner(6, 6);
    EXPECT_LE(oracle::max_abs_diff(pi_phase, up_block), 1e-15);
    EXPECT_NEAR(std::abs(gt::number_phase(kPi / 2, 4).matrix()(2, 2) + 1.0), 0.0, 1e-15);
}

// ---- controlled swap ------------------------------------------------------

TEST(ControlledSwapIdeal, DownIsIdentityUpSwaps) {
    const Eigen::Index d = 4;
    const CMatrix u = gt::controlled_swap_ideal(d).matrix();
    const Eigen::Index dd = d * d;
    EXPECT_LE(oracle::max_abs_diff(u.block(gt::kDown * dd, gt::kDown * dd, dd, dd), CMatrix::Identity(dd, dd)), 0.0);
    EXPECT_LE(oracle::max_abs_diff(u.block(gt::kUp * dd, gt::kUp * dd, dd, dd), oracle::flip(d)), 0.0);
    EXPECT_LE(sm::max_abs(u.block(0, dd, dd, dd)), 0.0);
}

TEST(ControlledSwapIdeal, SwapsArbitraryProductStates) {
    oracle::Random rng(31);
    const Eigen::Index d = 3;
    const CVector psi = rng.pure(d), phi = rng.pure(d);
    CVector up = CVector::Zero(2);
    up(gt::kUp) = 1.0;
    const CVector out = gt::controlled_swap_ideal(d).matrix() * oracle::kron(up, oracle::kron(psi, phi));
    EXPECT_LE((out - oracle::kron(up, oracle::kron(phi, psi))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ControlledSwapIdeal, CovariantUnderCollectiveRotation) {
    oracle::Random rng(32);
    const Eigen::Index d = 3;
    const CMatrix w = rng.unitary(d);
    const CMatrix ww = oracle::kron(CMatrix::Identity(2, 2), oracle::kron(w, w));
    const CMatrix x = gt::controlled_swap_ideal(d).matrix();
    CMatrix anc = CMatrix::Zero(2, 2);
    anc(gt::kUp, gt::kUp) = 1.0;
    const CMatrix in = oracle::kron(anc, oracle::kron(rng.density(d), rng.density(d)));
    // Rotating before and undoing after leaves the channel output unchanged.
    const CMatrix direct = x * in * x.adjoint();
    const CMatrix rotated = ww.adjoint() * x * ww * in * ww.adjoint() * x.adjoint() * ww;
    EXPECT_LE(oracle::max_abs_diff(direct, rotated), 1e-12);
}

TEST(ControlledSwapPhysical, TargetModeOneEqualsIdealOnSafeSectors) {
    const Eigen::Index d = 10;
    const CMatrix p = oracle::kron(CMatrix::Identity(2, 2), safe_projector(d));
    const CMatrix ideal = gt::controlled_swap_ideal(d).matrix();
    const CMatrix phys = gt::controlled_swap_physical(d, 1).matrix();
    EXPECT_LE(sm::max_abs((phys - ideal) * p), 1e-9);
}

TEST(ControlledSwapPhysical, TargetModeZeroAddsParitySign) {
    // With the phase on mode 0 the up branch becomes (-1)^N S on the sector
    // with N photons, which flips the fringe of odd-N inputs.
    const Eigen::Index d = 6, dd = d * d;
    const CMatrix p = safe_projector(d);
    const CMatrix phys0 = gt::controlled_swap_physical(d, 0).matrix();
    CMatrix parity = CMatrix::Zero(dd, dd);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) parity(a * d + b, a * d + b) = ((a + b) % 2 == 0) ? 1.0 : -1.0;
    const CMatrix up_block = phys0.block(gt::kUp * dd, gt::kUp * dd, dd, dd);
    EXPECT_LE(sm::max_abs((up_block - parity * oracle::flip(d)) * p), 1e-9);
    EXPECT_GT(sm::max_abs((up_block - oracle::flip(d)) * p), 0.5);
}

TEST(ControlledSwapPhysical, LeaksOutsideSafeSector) {
    const Eigen::Index d = 3, dd = d * d;
    const CMatrix phys = gt::controlled_swap_physical(d).matrix();
    const CMatrix ideal = gt::controlled_swap_ideal(d).matrix();
    const CMatrix unsafe = CMatrix::Identity(dd, dd) - safe_projector(d);
    EXPECT_GT(sm::max_abs((phys - ideal) * oracle::kron(CMatrix::Identity(2, 2), unsafe)), 1e-3);
}

// ---- flip operator and POVM ----------------------------------------------

TEST(Flip, TwoQubitSwapMatrix) {
    CMatrix swap = CMatrix::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    EXPECT_EQ(gt::flip_operator(2), swap);
}

TEST(Flip, MatchesBasisConstructionAndIsInvolutive) {
    for (std::size_t d : {2u, 3u, 5u}) {
        const CMatrix s = gt::flip_operator(d);
        const auto n = static_cast<Eigen::Index>(d * d);
        EXPECT_EQ(s, oracle::flip(static_cast<Eigen::Index>(d)));
        EXPECT_EQ(s * s, CMatrix::Identity(n, n));
        EXPECT_LE(sm::hermiticity_error(s), 0.0);
    }
}

TEST(Flip, SpectrumMultiplicities) {
    for (std::size_t d : {2u, 3u, 4u}) {
        const auto ev = oracle::eigenvalues(gt::flip_operator(d));
        std::size_t plus = 0, minus = 0;
        for (double x : ev) {
            if (std::abs(x - 1.0) < 1e-10) ++plus;
            if (std::abs(x + 1.0) < 1e-10) ++minus;
        }
        EXPECT_EQ(plus, d * (d + 1) / 2);
        EXPECT_EQ(minus, d * (d - 1) / 2);
    }
}

TEST(Povm, ProjectorInvariants) {
    for (std::size_t d : {2u, 3u, 4u}) {
        const gt::PovmPair p = gt::povm_projectors(d);
        const auto n = static_cast<Eigen::Index>(d * d);
        EXPECT_LE(oracle::max_abs_diff(p.pi_plus * p.pi_plus, p.pi_plus), 1e-10);
        EXPECT_LE(oracle::max_abs_diff(p.pi_minus * p.pi_minus, p.pi_minus), 1e-10);
        EXPECT_LE(sm::hermiticity_error(p.pi_plus), 1e-10);
        EXPECT_LE(sm::hermiticity_error(p.pi_minus), 1e-10);
        EXPECT_LE(oracle::max_abs_diff(p.pi_plus + p.pi_minus, CMatrix::Identity(n, n)), 1e-10);
        EXPECT_LE(sm::max_abs(p.pi_plus * p.pi_minus), 1e-12);
        EXPECT_LE(oracle::max_abs_diff(p.dichotomic(), oracle::flip(static_cast<Eigen::Index>(d))), 1e-10);
    }
}

TEST(Povm, QubitRanksAndSinglet) {
    const gt::PovmPair p = gt::povm_projectors(2);
    EXPECT_NEAR(p.pi_plus.trace().real(), 3.0, 1e-12);
    EXPECT_NEAR(p.pi_minus.trace().real(), 1.0, 1e-12);
    const CMatrix singlet = sm::states::bell_singlet().matrix();
    EXPECT_LE(oracle::max_abs_diff(p.pi_minus, singlet), 1e-12);
    EXPECT_NEAR((singlet * p.dichotomic()).trace().real(), -1.0, 1e-12);
}

TEST(Gates, DimensionErrors) {
    EXPECT_THROW(gt::beamsplitter(1), sm::DomainError);
    EXPECT_THROW(gt::number_phase(1.0, 1), sm::DomainError);
    EXPECT_THROW(gt::cps(1), sm::DomainError);
    EXPECT_THROW(gt::controlled_swap_ideal(1), sm::DomainError);
    EXPECT_THROW(gt::flip_operator(1), sm::DomainError);
    EXPECT_THROW(gt::povm_projectors(1), sm::DomainError);
}
