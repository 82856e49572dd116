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
#include "swapmeter/dynamics.hpp"
#include "swapmeter/protocol.hpp"
#include "swapmeter/states.hpp"

namespace sm = swapmeter;
namespace dy = swapmeter::dynamics;
namespace pr = swapmeter::protocol;
namespace st = swapmeter::states;
using sm::CMatrix;
using sm::Complex;
using sm::DensityMatrix;
using sm::ModeState;

namespace {

constexpr double kPi = std::numbers::pi;

/// Fourier visibility of the ion device computed from its own single-phase
/// runs.
double ion_visibility(const ModeState &modes, const dy::HamiltonianSpec &ion, std::size_t k = 8) {
    const auto phases = pr::uniform_phases(k);
    std::vector<double> down;
    for (double psi : phases) down.push_back(dy::ion_protocol_run(modes, psi, ion).p_down);
    return std::abs(pr::fringe_coefficient(down, phases));
}

CMatrix number_diag(Eigen::Index d) {
    CMatrix n = CMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

}  // namespace

// ---- Hamiltonians ---------------------------------------------------------

TEST(Hamiltonian, LinearCouplingAnnihilatesVacuum) {
    const CMatrix h = dy::build_hamiltonian(dy::HamiltonianSpec::linear_coupling(1.3, 4));
    EXPECT_LE(h.col(0).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE(sm::hermiticity_error(h), 1e-15);
}

TEST(Hamiltonian, DispersiveIsDiagonal) {
    const double kappa = 0.8;
    const Eigen::Index d = 5;
    const CMatrix h = dy::build_hamiltonian(dy::HamiltonianSpec::dispersive_cps(kappa, d));
    EXPECT_LE(sm::max_abs(h - CMatrix(h.diagonal().asDiagonal())), 0.0);
    for (Eigen::Index n = 0; n < d; ++n) {
        EXPECT_NEAR(h(sm::gates::kUp * d + n, sm::gates::kUp * d + n).real(), kappa * static_cast<double>(n), 1e-15);
        EXPECT_EQ(h(sm::gates::kDown * d + n, sm::gates::kDown * d + n), Complex(0.0));
    }
}

TEST(Hamiltonian, IonSquareIsDiagonal) {
    const double omega = 1.7;
    const Eigen::Index d = 4;
    const CMatrix h = dy::build_hamiltonian(dy::HamiltonianSpec::ion_qnd(omega, d));
    const CMatrix n = number_diag(d);
    const CMatrix expected = oracle::kron(CMatrix::Identity(2, 2), omega * omega * n * n);
    EXPECT_LE(oracle::max_abs_diff(h * h, expected), 1e-12);
}

TEST(Hamiltonian, SpecValidation) {
    auto bad = dy::HamiltonianSpec::linear_coupling(1.0, 3);
    bad.coupling = 0.0;
    EXPECT_THROW(dy::build_hamiltonian(bad), sm::DomainError);
    bad = dy::HamiltonianSpec::ion_qnd(1.0, 3);
    bad.interaction_time = -1.0;
    EXPECT_THROW(dy::realize_gate(bad), sm::DomainError);
    bad = dy::HamiltonianSpec::dispersive_cps(1.0, 3);
    bad.cutoff = 1;
    EXPECT_THROW(dy::build_hamiltonian(bad), sm::DomainError);
}

TEST(Hamiltonian, CavityKappa) {
    EXPECT_DOUBLE_EQ(dy::cavity_kappa(3.0, 1.5), 2.0);
    EXPECT_THROW(dy::cavity_kappa(1.0, 0.0), sm::DomainError);
}

// ---- realized gates -------------------------------------------------------

TEST(RealizeGate, LinearCouplingGivesBeamsplitter) {
    const auto spec = dy::HamiltonianSpec::linear_coupling(1.0, 8);
    EXPECT_NEAR(spec.interaction_time, kPi / 4.0, 1e-15);
    EXPECT_LE(oracle::max_abs_diff(dy::realize_gate(spec).matrix(), sm::gates::beamsplitter(8).matrix()), 1e-10);
    // Any coupling at its own 50:50 time.
    EXPECT_LE(oracle::max_abs_diff(dy::realize_gate(dy::HamiltonianSpec::linear_coupling(3.7, 8)).matrix(),
                                   sm::gates::beamsplitter(8).matrix()),
              1e-10);
}

TEST(RealizeGate, DispersiveGivesCps) {
    const auto spec = dy::HamiltonianSpec::dispersive_cps(2.0, 8);
    EXPECT_NEAR(spec.interaction_time, kPi / 2.0, 1e-15);
    EXPECT_LE(oracle::max_abs_diff(dy::realize_gate(spec).matrix(), sm::gates::cps(8).matrix()), 1e-12);
}

TEST(RealizeGate, HalfTimeIsNotBeamsplitter) {
    auto spec = dy::HamiltonianSpec::linear_coupling(1.0, 8);
    spec.interaction_time /= 2.0;
    EXPECT_GT(oracle::max_abs_diff(dy::realize_gate(spec).matrix(), sm::gates::beamsplitter(8).matrix()), 0.1);
}

TEST(RealizeGate, TimingSensitivity) {
    const std::size_t d = 6;
    const std::vector<std::pair<dy::HamiltonianSpec, CMatrix>> cases{
        {dy::HamiltonianSpec::linear_coupling(1.0, d), sm::gates::beamsplitter(d).matrix()},
        {dy::HamiltonianSpec::dispersive_cps(1.0, d), sm::gates::cps(d).matrix()},
        {dy::HamiltonianSpec::ion_qnd(1.0, d), dy::realize_gate(dy::HamiltonianSpec::ion_qnd(1.0, d)).matrix()},
    };
    for (const auto &[spec, reference] : cases) {
        auto off = spec;
        off.interaction_time *= 1.01;
        EXPECT_GT(oracle::max_abs_diff(dy::realize_gate(off).matrix(), reference), 1e-4) << dy::to_string(spec.kind);
    }
}

TEST(RealizeGate, AlwaysUnitary) {
    for (std::size_t d : {2u, 5u, 9u}) {
        for (double c : {0.3, 1.0, 4.2}) {
            EXPECT_LE(sm::unitarity_error(dy::realize_gate(dy::HamiltonianSpec::linear_coupling(c, d)).matrix()), 1e-10);
            EXPECT_LE(sm::unitarity_error(dy::realize_gate(dy::HamiltonianSpec::dispersive_cps(c, d)).matrix()), 1e-10);
            EXPECT_LE(sm::unitarity_error(dy::realize_gate(dy::HamiltonianSpec::ion_qnd(c, d)).matrix()), 1e-10);
        }
    }
}

TEST(RealizeGate, LinearCouplingConservesNumberOnSafeSectors) {
    const Eigen::Index d = 6;
    auto spec = dy::HamiltonianSpec::linear_coupling(1.0, d);
    spec.interaction_time = 0.37;  // arbitrary time
    const CMatrix u = dy::realize_gate(spec).matrix();
    CMatrix n = CMatrix::Zero(d * d, d * d), p = CMatrix::Zero(d * d, d * d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) {
            n(a * d + b, a * d + b) = static_cast<double>(a + b);
            if (a + b < d) p(a * d + b, a * d + b) = 1.0;
        }
    EXPECT_LE(sm::max_abs((u * n - n * u) * p), 1e-10);
}

// ---- trapped ion ----------------------------------------------------------

TEST(Ion, BranchesInRotatedBasis) {
    const std::size_t d = 5;
    const sm::ControlledCore c =
        sm::split_controlled(dy::realize_gate(dy::HamiltonianSpec::ion_qnd(1.0, d)), dy::ion_basis_change().matrix());
    const CMatrix np = sm::gates::number_phase(kPi / 2.0, d).matrix();
    // |-> branch: e^{+i pi n/2}; |+> branch: e^{-i pi n/2}.
    EXPECT_LE(oracle::max_abs_diff(np * c.u_up, sm::gates::number_phase(kPi, d).matrix()), 1e-12);
    EXPECT_LE(oracle::max_abs_diff(np * c.u_down, CMatrix::Identity(5, 5)), 1e-12);
}

TEST(Ion, IdenticalPureStatesGiveFullVisibility) {
    const std::size_t d = 6;
    // Support on levels 0..2 keeps the pair in the safe sector.
    sm::CVector v = sm::CVector::Zero(d);
    v.head(3) = st::random_pure_vector(3, 4);
    const DensityMatrix p = st::pure(v);
    const double vis = ion_visibility(ModeState::product(p, p), dy::HamiltonianSpec::ion_qnd(1.0, d));
    EXPECT_NEAR(vis, 1.0, 1e-9);
}

TEST(Ion, OrthogonalFockStatesGiveFlatFringe) {
    const std::size_t d = 4;
    const ModeState m = ModeState::product(st::fock(0, d), st::fock(2, d));
    for (double psi : pr::uniform_phases(8)) {
        const auto out = dy::ion_protocol_run(m, psi, dy::HamiltonianSpec::ion_qnd(1.0, d));
        EXPECT_NEAR(out.p_up, 0.5, 1e-10);
    }
}

TEST(Ion, GinibrePairVisibilityIsOverlap) {
    const std::size_t d = 6;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix a = st::pad_to_cutoff(st::ginibre_mixed(3, 3, 2 * seed), d);
        const DensityMatrix b = st::pad_to_cutoff(st::ginibre_mixed(3, 3, 2 * seed + 1), d);
        const double vis = ion_visibility(ModeState::product(a, b), dy::HamiltonianSpec::ion_qnd(2.5, d));
        EXPECT_NEAR(vis, oracle::trace_of_product(a.matrix(), b.matrix()).real(), 1e-9);
    }
}

TEST(Ion, ProtocolRunMatchesDevice) {
    pr::HamiltonianDevice mode;
    mode.platform = pr::Platform::TrappedIon;
    mode.phase_coupling = 0.9;
    const std::size_t d = 4;
    const pr::Device dev(mode, d);
    oracle::Random rng(70);
    const ModeState m = ModeState::joint(DensityMatrix::from_matrix(sm::CompositeSpace{d, d}, rng.density(16)));
    for (double psi : {0.1, 1.9, 3.3}) {
        EXPECT_NEAR(dy::ion_protocol_run(m, psi, mode.phase_spec(d)).p_up, dev.run(m, psi).p_up, 1e-12);
    }
}

TEST(Ion, Errors) {
    const auto ion = dy::HamiltonianSpec::ion_qnd(1.0, 3);
    const auto mix = dy::HamiltonianSpec::linear_coupling(1.0, 3);
    EXPECT_THROW(dy::ion_core(mix, mix, 1, true), sm::DomainError);
    EXPECT_THROW(dy::ion_core(ion, dy::HamiltonianSpec::linear_coupling(1.0, 4), 1, true), sm::DimensionError);
    EXPECT_THROW(dy::ion_core(ion, mix, 2, true), sm::DimensionError);
    EXPECT_THROW(dy::ion_protocol_run(ModeState::product(st::fock(0, 4), st::fock(0, 4)), 0.0, ion),
                 sm::DimensionError);
}

// ---- protocol-level equivalence -------------------------------------------

TEST(Realizations, VisibilityMatchesIdealOnSafeSector) {
    const std::size_t d = 5;
    pr::HamiltonianDevice cavity;
    cavity.xi = 2.0;
    cavity.phase_coupling = 0.4;
    pr::HamiltonianDevice ion;
    ion.platform = pr::Platform::TrappedIon;
    ion.phase_coupling = 3.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix a = st::pad_to_cutoff(st::ginibre_mixed(3, 2, 10 + seed), d);
        const DensityMatrix b = st::pad_to_cutoff(st::ginibre_mixed(3, 3, 20 + seed), d);
        const ModeState m = ModeState::product(a, b);
        const double ideal = pr::sweep_visibility(m, 8, pr::Ideal{}).visibility;
        for (const pr::DeviceMode &mode : {pr::DeviceMode{pr::PhysicalGates{}}, pr::DeviceMode{cavity},
                                           pr::DeviceMode{ion}}) {
            EXPECT_NEAR(pr::sweep_visibility(m, 8, mode).visibility, ideal, 1e-9) << pr::to_string(mode);
        }
    }
}

TEST(Realizations, MistimedMixingBreaksEquivalence) {
    const std::size_t d = 4;
    pr::HamiltonianDevice cavity;
    cavity.mixing_time = 1.01 * kPi / 4.0;
    const DensityMatrix a = st::pad_to_cutoff(st::ginibre_mixed(2, 2, 1), d);
    const DensityMatrix b = st::pad_to_cutoff(st::ginibre_mixed(2, 2, 2), d);
    const ModeState m = ModeState::product(a, b);
    const double ideal = pr::sweep_visibility(m, 8, pr::Ideal{}).visibility;
    EXPECT_GT(std::abs(pr::sweep_visibility(m, 8, cavity).visibility - ideal), 1e-6);
}
