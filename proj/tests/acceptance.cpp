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

// Acceptance run: one PASS/FAIL line per criterion, with the measured error
// and the wall time against its budget. Exit status is the failure count.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "swapmeter/dynamics.hpp"
#include "swapmeter/gates.hpp"
#include "swapmeter/observables.hpp"
#include "swapmeter/protocol.hpp"
#include "swapmeter/sampling.hpp"
#include "swapmeter/states.hpp"

namespace sm = swapmeter;
namespace pr = swapmeter::protocol;
namespace st = swapmeter::states;
namespace gt = swapmeter::gates;
namespace dy = swapmeter::dynamics;
namespace ob = swapmeter::observables;
using sm::CMatrix;
using sm::CompositeSpace;
using sm::DensityMatrix;
using sm::ModeState;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char *title;
    double budget_s;
    std::function<Outcome()> body;
};

std::string fmt(const char *f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

/// Tracks the worst error against one bound.
struct Worst {
    double bound;
    double value = 0.0;
    void add(double e) { value = std::max(value, std::isfinite(e) ? e : INFINITY); }
    bool ok() const { return value <= bound; }
    std::string str(const char *name) const { return std::string(name) + "=" + fmt("%.3g", value); }
};

DensityMatrix joint(const CMatrix &m, std::size_t d) { return DensityMatrix::from_matrix(CompositeSpace{d, d}, m); }

double visibility(const DensityMatrix &rho) { return pr::sweep_visibility(rho, 8, pr::Ideal{}).visibility; }

/// Random two-mode state on Fock pairs with a + b <= D - 1.
CMatrix safe_joint(oracle::Random &rng, Eigen::Index d) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; a + b < d; ++b) idx.push_back(a * d + b);
    const auto k = static_cast<Eigen::Index>(idx.size());
    const CMatrix small = rng.density(k);
    CMatrix full = CMatrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) full(idx[i], idx[j]) = small(i, j);
    return full;
}

// ---------------------------------------------------------------------------

Outcome singlet_visibility() {
    Worst w{1e-10};
    w.add(std::abs(visibility(st::bell_singlet()) - 1.0));
    return {w.ok(), w.str("|V-1|")};
}

Outcome classical_null() {
    Worst w{1e-10};
    w.add(visibility(st::classical_correlated()));
    w.add(pr::sweep_visibility(ModeState::product(st::fock(0, 2), st::fock(1, 2)), 8, pr::Ideal{}).visibility);
    return {w.ok(), w.str("max V")};
}

Outcome overlap_law() {
    Worst w{1e-9};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const DensityMatrix a = st::ginibre_mixed(4, 1 + seed % 4, 1000 + 2 * seed);
        const DensityMatrix b = st::ginibre_mixed(4, 1 + (seed / 4) % 4, 1001 + 2 * seed);
        const double v = pr::sweep_visibility(ModeState::product(a, b), 8, pr::Ideal{}).visibility;
        w.add(std::abs(v - oracle::trace_of_product(a.matrix(), b.matrix()).real()));
    }
    return {w.ok(), w.str("max err") + " over 50 pairs"};
}

Outcome witness_chain() {
    Worst w{1e-10};
    oracle::Random rng(404);
    int n = 0;
    for (Eigen::Index d : {2, 3}) {
        const CMatrix flip = oracle::flip(d);
        const CMatrix id = CMatrix::Identity(d * d, d * d);
        const CMatrix pi_plus = (id + flip) / 2.0, pi_minus = (id - flip) / 2.0;
        for (int i = 0; i < 50; ++i, ++n) {
            const CMatrix m = rng.density(d * d, 1 + i % (d * d));
            const double lam = std::abs(oracle::lambda_sandwich(oracle::transpose_second(m, d, d), d));
            const double swap = std::abs(oracle::trace_of_product(m, flip));
            const double povm = std::abs(oracle::trace_of_product(m, pi_plus - pi_minus));
            const double dev = visibility(joint(m, static_cast<std::size_t>(d)));
            w.add(std::abs(lam - swap));
            w.add(std::abs(swap - povm));
            w.add(std::abs(povm - dev));
        }
    }
    return {w.ok(), w.str("max err") + " over " + std::to_string(n) + " states"};
}

Outcome werner_threshold() {
    Worst w{1e-9};
    auto delta = [](double p) { return pr::witness_delta(st::werner(p), pr::Ideal{}); };
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) {
        const double p = 0.1 * i;
        grid.push_back(delta(p));
        w.add(std::abs(grid.back() - (1.0 - 3.0 * p) / 2.0));
    }
    // Sign change on the grid.
    int bracket = -1;
    for (int i = 0; i < 10; ++i) {
        if (grid[i] > 0.0 && grid[i + 1] <= 0.0) {
            if (bracket >= 0) bracket = -2;
            else bracket = i;
        }
    }
    if (bracket != 3) return {false, "sign change not bracketed uniquely in (0.3, 0.4)"};
    double lo = 0.3, hi = 0.4;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (delta(mid) > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    const double root_err = std::abs(root - 1.0 / 3.0);
    return {w.ok() && root_err <= 1e-6, w.str("max err") + ", root=" + fmt("%.9f", root)};
}

Outcome nondemolition() {
    Worst post{1e-10}, rep{1e-10};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t d = 2 + seed % 3;
        const DensityMatrix a = st::ginibre_mixed(d, 1 + seed % d, 2000 + 2 * seed);
        const DensityMatrix b = st::ginibre_mixed(d, 1 + (seed + 1) % d, 2001 + 2 * seed);
        const auto run = pr::sweep_visibility(ModeState::product(a, b), 8, pr::Ideal{});
        const CMatrix expect = 0.5 * (oracle::kron(a.matrix(), b.matrix()) + oracle::kron(b.matrix(), a.matrix()));
        post.add(oracle::max_abs_diff(run.post_state_unconditional.dense().matrix(), expect));
        const auto check = pr::repeat_measurement_check(a, b, pr::Ideal{});
        rep.add(std::abs(check.v_second - check.v_first));
    }
    return {post.ok() && rep.ok(), post.str("post-state err") + ", " + rep.str("repeat err")};
}

Outcome hs_identity() {
    Worst w{1e-9};
    auto hs = [](const CMatrix &a, const CMatrix &b) { return 0.5 * oracle::trace_of_product(a - b, a - b).real(); };
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t d = 2 + seed % 4;
        const DensityMatrix a = st::ginibre_mixed(d, 1 + seed % d, 3000 + 2 * seed);
        const DensityMatrix b = st::ginibre_mixed(d, 1 + (seed + 2) % d, 3001 + 2 * seed);
        w.add(std::abs(ob::hs_distance(a, b).device_value - hs(a.matrix(), b.matrix())));
    }
    const DensityMatrix g = st::ginibre_mixed(3, 2, 7);
    w.add(std::abs(ob::hs_distance(g, g).device_value - 0.0));
    w.add(std::abs(ob::hs_distance(st::fock(0, 2), st::fock(1, 2)).device_value - 1.0));
    w.add(std::abs(ob::hs_distance(st::maximally_mixed(2), st::fock(0, 2)).device_value - 0.25));
    return {w.ok(), w.str("max err") + " over 20 pairs + 3 closed cases"};
}

Outcome hamiltonian_compilation() {
    const std::size_t d = 8;
    Worst gate{1e-10}, ion{1e-9};
    for (double xi : {0.5, 1.0, 2.3}) {
        gate.add(oracle::max_abs_diff(dy::realize_gate(dy::HamiltonianSpec::linear_coupling(xi, d)).matrix(),
                                      gt::beamsplitter(d).matrix()));
    }
    for (double kappa : {0.4, 1.0, 3.0}) {
        gate.add(oracle::max_abs_diff(dy::realize_gate(dy::HamiltonianSpec::dispersive_cps(kappa, d)).matrix(),
                                      gt::cps(d).matrix()));
    }
    // Ion: visibility from the full time-evolved sequence on safe-sector inputs.
    oracle::Random rng(808);
    const std::size_t di = 5;
    const auto phases = pr::uniform_phases(8);
    for (int i = 0; i < 6; ++i) {
        const ModeState m =
            i < 3 ? ModeState::joint(joint(safe_joint(rng, di), di))
                  : ModeState::product(st::pad_to_cutoff(st::ginibre_mixed(2, 2, 40 + i), di),
                                       st::pad_to_cutoff(st::ginibre_mixed(3, 3, 50 + i), di));
        const double omega = 0.5 + 0.7 * i;
        std::vector<double> down;
        for (double psi : phases) {
            down.push_back(dy::ion_protocol_run(m, psi, dy::HamiltonianSpec::ion_qnd(omega, di)).p_down);
        }
        const double v_ion = std::abs(pr::fringe_coefficient(down, phases));
        ion.add(std::abs(v_ion - pr::sweep_visibility(m, 8, pr::Ideal{}).visibility));
    }
    return {gate.ok() && ion.ok(), gate.str("gate err (D=8)") + ", " + ion.str("ion visibility err")};
}

Outcome physical_equivalence() {
    const Eigen::Index d = 10, dd = d * d;
    CMatrix safe = CMatrix::Zero(dd, dd);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; a + b < d; ++b) safe(a * d + b, a * d + b) = 1.0;
    const CMatrix p = oracle::kron(CMatrix::Identity(2, 2), safe);
    const CMatrix phys = gt::controlled_swap_physical(static_cast<std::size_t>(d)).matrix();
    const CMatrix ideal = gt::controlled_swap_ideal(static_cast<std::size_t>(d)).matrix();
    Worst w{1e-9};
    w.add(sm::max_abs((phys - ideal) * p));
    // Channel action on random inputs with the ancilla in a random state.
    oracle::Random rng(909);
    for (int i = 0; i < 5; ++i) {
        const CMatrix rho = oracle::kron(rng.density(2), safe_joint(rng, d));
        w.add(oracle::max_abs_diff(phys * rho * phys.adjoint(), ideal * rho * ideal.adjoint()));
    }
    return {w.ok(), w.str("max err (D=10)")};
}

Outcome shot_noise() {
    const auto run = pr::sweep_visibility(st::bell_singlet(), 8, pr::Ideal{});
    int within = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        within += std::abs(pr::estimate_visibility(pr::sample_shots(run, 10000, seed)).v_hat - 1.0) <= 0.02 ? 1 : 0;
    }
    // Reported standard error across a decade of shot counts.
    const std::vector<std::uint64_t> shots{1000, 3162, 10000};
    std::vector<double> mean_se;
    for (std::uint64_t n : shots) {
        double se = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) se += pr::estimate_visibility(pr::sample_shots(run, n, seed)).std_error;
        mean_se.push_back(se / 20.0);
    }
    double worst = 0.0;
    for (std::size_t i = 1; i < shots.size(); ++i) {
        const double expected = std::sqrt(static_cast<double>(shots[i]) / static_cast<double>(shots[0]));
        worst = std::max(worst, std::abs(mean_se[0] / mean_se[i] / expected - 1.0));
    }
    return {within >= 99 && worst <= 0.2,
            std::to_string(within) + "/100 seeds within 0.02, 1/sqrt(shots) deviation " + fmt("%.3f", worst)};
}

Outcome witness_soundness() {
    oracle::Random rng(1111);
    double min_delta = INFINITY;
    int n = 0;
    for (Eigen::Index d : {2, 3}) {
        for (int i = 0; i < 500; ++i, ++n) {
            const CMatrix m = rng.separable(d, 10);
            min_delta = std::min(min_delta, pr::witness_delta(joint(m, static_cast<std::size_t>(d)), pr::Ideal{}));
        }
    }
    // Edge of the separable set: mixtures of u (x) v with <u|v> = 0 have delta = 0.
    for (Eigen::Index d : {2, 3}) {
        for (int i = 0; i < 100; ++i, ++n) {
            const int terms = 1 + i % 10;
            CMatrix m = CMatrix::Zero(d * d, d * d);
            for (int t = 0; t < terms; ++t) {
                const sm::CVector u = rng.pure(d);
                sm::CVector v = rng.pure(d);
                v -= u.dot(v) * u;
                v.normalize();
                m += oracle::kron(u * u.adjoint(), v * v.adjoint()) / terms;
            }
            min_delta = std::min(min_delta, pr::witness_delta(joint(m, static_cast<std::size_t>(d)), pr::Ideal{}));
        }
    }
    return {min_delta >= -1e-9, "min delta " + fmt("%.3g", min_delta) + " over " + std::to_string(n) + " states"};
}

Outcome coherent_overlap() {
    const double v = ob::overlap(st::coherent(1.0, 32), st::coherent(0.0, 32)).device_value;
    const double err = std::abs(v - std::exp(-1.0));
    return {err <= 1e-6, "err " + fmt("%.3g", err)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "singlet visibility", 0.1, singlet_visibility},
        {2, "classical correlation null", 0.1, classical_null},
        {3, "overlap law", 5.0, overlap_law},
        {4, "witness identity chain", 5.0, witness_chain},
        {5, "Werner threshold", 1.0, werner_threshold},
        {6, "nondemolition", 2.0, nondemolition},
        {7, "Hilbert-Schmidt distance", 2.0, hs_identity},
        {8, "Hamiltonian compilation", 3.0, hamiltonian_compilation},
        {9, "physical vs ideal gates", 3.0, physical_equivalence},
        {10, "shot-noise statistics", 30.0, shot_noise},
        {11, "witness soundness", 30.0, witness_soundness},
        {12, "truncated coherent overlap", 1.0, coherent_overlap},
    };
    int failures = 0;
    for (const Criterion &c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.ok && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s %2d %-28s %s; %.3f s (budget %.1f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.title,
                    o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", exceeded");
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
