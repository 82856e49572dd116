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

#ifndef SWAPMETER_CIRCUIT_HPP
#define SWAPMETER_CIRCUIT_HPP

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "swapmeter/gates.hpp"
#include "swapmeter/mode_state.hpp"

// Two execution engines for "ancilla qubit + two modes" circuits:
//
//  * execute_dense builds the full (2 D^2)-dimensional density matrix and
//    applies arbitrary unitaries on ancilla (x) mode0 (x) mode1.
//  * execute_swap_algebra handles circuits made only of ancilla gates and
//    ancilla-controlled swaps. Every mode block then stays a combination of
//    rho, S rho, rho S and S rho S, so only Tr(rho) and Tr(rho S) are ever
//    needed and factorized inputs are never materialized.

namespace swapmeter {

/// Conditional post-states are reported only above this outcome probability.
inline constexpr double kMinConditioningProbability = 1e-12;

/// Ancilla preparation state and the two measurement vectors, in the
/// (|up>, |down>) coordinates.
struct AncillaFrame {
    CVector prepare;
    CVector up;
    CVector down;

    static AncillaFrame standard() {
        AncillaFrame f{CVector::Zero(2), CVector::Zero(2), CVector::Zero(2)};
        f.prepare(0) = 1.0;
        f.up(0) = 1.0;
        f.down(1) = 1.0;
        return f;
    }
};

struct RunOptions {
    /// Materialize the post-measurement mode state for each detector outcome.
    bool conditional_states = true;
};

struct ConditionalState {
    double probability = 0.0;
    /// Renormalized post-state, empty when probability <= 1e-12.
    std::optional<DensityMatrix> state;
};

/// Result of one shot-free run of the device at a fixed phase.
struct DeviceOutcome {
    double p_up = 0.0;
    double p_down = 0.0;
    /// Mode state with the ancilla measured and discarded.
    ModeState post_unconditional;
    /// Indexed by gates::kUp / gates::kDown; empty unless requested.
    std::optional<std::array<ConditionalState, 2>> post_conditional;
};

namespace detail {

inline std::array<ConditionalState, 2> make_conditionals(double p_up, CMatrix up_block, double p_down,
                                                         CMatrix down_block, const CompositeSpace &space) {
    std::array<ConditionalState, 2> out;
    out[gates::kUp].probability = p_up;
    out[gates::kDown].probability = p_down;
    if (p_up > kMinConditioningProbability) {
        out[gates::kUp].state = DensityMatrix::unchecked(space, up_block / p_up);
    }
    if (p_down > kMinConditioningProbability) {
        out[gates::kDown].state = DensityMatrix::unchecked(space, down_block / p_down);
    }
    return out;
}

inline double clamp_probability(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace detail

/// Apply `sequence` (in order) to |prepare><prepare| (x) rho on the device
/// space {2, D, D}, then measure the ancilla in the frame's basis.
inline DeviceOutcome execute_dense(const ModeState &modes, const AncillaFrame &frame,
                                   const std::vector<UnitaryGate> &sequence, RunOptions options = {}) {
    const std::size_t cutoff = modes.cutoff();
    const CompositeSpace space = gates::device_space(cutoff);
    const DensityMatrix rho = modes.dense();

    const auto n = static_cast<Eigen::Index>(space.total());
    CMatrix u = CMatrix::Identity(n, n);
    for (const UnitaryGate &g : sequence) {
        if (g.space() != space) {
            throw DimensionError("circuit gate on " + g.space().to_string() + " does not match device space " +
                                 space.to_string());
        }
        u = g.matrix() * u;
    }
    const CMatrix initial = tensor(CMatrix(frame.prepare * frame.prepare.adjoint()), rho.matrix());
    const CMatrix out = u * initial * u.adjoint();

    // <v| rho_out |v> as an operator on the modes.
    const auto dd = static_cast<Eigen::Index>(cutoff * cutoff);
    auto block = [&](const CVector &v) {
        CMatrix b = CMatrix::Zero(dd, dd);
        for (Eigen::Index a = 0; a < 2; ++a) {
            for (Eigen::Index c = 0; c < 2; ++c) {
                const Complex w = std::conj(v(a)) * v(c);
                if (w != Complex(0.0)) {
                    b += w * out.block(a * dd, c * dd, dd, dd);
                }
            }
        }
        return b;
    };
    CMatrix up_block = block(frame.up);
    CMatrix down_block = block(frame.down);

    DeviceOutcome result{detail::clamp_probability(up_block.trace().real()),
                         detail::clamp_probability(down_block.trace().real()),
                         ModeState::joint(DensityMatrix::unchecked(rho.space(), up_block + down_block)), std::nullopt};
    if (options.conditional_states) {
        result.post_conditional =
            detail::make_conditionals(result.p_up, std::move(up_block), result.p_down, std::move(down_block), rho.space());
    }
    return result;
}

/// Step of a swap-algebra circuit.
struct AncillaGate {
    CMatrix matrix;  // 2x2
};
struct ControlledSwap {};  // swaps the modes when the ancilla is |up>
using SwapCircuitStep = std::variant<AncillaGate, ControlledSwap>;

/// Execute a circuit of ancilla gates and up-controlled swaps exactly.
inline DeviceOutcome execute_swap_algebra(const ModeState &modes, const AncillaFrame &frame,
                                          const std::vector<SwapCircuitStep> &steps, RunOptions options = {}) {
    // coeff[a][b][l][r]: the (a,b) ancilla block equals sum_lr coeff * S^l rho S^r.
    using Block = std::array<std::array<Complex, 2>, 2>;
    std::array<std::array<Block, 2>, 2> coeff{};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            coeff[a][b][0][0] = frame.prepare(a) * std::conj(frame.prepare(b));
        }
    }

    for (const SwapCircuitStep &step : steps) {
        if (const auto *g = std::get_if<AncillaGate>(&step)) {
            decltype(coeff) next{};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int a2 = 0; a2 < 2; ++a2)
                        for (int b2 = 0; b2 < 2; ++b2) {
                            const Complex w = g->matrix(a, a2) * std::conj(g->matrix(b, b2));
                            for (int l = 0; l < 2; ++l)
                                for (int r = 0; r < 2; ++r) next[a][b][l][r] += w * coeff[a2][b2][l][r];
                        }
            coeff = next;
        } else {
            // |up> rows gain a left S, |up> columns a right S.
            decltype(coeff) next{};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int l = 0; l < 2; ++l)
                        for (int r = 0; r < 2; ++r) {
                            const int l2 = (a == static_cast<int>(gates::kUp)) ? 1 - l : l;
                            const int r2 = (b == static_cast<int>(gates::kUp)) ? 1 - r : r;
                            next[a][b][l2][r2] += coeff[a][b][l][r];
                        }
            coeff = next;
        }
    }

    auto project = [&](const CVector &v) {
        Block k{};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const Complex w = std::conj(v(a)) * v(b);
                for (int l = 0; l < 2; ++l)
                    for (int r = 0; r < 2; ++r) k[l][r] += w * coeff[a][b][l][r];
            }
        return k;
    };
    const Block k_up = project(frame.up);
    const Block k_down = project(frame.down);

    const double tr = modes.trace();
    const double ts = modes.swap_expectation();
    auto probability = [&](const Block &k) {
        return (k[0][0] * tr + k[1][1] * tr + (k[0][1] + k[1][0]) * ts).real();
    };

    Block k_sum{};
    for (int l = 0; l < 2; ++l)
        for (int r = 0; r < 2; ++r) k_sum[l][r] = k_up[l][r] + k_down[l][r];

    auto materialize = [&](const Block &k, const DensityMatrix &rho) {
        const std::size_t d = rho.space().dims()[0];
        CMatrix m = CMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
        for (int l = 0; l < 2; ++l)
            for (int r = 0; r < 2; ++r)
                if (std::abs(k[l][r]) > 0.0) {
                    m += k[l][r] * detail::swap_sandwich(rho.matrix(), d, l == 1, r == 1);
                }
        return m;
    };

    std::optional<ModeState> unconditional;
    if (const DensityMatrix *rho = modes.dense_if_joint()) {
        unconditional = ModeState::joint(DensityMatrix::unchecked(rho->space(), materialize(k_sum, *rho)));
    } else {
        // Cross terms cancel once the ancilla is discarded; what remains is a
        // mixture of rho and S rho S.
        if (std::abs(k_sum[0][1]) > kAlgebraTol || std::abs(k_sum[1][0]) > kAlgebraTol) {
            throw Error("swap-algebra circuit leaves coherences after discarding the ancilla");
        }
        const double w_direct = k_sum[0][0].real();
        const double w_swapped = k_sum[1][1].real();
        std::vector<ProductTerm> terms;
        for (const ProductTerm &t : *modes.terms()) {
            if (w_direct > 0.0) terms.push_back({w_direct * t.weight, t.first, t.second});
            if (w_swapped > 0.0) terms.push_back({w_swapped * t.weight, t.second, t.first});
        }
        double total = 0.0;
        for (const ProductTerm &t : terms) total += t.weight;
        for (ProductTerm &t : terms) t.weight /= total;
        unconditional = ModeState::mixture(std::move(terms));
    }

    DeviceOutcome result{detail::clamp_probability(probability(k_up)), detail::clamp_probability(probability(k_down)),
                         std::move(*unconditional), std::nullopt};
    if (options.conditional_states) {
        const DensityMatrix rho = modes.dense();
        result.post_conditional = detail::make_conditionals(result.p_up, materialize(k_up, rho), result.p_down,
                                                            materialize(k_down, rho), rho.space());
    }
    return result;
}

// ---------------------------------------------------------------------------
// Ancilla-controlled cores
// ---------------------------------------------------------------------------

/// A core of the form |up><up| (x) u_up + |down><down| (x) u_down, with the
/// two branches given as unitaries on the modes.
struct ControlledCore {
    CMatrix u_up;
    CMatrix u_down;
};

/// t[a][b] = Tr(U_a rho U_b^dag), the only state data the ancilla
/// probabilities depend on.
using BranchTraces = std::array<std::array<Complex, 2>, 2>;

/// Probabilities (p_up, p_down) of the circuit "pre on |up>, controlled core,
/// post", given the branch traces. Both gates are 2x2 ancilla matrices.
inline std::array<double, 2> controlled_probabilities(const BranchTraces &t, const CMatrix &pre, const CMatrix &post) {
    const CVector v = pre.col(static_cast<Eigen::Index>(gates::kUp));
    std::array<double, 2> p{};
    for (Eigen::Index c = 0; c < 2; ++c) {
        Complex acc = 0.0;
        for (Eigen::Index a = 0; a < 2; ++a) {
            for (Eigen::Index b = 0; b < 2; ++b) {
                acc += post(c, a) * v(a) * std::conj(post(c, b) * v(b)) * t[a][b];
            }
        }
        p[c] = detail::clamp_probability(acc.real());
    }
    return p;
}

/// Branch traces of a controlled core, with w[a][b] = U_b^dag U_a
/// precomputed: Tr(W rho) = sum_ij W_ij rho_ji.
inline BranchTraces branch_traces(const std::array<std::array<CMatrix, 2>, 2> &w, const CMatrix &rho) {
    BranchTraces t{};
    const CMatrix rho_t = rho.transpose();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) t[a][b] = w[a][b].cwiseProduct(rho_t).sum();
    return t;
}

inline std::array<std::array<CMatrix, 2>, 2> branch_products(const ControlledCore &core) {
    const CMatrix *u[2] = {&core.u_up, &core.u_down};
    std::array<std::array<CMatrix, 2>, 2> w;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) w[a][b] = u[b]->adjoint() * *u[a];
    return w;
}

/// Full outcome of "pre on |up>, controlled core, post" on the modes,
/// computed on the mode space only.
inline DeviceOutcome execute_controlled(const ModeState &modes, const ControlledCore &core, const CMatrix &pre,
                                        const CMatrix &post, RunOptions options = {}) {
    const DensityMatrix rho = modes.dense();
    if (core.u_up.rows() != rho.matrix().rows() || core.u_down.rows() != rho.matrix().rows()) {
        throw DimensionError("controlled core does not match the mode space " + rho.space().to_string());
    }
    const CMatrix *u[2] = {&core.u_up, &core.u_down};
    const CMatrix a_rho[2] = {core.u_up * rho.matrix(), core.u_down * rho.matrix()};
    std::array<std::array<CMatrix, 2>, 2> m;
    for (int a = 0; a < 2; ++a) {
        m[a][a] = a_rho[a] * u[a]->adjoint();
    }
    m[0][1] = a_rho[0] * u[1]->adjoint();
    m[1][0] = m[0][1].adjoint();

    BranchTraces t{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) t[a][b] = m[a][b].trace();
    const auto p = controlled_probabilities(t, pre, post);

    DeviceOutcome result{p[gates::kUp], p[gates::kDown],
                         ModeState::joint(DensityMatrix::unchecked(rho.space(), 0.5 * (m[0][0] + m[1][1]))),
                         std::nullopt};
    // The discarded-ancilla state is sum_a |v_a|^2 M_aa; for the balanced
    // pre-rotation both weights are 1/2, otherwise recompute.
    const CVector v = pre.col(static_cast<Eigen::Index>(gates::kUp));
    if (std::abs(std::norm(v(0)) - 0.5) > kAlgebraTol) {
        result.post_unconditional = ModeState::joint(
            DensityMatrix::unchecked(rho.space(), std::norm(v(0)) * m[0][0] + std::norm(v(1)) * m[1][1]));
    }
    if (options.conditional_states) {
        std::array<CMatrix, 2> blocks;
        for (Eigen::Index c = 0; c < 2; ++c) {
            CMatrix acc = CMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
            for (Eigen::Index a = 0; a < 2; ++a)
                for (Eigen::Index b = 0; b < 2; ++b) acc += post(c, a) * v(a) * std::conj(post(c, b) * v(b)) * m[a][b];
            blocks[static_cast<std::size_t>(c)] = std::move(acc);
        }
        result.post_conditional =
            detail::make_conditionals(result.p_up, std::move(blocks[gates::kUp]), result.p_down,
                                      std::move(blocks[gates::kDown]), rho.space());
    }
    return result;
}

/// Split a {2, ...} gate into its ancilla-diagonal blocks after the basis
/// change `basis` on the ancilla. Throws if the gate mixes the two branches.
inline ControlledCore split_controlled(const UnitaryGate &gate, const CMatrix &basis) {
    const CompositeSpace &space = gate.space();
    if (space.num_subsystems() < 2 || space.dim(0) != 2) {
        throw DimensionError("split_controlled needs an ancilla-first space, got " + space.to_string());
    }
    const auto n = static_cast<Eigen::Index>(space.total() / 2);
    const CMatrix big_b = tensor(basis, CMatrix::Identity(n, n));
    const CMatrix g = big_b.adjoint() * gate.matrix() * big_b;
    if (max_abs(g.block(0, n, n, n)) > kAlgebraTol || max_abs(g.block(n, 0, n, n)) > kAlgebraTol) {
        throw Error("gate is not controlled by the ancilla in the given basis");
    }
    return ControlledCore{g.block(0, 0, n, n), g.block(n, n, n, n)};
}

}  // namespace swapmeter

#endif  // SWAPMETER_CIRCUIT_HPP
