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

#ifndef SWAPMETER_PROTOCOL_HPP
#define SWAPMETER_PROTOCOL_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "swapmeter/circuit.hpp"
#include "swapmeter/dynamics.hpp"
#include "swapmeter/gates.hpp"
#include "swapmeter/mode_state.hpp"

// The interferometric overlap device: the ancilla starts in |up>, passes
// H, PS(psi), a controlled swap of the two modes and H again, then is
// measured. Writing T = Tr(rho S) (real, since rho and S are Hermitian),
// the detector probabilities are
//
//     p_down(psi) = (1 + cos(psi) T) / 2,   p_up(psi) = (1 - cos(psi) T) / 2.
//
// The sign assignment follows from the asymmetric rotation used for H.
// Without the controlled swap the ancilla fringe is p_up = (1 - cos psi)/2,
// so the calibration phase is psi* = pi and p_up - p_down at psi* equals T.

namespace swapmeter::protocol {

inline constexpr std::size_t kDefaultPhases = 8;

enum class Platform { CavityQed, TrappedIon };

/// Exact controlled swap.
struct Ideal {};

/// Controlled swap composed from truncated beamsplitters and the CPS gate.
struct PhysicalGates {
    std::size_t target_mode = gates::kDefaultCpsMode;
};

/// Gates realized by time evolution under the platform's Hamiltonians.
struct HamiltonianDevice {
    Platform platform = Platform::CavityQed;
    double xi = 1.0;              // linear coupling constant
    double phase_coupling = 1.0;  // kappa (cavity) or Omega (ion)
    std::optional<double> mixing_time;  // default pi / (4 xi)
    std::optional<double> phase_time;   // default pi / kappa or pi / (2 Omega)
    std::size_t target_mode = gates::kDefaultCpsMode;

    dynamics::HamiltonianSpec mixing_spec(std::size_t cutoff) const {
        auto spec = dynamics::HamiltonianSpec::linear_coupling(xi, cutoff);
        if (mixing_time) spec.interaction_time = *mixing_time;
        return spec;
    }

    dynamics::HamiltonianSpec phase_spec(std::size_t cutoff) const {
        auto spec = platform == Platform::CavityQed
                        ? dynamics::HamiltonianSpec::dispersive_cps(phase_coupling, cutoff)
                        : dynamics::HamiltonianSpec::ion_qnd(phase_coupling, cutoff);
        if (phase_time) spec.interaction_time = *phase_time;
        return spec;
    }
};

using DeviceMode = std::variant<Ideal, PhysicalGates, HamiltonianDevice>;

inline std::string to_string(const DeviceMode &mode) {
    if (std::holds_alternative<Ideal>(mode)) return "ideal";
    if (std::holds_alternative<PhysicalGates>(mode)) return "physical";
    return std::get<HamiltonianDevice>(mode).platform == Platform::CavityQed ? "hamiltonian:cavity"
                                                                             : "hamiltonian:ion";
}

// ---------------------------------------------------------------------------
// Device
// ---------------------------------------------------------------------------

/// A device configuration bound to one Fock cutoff.
///
/// Every configuration runs H, PS(psi), an ancilla-controlled core and H.
/// The ideal core swaps the modes; the others are
/// R^dag (|up><up| (x) G_up + |down><down| (x) G_down) R with R the mode
/// coupling and G the phase gate's branches on the target mode. The branch
/// unitaries are built once, so a phase sweep never touches the full
/// ancilla-plus-modes space.
class Device {
   public:
    /// Branch traces of one state, for the full device and for the
    /// calibration interferometer (controlled phase gate removed).
    struct Traces {
        BranchTraces main;
        BranchTraces calibration;
    };

    Device(DeviceMode mode, std::size_t cutoff) : mode_(std::move(mode)), cutoff_(cutoff) {
        if (cutoff_ < 2) {
            throw DomainError("device cutoff must be >= 2");
        }
        if (std::holds_alternative<Ideal>(mode_)) {
            return;
        }
        const auto d = static_cast<Eigen::Index>(cutoff_);
        const CompositeSpace modes{cutoff_, cutoff_};
        CMatrix r;
        CMatrix branch[2];
        std::size_t target = 0;
        if (const auto *phys = std::get_if<PhysicalGates>(&mode_)) {
            target = phys->target_mode;
            r = gates::beamsplitter(cutoff_).matrix();
            branch[gates::kUp] = gates::number_phase(std::numbers::pi, cutoff_).matrix();
            branch[gates::kDown] = CMatrix::Identity(d, d);
        } else {
            const auto &ham = std::get<HamiltonianDevice>(mode_);
            target = ham.target_mode;
            r = dynamics::realize_gate(ham.mixing_spec(cutoff_)).matrix();
            const UnitaryGate phase = dynamics::realize_gate(ham.phase_spec(cutoff_));
            if (ham.platform == Platform::TrappedIon) {
                const ControlledCore c = split_controlled(phase, dynamics::ion_basis_change().matrix());
                const CMatrix np = gates::number_phase(std::numbers::pi / 2.0, cutoff_).matrix();
                branch[gates::kUp] = np * c.u_up;
                branch[gates::kDown] = np * c.u_down;
            } else {
                const ControlledCore c = split_controlled(phase, CMatrix::Identity(2, 2));
                branch[gates::kUp] = c.u_up;
                branch[gates::kDown] = c.u_down;
            }
        }
        if (target > 1) {
            throw DimensionError("target mode must be 0 or 1");
        }
        const CMatrix up = embed(branch[gates::kUp], modes, {target});
        const CMatrix down = embed(branch[gates::kDown], modes, {target});
        const CMatrix rr = r.adjoint() * r;
        core_ = ControlledCore{r.adjoint() * up * r, r.adjoint() * down * r};
        calibration_core_ = ControlledCore{rr, rr};
        w_main_ = branch_products(*core_);
        w_calibration_ = branch_products(*calibration_core_);
    }

    const DeviceMode &mode() const { return mode_; }
    std::size_t cutoff() const { return cutoff_; }

    /// Mode-space branches of the controlled core; empty for the ideal
    /// device, whose core is the exact swap.
    const std::optional<ControlledCore> &core() const { return core_; }

    Traces traces(const ModeState &modes) const {
        check_state(modes);
        if (!core_) {
            const Complex tr = modes.trace();
            const Complex ts = modes.swap_expectation();
            Traces t{};
            t.main = {{{tr, ts}, {ts, tr}}};
            t.calibration = {{{tr, tr}, {tr, tr}}};
            return t;
        }
        const CMatrix rho = modes.dense().matrix();
        return Traces{branch_traces(w_main_, rho), branch_traces(w_calibration_, rho)};
    }

    /// (p_up, p_down) at phase psi.
    std::array<double, 2> probabilities(const Traces &t, double psi) const {
        return controlled_probabilities(t.main, pre(psi), gates::hadamard().matrix());
    }

    std::array<double, 2> probabilities(const ModeState &modes, double psi) const {
        return probabilities(traces(modes), psi);
    }

    /// p_up of the calibration interferometer at phase psi.
    double calibration_p_up(const Traces &t, double psi) const {
        return controlled_probabilities(t.calibration, pre(psi), gates::hadamard().matrix())[gates::kUp];
    }

    double calibration_p_up(const ModeState &modes, double psi) const { return calibration_p_up(traces(modes), psi); }

    /// Mode state after the ancilla is measured and discarded. It does not
    /// depend on the phase.
    ModeState post_state(const ModeState &modes) const {
        check_state(modes);
        if (!core_) {
            return modes.symmetrized();
        }
        const DensityMatrix rho = modes.dense();
        const CMatrix m = 0.5 * (core_->u_up * rho.matrix() * core_->u_up.adjoint() +
                                 core_->u_down * rho.matrix() * core_->u_down.adjoint());
        return ModeState::joint(DensityMatrix::unchecked(rho.space(), m));
    }

    /// One run at phase psi with post-measurement states.
    DeviceOutcome run(const ModeState &modes, double psi, RunOptions options = {}) const {
        check_state(modes);
        if (!core_) {
            const std::vector<SwapCircuitStep> steps{AncillaGate{gates::hadamard().matrix()},
                                                     AncillaGate{gates::phase_shift(psi).matrix()}, ControlledSwap{},
                                                     AncillaGate{gates::hadamard().matrix()}};
            return execute_swap_algebra(modes, AncillaFrame::standard(), steps, options);
        }
        return execute_controlled(modes, *core_, pre(psi), gates::hadamard().matrix(), options);
    }

    /// The same device assembled on the full ancilla-plus-modes space from
    /// the gate and Hamiltonian constructors, independently of the branch
    /// split above. For cross-checks at small cutoffs.
    DeviceOutcome run_dense(const ModeState &modes, double psi, RunOptions options = {}) const {
        check_state(modes);
        const CompositeSpace space = gates::device_space(cutoff_);
        auto standard = [&](const UnitaryGate &core) {
            const UnitaryGate h = embed(gates::hadamard(), space, {0});
            const UnitaryGate ps = embed(gates::phase_shift(psi), space, {0});
            return execute_dense(modes, AncillaFrame::standard(), {h, ps, core, h}, options);
        };
        if (std::holds_alternative<Ideal>(mode_)) {
            return standard(gates::controlled_swap_ideal(cutoff_));
        }
        if (const auto *phys = std::get_if<PhysicalGates>(&mode_)) {
            return standard(gates::controlled_swap_physical(cutoff_, phys->target_mode));
        }
        const auto &ham = std::get<HamiltonianDevice>(mode_);
        if (ham.platform == Platform::TrappedIon) {
            return execute_dense(modes, dynamics::ion_frame(),
                                 dynamics::ion_sequence(psi, ham.phase_spec(cutoff_), ham.mixing_spec(cutoff_),
                                                        ham.target_mode, true),
                                 options);
        }
        const UnitaryGate r = embed(dynamics::realize_gate(ham.mixing_spec(cutoff_)), space, {1, 2});
        const UnitaryGate cps =
            embed(dynamics::realize_gate(ham.phase_spec(cutoff_)), space, {0, 1 + ham.target_mode});
        return standard(r.adjoint() * cps * r);
    }

   private:
    static CMatrix pre(double psi) { return gates::phase_shift(psi).matrix() * gates::hadamard().matrix(); }

    void check_state(const ModeState &modes) const {
        const auto d = modes.local_dims();
        if (d[0] != cutoff_ || d[1] != cutoff_) {
            throw DimensionError("state dimensions " + std::to_string(d[0]) + "x" + std::to_string(d[1]) +
                                 " do not match device cutoff " + std::to_string(cutoff_));
        }
        if (std::abs(modes.trace() - 1.0) > kAlgebraTol) {
            throw InvalidStateError("input state does not have unit trace");
        }
    }

    DeviceMode mode_;
    std::size_t cutoff_;
    std::optional<ControlledCore> core_;
    std::optional<ControlledCore> calibration_core_;
    std::array<std::array<CMatrix, 2>, 2> w_main_;
    std::array<std::array<CMatrix, 2>, 2> w_calibration_;
};

/// Single phase setting: detector probabilities and post-measurement states.
inline DeviceOutcome run_device(const ModeState &modes, double psi, const DeviceMode &mode, RunOptions options = {}) {
    const auto d = modes.local_dims();
    return Device(mode, d[0]).run(modes, psi, options);
}

inline DeviceOutcome run_device(const DensityMatrix &rho_joint, double psi, const DeviceMode &mode,
                                RunOptions options = {}) {
    return run_device(ModeState::joint(rho_joint), psi, mode, options);
}

// ---------------------------------------------------------------------------
// Fringe analysis
// ---------------------------------------------------------------------------

/// psi_k = 2 pi k / K.
inline std::vector<double> uniform_phases(std::size_t count) {
    if (count < 3) {
        throw DomainError("phase grid needs at least 3 points, got " + std::to_string(count));
    }
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    }
    return out;
}

inline void check_uniform_grid(std::span<const double> phases) {
    if (phases.size() < 3) {
        throw DomainError("phase grid needs at least 3 points");
    }
    const auto expected = uniform_phases(phases.size());
    for (std::size_t k = 0; k < phases.size(); ++k) {
        if (std::abs(phases[k] - expected[k]) > 1e-9) {
            throw DomainError("phase grid is not uniform: expected psi_k = 2 pi k / K");
        }
    }
}

/// C = (4/K) sum_k p_down(psi_k) e^{-i psi_k}. For p_down = (1 + Re(e^{i psi} z))/2
/// on a uniform grid with K >= 3 this returns z exactly, so |C| is the
/// visibility.
inline Complex fringe_coefficient(std::span<const double> p_down, std::span<const double> phases) {
    check_uniform_grid(phases);
    if (p_down.size() != phases.size()) {
        throw DimensionError("fringe_coefficient: probabilities and phases differ in length");
    }
    Complex acc = 0.0;
    for (std::size_t k = 0; k < phases.size(); ++k) {
        acc += p_down[k] * std::exp(-kI * phases[k]);
    }
    return 4.0 / static_cast<double>(phases.size()) * acc;
}

/// (p_max - p_min) / (p_max + p_min) over the sampled fringe. Only exact when
/// the grid hits both extrema; kept as a cross-check of the Fourier estimator.
inline double minmax_visibility(std::span<const double> p) {
    if (p.empty()) {
        throw DomainError("minmax_visibility: empty fringe");
    }
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    const double sum = *hi + *lo;
    return sum > 0.0 ? (*hi - *lo) / sum : 0.0;
}

// ---------------------------------------------------------------------------
// Calibration and witness
// ---------------------------------------------------------------------------

/// Phase at which the interferometer without the controlled operation sends
/// the ancilla to the up detector with certainty. The fringe is sampled on a
/// uniform grid and fitted by a + Re(c e^{i psi}); the fit is exact for the
/// sinusoidal fringe, so its maximum -arg(c) is returned directly.
inline double calibrate_phase(const Device &device, const Device::Traces &traces,
                              std::size_t grid = kDefaultPhases) {
    const auto phases = uniform_phases(grid);
    Complex c = 0.0;
    for (std::size_t k = 0; k < grid; ++k) {
        c += device.calibration_p_up(traces, phases[k]) * std::exp(-kI * phases[k]);
    }
    c *= 2.0 / static_cast<double>(grid);
    if (std::abs(c) < 1e-9) {
        throw Error("calibration fringe has no contrast");
    }
    double psi = std::fmod(-std::arg(c), 2.0 * std::numbers::pi);
    if (psi < 0.0) psi += 2.0 * std::numbers::pi;
    return psi;
}

inline double calibrate_phase(const Device &device, const ModeState &modes, std::size_t grid = kDefaultPhases) {
    return calibrate_phase(device, device.traces(modes), grid);
}

inline double calibrate_phase(const ModeState &modes, const DeviceMode &mode, std::size_t grid = kDefaultPhases) {
    return calibrate_phase(Device(mode, modes.cutoff()), modes, grid);
}

inline double calibrate_phase(const DensityMatrix &rho_joint, const DeviceMode &mode,
                              std::size_t grid = kDefaultPhases) {
    return calibrate_phase(ModeState::joint(rho_joint), mode, grid);
}

/// Delta = p_up - p_down at the calibrated phase. Negative values certify
/// entanglement; for the ideal device Delta = Tr(rho S).
inline double witness_delta(const Device &device, const ModeState &modes) {
    const Device::Traces t = device.traces(modes);
    const auto p = device.probabilities(t, calibrate_phase(device, t));
    return p[gates::kUp] - p[gates::kDown];
}

inline double witness_delta(const ModeState &modes, const DeviceMode &mode) {
    const auto d = modes.local_dims();
    if (d[0] != d[1]) {
        throw DimensionError("witness needs equal local dimensions");
    }
    return witness_delta(Device(mode, d[0]), modes);
}

inline double witness_delta(const DensityMatrix &rho_joint, const DeviceMode &mode) {
    return witness_delta(ModeState::joint(rho_joint), mode);
}

// ---------------------------------------------------------------------------
// Phase sweep
// ---------------------------------------------------------------------------

struct ProtocolRun {
    std::vector<double> phases;
    std::vector<double> p_up;
    std::vector<double> p_down;
    Complex fringe;     // fringe_coefficient of p_down
    double visibility;  // |fringe|
    double psi_star;    // calibrated phase
    double delta;       // p_up - p_down at psi_star
    ModeState post_state_unconditional;
};

/// Run the device on the uniform grid of `phase_count` phases and extract
/// the visibility by the discrete Fourier estimator.
inline ProtocolRun sweep_visibility(const Device &device, const ModeState &modes,
                                    std::size_t phase_count = kDefaultPhases) {
    const auto phases = uniform_phases(phase_count);
    const Device::Traces t = device.traces(modes);
    std::vector<double> up(phase_count), down(phase_count);
    for (std::size_t k = 0; k < phase_count; ++k) {
        const auto p = device.probabilities(t, phases[k]);
        up[k] = p[gates::kUp];
        down[k] = p[gates::kDown];
    }
    const Complex fringe = fringe_coefficient(down, phases);
    const double psi_star = calibrate_phase(device, t, phase_count);
    const auto at_star = device.probabilities(t, psi_star);
    return ProtocolRun{phases,
                       std::move(up),
                       std::move(down),
                       fringe,
                       std::abs(fringe),
                       psi_star,
                       at_star[gates::kUp] - at_star[gates::kDown],
                       device.post_state(modes)};
}

inline ProtocolRun sweep_visibility(const ModeState &modes, std::size_t phase_count, const DeviceMode &mode) {
    return sweep_visibility(Device(mode, modes.cutoff()), modes, phase_count);
}

inline ProtocolRun sweep_visibility(const DensityMatrix &rho_joint, std::size_t phase_count, const DeviceMode &mode) {
    return sweep_visibility(ModeState::joint(rho_joint), phase_count, mode);
}

// ---------------------------------------------------------------------------
// Nondemolition check
// ---------------------------------------------------------------------------

struct RepeatCheck {
    double v_first;
    double v_second;
    ModeState post_state;  // unconditional state after the first measurement
};

/// Measure, discard the ancilla, and measure the resulting mode state again.
inline RepeatCheck repeat_measurement_check(const ModeState &modes, const DeviceMode &mode,
                                            std::size_t phase_count = kDefaultPhases) {
    const Device device(mode, modes.cutoff());
    ProtocolRun first = sweep_visibility(device, modes, phase_count);
    const ProtocolRun second = sweep_visibility(device, first.post_state_unconditional, phase_count);
    return RepeatCheck{first.visibility, second.visibility, std::move(first.post_state_unconditional)};
}

inline RepeatCheck repeat_measurement_check(const DensityMatrix &rho_a, const DensityMatrix &rho_b,
                                            const DeviceMode &mode, std::size_t phase_count = kDefaultPhases) {
    return repeat_measurement_check(ModeState::product(rho_a, rho_b), mode, phase_count);
}

}  // namespace swapmeter::protocol

#endif  // SWAPMETER_PROTOCOL_HPP
