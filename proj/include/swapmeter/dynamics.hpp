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

#ifndef SWAPMETER_DYNAMICS_HPP
#define SWAPMETER_DYNAMICS_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "swapmeter/circuit.hpp"
#include "swapmeter/gates.hpp"

// Gates realized as time evolution under the effective interaction
// Hamiltonians of the cavity-QED and trapped-ion implementations.
// hbar = 1: couplings are angular frequencies and times are in reciprocal
// units, so only the products xi*t, kappa*t and Omega*t matter.

namespace swapmeter::dynamics {

enum class CouplingKind {
    LinearCoupling,  // i xi (a0^dag a1 - a1^dag a0) on {D, D}
    DispersiveCps,   // kappa n |up><up| on {2, D}
    IonQnd,          // Omega n (|up><down| + |down><up|) on {2, D}
};

inline std::string to_string(CouplingKind k) {
    switch (k) {
        case CouplingKind::LinearCoupling:
            return "linear_coupling";
        case CouplingKind::DispersiveCps:
            return "dispersive_cps";
        case CouplingKind::IonQnd:
            return "ion_qnd";
    }
    return "unknown";
}

struct HamiltonianSpec {
    CouplingKind kind = CouplingKind::LinearCoupling;
    double coupling = 1.0;
    std::size_t cutoff = 2;
    double interaction_time = std::numbers::pi / 4.0;

    /// Beamsplitter coupling with the 50:50 time tau = pi / (4 xi).
    static HamiltonianSpec linear_coupling(double xi, std::size_t cutoff) {
        return {CouplingKind::LinearCoupling, xi, cutoff, std::numbers::pi / (4.0 * xi)};
    }
    /// Dispersive phase gate with t = pi / kappa.
    static HamiltonianSpec dispersive_cps(double kappa, std::size_t cutoff) {
        return {CouplingKind::DispersiveCps, kappa, cutoff, std::numbers::pi / kappa};
    }
    /// Ion QND gate with t = pi / (2 Omega).
    static HamiltonianSpec ion_qnd(double omega, std::size_t cutoff) {
        return {CouplingKind::IonQnd, omega, cutoff, std::numbers::pi / (2.0 * omega)};
    }

    CompositeSpace space() const {
        if (kind == CouplingKind::LinearCoupling) {
            return CompositeSpace{cutoff, cutoff};
        }
        return CompositeSpace{2, cutoff};
    }

    void validate() const {
        if (!(coupling > 0.0) || !std::isfinite(coupling)) {
            throw DomainError(to_string(kind) + ": coupling constant must be finite and > 0");
        }
        if (!(interaction_time > 0.0) || !std::isfinite(interaction_time)) {
            throw DomainError(to_string(kind) + ": interaction time must be finite and > 0");
        }
        if (cutoff < 2) {
            throw DomainError(to_string(kind) + ": cutoff must be >= 2");
        }
    }
};

/// Dispersive constant of the cavity realization from the vacuum Rabi
/// coupling and the atom-cavity detuning, taken as kappa = rabi / detuning.
inline double cavity_kappa(double rabi, double detuning) {
    if (!(detuning != 0.0) || !std::isfinite(rabi) || !std::isfinite(detuning)) {
        throw DomainError("cavity_kappa: detuning must be non-zero and both inputs finite");
    }
    return rabi / detuning;
}

inline CMatrix build_hamiltonian(const HamiltonianSpec &spec) {
    spec.validate();
    const std::size_t d = spec.cutoff;
    switch (spec.kind) {
        case CouplingKind::LinearCoupling:
            return spec.coupling * gates::beamsplitter_generator(d);
        case CouplingKind::DispersiveCps: {
            CMatrix up = CMatrix::Zero(2, 2);
            up(gates::kUp, gates::kUp) = 1.0;
            return spec.coupling * tensor(up, number_operator(d));
        }
        case CouplingKind::IonQnd: {
            CMatrix sx = CMatrix::Zero(2, 2);
            sx(0, 1) = 1.0;
            sx(1, 0) = 1.0;
            return spec.coupling * tensor(sx, number_operator(d));
        }
    }
    throw DomainError("unknown coupling kind");
}

/// exp(-i H t) at the spec's interaction time.
inline UnitaryGate realize_gate(const HamiltonianSpec &spec) {
    return exp_unitary(build_hamiltonian(spec), spec.interaction_time, spec.space());
}

// ---------------------------------------------------------------------------
// Trapped-ion variant
// ---------------------------------------------------------------------------

/// Maps |up> -> |->, |down> -> |+>, with |+-> = (|up> +- |down>)/sqrt2.
///
/// At t = pi/(2 Omega) the ion gate multiplies |+-> by e^{-+ i pi n/2}; after
/// the extra number phase e^{i pi n/2} on the same mode, |+> is untouched and
/// |-> picks up (-1)^n. So |-> takes the role of |up> and |+> of |down>.
inline UnitaryGate ion_basis_change() {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix b(2, 2);
    b << s, s,  //
        -s, s;
    return UnitaryGate(CompositeSpace({2}), b);
}

inline AncillaFrame ion_frame() {
    const CMatrix b = ion_basis_change().matrix();
    return AncillaFrame{b.col(gates::kUp), b.col(gates::kUp), b.col(gates::kDown)};
}

/// Mode-side part of the ion device on {2, D, D}: coupling, ion gate and
/// number phase on the target mode, inverse coupling. Without
/// `with_phase_gate` the ion gate and the number phase are left out, as in
/// the calibration run.
inline UnitaryGate ion_core(const HamiltonianSpec &ion, const HamiltonianSpec &mixing, std::size_t target_mode,
                            bool with_phase_gate) {
    if (ion.kind != CouplingKind::IonQnd || mixing.kind != CouplingKind::LinearCoupling) {
        throw DomainError("ion device needs an ion_qnd and a linear_coupling spec");
    }
    if (ion.cutoff != mixing.cutoff) {
        throw DimensionError("ion device: cutoff mismatch between coupling and phase gate");
    }
    if (target_mode > 1) {
        throw DimensionError("ion device: target mode must be 0 or 1");
    }
    const std::size_t d = ion.cutoff;
    const CompositeSpace space = gates::device_space(d);
    const UnitaryGate r = embed(realize_gate(mixing), space, {1, 2});
    if (!with_phase_gate) {
        return r.adjoint() * r;
    }
    const UnitaryGate qnd = embed(realize_gate(ion), space, {0, 1 + target_mode});
    const UnitaryGate np = embed(gates::number_phase(std::numbers::pi / 2.0, d), space, {1 + target_mode});
    return r.adjoint() * np * qnd * r;
}

/// Full ion sequence: rotated H, rotated phase shift, ion_core, rotated H.
inline std::vector<UnitaryGate> ion_sequence(double psi, const HamiltonianSpec &ion, const HamiltonianSpec &mixing,
                                             std::size_t target_mode, bool with_phase_gate) {
    const UnitaryGate core = ion_core(ion, mixing, target_mode, with_phase_gate);
    const UnitaryGate b = ion_basis_change();
    const UnitaryGate h = embed(b * gates::hadamard() * b.adjoint(), core.space(), {0});
    const UnitaryGate ps = embed(b * gates::phase_shift(psi) * b.adjoint(), core.space(), {0});
    return {h, ps, core, h};
}

/// One phase setting of the trapped-ion device. Probabilities are reported
/// with p_up = P(|->) and p_down = P(|+>), matching the generic device.
inline DeviceOutcome ion_protocol_run(const ModeState &modes, double psi, const HamiltonianSpec &ion,
                                      std::optional<HamiltonianSpec> mixing = std::nullopt,
                                      std::size_t target_mode = gates::kDefaultCpsMode, RunOptions options = {}) {
    const std::size_t d = modes.cutoff();
    if (ion.cutoff != d) {
        throw DimensionError("ion_protocol_run: spec cutoff " + std::to_string(ion.cutoff) +
                             " does not match state cutoff " + std::to_string(d));
    }
    const HamiltonianSpec mix = mixing.value_or(HamiltonianSpec::linear_coupling(1.0, d));
    return execute_dense(modes, ion_frame(), ion_sequence(psi, ion, mix, target_mode, true), options);
}

}  // namespace swapmeter::dynamics

#endif  // SWAPMETER_DYNAMICS_HPP
