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

#ifndef SWAPMETER_OBSERVABLES_HPP
#define SWAPMETER_OBSERVABLES_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swapmeter/protocol.hpp"
#include "swapmeter/sampling.hpp"
#include "swapmeter/states.hpp"

// Measurement pipelines. Each report carries the device estimate next to a
// value computed directly from the density matrices.

namespace swapmeter::observables {

using protocol::DeviceMode;

inline constexpr double kExactVerdictTol = 1e-9;
inline constexpr double kShotVerdictSigmas = 3.0;

struct Settings {
    DeviceMode mode = protocol::Ideal{};
    std::size_t phases = protocol::kDefaultPhases;
    std::optional<std::uint64_t> shots;  // per phase; empty = exact probabilities
    std::uint64_t seed = 0;
};

/// One row per phase setting. Counts are present only in shot mode.
struct PhaseRow {
    double phase;
    double p_up;
    double p_down;
    std::optional<std::uint64_t> count_up;
    std::optional<std::uint64_t> count_down;
};

struct ObservableReport {
    std::string name;
    double device_value = 0.0;
    double oracle_value = 0.0;
    double abs_error = 0.0;
    std::optional<double> std_error;      // empty in exact mode
    std::optional<std::uint64_t> shots;   // per phase; empty in exact mode
    std::optional<std::string> verdict;   // witness only
    std::vector<PhaseRow> table;
};

namespace detail {

struct Measurement {
    double value;
    std::optional<double> std_error;
    std::vector<PhaseRow> table;
    ModeState post_state;
};

inline std::vector<PhaseRow> make_table(const protocol::ProtocolRun &run,
                                        const std::optional<protocol::PhaseCounts> &counts) {
    std::vector<PhaseRow> rows;
    for (std::size_t k = 0; k < run.phases.size(); ++k) {
        PhaseRow r{run.phases[k], run.p_up[k], run.p_down[k], std::nullopt, std::nullopt};
        if (counts) {
            r.count_up = counts->up[k];
            r.count_down = counts->down[k];
        }
        rows.push_back(r);
    }
    return rows;
}

/// Visibility of the device on `modes`, exact or from sampled shots.
inline Measurement measure_visibility(const ModeState &modes, const Settings &settings,
                                      std::optional<std::uint64_t> shots, std::uint64_t seed) {
    const protocol::Device device(settings.mode, modes.cutoff());
    protocol::ProtocolRun run = protocol::sweep_visibility(device, modes, settings.phases);
    if (!shots) {
        return Measurement{run.visibility, std::nullopt, make_table(run, std::nullopt),
                           std::move(run.post_state_unconditional)};
    }
    const protocol::PhaseCounts counts = protocol::sample_shots(run, *shots, seed);
    const protocol::VisibilityEstimate est = protocol::estimate_visibility(counts);
    return Measurement{est.v_hat, est.std_error, make_table(run, counts), std::move(run.post_state_unconditional)};
}

inline void require_same_dim(const DensityMatrix &a, const DensityMatrix &b, const char *what) {
    if (a.dim() != b.dim()) {
        throw DimensionError(std::string(what) + ": dimensions differ (" + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()) + ")");
    }
}

inline double trace_product(const DensityMatrix &a, const DensityMatrix &b) {
    return (a.matrix() * b.matrix()).trace().real();
}

inline ObservableReport finish(std::string name, const Measurement &m, double oracle, const Settings &s) {
    ObservableReport r;
    r.name = std::move(name);
    r.device_value = m.value;
    r.oracle_value = oracle;
    r.abs_error = std::abs(m.value - oracle);
    r.std_error = m.std_error;
    r.shots = s.shots;
    r.table = m.table;
    return r;
}

}  // namespace detail

/// Tr(rho_a rho_b) from the visibility of rho_a (x) rho_b.
inline ObservableReport overlap(const DensityMatrix &rho_a, const DensityMatrix &rho_b, const Settings &settings = {}) {
    detail::require_same_dim(rho_a, rho_b, "overlap");
    const auto m = detail::measure_visibility(ModeState::product(rho_a, rho_b), settings, settings.shots, settings.seed);
    return detail::finish("overlap", m, detail::trace_product(rho_a, rho_b), settings);
}

/// <psi|rho|psi> for a normalized pure state psi.
inline ObservableReport fidelity_with_pure(const DensityMatrix &rho, const CVector &psi, const Settings &settings = {}) {
    if (std::abs(psi.norm() - 1.0) > 1e-8) {
        throw DomainError("fidelity_with_pure: pure state is not normalized (norm " + std::to_string(psi.norm()) + ")");
    }
    if (static_cast<std::size_t>(psi.size()) != rho.dim()) {
        throw DimensionError("fidelity_with_pure: dimensions differ");
    }
    const DensityMatrix target = DensityMatrix::unchecked(CompositeSpace({rho.dim()}), psi * psi.adjoint());
    const auto m = detail::measure_visibility(ModeState::product(rho, target), settings, settings.shots, settings.seed);
    const double oracle = (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
    return detail::finish("fidelity", m, oracle, settings);
}

/// Tr(rho^2) from two independent copies.
inline ObservableReport purity(const DensityMatrix &rho, const Settings &settings = {}) {
    const auto m = detail::measure_visibility(ModeState::product(rho, rho), settings, settings.shots, settings.seed);
    return detail::finish("purity", m, detail::trace_product(rho, rho), settings);
}

inline ObservableReport linear_entropy(const DensityMatrix &rho, const Settings &settings = {}) {
    auto m = detail::measure_visibility(ModeState::product(rho, rho), settings, settings.shots, settings.seed);
    m.value = 1.0 - m.value;
    return detail::finish("linear_entropy", m, 1.0 - detail::trace_product(rho, rho), settings);
}

/// d^2 = (P_A + P_B)/2 - O_AB. The purities are measured first; the overlap
/// is then taken on the marginals of their unconditional post-states, which
/// the measurement leaves unchanged. In shot mode each of the three runs gets
/// a third of the per-phase budget and the errors add in quadrature.
inline ObservableReport hs_distance(const DensityMatrix &rho_a, const DensityMatrix &rho_b,
                                    const Settings &settings = {}) {
    detail::require_same_dim(rho_a, rho_b, "hs_distance");
    std::optional<std::uint64_t> sub_shots;
    if (settings.shots) {
        sub_shots = std::max<std::uint64_t>(1, *settings.shots / 3);
    }
    const auto pa = detail::measure_visibility(ModeState::product(rho_a, rho_a), settings, sub_shots,
                                               stream_seed(settings.seed, 1));
    const auto pb = detail::measure_visibility(ModeState::product(rho_b, rho_b), settings, sub_shots,
                                               stream_seed(settings.seed, 2));
    const ModeState reused = ModeState::product(pa.post_state.marginal(0), pb.post_state.marginal(0));
    auto o = detail::measure_visibility(reused, settings, sub_shots, stream_seed(settings.seed, 3));

    const CMatrix diff = rho_a.matrix() - rho_b.matrix();
    const double oracle = 0.5 * (diff * diff).trace().real();

    detail::Measurement m{0.5 * (pa.value + pb.value) - o.value, std::nullopt, std::move(o.table),
                          std::move(o.post_state)};
    if (settings.shots) {
        const double sa = *pa.std_error, sb = *pb.std_error, so = *o.std_error;
        m.std_error = std::sqrt(0.25 * sa * sa + 0.25 * sb * sb + so * so);
    }
    ObservableReport r = detail::finish("hs_distance", m, oracle, settings);
    r.shots = sub_shots;
    return r;
}

/// Measure rho_a (x) rho_b, discard the ancilla, and measure the resulting
/// mode state again. Reports the second visibility against Tr(rho_a rho_b).
inline ObservableReport repeat_check(const DensityMatrix &rho_a, const DensityMatrix &rho_b,
                                     const Settings &settings = {}) {
    detail::require_same_dim(rho_a, rho_b, "repeat_check");
    const auto first =
        detail::measure_visibility(ModeState::product(rho_a, rho_b), settings, settings.shots, settings.seed);
    const auto second =
        detail::measure_visibility(first.post_state, settings, settings.shots, stream_seed(settings.seed, 1));
    return detail::finish("repeat_check", second, detail::trace_product(rho_a, rho_b), settings);
}

/// <Lambda| rho^{T_2} |Lambda> with |Lambda> = sum_j |j>|j> in the
/// computational basis.
inline double lambda_expectation(const DensityMatrix &rho_joint) {
    const auto &dims = rho_joint.space().dims();
    if (dims.size() != 2 || dims[0] != dims[1]) {
        throw DimensionError("witness needs a bipartite state with equal local dimensions, got " +
                             rho_joint.space().to_string());
    }
    const std::size_t d = dims[0];
    const CMatrix pt = partial_transpose(rho_joint, 1);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            acc += pt(static_cast<Eigen::Index>(i * d + i), static_cast<Eigen::Index>(j * d + j));
        }
    }
    return acc.real();
}

/// |Tr(rho (Pi_+ - Pi_-))|.
inline double povm_expectation(const DensityMatrix &rho_joint) {
    const auto &dims = rho_joint.space().dims();
    if (dims.size() != 2 || dims[0] != dims[1]) {
        throw DimensionError("povm_expectation needs a bipartite state with equal local dimensions, got " +
                             rho_joint.space().to_string());
    }
    const CMatrix v = gates::povm_projectors(dims[0]).dichotomic();
    return std::abs((rho_joint.matrix() * v).trace().real());
}

/// Delta = p_up - p_down at the calibrated phase, with an entanglement
/// verdict. Only a clearly negative Delta is conclusive.
inline ObservableReport witness(const DensityMatrix &rho_joint, const Settings &settings = {}) {
    const double oracle = lambda_expectation(rho_joint);
    const ModeState modes = ModeState::joint(rho_joint);
    const protocol::Device device(settings.mode, modes.cutoff());
    const protocol::ProtocolRun run = protocol::sweep_visibility(device, modes, settings.phases);

    ObservableReport r;
    r.name = "witness";
    r.oracle_value = oracle;
    r.shots = settings.shots;
    if (!settings.shots) {
        r.device_value = run.delta;
        r.table = detail::make_table(run, std::nullopt);
        r.verdict = run.delta < -kExactVerdictTol ? "entangled" : "inconclusive";
    } else {
        const std::uint64_t n = *settings.shots;
        const protocol::PhaseCounts counts = protocol::sample_shots(run, n, settings.seed);
        const double p_up_star = 0.5 * (1.0 + run.delta);
        const std::uint64_t up = protocol::sample_at_phase(p_up_star, n, settings.seed, run.phases.size());
        const double delta = (2.0 * static_cast<double>(up) - static_cast<double>(n)) / static_cast<double>(n);
        const double sigma = std::sqrt(std::max(0.0, 1.0 - delta * delta) / static_cast<double>(n));
        r.device_value = delta;
        r.std_error = sigma;
        r.table = detail::make_table(run, counts);
        r.verdict = delta < -kShotVerdictSigmas * sigma ? "entangled" : "inconclusive";
    }
    r.abs_error = std::abs(r.device_value - r.oracle_value);
    return r;
}

}  // namespace swapmeter::observables

#endif  // SWAPMETER_OBSERVABLES_HPP
