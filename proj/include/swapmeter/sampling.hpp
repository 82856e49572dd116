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

#ifndef SWAPMETER_SAMPLING_HPP
#define SWAPMETER_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "swapmeter/protocol.hpp"
#include "swapmeter/random.hpp"

namespace swapmeter::protocol {

/// Detector clicks at each phase of a sweep.
struct PhaseCounts {
    std::vector<double> phases;
    std::vector<std::uint64_t> up;
    std::vector<std::uint64_t> down;
    std::uint64_t shots_per_phase = 0;

    std::vector<double> frequencies_down() const {
        std::vector<double> f(down.size());
        for (std::size_t k = 0; k < down.size(); ++k) {
            f[k] = static_cast<double>(down[k]) / static_cast<double>(shots_per_phase);
        }
        return f;
    }
};

/// `shots` Bernoulli draws with success probability p_up, from stream
/// `stream` of `seed`. A shot is "up" when the uniform variate is < p_up.
inline std::uint64_t sample_at_phase(double p_up, std::uint64_t shots, std::uint64_t seed, std::uint64_t stream) {
    Engine g = make_engine(seed, stream);
    std::uint64_t up = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        up += bernoulli(g, p_up) ? 1 : 0;
    }
    return up;
}

/// Sample every phase of `run` independently; phase k uses stream k, so
/// the result does not depend on evaluation order.
inline PhaseCounts sample_shots(std::span<const double> phases, std::span<const double> p_up,
                                std::uint64_t shots_per_phase, std::uint64_t seed) {
    if (shots_per_phase < 1) {
        throw DomainError("shots per phase must be >= 1");
    }
    if (phases.size() != p_up.size()) {
        throw DimensionError("sample_shots: phases and probabilities differ in length");
    }
    PhaseCounts out{std::vector<double>(phases.begin(), phases.end()), {}, {}, shots_per_phase};
    out.up.resize(phases.size());
    out.down.resize(phases.size());
    for (std::size_t k = 0; k < phases.size(); ++k) {
        out.up[k] = sample_at_phase(p_up[k], shots_per_phase, seed, k);
        out.down[k] = shots_per_phase - out.up[k];
    }
    return out;
}

inline PhaseCounts sample_shots(const ProtocolRun &run, std::uint64_t shots_per_phase, std::uint64_t seed) {
    return sample_shots(run.phases, run.p_up, shots_per_phase, seed);
}

struct VisibilityEstimate {
    double v_hat;
    double std_error;
    Complex c_hat;
};

/// The sweep's Fourier estimator applied to empirical frequencies. The
/// standard error propagates the binomial variance of each frequency
/// through |C| to first order.
inline VisibilityEstimate estimate_visibility(const PhaseCounts &counts) {
    check_uniform_grid(counts.phases);
    const std::vector<double> f = counts.frequencies_down();
    const Complex c = fringe_coefficient(f, counts.phases);
    const double v = std::abs(c);
    const double n = static_cast<double>(counts.shots_per_phase);
    const double scale = 4.0 / static_cast<double>(f.size());
    double var = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double var_k = f[k] * (1.0 - f[k]) / n;
        // d|C|/dp_k = scale * Re(conj(u) e^{-i psi_k}), u = C/|C|; at C = 0
        // the direction is undefined and the average weight 1/2 is used.
        const double w = v > 0.0 ? std::pow(std::cos(counts.phases[k] + std::arg(c)), 2) : 0.5;
        var += scale * scale * w * var_k;
    }
    return VisibilityEstimate{v, std::sqrt(var), c};
}

}  // namespace swapmeter::protocol

#endif  // SWAPMETER_SAMPLING_HPP
