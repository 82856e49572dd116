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

// Ancilla fringe for two coherent states on the cavity device.
// Usage: coherent_fringe [alpha] [beta] [cutoff]

#include <cstdio>
#include <cstdlib>

#include "swapmeter/protocol.hpp"
#include "swapmeter/states.hpp"

int main(int argc, char **argv) {
    namespace pr = swapmeter::protocol;
    namespace st = swapmeter::states;
    const double alpha = argc > 1 ? std::atof(argv[1]) : 1.0;
    const double beta = argc > 2 ? std::atof(argv[2]) : 0.5;
    const std::size_t d = argc > 3 ? static_cast<std::size_t>(std::atoi(argv[3])) : 12;

    const auto modes = swapmeter::ModeState::product(st::coherent(alpha, d), st::coherent(beta, d));
    pr::HamiltonianDevice cavity;
    const auto run = pr::sweep_visibility(modes, 16, cavity);
    const auto ideal = pr::sweep_visibility(modes, 16, pr::Ideal{});

    std::printf("%8s %10s %10s\n", "psi", "p_up", "p_down");
    for (std::size_t k = 0; k < run.phases.size(); ++k) {
        std::printf("%8.4f %10.6f %10.6f\n", run.phases[k], run.p_up[k], run.p_down[k]);
    }
    std::printf("visibility %.9f (ideal device %.9f, exp(-|a-b|^2) = %.9f)\n", run.visibility, ideal.visibility,
                std::exp(-(alpha - beta) * (alpha - beta)));
    std::printf("weight outside the safe sector %.3g\n", swapmeter::out_of_safe_sector_weight(modes));
}
