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

// Witness value across the Werner family, exact and from 2000 shots per phase.

#include <cstdio>

#include "swapmeter/observables.hpp"
#include "swapmeter/states.hpp"

int main() {
    namespace ob = swapmeter::observables;
    std::printf("%6s %12s %12s %10s %s\n", "p", "delta", "sampled", "std_err", "verdict");
    for (int i = 0; i <= 20; ++i) {
        const double p = 0.05 * i;
        const auto rho = swapmeter::states::werner(p);
        const auto exact = ob::witness(rho);
        ob::Settings s;
        s.shots = 2000;
        s.seed = static_cast<std::uint64_t>(i);
        const auto shot = ob::witness(rho, s);
        std::printf("%6.2f %12.6f %12.6f %10.6f %s\n", p, exact.device_value, shot.device_value, *shot.std_error,
                    shot.verdict.value_or("-").c_str());
    }
}
