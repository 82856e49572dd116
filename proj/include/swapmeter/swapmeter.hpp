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

#ifndef SWAPMETER_SWAPMETER_HPP
#define SWAPMETER_SWAPMETER_HPP

// Everything except the scenario layer, which also needs the JSON parser.

#include "swapmeter/circuit.hpp"
#include "swapmeter/dynamics.hpp"
#include "swapmeter/error.hpp"
#include "swapmeter/gates.hpp"
#include "swapmeter/linalg.hpp"
#include "swapmeter/mode_state.hpp"
#include "swapmeter/observables.hpp"
#include "swapmeter/protocol.hpp"
#include "swapmeter/random.hpp"
#include "swapmeter/sampling.hpp"
#include "swapmeter/states.hpp"

#endif  // SWAPMETER_SWAPMETER_HPP
