// Copyright 2026 The qconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>

#include "qconv/field.hpp"

namespace qconv {

// OpenQASM 2.0 text for `layers` repetitions of the per-qubit z-rotation
// layer of make_layer(spec): optional ry(pi) preparation on the set bits of
// basis_state, then each layer's rz gates, with a barrier between
// consecutive layers and a terminal per-qubit measurement. Angles are
// printed with 17 significant digits. The layer's global phase has no gate
// representation and is omitted; it never affects measured populations.
std::string export_qasm(const ProblemSpec& spec, long layers,
                        std::uint64_t basis_state = 0);

}  // namespace qconv
