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

#include "qconv/qasm.hpp"

#include <cstdio>
#include <stdexcept>

#include "qconv/quantum.hpp"

namespace qconv {

namespace {

std::string format_angle(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

std::string export_qasm(const ProblemSpec& spec, long layers,
                        std::uint64_t basis_state) {
  spec.validate();
  if (layers < 1)
    throw std::invalid_argument("export_qasm: layers must be >= 1");
  const int n = spec.qubits();
  if (basis_state >= (std::uint64_t{1} << n))
    throw std::invalid_argument("export_qasm: basis state out of range");
  const EvolutionLayer layer = make_layer(spec);

  std::string out;
  out.reserve(64 * static_cast<std::size_t>(layers) * n);
  out += "OPENQASM 2.0;\n";
  out += "include \"qelib1.inc\";\n";
  out += "qreg q[" + std::to_string(n) + "];\n";
  out += "creg c[" + std::to_string(n) + "];\n";
  // The symbolic constant keeps the preparation rotation exact.
  for (int q = 0; q < n; ++q)
    if ((basis_state >> q) & 1u)
      out += "ry(pi) q[" + std::to_string(q) + "];\n";
  for (long l = 0; l < layers; ++l) {
    if (l > 0) out += "barrier q;\n";
    for (int q = 0; q < n; ++q)
      out += "rz(" + format_angle(layer.angles[q]) + ") q[" +
             std::to_string(q) + "];\n";
  }
  for (int q = 0; q < n; ++q)
    out += "measure q[" + std::to_string(q) + "] -> c[" + std::to_string(q) +
           "];\n";
  return out;
}

}  // namespace qconv
