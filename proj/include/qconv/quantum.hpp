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
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qconv/field.hpp"

namespace qconv {

// Pure n-qubit state. amplitudes.size() == 2^qubits. Qubit 0 is the least
// significant bit of the basis index.
struct StateVector {
  Eigen::VectorXcd amplitudes;
  int qubits = 0;
};

// Mixed n-qubit state as a dense density matrix.
struct DensityMatrix {
  Eigen::MatrixXcd entries;
  int qubits = 0;
};

StateVector basis_state(int qubits, std::uint64_t index);
DensityMatrix density_from(const StateVector& psi);

double state_norm(const StateVector& psi);
double trace_real(const DensityMatrix& rho);
// max |rho - rho^dagger| over entries.
double hermiticity_error(const DensityMatrix& rho);
double min_eigenvalue(const DensityMatrix& rho);
Eigen::VectorXd diagonal_real(const DensityMatrix& rho);

// One advection step as a diagonal phase layer: a single-qubit z rotation
// per qubit plus a recorded global phase. With theta = c dt 2 pi / L the
// angle on qubit j < n-1 is theta 2^j and on the top qubit -theta 2^{n-1};
// the global phase is -theta / 2. Acting in the analysis basis the layer
// multiplies slot j by e^{i theta k(j)} with k(j) the signed wavenumber,
// which transports the decoded field by c dt per application.
struct EvolutionLayer {
  Eigen::VectorXd angles;     // one z-rotation angle per qubit
  double global_phase = 0.0;  // radians, applied to every amplitude

  int qubits() const { return static_cast<int>(angles.size()); }
};

EvolutionLayer make_layer(const ProblemSpec& spec);

// Total phase the layer applies to basis state |index>: global_phase plus
// angles[q] * (bit_q(index) - 1/2) summed over qubits.
double layer_phase(const EvolutionLayer& layer, std::uint64_t index);

StateVector apply_layer(const StateVector& psi, const EvolutionLayer& layer);
DensityMatrix apply_layer(const DensityMatrix& rho, const EvolutionLayer& layer);

// Quantum Fourier transform in the analysis convention of dft.hpp, and its
// inverse. Density-matrix overloads conjugate: rho -> F rho F^dagger.
StateVector qft(const StateVector& psi);
StateVector iqft(const StateVector& psi);
DensityMatrix qft(const DensityMatrix& rho);
DensityMatrix iqft(const DensityMatrix& rho);

// How a field is read back out of a mixed state (pure states always decode
// via their real parts).
//
// CoherentProjection: u_j = scale * Re<j|rho|ref> / sqrt(<ref|rho|ref>).
// At zero noise this reduces exactly to the pure-state decode; under a
// depolarizing admixture it rescales the ideal field uniformly.
//
// DiagonalSqrt: u_j = scale * sign(Re ref_j) * sqrt(rho_jj), which discards
// coherence information and keeps only measured populations.
enum class DecodeConvention { CoherentProjection, DiagonalSqrt };

// Amplitude-encoded field plus the norm factor needed to undo the encoding.
struct EncodedState {
  std::variant<StateVector, DensityMatrix> state;
  double norm_scale = 1.0;
  ProblemSpec spec;
  double time = 0.0;
};

// Normalize samples into amplitudes. Throws std::invalid_argument on an
// identically zero field.
EncodedState encode(const GridField& field);

// Invert encode. Mixed states require the ideal reference state for the same
// time step (std::invalid_argument otherwise). imag_residual, when non-null,
// receives the magnitude of the discarded imaginary part, scaled like the
// output samples.
GridField decode(const EncodedState& enc, const StateVector* reference = nullptr,
                 DecodeConvention convention = DecodeConvention::CoherentProjection,
                 double* imag_residual = nullptr);

// Noiseless pipeline: encode, analysis QFT, `steps` phase layers, inverse
// QFT and decode at every step. Returns steps + 1 snapshots including the
// initial field.
std::vector<GridField> simulate_ideal(const GridField& ic, long steps);

}  // namespace qconv
