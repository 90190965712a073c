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

#include "qconv/quantum.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qconv/dft.hpp"

namespace qconv {

namespace {

using Complex = std::complex<double>;

void check_state(const StateVector& psi, const char* where) {
  if (psi.qubits < 1 || psi.amplitudes.size() != (Eigen::Index{1} << psi.qubits))
    throw std::invalid_argument(std::string(where) +
                                ": amplitude count does not match qubit count");
}

void check_density(const DensityMatrix& rho, const char* where) {
  const Eigen::Index dim = Eigen::Index{1} << rho.qubits;
  if (rho.qubits < 1 || rho.entries.rows() != dim || rho.entries.cols() != dim)
    throw std::invalid_argument(std::string(where) +
                                ": matrix shape does not match qubit count");
}

Eigen::VectorXcd layer_phase_factors(const EvolutionLayer& layer) {
  const Eigen::Index dim = Eigen::Index{1} << layer.qubits();
  Eigen::VectorXcd factors(dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    factors[j] = std::polar(1.0, layer_phase(layer, static_cast<std::uint64_t>(j)));
  return factors;
}

// rho -> T rho T^dagger for a unitary whose action on vectors is `transform`.
// Columns first (T rho), then rows via conj(T conj(row)) (right-multiply by
// T^dagger).
DensityMatrix conjugate_density(const DensityMatrix& rho,
                                Eigen::VectorXcd (*transform)(const Eigen::VectorXcd&),
                                const char* where) {
  check_density(rho, where);
  const Eigen::Index dim = rho.entries.rows();
  Eigen::MatrixXcd out(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) out.col(c) = transform(rho.entries.col(c));
  for (Eigen::Index r = 0; r < dim; ++r)
    out.row(r) = transform(out.row(r).conjugate().transpose()).conjugate().transpose();
  return DensityMatrix{std::move(out), rho.qubits};
}

}  // namespace

StateVector basis_state(int qubits, std::uint64_t index) {
  if (qubits < 1)
    throw std::invalid_argument("basis_state: need at least one qubit");
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  if (index >= static_cast<std::uint64_t>(dim))
    throw std::invalid_argument("basis_state: index out of range");
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(dim);
  amp[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector{std::move(amp), qubits};
}

DensityMatrix density_from(const StateVector& psi) {
  check_state(psi, "density_from");
  return DensityMatrix{psi.amplitudes * psi.amplitudes.adjoint(), psi.qubits};
}

double state_norm(const StateVector& psi) { return psi.amplitudes.norm(); }

double trace_real(const DensityMatrix& rho) { return rho.entries.trace().real(); }

double hermiticity_error(const DensityMatrix& rho) {
  return (rho.entries - rho.entries.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries);
  return solver.eigenvalues().minCoeff();
}

Eigen::VectorXd diagonal_real(const DensityMatrix& rho) {
  return rho.entries.diagonal().real();
}

EvolutionLayer make_layer(const ProblemSpec& spec) {
  const int n = spec.qubits();
  const double theta =
      spec.speed * spec.dt * 2.0 * std::numbers::pi / spec.length;
  EvolutionLayer layer;
  layer.angles.resize(n);
  for (int j = 0; j + 1 < n; ++j) layer.angles[j] = theta * double(1LL << j);
  layer.angles[n - 1] = -theta * double(1LL << (n - 1));
  layer.global_phase = -theta / 2.0;
  return layer;
}

double layer_phase(const EvolutionLayer& layer, std::uint64_t index) {
  double phase = layer.global_phase;
  for (int q = 0; q < layer.qubits(); ++q)
    phase += layer.angles[q] * (double((index >> q) & 1u) - 0.5);
  return phase;
}

StateVector apply_layer(const StateVector& psi, const EvolutionLayer& layer) {
  check_state(psi, "apply_layer");
  if (layer.qubits() != psi.qubits)
    throw std::invalid_argument("apply_layer: layer and state qubit counts differ");
  const Eigen::VectorXcd factors = layer_phase_factors(layer);
  return StateVector{psi.amplitudes.cwiseProduct(factors), psi.qubits};
}

DensityMatrix apply_layer(const DensityMatrix& rho, const EvolutionLayer& layer) {
  check_density(rho, "apply_layer");
  if (layer.qubits() != rho.qubits)
    throw std::invalid_argument("apply_layer: layer and state qubit counts differ");
  const Eigen::VectorXcd f = layer_phase_factors(layer);
  return DensityMatrix{f.asDiagonal() * rho.entries * f.conjugate().asDiagonal(),
                       rho.qubits};
}

StateVector qft(const StateVector& psi) {
  check_state(psi, "qft");
  return StateVector{forward_dft(psi.amplitudes), psi.qubits};
}

StateVector iqft(const StateVector& psi) {
  check_state(psi, "iqft");
  return StateVector{inverse_dft(psi.amplitudes), psi.qubits};
}

DensityMatrix qft(const DensityMatrix& rho) {
  return conjugate_density(rho, &forward_dft, "qft");
}

DensityMatrix iqft(const DensityMatrix& rho) {
  return conjugate_density(rho, &inverse_dft, "iqft");
}

EncodedState encode(const GridField& field) {
  field.spec.validate();
  if (field.values.size() != field.spec.grid_points)
    throw std::invalid_argument("encode: sample count does not match spec");
  const double norm = field.values.norm();
  if (norm == 0.0)
    throw std::invalid_argument(
        "encode: field is identically zero and has no normalized encoding");
  StateVector psi{(field.values / norm).cast<Complex>(), field.spec.qubits()};
  return EncodedState{std::move(psi), norm, field.spec, field.time};
}

GridField decode(const EncodedState& enc, const StateVector* reference,
                 DecodeConvention convention, double* imag_residual) {
  enc.spec.validate();
  const Eigen::Index dim = enc.spec.grid_points;

  if (const auto* psi = std::get_if<StateVector>(&enc.state)) {
    check_state(*psi, "decode");
    if (psi->amplitudes.size() != dim)
      throw std::invalid_argument("decode: state size does not match spec");
    if (imag_residual)
      *imag_residual = enc.norm_scale * psi->amplitudes.imag().cwiseAbs().maxCoeff();
    return GridField{enc.norm_scale * psi->amplitudes.real(), enc.time, enc.spec};
  }

  const auto& rho = std::get<DensityMatrix>(enc.state);
  check_density(rho, "decode");
  if (rho.entries.rows() != dim)
    throw std::invalid_argument("decode: state size does not match spec");
  if (!reference)
    throw std::invalid_argument(
        "decode: mixed-state input requires the ideal reference state");
  check_state(*reference, "decode reference");
  if (reference->amplitudes.size() != dim)
    throw std::invalid_argument("decode: reference size does not match spec");

  Eigen::VectorXd values(dim);
  if (convention == DecodeConvention::CoherentProjection) {
    const Eigen::VectorXcd overlap = rho.entries * reference->amplitudes;
    const double fidelity = reference->amplitudes.dot(overlap).real();
    if (!(fidelity > 0.0))
      throw std::runtime_error(
          "decode: state has no overlap with the reference; cannot rescale");
    const double rescale = enc.norm_scale / std::sqrt(fidelity);
    values = rescale * overlap.real();
    if (imag_residual)
      *imag_residual = rescale * overlap.imag().cwiseAbs().maxCoeff();
  } else {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double population = std::max(0.0, rho.entries(j, j).real());
      const double sign =
          std::copysign(1.0, reference->amplitudes[j].real());
      values[j] = enc.norm_scale * sign * std::sqrt(population);
    }
    if (imag_residual) *imag_residual = 0.0;
  }
  return GridField{std::move(values), enc.time, enc.spec};
}

std::vector<GridField> simulate_ideal(const GridField& ic, long steps) {
  if (steps < 0) throw std::invalid_argument("simulate_ideal: steps must be >= 0");
  EncodedState enc = encode(ic);
  const EvolutionLayer layer = make_layer(ic.spec);
  StateVector spectral = qft(std::get<StateVector>(enc.state));

  std::vector<GridField> snapshots;
  snapshots.reserve(static_cast<std::size_t>(steps) + 1);
  for (long s = 0; s <= steps; ++s) {
    EncodedState snap{iqft(spectral), enc.norm_scale, enc.spec,
                      ic.time + double(s) * ic.spec.dt};
    snapshots.push_back(decode(snap));
    if (s < steps) spectral = apply_layer(spectral, layer);
  }
  return snapshots;
}

}  // namespace qconv
