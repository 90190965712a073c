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

#include "qconv/noise.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qconv {

namespace {

using Complex = std::complex<double>;

const Complex kI(0.0, 1.0);

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, -kI, kI, 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

void push_weighted(std::vector<Eigen::Matrix2cd>& kraus, double weight,
                   const Eigen::Matrix2cd& op) {
  if (weight > 0.0) kraus.push_back(std::sqrt(weight) * op);
}

}  // namespace

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::BitFlip: return "bit-flip";
    case ChannelKind::PhaseFlip: return "phase-flip";
    case ChannelKind::BitPhaseFlip: return "bit-phase-flip";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::AmplitudeDamping: return "amplitude-damping";
  }
  throw std::invalid_argument("to_string: unknown channel kind");
}

ChannelKind parse_channel(std::string_view name) {
  if (name == "bit-flip") return ChannelKind::BitFlip;
  if (name == "phase-flip") return ChannelKind::PhaseFlip;
  if (name == "bit-phase-flip") return ChannelKind::BitPhaseFlip;
  if (name == "depolarizing") return ChannelKind::Depolarizing;
  if (name == "amplitude-damping") return ChannelKind::AmplitudeDamping;
  throw std::invalid_argument("parse_channel: unknown channel '" +
                              std::string(name) + "'");
}

NoiseChannel make_channel(ChannelKind kind, double strength) {
  if (!(strength >= 0.0 && strength <= 1.0))
    throw std::invalid_argument("make_channel: strength must lie in [0, 1], got " +
                                std::to_string(strength));
  NoiseChannel ch{kind, strength, {}};
  const double p = strength;
  switch (kind) {
    case ChannelKind::BitFlip:
      push_weighted(ch.kraus, 1.0 - p / 2.0, Eigen::Matrix2cd::Identity());
      push_weighted(ch.kraus, p / 2.0, pauli_x());
      break;
    case ChannelKind::PhaseFlip:
      push_weighted(ch.kraus, 1.0 - p / 2.0, Eigen::Matrix2cd::Identity());
      push_weighted(ch.kraus, p / 2.0, pauli_z());
      break;
    case ChannelKind::BitPhaseFlip:
      push_weighted(ch.kraus, 1.0 - p / 2.0, Eigen::Matrix2cd::Identity());
      push_weighted(ch.kraus, p / 2.0, pauli_y());
      break;
    case ChannelKind::Depolarizing:
      push_weighted(ch.kraus, 1.0 - 3.0 * p / 4.0, Eigen::Matrix2cd::Identity());
      push_weighted(ch.kraus, p / 4.0, pauli_x());
      push_weighted(ch.kraus, p / 4.0, pauli_y());
      push_weighted(ch.kraus, p / 4.0, pauli_z());
      break;
    case ChannelKind::AmplitudeDamping: {
      Eigen::Matrix2cd k0 = Eigen::Matrix2cd::Zero();
      k0(0, 0) = 1.0;
      k0(1, 1) = std::sqrt(1.0 - p);
      ch.kraus.push_back(k0);
      if (p > 0.0) {
        Eigen::Matrix2cd k1 = Eigen::Matrix2cd::Zero();
        k1(0, 1) = std::sqrt(p);
        ch.kraus.push_back(k1);
      }
      break;
    }
  }
  return ch;
}

double completeness_error(const NoiseChannel& channel) {
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  for (const auto& k : channel.kraus) sum += k.adjoint() * k;
  return (sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

Eigen::Matrix2d diagonal_action(const NoiseChannel& channel) {
  Eigen::Matrix2d t = Eigen::Matrix2d::Zero();
  for (const auto& k : channel.kraus)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t(i, j) += std::norm(k(i, j));
  return t;
}

namespace detail {

void apply_layer_inplace(DensityMatrix& rho, const EvolutionLayer& layer) {
  const Eigen::Index dim = rho.entries.rows();
  Eigen::VectorXcd f(dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    f[j] = std::polar(1.0, layer_phase(layer, static_cast<std::uint64_t>(j)));
  Complex* data = rho.entries.data();
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Complex fc = std::conj(f[c]);
    Complex* col = data + c * dim;
    for (Eigen::Index r = 0; r < dim; ++r) col[r] *= f[r] * fc;
  }
}

void apply_channel_inplace(DensityMatrix& rho, const NoiseChannel& channel,
                           int qubit) {
  if (qubit < 0 || qubit >= rho.qubits)
    throw std::invalid_argument("apply_channel: qubit index out of range");
  const Eigen::Index dim = rho.entries.rows();
  const Eigen::Index mask = Eigen::Index{1} << qubit;

  // Superoperator on a 2x2 sub-block: B'_{rs} = sum_{uv} T[r][s][u][v] B_{uv}
  // with T[r][s][u][v] = sum_K K(r,u) conj(K(s,v)). The map touches each
  // (row-pair, column-pair) block independently, so it runs in place.
  Complex t[2][2][2][2] = {};
  for (const auto& k : channel.kraus)
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s)
        for (int u = 0; u < 2; ++u)
          for (int v = 0; v < 2; ++v) t[r][s][u][v] += k(r, u) * std::conj(k(s, v));

  Complex* data = rho.entries.data();
  for (Eigen::Index cg = 0; cg < dim; cg += 2 * mask) {
    for (Eigen::Index c0 = cg; c0 < cg + mask; ++c0) {
      Complex* colLo = data + c0 * dim;
      Complex* colHi = data + (c0 | mask) * dim;
      for (Eigen::Index rg = 0; rg < dim; rg += 2 * mask) {
        for (Eigen::Index r0 = rg; r0 < rg + mask; ++r0) {
          const Eigen::Index r1 = r0 | mask;
          const Complex a = colLo[r0];
          const Complex b = colHi[r0];
          const Complex c = colLo[r1];
          const Complex d = colHi[r1];
          colLo[r0] = t[0][0][0][0] * a + t[0][0][0][1] * b + t[0][0][1][0] * c +
                      t[0][0][1][1] * d;
          colHi[r0] = t[0][1][0][0] * a + t[0][1][0][1] * b + t[0][1][1][0] * c +
                      t[0][1][1][1] * d;
          colLo[r1] = t[1][0][0][0] * a + t[1][0][0][1] * b + t[1][0][1][0] * c +
                      t[1][0][1][1] * d;
          colHi[r1] = t[1][1][0][0] * a + t[1][1][0][1] * b + t[1][1][1][0] * c +
                      t[1][1][1][1] * d;
        }
      }
    }
  }
}

void noisy_step_inplace(DensityMatrix& rho, const EvolutionLayer& layer,
                        const NoisyStepConfig& cfg) {
  if (layer.qubits() != rho.qubits)
    throw std::invalid_argument("noisy_step: layer and state qubit counts differ");
  apply_layer_inplace(rho, layer);
  for (int q = 0; q < rho.qubits; ++q)
    apply_channel_inplace(rho, cfg.channel, q);
}

}  // namespace detail

DensityMatrix apply_channel(const DensityMatrix& rho, const NoiseChannel& channel,
                            int qubit) {
  const Eigen::Index dim = Eigen::Index{1} << rho.qubits;
  if (rho.qubits < 1 || rho.entries.rows() != dim || rho.entries.cols() != dim)
    throw std::invalid_argument("apply_channel: matrix shape does not match qubits");
  DensityMatrix out = rho;
  detail::apply_channel_inplace(out, channel, qubit);
  return out;
}

DensityMatrix noisy_step(const DensityMatrix& rho, const EvolutionLayer& layer,
                         const NoisyStepConfig& cfg) {
  DensityMatrix out = rho;
  detail::noisy_step_inplace(out, layer, cfg);
  return out;
}

}  // namespace qconv
