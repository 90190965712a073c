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

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qconv/quantum.hpp"

namespace qconv {

enum class ChannelKind {
  BitFlip,
  PhaseFlip,
  BitPhaseFlip,
  Depolarizing,
  AmplitudeDamping,
};

std::string to_string(ChannelKind kind);
ChannelKind parse_channel(std::string_view name);

// Single-qubit noise channel in Kraus form: rho -> sum_K K rho K^dagger.
//
// Kraus sets (p = strength, gamma = strength for amplitude damping):
//   BitFlip       { sqrt(1-p/2) I, sqrt(p/2) X }
//   PhaseFlip     { sqrt(1-p/2) I, sqrt(p/2) Z }
//   BitPhaseFlip  { sqrt(1-p/2) I, sqrt(p/2) Y }
//   Depolarizing  { sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z }
//     which equals rho -> (1-p) rho + p I/2.
//   AmplitudeDamping { diag(1, sqrt(1-gamma)), sqrt(gamma) |0><1| }
// Zero-weight operators are dropped, so strength 0 yields the identity
// channel with the single Kraus operator I.
struct NoiseChannel {
  ChannelKind kind = ChannelKind::Depolarizing;
  double strength = 0.0;
  std::vector<Eigen::Matrix2cd> kraus;
};

// Throws std::invalid_argument when strength is outside [0, 1].
NoiseChannel make_channel(ChannelKind kind, double strength);

// Completeness defect max |sum_K K^dagger K - I| over entries.
double completeness_error(const NoiseChannel& channel);

// Action of the channel on basis populations: column j is the diagonal of
// channel(|j><j|). The bit-flip, bit-phase-flip and depolarizing channels all
// share [[1-p/2, p/2], [p/2, 1-p/2]]; phase flip leaves populations alone.
Eigen::Matrix2d diagonal_action(const NoiseChannel& channel);

// Apply the channel to one qubit of a register state.
DensityMatrix apply_channel(const DensityMatrix& rho, const NoiseChannel& channel,
                            int qubit);

// One noisy advection step: the phase layer followed by the channel on every
// qubit in index order.
struct NoisyStepConfig {
  NoiseChannel channel;
};

DensityMatrix noisy_step(const DensityMatrix& rho, const EvolutionLayer& layer,
                         const NoisyStepConfig& cfg);

namespace detail {
// In-place variants used by the hot simulation loops.
void apply_layer_inplace(DensityMatrix& rho, const EvolutionLayer& layer);
void apply_channel_inplace(DensityMatrix& rho, const NoiseChannel& channel,
                           int qubit);
void noisy_step_inplace(DensityMatrix& rho, const EvolutionLayer& layer,
                        const NoisyStepConfig& cfg);
}  // namespace detail

}  // namespace qconv
