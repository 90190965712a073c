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
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qconv/noise.hpp"

namespace qconv {

// Basis-state transition probabilities after a number of noisy layers.
// entries(i, j) = P(measure |i> | prepared |j>); columns sum to one.
struct MatrixProvenance {
  enum class Kind { Analytic, Empirical };
  Kind kind = Kind::Analytic;
  ChannelKind channel = ChannelKind::Depolarizing;
  double strength = 0.0;
  long layers = 1;
  long shots = 0;          // 0 = exact populations
  std::uint64_t seed = 0;  // sampling seed when shots > 0
};

struct TransitionMatrix {
  Eigen::MatrixXd entries;
  int qubits = 0;
  MatrixProvenance provenance;
};

// Mean transition probability per Hamming distance d = 0..qubits, one row
// per layer count.
struct HammingProfile {
  int qubits = 0;
  std::vector<long> layer_counts;
  Eigen::MatrixXd values;  // layer_counts.size() x (qubits + 1)
};

int hamming(std::uint64_t i, std::uint64_t j);

// Single-qubit, single-layer population map [[1-p/2, p/2], [p/2, 1-p/2]]
// shared by the bit-flip, bit-phase-flip and depolarizing channels.
TransitionMatrix m1(double p);

// Per-qubit flip probability accumulated over l layers: 1 - (1-p)^l.
double effective_p(double p, long l);

// Closed-form n-qubit transition matrix after l layers of strength-p
// population-mixing noise: with q = effective_p(p, l) and d the Hamming
// distance between row and column indices,
//   entries(i, j) = (q/2)^d ((2-q)/2)^(n-d).
TransitionMatrix analytic_matrix(int n, double p, long l);

struct ShotSampler {
  long shots = 0;
  std::uint64_t seed = 0;
};

// Transition matrix measured from the density-matrix simulation: column j is
// the basis-population diagonal after l noisy steps from |j><j|. With a
// sampler, columns hold multinomial frequency estimates instead of exact
// populations (column j uses a sub-seed derived from seed and j, so columns
// are independent of evaluation order).
TransitionMatrix empirical_matrix(int n, long l, const NoisyStepConfig& cfg,
                                  const std::optional<ShotSampler>& sampler = {});

// Collapse a transition matrix to mean probability per Hamming distance.
HammingProfile group_by_distance(const TransitionMatrix& matrix);

// Analytic Hamming profile rows for several layer counts at fixed p.
HammingProfile hamming_profile_curve(int n, double p,
                                     const std::vector<long>& layer_counts);

// Least-squares fit of the single-step strength p in [0, 1] that best
// reproduces `observed` with analytic_matrix(n, p, l) in the Frobenius norm.
// Deterministic: coarse scan plus golden-section refinement.
double fit_p(const TransitionMatrix& observed, long l);

// Multinomial counts for the outcome distribution; probs must be
// non-negative up to rounding noise and is renormalized internally.
Eigen::VectorXd sample_counts(const Eigen::VectorXd& probs, long shots,
                              std::uint64_t seed);

// Per-qubit readout confusion: confusion[q](observed, true) with columns
// summing to one. `uniform_confusion` builds the symmetric model where each
// qubit misreads with probability eps.
struct ReadoutModel {
  std::vector<Eigen::Matrix2d> confusion;

  int qubits() const { return static_cast<int>(confusion.size()); }
  void validate() const;
};

ReadoutModel uniform_confusion(int qubits, double eps);

// Forward readout distortion of an outcome distribution.
Eigen::VectorXd apply_readout(const Eigen::VectorXd& probs,
                              const ReadoutModel& model);

// Invert the tensor-product confusion model on measured counts, clip
// negative estimates to zero and renormalize. Throws std::invalid_argument
// when any per-qubit confusion matrix is singular.
Eigen::VectorXd mitigate_readout(const Eigen::VectorXd& counts,
                                 const ReadoutModel& model);

}  // namespace qconv
