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

#include "qconv/transition.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qconv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t column_seed(std::uint64_t seed, std::uint64_t column) {
  return splitmix64(seed ^ splitmix64(column + 1));
}

void check_qubits(int n, const char* where) {
  if (n < 1 || n > 30)
    throw std::invalid_argument(std::string(where) +
                                ": qubit count must lie in [1, 30]");
}

void apply_axis(Eigen::VectorXd& v, const Eigen::Matrix2d& m, int qubit) {
  const Eigen::Index dim = v.size();
  const Eigen::Index mask = Eigen::Index{1} << qubit;
  for (Eigen::Index g = 0; g < dim; g += 2 * mask) {
    for (Eigen::Index i = g; i < g + mask; ++i) {
      const double lo = v[i];
      const double hi = v[i | mask];
      v[i] = m(0, 0) * lo + m(0, 1) * hi;
      v[i | mask] = m(1, 0) * lo + m(1, 1) * hi;
    }
  }
}

}  // namespace

int hamming(std::uint64_t i, std::uint64_t j) { return std::popcount(i ^ j); }

TransitionMatrix m1(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("m1: p must lie in [0, 1]");
  Eigen::MatrixXd m(2, 2);
  m << 1.0 - p / 2.0, p / 2.0, p / 2.0, 1.0 - p / 2.0;
  MatrixProvenance prov;
  prov.kind = MatrixProvenance::Kind::Analytic;
  prov.strength = p;
  prov.layers = 1;
  return TransitionMatrix{std::move(m), 1, prov};
}

double effective_p(double p, long l) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("effective_p: p must lie in [0, 1]");
  if (l < 0) throw std::invalid_argument("effective_p: l must be >= 0");
  if (l == 0 || p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return -std::expm1(static_cast<double>(l) * std::log1p(-p));
}

TransitionMatrix analytic_matrix(int n, double p, long l) {
  check_qubits(n, "analytic_matrix");
  const double q = effective_p(p, l);
  const double lo = q / 2.0;        // per-qubit flip probability
  const double hi = 1.0 - q / 2.0;  // per-qubit stay probability
  std::vector<double> pow_lo(n + 1, 1.0), pow_hi(n + 1, 1.0);
  for (int d = 1; d <= n; ++d) {
    pow_lo[d] = pow_lo[d - 1] * lo;
    pow_hi[d] = pow_hi[d - 1] * hi;
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) {
      const int d = hamming(static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(j));
      m(i, j) = pow_lo[d] * pow_hi[n - d];
    }
  MatrixProvenance prov;
  prov.kind = MatrixProvenance::Kind::Analytic;
  prov.strength = p;
  prov.layers = l;
  return TransitionMatrix{std::move(m), n, prov};
}

TransitionMatrix empirical_matrix(int n, long l, const NoisyStepConfig& cfg,
                                  const std::optional<ShotSampler>& sampler) {
  check_qubits(n, "empirical_matrix");
  if (l < 0) throw std::invalid_argument("empirical_matrix: l must be >= 0");
  ProblemSpec spec;
  spec.grid_points = 1 << n;  // layer angles do not move populations
  const EvolutionLayer layer = make_layer(spec);

  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    DensityMatrix rho = density_from(basis_state(n, static_cast<std::uint64_t>(j)));
    for (long s = 0; s < l; ++s) detail::noisy_step_inplace(rho, layer, cfg);
    Eigen::VectorXd populations = diagonal_real(rho).cwiseMax(0.0);
    if (sampler) {
      const Eigen::VectorXd counts =
          sample_counts(populations, sampler->shots,
                        column_seed(sampler->seed, static_cast<std::uint64_t>(j)));
      m.col(j) = counts / static_cast<double>(sampler->shots);
    } else {
      m.col(j) = populations;
    }
  }
  MatrixProvenance prov;
  prov.kind = MatrixProvenance::Kind::Empirical;
  prov.channel = cfg.channel.kind;
  prov.strength = cfg.channel.strength;
  prov.layers = l;
  prov.shots = sampler ? sampler->shots : 0;
  prov.seed = sampler ? sampler->seed : 0;
  return TransitionMatrix{std::move(m), n, prov};
}

HammingProfile group_by_distance(const TransitionMatrix& matrix) {
  const int n = matrix.qubits;
  check_qubits(n, "group_by_distance");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n + 1);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) {
      const int d = hamming(static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(j));
      sums[d] += matrix.entries(i, j);
      counts[d] += 1.0;
    }
  HammingProfile profile;
  profile.qubits = n;
  profile.layer_counts = {matrix.provenance.layers};
  profile.values = (sums.array() / counts.array()).matrix().transpose();
  return profile;
}

HammingProfile hamming_profile_curve(int n, double p,
                                     const std::vector<long>& layer_counts) {
  check_qubits(n, "hamming_profile_curve");
  HammingProfile profile;
  profile.qubits = n;
  profile.layer_counts = layer_counts;
  profile.values.resize(static_cast<Eigen::Index>(layer_counts.size()), n + 1);
  for (std::size_t r = 0; r < layer_counts.size(); ++r) {
    const double q = effective_p(p, layer_counts[r]);
    for (int d = 0; d <= n; ++d)
      profile.values(static_cast<Eigen::Index>(r), d) =
          std::pow(q / 2.0, d) * std::pow(1.0 - q / 2.0, n - d);
  }
  return profile;
}

double fit_p(const TransitionMatrix& observed, long l) {
  const int n = observed.qubits;
  check_qubits(n, "fit_p");
  if (l < 1) throw std::invalid_argument("fit_p: l must be >= 1");
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (observed.entries.rows() != dim || observed.entries.cols() != dim)
    throw std::invalid_argument("fit_p: matrix shape does not match qubits");

  const auto objective = [&](double p) {
    return (analytic_matrix(n, p, l).entries - observed.entries).squaredNorm();
  };

  // Coarse scan pins the basin (the objective is smooth in p but the minimum
  // may sit on a boundary), then golden-section refinement localizes it.
  constexpr int kScanPoints = 201;
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScanPoints; ++i) {
    const double value = objective(double(i) / (kScanPoints - 1));
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  double a = double(std::max(0, best - 1)) / (kScanPoints - 1);
  double b = double(std::min(kScanPoints - 1, best + 1)) / (kScanPoints - 1);

  constexpr double kGolden = 0.6180339887498949;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = objective(x2);
    }
  }
  const double mid = 0.5 * (a + b);
  // Boundary minima beat the interior midpoint when the scan pinned them.
  double result = mid;
  double result_value = objective(mid);
  for (const double cand : {0.0, 1.0}) {
    const double value = objective(cand);
    if (value < result_value) {
      result_value = value;
      result = cand;
    }
  }
  return result;
}

Eigen::VectorXd sample_counts(const Eigen::VectorXd& probs, long shots,
                              std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
  if (probs.size() < 1) throw std::invalid_argument("sample_counts: empty input");
  if (probs.minCoeff() < -1e-9)
    throw std::invalid_argument("sample_counts: probabilities must be >= 0");
  std::vector<double> weights(probs.size());
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    weights[static_cast<std::size_t>(i)] = std::max(0.0, probs[i]);
  std::discrete_distribution<int> dist(weights.begin(), weights.end());
  std::mt19937_64 gen(seed);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(probs.size());
  for (long s = 0; s < shots; ++s) counts[dist(gen)] += 1.0;
  return counts;
}

void ReadoutModel::validate() const {
  if (confusion.empty())
    throw std::invalid_argument("ReadoutModel: need at least one qubit");
  for (const auto& m : confusion) {
    if (m.minCoeff() < -1e-12)
      throw std::invalid_argument("ReadoutModel: confusion entries must be >= 0");
    for (int c = 0; c < 2; ++c)
      if (std::abs(m.col(c).sum() - 1.0) > 1e-9)
        throw std::invalid_argument("ReadoutModel: confusion columns must sum to 1");
  }
}

ReadoutModel uniform_confusion(int qubits, double eps) {
  check_qubits(qubits, "uniform_confusion");
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("uniform_confusion: eps must lie in [0, 1]");
  Eigen::Matrix2d m;
  m << 1.0 - eps, eps, eps, 1.0 - eps;
  return ReadoutModel{std::vector<Eigen::Matrix2d>(qubits, m)};
}

Eigen::VectorXd apply_readout(const Eigen::VectorXd& probs,
                              const ReadoutModel& model) {
  model.validate();
  if (probs.size() != (Eigen::Index{1} << model.qubits()))
    throw std::invalid_argument("apply_readout: size does not match qubit count");
  Eigen::VectorXd out = probs;
  for (int q = 0; q < model.qubits(); ++q) apply_axis(out, model.confusion[q], q);
  return out;
}

Eigen::VectorXd mitigate_readout(const Eigen::VectorXd& counts,
                                 const ReadoutModel& model) {
  model.validate();
  if (counts.size() != (Eigen::Index{1} << model.qubits()))
    throw std::invalid_argument("mitigate_readout: size does not match qubit count");
  const double total = counts.sum();
  if (!(total > 0.0))
    throw std::invalid_argument("mitigate_readout: counts must not be all zero");
  Eigen::VectorXd est = counts / total;
  for (int q = 0; q < model.qubits(); ++q) {
    const Eigen::Matrix2d& m = model.confusion[q];
    const double det = m.determinant();
    if (std::abs(det) < 1e-12)
      throw std::invalid_argument(
          "mitigate_readout: confusion matrix for qubit " + std::to_string(q) +
          " is singular and cannot be inverted");
    Eigen::Matrix2d inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    inv /= det;
    apply_axis(est, inv, q);
  }
  est = est.cwiseMax(0.0);
  const double mass = est.sum();
  if (!(mass > 0.0))
    throw std::runtime_error("mitigate_readout: mitigation removed all mass");
  return est / mass;
}

}  // namespace qconv
