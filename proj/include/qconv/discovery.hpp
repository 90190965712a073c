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
#include <vector>

#include <Eigen/Dense>

#include "qconv/field.hpp"
#include "qconv/noise.hpp"

namespace qconv {

// Trajectory of field snapshots at uniform spacing spec.dt, stored as one
// column per snapshot: u(i, m) = u(x_i, t0 + m dt).
struct SnapshotDataset {
  Eigen::MatrixXd u;  // grid_points x snapshots
  ProblemSpec spec;
  double t0 = 0.0;

  struct Meta {
    bool noisy = false;
    ChannelKind channel = ChannelKind::Depolarizing;
    double strength = 0.0;
    std::uint64_t seed = 0;
  } meta;

  int snapshots() const { return static_cast<int>(u.cols()); }
  void validate() const;
};

// One candidate right-hand-side term: a product of up to two derivative
// factors. Factor order 0..4 means u, u_x, u_xx, u_xxx, u_xxxx; second < 0
// marks a linear term.
struct Term {
  int first = 0;
  int second = -1;
  std::string name;

  bool is_linear() const { return second < 0; }
  int max_order() const { return second < 0 ? first : std::max(first, second); }
};

// Candidate library: the five derivative fields and all fifteen distinct
// degree-2 products, 20 terms in canonical order (linear terms first).
struct TermLibrary {
  std::vector<Term> terms;

  static TermLibrary full();
  int size() const { return static_cast<int>(terms.size()); }
  // Index of a canonical term name, or -1 when absent.
  int index_of(const std::string& name) const;
};

// Derivatives of every snapshot: space[o] holds the o-th spatial derivative
// (o = 0 is the field itself), computed spectrally; time holds the time
// derivative, second-order centered in the interior and second-order
// one-sided at the first and last snapshots.
struct DerivativeFields {
  std::vector<Eigen::MatrixXd> space;
  Eigen::MatrixXd time;
};

DerivativeFields differentiate(const SnapshotDataset& data);

struct RegressionConfig {
  double ridge = 1e-6;      // Tikhonov weight on RMS-scaled columns
  double threshold = 5e-4;  // magnitude cut on physical coefficients
  int max_sweeps = 20;      // hard cap on threshold-and-refit sweeps
  int stride = 1;           // keep every stride-th flattened sample
  std::vector<std::string> restrict_terms;  // empty = full library
};

// Regression samples from the interior snapshots (the first and last are
// dropped so only centered time derivatives enter), flattened time-major and
// subsampled by cfg.stride. The target column is u_t + c u_x, so a field
// that transports exactly yields the all-zero model.
struct DesignMatrix {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

DesignMatrix build_design(const SnapshotDataset& data, const TermLibrary& library,
                          const RegressionConfig& cfg);

// Sparse effective model over a term library. Coefficients are exactly zero
// outside the support; no nonzero has magnitude below the threshold used.
struct SparseModel {
  std::vector<Term> terms;
  Eigen::VectorXd coefficients;
  double threshold = 0.0;
  double residual_rms = 0.0;

  std::vector<int> support() const;
};

// Sequentially thresholded least squares: ridge-regularized solves with
// RMS-equalized columns, magnitude thresholding until the support is stable,
// then an unregularized refit on the final support (re-thresholded if the
// refit drops a coefficient below the cut). Throws std::runtime_error when
// the final support is rank deficient on the data.
SparseModel sparse_regress(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                           const TermLibrary& library, const RegressionConfig& cfg);

// Same regression over the union of several datasets' samples. Normal
// equations are accumulated per dataset, so the stacked design matrix is
// never materialized. Duplicating every dataset leaves the model unchanged.
SparseModel discover(const std::vector<SnapshotDataset>& datasets,
                     const RegressionConfig& cfg);

}  // namespace qconv
