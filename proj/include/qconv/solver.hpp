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

#include "qconv/discovery.hpp"
#include "qconv/field.hpp"

namespace qconv {

struct SolverConfig {
  // Classic RK4 substeps per snapshot interval; the integrator step is
  // spec.dt / substeps so it always divides the snapshot spacing exactly.
  int substeps = 10;
  // 2/3-rule spectral truncation applied to quadratic-product factors and to
  // the resulting forcing spectrum.
  bool dealias = true;
  // Integration aborts when max |u| exceeds this multiple of its initial
  // value (or turns non-finite).
  double blowup_factor = 1e3;
};

// Integrate u_t + c u_x = model(u) pseudo-spectrally from ic, recording one
// snapshot every spec.dt until total_time. Linear terms act directly in
// spectral space; quadratic terms are evaluated on the grid. total_time must
// be a whole number of snapshot intervals. Throws std::runtime_error when
// the run blows up.
SnapshotDataset solve_effective(const SparseModel& model, const GridField& ic,
                                double total_time, const SolverConfig& cfg = {});

// Pointwise model-vs-truth discrepancy, normalized per snapshot by
// max(max_x |truth(., t)|, floor) with floor = 1e-3 * global max |truth|.
struct ErrorMap {
  Eigen::MatrixXd e;  // grid_points x snapshots
  double floor = 0.0;
};

ErrorMap error_map(const SnapshotDataset& model_run, const SnapshotDataset& truth);

// Fraction of error-map samples with |e| <= tol.
double coverage_within(const ErrorMap& map, double tol);

}  // namespace qconv
