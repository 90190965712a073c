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
#include <filesystem>
#include <string>
#include <vector>

#include "qconv/discovery.hpp"
#include "qconv/field.hpp"
#include "qconv/noise.hpp"
#include "qconv/quantum.hpp"
#include "qconv/solver.hpp"

namespace qconv {

// Reference device characteristics used for informational reporting and for
// suggesting a damping strength from a layer duration.
struct HardwareProfile {
  double single_qubit_error = 1.56e-3;
  double two_qubit_error = 1.25e-2;
  double t1_us = 48.07;
  double t2_us = 8.108;
};

// gamma = 1 - exp(-layer_time_us / t1_us).
double suggest_amplitude_damping(const HardwareProfile& hw, double layer_time_us);

// Density-matrix pipeline: encode, analysis QFT, then `steps` noisy steps
// (phase layer plus per-qubit channel); each snapshot is decoded against the
// ideally evolved reference state. Returns steps + 1 snapshots.
SnapshotDataset simulate_noisy(const GridField& ic, long steps,
                               const NoisyStepConfig& cfg,
                               DecodeConvention convention =
                                   DecodeConvention::CoherentProjection);

// simulate_ideal repackaged as a dataset.
SnapshotDataset simulate_ideal_dataset(const GridField& ic, long steps);

// Resolved run configuration shared by all commands. Defaults reproduce the
// reference setup: N = 256 grid, dt = 0.02, unit speed, 400 depolarizing
// steps at strengths 8.3e-4 and 1.6e-3.
struct RunConfig {
  ProblemSpec problem;
  ChannelKind channel = ChannelKind::Depolarizing;
  std::vector<double> strengths = {8.3e-4, 1.6e-3};
  long steps = 400;
  std::vector<int> qubit_sizes = {1, 3, 5, 7};
  std::vector<long> layer_counts = {320};
  long shots = 0;
  std::uint64_t seed = 12345;
  std::string output_dir = "out";
  InitialConditionSpec initial_condition;
  DecodeConvention decode = DecodeConvention::CoherentProjection;
  int dataset_count = 54;
  double total_time = 8.0;
  std::vector<double> snapshot_times = {3.0, 6.0};
  RegressionConfig regression;
  std::vector<std::string> restrict_terms = {"u", "u^2", "u_xx"};
  SolverConfig solver;
  int holdout = 5;
  double coverage_tol = 0.1;
  double readout_error = 0.0;
  bool mitigate = false;
  std::uint64_t qasm_basis = 0;
  std::string datasets_dir;  // default: <output_dir>/datasets
  std::string models_dir;    // default: <output_dir>/models
  HardwareProfile hardware;

  void validate() const;
};

std::string to_string(DecodeConvention convention);
DecodeConvention parse_decode(const std::string& name);

// Strict JSON loading: unknown keys are rejected with the offending name.
RunConfig config_from_json_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical serialization of the resolved config (keys sorted), and its
// FNV-1a hash. Two runs with equal hashes are bit-reproducible.
std::string config_canonical_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

struct CommandResult {
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> artifacts;
};

// Ideal and noisy trajectories with snapshot fields at the requested times.
CommandResult cmd_simulate(const RunConfig& cfg);
// Analytic and measured transition matrices, Hamming profiles, strength fits
// and (for amplitude damping) column-asymmetry reports.
CommandResult cmd_transition(const RunConfig& cfg);
// Seeded noisy training trajectories from random initial conditions.
CommandResult cmd_gen_datasets(const RunConfig& cfg);
// Full-library and restricted sparse regressions over stored datasets, with
// a side-by-side report against the baseline reference coefficients.
CommandResult cmd_discover(const RunConfig& cfg);
// Held-out noisy runs compared against effective-model integrations:
// error maps and coverage fractions per stored model.
CommandResult cmd_validate(const RunConfig& cfg);
// OpenQASM 2.0 circuit for cfg.steps layers prepared in cfg.qasm_basis.
CommandResult cmd_export_qasm(const RunConfig& cfg);

}  // namespace qconv
