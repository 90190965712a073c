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
#include <string_view>

#include "qconv/discovery.hpp"
#include "qconv/quantum.hpp"
#include "qconv/solver.hpp"
#include "qconv/transition.hpp"

namespace qconv::io {

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);
// fnv1a64 of the file contents, as 16 hex digits.
std::string file_checksum(const std::filesystem::path& path);

// Creates parent directories as needed.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Field CSV with an "x,u" header row plus a <stem>.meta.json sidecar holding
// the problem spec and timestamp. Values print with 17 significant digits so
// the round trip is bit exact.
void write_field(const std::filesystem::path& csv_path, const GridField& field);
GridField read_field(const std::filesystem::path& csv_path);

// Dense matrix CSV with "# key=value" provenance header lines.
void write_transition_matrix(const std::filesystem::path& path,
                             const TransitionMatrix& matrix);
TransitionMatrix read_transition_matrix(const std::filesystem::path& path);

// Dataset directory: u.csv with one row per snapshot, plus meta.json.
void write_dataset(const std::filesystem::path& dir, const SnapshotDataset& data);
SnapshotDataset read_dataset(const std::filesystem::path& dir);

// Sparse model JSON: canonical term names mapped to nonzero coefficients.
void write_model(const std::filesystem::path& path, const SparseModel& model);
SparseModel read_model(const std::filesystem::path& path);

// Debug dump: one "index re im" line per amplitude.
void write_state_debug(const std::filesystem::path& path, const StateVector& psi);

// Profile CSV: one row per layer count, first column l, then one column per
// Hamming distance.
void write_hamming_profile(const std::filesystem::path& path,
                           const HammingProfile& profile);

// Error-map CSV, one row per snapshot, with normalization floor and grid
// information in "# key=value" header lines.
void write_error_map(const std::filesystem::path& path, const ErrorMap& map,
                     const ProblemSpec& spec, double t0);

}  // namespace qconv::io
