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

#include "qconv/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qconv::io {

namespace {

using nlohmann::json;

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void ensure_parent(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

json spec_to_json(const ProblemSpec& spec) {
  return json{{"length", spec.length},
              {"speed", spec.speed},
              {"grid_points", spec.grid_points},
              {"dt", spec.dt}};
}

ProblemSpec spec_from_json(const json& j) {
  ProblemSpec spec;
  spec.length = j.at("length").get<double>();
  spec.speed = j.at("speed").get<double>();
  spec.grid_points = j.at("grid_points").get<int>();
  spec.dt = j.at("dt").get<double>();
  spec.validate();
  return spec;
}

std::vector<double> parse_csv_row(const std::string& line,
                                  const std::filesystem::path& path) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      values.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw std::runtime_error("failed to parse number '" + cell + "' in " +
                               path.string());
    }
  }
  return values;
}

json load_json(const std::filesystem::path& path) {
  json j = json::parse(read_text(path), nullptr, false);
  if (j.is_discarded())
    throw std::runtime_error("invalid JSON in " + path.string());
  return j;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(value));
  return buffer;
}

std::string file_checksum(const std::filesystem::path& path) {
  return hex64(fnv1a64(read_text(path)));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for write");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_field(const std::filesystem::path& csv_path, const GridField& field) {
  field.spec.validate();
  const Eigen::VectorXd x = make_grid(field.spec);
  std::string text = "x,u\n";
  for (Eigen::Index j = 0; j < field.values.size(); ++j)
    text += fmt(x[j]) + "," + fmt(field.values[j]) + "\n";
  write_text(csv_path, text);

  json meta{{"problem", spec_to_json(field.spec)}, {"time", field.time}};
  write_text(sidecar_path(csv_path), meta.dump(2) + "\n");
}

GridField read_field(const std::filesystem::path& csv_path) {
  const json meta = load_json(sidecar_path(csv_path));
  GridField field;
  field.spec = spec_from_json(meta.at("problem"));
  field.time = meta.at("time").get<double>();

  std::stringstream ss(read_text(csv_path));
  std::string line;
  std::getline(ss, line);  // header
  std::vector<double> values;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto row = parse_csv_row(line, csv_path);
    if (row.size() != 2)
      throw std::runtime_error("expected x,u rows in " + csv_path.string());
    values.push_back(row[1]);
  }
  if (static_cast<int>(values.size()) != field.spec.grid_points)
    throw std::runtime_error("sample count mismatch in " + csv_path.string());
  field.values = Eigen::Map<Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
  return field;
}

void write_transition_matrix(const std::filesystem::path& path,
                             const TransitionMatrix& matrix) {
  std::string text;
  text += "# qubits=" + std::to_string(matrix.qubits) + "\n";
  text += std::string("# provenance=") +
          (matrix.provenance.kind == MatrixProvenance::Kind::Analytic
               ? "analytic"
               : "empirical") +
          "\n";
  text += "# channel=" + to_string(matrix.provenance.channel) + "\n";
  text += "# strength=" + fmt(matrix.provenance.strength) + "\n";
  text += "# layers=" + std::to_string(matrix.provenance.layers) + "\n";
  text += "# shots=" + std::to_string(matrix.provenance.shots) + "\n";
  text += "# seed=" + std::to_string(matrix.provenance.seed) + "\n";
  for (Eigen::Index i = 0; i < matrix.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.entries.cols(); ++j) {
      if (j > 0) text += ",";
      text += fmt(matrix.entries(i, j));
    }
    text += "\n";
  }
  write_text(path, text);
}

TransitionMatrix read_transition_matrix(const std::filesystem::path& path) {
  std::stringstream ss(read_text(path));
  std::string line;
  TransitionMatrix matrix;
  std::vector<std::vector<double>> rows;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "qubits") matrix.qubits = std::stoi(value);
      else if (key == "provenance")
        matrix.provenance.kind = value == "analytic"
                                     ? MatrixProvenance::Kind::Analytic
                                     : MatrixProvenance::Kind::Empirical;
      else if (key == "channel") matrix.provenance.channel = parse_channel(value);
      else if (key == "strength") matrix.provenance.strength = std::stod(value);
      else if (key == "layers") matrix.provenance.layers = std::stol(value);
      else if (key == "shots") matrix.provenance.shots = std::stol(value);
      else if (key == "seed") matrix.provenance.seed = std::stoull(value);
      continue;
    }
    rows.push_back(parse_csv_row(line, path));
  }
  const Eigen::Index dim = Eigen::Index{1} << matrix.qubits;
  if (static_cast<Eigen::Index>(rows.size()) != dim)
    throw std::runtime_error("row count mismatch in " + path.string());
  matrix.entries.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != dim)
      throw std::runtime_error("column count mismatch in " + path.string());
    for (Eigen::Index j = 0; j < dim; ++j)
      matrix.entries(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return matrix;
}

void write_dataset(const std::filesystem::path& dir, const SnapshotDataset& data) {
  data.validate();
  std::string text;
  for (Eigen::Index m = 0; m < data.u.cols(); ++m) {
    for (Eigen::Index i = 0; i < data.u.rows(); ++i) {
      if (i > 0) text += ",";
      text += fmt(data.u(i, m));
    }
    text += "\n";
  }
  write_text(dir / "u.csv", text);

  json meta{{"problem", spec_to_json(data.spec)},
            {"t0", data.t0},
            {"snapshots", data.snapshots()},
            {"noisy", data.meta.noisy},
            {"channel", to_string(data.meta.channel)},
            {"strength", data.meta.strength},
            {"seed", data.meta.seed}};
  write_text(dir / "meta.json", meta.dump(2) + "\n");
}

SnapshotDataset read_dataset(const std::filesystem::path& dir) {
  const json meta = load_json(dir / "meta.json");
  SnapshotDataset data;
  data.spec = spec_from_json(meta.at("problem"));
  data.t0 = meta.at("t0").get<double>();
  data.meta.noisy = meta.at("noisy").get<bool>();
  data.meta.channel = parse_channel(meta.at("channel").get<std::string>());
  data.meta.strength = meta.at("strength").get<double>();
  data.meta.seed = meta.at("seed").get<std::uint64_t>();
  const int snapshots = meta.at("snapshots").get<int>();

  std::stringstream ss(read_text(dir / "u.csv"));
  std::string line;
  data.u.resize(data.spec.grid_points, snapshots);
  Eigen::Index m = 0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (m >= snapshots)
      throw std::runtime_error("too many snapshot rows in " + dir.string());
    const auto row = parse_csv_row(line, dir / "u.csv");
    if (static_cast<int>(row.size()) != data.spec.grid_points)
      throw std::runtime_error("snapshot width mismatch in " + dir.string());
    for (Eigen::Index i = 0; i < data.u.rows(); ++i)
      data.u(i, m) = row[static_cast<std::size_t>(i)];
    ++m;
  }
  if (m != snapshots)
    throw std::runtime_error("snapshot count mismatch in " + dir.string());
  data.validate();
  return data;
}

void write_model(const std::filesystem::path& path, const SparseModel& model) {
  json coefficients = json::object();
  for (const int t : model.support())
    coefficients[model.terms[static_cast<std::size_t>(t)].name] =
        model.coefficients[t];
  json j{{"coefficients", coefficients},
         {"threshold", model.threshold},
         {"residual_rms", model.residual_rms}};
  write_text(path, j.dump(2) + "\n");
}

SparseModel read_model(const std::filesystem::path& path) {
  const json j = load_json(path);
  const TermLibrary library = TermLibrary::full();
  SparseModel model;
  model.terms = library.terms;
  model.coefficients = Eigen::VectorXd::Zero(library.size());
  model.threshold = j.at("threshold").get<double>();
  model.residual_rms = j.at("residual_rms").get<double>();
  for (const auto& [name, value] : j.at("coefficients").items()) {
    const int idx = library.index_of(name);
    if (idx < 0)
      throw std::runtime_error("unknown term '" + name + "' in " + path.string());
    model.coefficients[idx] = value.get<double>();
  }
  return model;
}

void write_state_debug(const std::filesystem::path& path, const StateVector& psi) {
  std::string text;
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i)
    text += std::to_string(i) + " " + fmt(psi.amplitudes[i].real()) + " " +
            fmt(psi.amplitudes[i].imag()) + "\n";
  write_text(path, text);
}

void write_hamming_profile(const std::filesystem::path& path,
                           const HammingProfile& profile) {
  std::string text = "# qubits=" + std::to_string(profile.qubits) + "\n";
  text += "layers";
  for (int d = 0; d <= profile.qubits; ++d) text += ",d" + std::to_string(d);
  text += "\n";
  for (Eigen::Index r = 0; r < profile.values.rows(); ++r) {
    text += std::to_string(profile.layer_counts[static_cast<std::size_t>(r)]);
    for (Eigen::Index d = 0; d < profile.values.cols(); ++d)
      text += "," + fmt(profile.values(r, d));
    text += "\n";
  }
  write_text(path, text);
}

void write_error_map(const std::filesystem::path& path, const ErrorMap& map,
                     const ProblemSpec& spec, double t0) {
  std::string text;
  text += "# grid_points=" + std::to_string(spec.grid_points) + "\n";
  text += "# dt=" + fmt(spec.dt) + "\n";
  text += "# t0=" + fmt(t0) + "\n";
  text += "# floor=" + fmt(map.floor) + "\n";
  for (Eigen::Index m = 0; m < map.e.cols(); ++m) {
    for (Eigen::Index i = 0; i < map.e.rows(); ++i) {
      if (i > 0) text += ",";
      text += fmt(map.e(i, m));
    }
    text += "\n";
  }
  write_text(path, text);
}

}  // namespace qconv::io
