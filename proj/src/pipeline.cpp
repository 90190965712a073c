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

#include "qconv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "qconv/dft.hpp"
#include "qconv/io.hpp"
#include "qconv/qasm.hpp"
#include "qconv/transition.hpp"

namespace qconv {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Reference coefficients reported with earlier runs of this pipeline; the
// discovery report prints recovered values next to them.
struct BaselineCoefficient {
  const char* term;
  double value;
};
constexpr BaselineCoefficient kBaselineFull[] = {
    {"u", 0.0471},      {"u_xx", 0.0087},  {"u^2", -0.0228},
    {"u*u_xx", -0.0021}, {"u_x^2", 0.0014}, {"u_x*u_xx", 0.0013}};
constexpr BaselineCoefficient kBaselineReduced[] = {
    {"u", 0.0417}, {"u^2", -0.0193}, {"u_xx", 0.0013}};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::string num_token(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", value);
  return buffer;
}

long snapshot_index(double t, double dt, long steps, const char* what) {
  const double idx_real = t / dt;
  const long idx = std::lround(idx_real);
  if (idx < 0 || idx > steps || std::abs(idx_real - double(idx)) > 1e-9)
    throw std::invalid_argument(std::string(what) +
                                " must be a multiple of dt within the run, got " +
                                std::to_string(t));
  return idx;
}

long step_count(const RunConfig& cfg) {
  return snapshot_index(cfg.total_time, cfg.problem.dt, 1L << 30, "total_time");
}

json spec_to_json(const ProblemSpec& spec) {
  return json{{"length", spec.length},
              {"speed", spec.speed},
              {"grid_points", spec.grid_points},
              {"dt", spec.dt}};
}

void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const char* where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw std::invalid_argument("config: unknown key '" + item.key() +
                                  "' in " + where);
  }
}

GridField dataset_column(const SnapshotDataset& data, long index) {
  return GridField{data.u.col(index), data.t0 + double(index) * data.spec.dt,
                   data.spec};
}

fs::path resolved_datasets_dir(const RunConfig& cfg) {
  return cfg.datasets_dir.empty() ? fs::path(cfg.output_dir) / "datasets"
                                  : fs::path(cfg.datasets_dir);
}

fs::path resolved_models_dir(const RunConfig& cfg) {
  return cfg.models_dir.empty() ? fs::path(cfg.output_dir) / "models"
                                : fs::path(cfg.models_dir);
}

CommandResult finish_command(const RunConfig& cfg, const std::string& command,
                             std::vector<fs::path> artifacts,
                             json report = json()) {
  json entries = json::array();
  for (const fs::path& p : artifacts)
    entries.push_back(json{{"path", p.string()},
                           {"fnv1a64", io::file_checksum(p)}});
  json manifest{{"command", command},
                {"config_hash", config_hash(cfg)},
                {"seed", cfg.seed},
                {"artifacts", entries}};
  if (!report.is_null()) manifest["report"] = report;
  const fs::path path = fs::path(cfg.output_dir) / (command + "-manifest.json");
  io::write_text(path, manifest.dump(2) + "\n");
  return CommandResult{path, std::move(artifacts)};
}

// Column-wise measurement protocol on top of exact populations: optional
// readout distortion, optional finite shots, optional mitigation.
TransitionMatrix measured_matrix(const RunConfig& cfg, int n, long l, double p) {
  const NoisyStepConfig ncfg{make_channel(cfg.channel, p)};
  TransitionMatrix m = empirical_matrix(n, l, ncfg);
  if (cfg.readout_error <= 0.0 && cfg.shots <= 0) return m;

  const ReadoutModel readout = uniform_confusion(n, cfg.readout_error);
  for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
    Eigen::VectorXd column = m.entries.col(j);
    if (cfg.readout_error > 0.0) column = apply_readout(column, readout);
    if (cfg.shots > 0) {
      const std::uint64_t sub =
          splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(j) + 1) ^
                     splitmix64(static_cast<std::uint64_t>(l) * 0x10001 + n));
      Eigen::VectorXd counts = sample_counts(column, cfg.shots, sub);
      column = cfg.readout_error > 0.0 && cfg.mitigate
                   ? mitigate_readout(counts, readout)
                   : Eigen::VectorXd(counts / double(cfg.shots));
    } else if (cfg.readout_error > 0.0 && cfg.mitigate) {
      column = mitigate_readout(column, readout);
    }
    m.entries.col(j) = column;
  }
  m.provenance.shots = cfg.shots;
  m.provenance.seed = cfg.seed;
  return m;
}

}  // namespace

double suggest_amplitude_damping(const HardwareProfile& hw, double layer_time_us) {
  if (!(hw.t1_us > 0.0))
    throw std::invalid_argument("suggest_amplitude_damping: t1 must be positive");
  if (!(layer_time_us >= 0.0))
    throw std::invalid_argument(
        "suggest_amplitude_damping: layer time must be >= 0");
  return -std::expm1(-layer_time_us / hw.t1_us);
}

SnapshotDataset simulate_noisy(const GridField& ic, long steps,
                               const NoisyStepConfig& cfg,
                               DecodeConvention convention) {
  if (steps < 0)
    throw std::invalid_argument("simulate_noisy: steps must be >= 0");
  EncodedState enc = encode(ic);
  const EvolutionLayer layer = make_layer(ic.spec);
  // The register lives in the analysis basis between the two transforms, so
  // both the phase layer and the noise act there.
  StateVector ref = qft(std::get<StateVector>(enc.state));
  DensityMatrix rho = density_from(ref);

  SnapshotDataset out;
  out.spec = ic.spec;
  out.t0 = ic.time;
  out.meta.noisy = cfg.channel.strength > 0.0;
  out.meta.channel = cfg.channel.kind;
  out.meta.strength = cfg.channel.strength;
  out.u.resize(ic.spec.grid_points, steps + 1);

  for (long s = 0; s <= steps; ++s) {
    if (convention == DecodeConvention::CoherentProjection) {
      const Eigen::VectorXcd overlap_hat = rho.entries * ref.amplitudes;
      const double fidelity = std::real(ref.amplitudes.dot(overlap_hat));
      if (!(fidelity > 0.0))
        throw std::runtime_error(
            "simulate_noisy: state lost all overlap with the reference at "
            "step " +
            std::to_string(s));
      out.u.col(s) = (enc.norm_scale / std::sqrt(fidelity)) *
                     inverse_dft(overlap_hat).real();
    } else {
      const StateVector ref_phys = iqft(ref);
      EncodedState snap{iqft(rho), enc.norm_scale, ic.spec,
                        ic.time + double(s) * ic.spec.dt};
      out.u.col(s) =
          decode(snap, &ref_phys, DecodeConvention::DiagonalSqrt).values;
    }
    if (s < steps) {
      detail::noisy_step_inplace(rho, layer, cfg);
      ref = apply_layer(ref, layer);
    }
  }
  return out;
}

SnapshotDataset simulate_ideal_dataset(const GridField& ic, long steps) {
  const std::vector<GridField> snaps = simulate_ideal(ic, steps);
  SnapshotDataset out;
  out.spec = ic.spec;
  out.t0 = ic.time;
  out.meta.noisy = false;
  out.meta.strength = 0.0;
  out.u.resize(ic.spec.grid_points, static_cast<Eigen::Index>(snaps.size()));
  for (std::size_t s = 0; s < snaps.size(); ++s)
    out.u.col(static_cast<Eigen::Index>(s)) = snaps[s].values;
  return out;
}

void RunConfig::validate() const {
  problem.validate();
  if (strengths.empty())
    throw std::invalid_argument("config: need at least one strength");
  for (const double p : strengths)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("config: strengths must lie in [0, 1]");
  if (steps < 0) throw std::invalid_argument("config: steps must be >= 0");
  if (shots < 0) throw std::invalid_argument("config: shots must be >= 0");
  if (qubit_sizes.empty() || layer_counts.empty())
    throw std::invalid_argument("config: qubit_sizes and layer_counts must be "
                                "non-empty");
  for (const int n : qubit_sizes)
    if (n < 1 || n > 10)
      throw std::invalid_argument(
          "config: qubit_sizes entries must lie in [1, 10] for dense "
          "density-matrix simulation");
  for (const long l : layer_counts)
    if (l < 0) throw std::invalid_argument("config: layer_counts must be >= 0");
  if (dataset_count < 1)
    throw std::invalid_argument("config: dataset_count must be >= 1");
  if (!(total_time > 0.0))
    throw std::invalid_argument("config: total_time must be positive");
  if (holdout < 1) throw std::invalid_argument("config: holdout must be >= 1");
  if (!(coverage_tol > 0.0))
    throw std::invalid_argument("config: coverage_tol must be positive");
  if (!(readout_error >= 0.0 && readout_error < 0.5))
    throw std::invalid_argument(
        "config: readout_error must lie in [0, 0.5) so mitigation stays "
        "well posed");
  if (output_dir.empty())
    throw std::invalid_argument("config: output_dir must not be empty");
  if (regression.ridge < 0.0 || regression.threshold < 0.0 ||
      regression.max_sweeps < 1 || regression.stride < 1)
    throw std::invalid_argument("config: malformed regression block");
  if (solver.substeps < 1 || !(solver.blowup_factor > 1.0))
    throw std::invalid_argument("config: malformed solver block");
}

std::string to_string(DecodeConvention convention) {
  return convention == DecodeConvention::CoherentProjection
             ? "coherent-projection"
             : "diagonal-sqrt";
}

DecodeConvention parse_decode(const std::string& name) {
  if (name == "coherent-projection") return DecodeConvention::CoherentProjection;
  if (name == "diagonal-sqrt") return DecodeConvention::DiagonalSqrt;
  throw std::invalid_argument("config: unknown decode convention '" + name + "'");
}

RunConfig config_from_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw std::invalid_argument("config: input is not valid JSON");
  expect_keys(j,
              {"problem", "channel", "strengths", "steps", "qubit_sizes",
               "layer_counts", "shots", "seed", "output_dir",
               "initial_condition", "decode", "dataset_count", "total_time",
               "snapshot_times", "regression", "restrict_terms", "solver",
               "holdout", "coverage_tol", "readout_error", "mitigate",
               "qasm_basis", "datasets_dir", "models_dir", "hardware"},
              "top level");

  RunConfig cfg;
  if (j.contains("problem")) {
    const json& p = j["problem"];
    expect_keys(p, {"length", "speed", "grid_points", "dt"}, "problem");
    if (p.contains("length")) cfg.problem.length = p["length"].get<double>();
    if (p.contains("speed")) cfg.problem.speed = p["speed"].get<double>();
    if (p.contains("grid_points"))
      cfg.problem.grid_points = p["grid_points"].get<int>();
    if (p.contains("dt")) cfg.problem.dt = p["dt"].get<double>();
  }
  if (j.contains("channel"))
    cfg.channel = parse_channel(j["channel"].get<std::string>());
  if (j.contains("strengths"))
    cfg.strengths = j["strengths"].get<std::vector<double>>();
  if (j.contains("steps")) cfg.steps = j["steps"].get<long>();
  if (j.contains("qubit_sizes"))
    cfg.qubit_sizes = j["qubit_sizes"].get<std::vector<int>>();
  if (j.contains("layer_counts"))
    cfg.layer_counts = j["layer_counts"].get<std::vector<long>>();
  if (j.contains("shots")) cfg.shots = j["shots"].get<long>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("initial_condition")) {
    const json& ic = j["initial_condition"];
    expect_keys(ic, {"kind", "name", "seed"}, "initial_condition");
    const std::string kind =
        ic.contains("kind") ? ic["kind"].get<std::string>() : "named";
    if (kind == "named")
      cfg.initial_condition.kind = InitialConditionKind::Named;
    else if (kind == "random")
      cfg.initial_condition.kind = InitialConditionKind::RandomSphere;
    else
      throw std::invalid_argument("config: unknown initial_condition kind '" +
                                  kind + "'");
    if (ic.contains("name")) cfg.initial_condition.name = ic["name"].get<std::string>();
    if (ic.contains("seed"))
      cfg.initial_condition.seed = ic["seed"].get<std::uint64_t>();
  }
  if (j.contains("decode")) cfg.decode = parse_decode(j["decode"].get<std::string>());
  if (j.contains("dataset_count")) cfg.dataset_count = j["dataset_count"].get<int>();
  if (j.contains("total_time")) cfg.total_time = j["total_time"].get<double>();
  if (j.contains("snapshot_times"))
    cfg.snapshot_times = j["snapshot_times"].get<std::vector<double>>();
  if (j.contains("regression")) {
    const json& r = j["regression"];
    expect_keys(r, {"ridge", "threshold", "max_sweeps", "stride"}, "regression");
    if (r.contains("ridge")) cfg.regression.ridge = r["ridge"].get<double>();
    if (r.contains("threshold"))
      cfg.regression.threshold = r["threshold"].get<double>();
    if (r.contains("max_sweeps")) cfg.regression.max_sweeps = r["max_sweeps"].get<int>();
    if (r.contains("stride")) cfg.regression.stride = r["stride"].get<int>();
  }
  if (j.contains("restrict_terms"))
    cfg.restrict_terms = j["restrict_terms"].get<std::vector<std::string>>();
  if (j.contains("solver")) {
    const json& s = j["solver"];
    expect_keys(s, {"substeps", "dealias", "blowup_factor"}, "solver");
    if (s.contains("substeps")) cfg.solver.substeps = s["substeps"].get<int>();
    if (s.contains("dealias")) cfg.solver.dealias = s["dealias"].get<bool>();
    if (s.contains("blowup_factor"))
      cfg.solver.blowup_factor = s["blowup_factor"].get<double>();
  }
  if (j.contains("holdout")) cfg.holdout = j["holdout"].get<int>();
  if (j.contains("coverage_tol")) cfg.coverage_tol = j["coverage_tol"].get<double>();
  if (j.contains("readout_error"))
    cfg.readout_error = j["readout_error"].get<double>();
  if (j.contains("mitigate")) cfg.mitigate = j["mitigate"].get<bool>();
  if (j.contains("qasm_basis")) cfg.qasm_basis = j["qasm_basis"].get<std::uint64_t>();
  if (j.contains("datasets_dir")) cfg.datasets_dir = j["datasets_dir"].get<std::string>();
  if (j.contains("models_dir")) cfg.models_dir = j["models_dir"].get<std::string>();
  if (j.contains("hardware")) {
    const json& h = j["hardware"];
    expect_keys(h, {"single_qubit_error", "two_qubit_error", "t1_us", "t2_us"},
                "hardware");
    if (h.contains("single_qubit_error"))
      cfg.hardware.single_qubit_error = h["single_qubit_error"].get<double>();
    if (h.contains("two_qubit_error"))
      cfg.hardware.two_qubit_error = h["two_qubit_error"].get<double>();
    if (h.contains("t1_us")) cfg.hardware.t1_us = h["t1_us"].get<double>();
    if (h.contains("t2_us")) cfg.hardware.t2_us = h["t2_us"].get<double>();
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  return config_from_json_text(io::read_text(path));
}

std::string config_canonical_json(const RunConfig& cfg) {
  json j{{"problem", spec_to_json(cfg.problem)},
         {"channel", to_string(cfg.channel)},
         {"strengths", cfg.strengths},
         {"steps", cfg.steps},
         {"qubit_sizes", cfg.qubit_sizes},
         {"layer_counts", cfg.layer_counts},
         {"shots", cfg.shots},
         {"seed", cfg.seed},
         {"output_dir", cfg.output_dir},
         {"initial_condition",
          json{{"kind", cfg.initial_condition.kind == InitialConditionKind::Named
                            ? "named"
                            : "random"},
               {"name", cfg.initial_condition.name},
               {"seed", cfg.initial_condition.seed}}},
         {"decode", to_string(cfg.decode)},
         {"dataset_count", cfg.dataset_count},
         {"total_time", cfg.total_time},
         {"snapshot_times", cfg.snapshot_times},
         {"regression", json{{"ridge", cfg.regression.ridge},
                             {"threshold", cfg.regression.threshold},
                             {"max_sweeps", cfg.regression.max_sweeps},
                             {"stride", cfg.regression.stride}}},
         {"restrict_terms", cfg.restrict_terms},
         {"solver", json{{"substeps", cfg.solver.substeps},
                         {"dealias", cfg.solver.dealias},
                         {"blowup_factor", cfg.solver.blowup_factor}}},
         {"holdout", cfg.holdout},
         {"coverage_tol", cfg.coverage_tol},
         {"readout_error", cfg.readout_error},
         {"mitigate", cfg.mitigate},
         {"qasm_basis", cfg.qasm_basis},
         {"datasets_dir", cfg.datasets_dir},
         {"models_dir", cfg.models_dir},
         {"hardware", json{{"single_qubit_error", cfg.hardware.single_qubit_error},
                           {"two_qubit_error", cfg.hardware.two_qubit_error},
                           {"t1_us", cfg.hardware.t1_us},
                           {"t2_us", cfg.hardware.t2_us}}}};
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  return io::hex64(io::fnv1a64(config_canonical_json(cfg)));
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  cfg.validate();
  const fs::path root = fs::path(cfg.output_dir) / "simulate";
  const GridField ic = make_initial_condition(cfg.initial_condition, cfg.problem);
  std::vector<fs::path> artifacts;

  const auto emit = [&](const SnapshotDataset& data, const std::string& label) {
    const fs::path dir = root / label;
    io::write_dataset(dir, data);
    artifacts.push_back(dir / "u.csv");
    artifacts.push_back(dir / "meta.json");
    for (const double t : cfg.snapshot_times) {
      const long idx = snapshot_index(t, cfg.problem.dt, cfg.steps, "snapshot time");
      const fs::path p = root / (label + "_t" + num_token(t) + ".csv");
      io::write_field(p, dataset_column(data, idx));
      artifacts.push_back(p);
    }
  };

  emit(simulate_ideal_dataset(ic, cfg.steps), "ideal");
  for (const double p : cfg.strengths) {
    SnapshotDataset noisy = simulate_noisy(
        ic, cfg.steps, NoisyStepConfig{make_channel(cfg.channel, p)}, cfg.decode);
    noisy.meta.seed = cfg.initial_condition.seed;
    emit(noisy, "noisy_p" + num_token(p));
  }
  return finish_command(cfg, "simulate", std::move(artifacts));
}

CommandResult cmd_transition(const RunConfig& cfg) {
  cfg.validate();
  const fs::path root = fs::path(cfg.output_dir) / "transition";
  std::vector<fs::path> artifacts;
  json fits = json::array();

  for (const int n : cfg.qubit_sizes) {
    for (const double p : cfg.strengths) {
      const fs::path profile_path =
          root / ("profile_analytic_n" + std::to_string(n) + "_p" + num_token(p) +
                  ".csv");
      io::write_hamming_profile(profile_path,
                                hamming_profile_curve(n, p, cfg.layer_counts));
      artifacts.push_back(profile_path);

      for (const long l : cfg.layer_counts) {
        const std::string tag = "n" + std::to_string(n) + "_l" + std::to_string(l) +
                                "_p" + num_token(p);
        const TransitionMatrix analytic = analytic_matrix(n, p, l);
        const fs::path ana_path = root / ("analytic_" + tag + ".csv");
        io::write_transition_matrix(ana_path, analytic);
        artifacts.push_back(ana_path);

        const TransitionMatrix measured = measured_matrix(cfg, n, l, p);
        const fs::path emp_path = root / ("empirical_" + tag + ".csv");
        io::write_transition_matrix(emp_path, measured);
        artifacts.push_back(emp_path);

        const fs::path emp_profile = root / ("profile_empirical_" + tag + ".csv");
        io::write_hamming_profile(emp_profile, group_by_distance(measured));
        artifacts.push_back(emp_profile);

        // With no layers every strength reproduces the identity, so the fit
        // is ill posed; record the residual only.
        json row{{"qubits", n},
                 {"layers", l},
                 {"strength_injected", p},
                 {"max_abs_residual",
                  (measured.entries - analytic.entries).cwiseAbs().maxCoeff()}};
        if (l >= 1) row["strength_fitted"] = fit_p(measured, l);
        fits.push_back(std::move(row));

        if (cfg.channel == ChannelKind::AmplitudeDamping) {
          std::string text = "k,to_zero,from_zero\n";
          for (Eigen::Index k = 1; k < measured.entries.rows(); ++k)
            text += std::to_string(k) + "," +
                    std::to_string(measured.entries(0, k)) + "," +
                    std::to_string(measured.entries(k, 0)) + "\n";
          const fs::path asym = root / ("asymmetry_" + tag + ".csv");
          io::write_text(asym, text);
          artifacts.push_back(asym);
        }
      }
    }
  }
  const fs::path fits_path = root / "fits.json";
  io::write_text(fits_path, fits.dump(2) + "\n");
  artifacts.push_back(fits_path);
  return finish_command(cfg, "transition", std::move(artifacts), fits);
}

CommandResult cmd_gen_datasets(const RunConfig& cfg) {
  cfg.validate();
  const fs::path root = resolved_datasets_dir(cfg);
  const long steps = step_count(cfg);
  const NoisyStepConfig ncfg{make_channel(cfg.channel, cfg.strengths.front())};
  std::vector<fs::path> artifacts;

  for (int i = 0; i < cfg.dataset_count; ++i) {
    const std::uint64_t ic_seed =
        splitmix64(cfg.seed ^ static_cast<std::uint64_t>(i + 1));
    const GridField ic = random_initial_condition(ic_seed, cfg.problem);
    SnapshotDataset data = simulate_noisy(ic, steps, ncfg, cfg.decode);
    data.meta.seed = ic_seed;
    char name[16];
    std::snprintf(name, sizeof(name), "ds_%03d", i);
    const fs::path dir = root / name;
    io::write_dataset(dir, data);
    artifacts.push_back(dir / "u.csv");
  }
  return finish_command(cfg, "gen-datasets", std::move(artifacts));
}

CommandResult cmd_discover(const RunConfig& cfg) {
  cfg.validate();
  const fs::path data_root = resolved_datasets_dir(cfg);
  if (!fs::exists(data_root))
    throw std::runtime_error("cmd_discover: dataset directory " +
                             data_root.string() +
                             " does not exist; run gen-datasets first");
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(data_root))
    if (entry.is_directory() && entry.path().filename().string().rfind("ds_", 0) == 0)
      dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty())
    throw std::runtime_error("cmd_discover: no ds_* directories under " +
                             data_root.string());

  std::vector<SnapshotDataset> datasets;
  datasets.reserve(dirs.size());
  for (const fs::path& dir : dirs) datasets.push_back(io::read_dataset(dir));

  RegressionConfig full_cfg = cfg.regression;
  full_cfg.restrict_terms.clear();
  const SparseModel full = discover(datasets, full_cfg);

  RegressionConfig restricted_cfg = cfg.regression;
  restricted_cfg.restrict_terms = cfg.restrict_terms;
  const SparseModel restricted = discover(datasets, restricted_cfg);

  const fs::path models_root = resolved_models_dir(cfg);
  const fs::path full_path = models_root / "model_full.json";
  const fs::path restricted_path = models_root / "model_restricted.json";
  io::write_model(full_path, full);
  io::write_model(restricted_path, restricted);

  const auto baseline_of = [](const std::string& name, const BaselineCoefficient* table,
                              std::size_t size) {
    for (std::size_t i = 0; i < size; ++i)
      if (name == table[i].term) return json(table[i].value);
    return json();
  };
  json rows = json::array();
  const TermLibrary library = TermLibrary::full();
  for (const Term& term : library.terms) {
    const int idx = library.index_of(term.name);
    const double rec_full = full.coefficients[idx];
    const double rec_rest = restricted.coefficients[idx];
    const json base_full = baseline_of(term.name, kBaselineFull, std::size(kBaselineFull));
    const json base_rest =
        baseline_of(term.name, kBaselineReduced, std::size(kBaselineReduced));
    if (rec_full == 0.0 && rec_rest == 0.0 && base_full.is_null() &&
        base_rest.is_null())
      continue;
    rows.push_back(json{{"term", term.name},
                        {"recovered_full", rec_full},
                        {"baseline_full", base_full},
                        {"recovered_restricted", rec_rest},
                        {"baseline_restricted", base_rest}});
  }
  json report{{"datasets", dirs.size()},
              {"residual_rms_full", full.residual_rms},
              {"residual_rms_restricted", restricted.residual_rms},
              {"coefficients", rows}};
  const fs::path report_path = models_root / "discovery_report.json";
  io::write_text(report_path, report.dump(2) + "\n");

  std::cout << "discovered coefficients (recovered vs baseline):\n";
  for (const auto& row : rows)
    std::cout << "  " << row["term"].get<std::string>() << ": full "
              << row["recovered_full"].get<double>() << " (baseline "
              << (row["baseline_full"].is_null()
                      ? "-"
                      : std::to_string(row["baseline_full"].get<double>()))
              << "), restricted " << row["recovered_restricted"].get<double>()
              << " (baseline "
              << (row["baseline_restricted"].is_null()
                      ? "-"
                      : std::to_string(row["baseline_restricted"].get<double>()))
              << ")\n";

  return finish_command(cfg, "discover",
                        {full_path, restricted_path, report_path}, report);
}

CommandResult cmd_validate(const RunConfig& cfg) {
  cfg.validate();
  const fs::path models_root = resolved_models_dir(cfg);
  const fs::path root = fs::path(cfg.output_dir) / "validate";
  const long steps = step_count(cfg);
  const NoisyStepConfig ncfg{make_channel(cfg.channel, cfg.strengths.front())};

  std::vector<std::pair<std::string, SparseModel>> models;
  for (const char* name : {"model_full", "model_restricted"}) {
    const fs::path p = models_root / (std::string(name) + ".json");
    if (fs::exists(p)) models.emplace_back(name, io::read_model(p));
  }
  if (models.empty())
    throw std::runtime_error("cmd_validate: no models under " +
                             models_root.string() + "; run discover first");

  std::vector<fs::path> artifacts;
  json per_model = json::object();
  for (const auto& [name, model] : models) per_model[name] = json::array();

  for (int h = 0; h < cfg.holdout; ++h) {
    const std::uint64_t ic_seed = splitmix64(
        cfg.seed ^ static_cast<std::uint64_t>(cfg.dataset_count + h + 1));
    const GridField ic = random_initial_condition(ic_seed, cfg.problem);
    const SnapshotDataset truth = simulate_noisy(ic, steps, ncfg, cfg.decode);
    for (const auto& [name, model] : models) {
      const SnapshotDataset run =
          solve_effective(model, ic, cfg.total_time, cfg.solver);
      const ErrorMap map = error_map(run, truth);
      const double coverage = coverage_within(map, cfg.coverage_tol);
      const fs::path map_path =
          root / ("errmap_" + name + "_h" + std::to_string(h) + ".csv");
      io::write_error_map(map_path, map, cfg.problem, ic.time);
      artifacts.push_back(map_path);
      per_model[name].push_back(
          json{{"holdout", h}, {"seed", ic_seed}, {"coverage", coverage}});
    }
  }

  json summary = json::object();
  for (const auto& [name, model] : models) {
    double min_cov = 1.0, sum = 0.0;
    for (const auto& entry : per_model[name]) {
      const double c = entry["coverage"].get<double>();
      min_cov = std::min(min_cov, c);
      sum += c;
    }
    summary[name] = json{{"runs", per_model[name]},
                         {"min_coverage", min_cov},
                         {"mean_coverage", sum / cfg.holdout},
                         {"tolerance", cfg.coverage_tol}};
    std::cout << name << ": mean coverage "
              << summary[name]["mean_coverage"].get<double>() << ", min "
              << min_cov << " at |e| <= " << cfg.coverage_tol << "\n";
  }
  const fs::path report_path = root / "coverage_report.json";
  io::write_text(report_path, summary.dump(2) + "\n");
  artifacts.push_back(report_path);
  return finish_command(cfg, "validate", std::move(artifacts), summary);
}

CommandResult cmd_export_qasm(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.steps < 1)
    throw std::invalid_argument("cmd_export_qasm: steps (layer count) must be >= 1");
  const int n = cfg.problem.qubits();
  const std::string text = export_qasm(cfg.problem, cfg.steps, cfg.qasm_basis);
  const fs::path path =
      fs::path(cfg.output_dir) / "qasm" /
      ("circuit_n" + std::to_string(n) + "_l" + std::to_string(cfg.steps) + "_b" +
       std::to_string(cfg.qasm_basis) + ".qasm");
  io::write_text(path, text);
  return finish_command(cfg, "export-qasm", {path});
}

}  // namespace qconv
