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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "qconv/io.hpp"
#include "qconv/pipeline.hpp"

namespace {

using namespace qconv;
namespace fs = std::filesystem;

ProblemSpec tiny_spec() {
  ProblemSpec spec;
  spec.grid_points = 16;
  return spec;
}

GridField tiny_ic() {
  return make_initial_condition(InitialConditionSpec{}, tiny_spec());
}

// Fresh scratch directory under the test working directory.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path("pipeline_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Small but complete run configuration that exercises every command quickly.
RunConfig tiny_config(const fs::path& out) {
  RunConfig cfg;
  cfg.problem = tiny_spec();
  cfg.strengths = {0.01};
  cfg.steps = 10;
  cfg.qubit_sizes = {1, 2};
  cfg.layer_counts = {1, 4};
  cfg.seed = 99;
  cfg.output_dir = out.string();
  cfg.dataset_count = 3;
  cfg.total_time = 0.4;
  cfg.snapshot_times = {0.2};
  cfg.holdout = 2;
  cfg.validate();
  return cfg;
}

}  // namespace

TEST_CASE("damping suggestion follows the exponential relaxation law") {
  const HardwareProfile hw;
  CHECK(suggest_amplitude_damping(hw, 0.0) == 0.0);
  CHECK(suggest_amplitude_damping(hw, hw.t1_us) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(suggest_amplitude_damping(hw, 1e9) == doctest::Approx(1.0));
  CHECK_THROWS_AS(suggest_amplitude_damping(hw, -1.0), std::invalid_argument);
  HardwareProfile bad;
  bad.t1_us = 0.0;
  CHECK_THROWS_AS(suggest_amplitude_damping(bad, 1.0), std::invalid_argument);
}

TEST_CASE("zero-strength noise reproduces the ideal trajectory exactly") {
  const GridField ic = tiny_ic();
  const NoisyStepConfig cfg{make_channel(ChannelKind::Depolarizing, 0.0)};
  const SnapshotDataset ideal = simulate_ideal_dataset(ic, 12);

  for (const auto convention : {DecodeConvention::CoherentProjection,
                                DecodeConvention::DiagonalSqrt}) {
    const SnapshotDataset noisy = simulate_noisy(ic, 12, cfg, convention);
    REQUIRE(noisy.snapshots() == 13);
    CHECK_FALSE(noisy.meta.noisy);
    CHECK((noisy.u - ideal.u).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("noisy simulation matches the same pipeline built from primitives") {
  const GridField ic = tiny_ic();
  const double p = 0.02;
  const NoisyStepConfig ncfg{make_channel(ChannelKind::Depolarizing, p)};
  const int steps = 6;

  const SnapshotDataset fast =
      simulate_noisy(ic, steps, ncfg, DecodeConvention::CoherentProjection);
  const SnapshotDataset diag =
      simulate_noisy(ic, steps, ncfg, DecodeConvention::DiagonalSqrt);
  CHECK(fast.meta.noisy);
  CHECK(fast.meta.strength == p);

  // Independent route: public single-step primitives on the spectral density.
  const EncodedState enc = encode(ic);
  const EvolutionLayer layer = make_layer(ic.spec);
  StateVector ref = qft(std::get<StateVector>(enc.state));
  DensityMatrix rho = density_from(ref);
  for (int s = 0; s <= steps; ++s) {
    const StateVector ref_phys = iqft(ref);
    const EncodedState snap{iqft(rho), enc.norm_scale, ic.spec,
                            double(s) * ic.spec.dt};
    const GridField via_projection =
        decode(snap, &ref_phys, DecodeConvention::CoherentProjection);
    const GridField via_diagonal =
        decode(snap, &ref_phys, DecodeConvention::DiagonalSqrt);
    CHECK((fast.u.col(s) - via_projection.values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((diag.u.col(s) - via_diagonal.values).cwiseAbs().maxCoeff() < 1e-12);
    if (s < steps) {
      rho = noisy_step(rho, layer, ncfg);
      ref = apply_layer(ref, layer);
    }
  }
}

TEST_CASE("default configuration parses from an empty object") {
  const RunConfig parsed = config_from_json_text("{}");
  const RunConfig defaults;
  CHECK(config_hash(parsed) == config_hash(defaults));
  CHECK(parsed.steps == 400);
  CHECK(parsed.strengths == std::vector<double>{8.3e-4, 1.6e-3});
  CHECK(parsed.decode == DecodeConvention::CoherentProjection);
}

TEST_CASE("unknown configuration keys are rejected by name") {
  CHECK_THROWS_WITH_AS(config_from_json_text(R"({"stpes": 3})"),
                       doctest::Contains("stpes"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(config_from_json_text(R"({"problem": {"lenght": 1}})"),
                       doctest::Contains("lenght"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text(R"({"decode": "magic"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text(R"({"strengths": [1.5]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("not json"), std::invalid_argument);
}

TEST_CASE("configuration values survive a canonical round trip") {
  RunConfig cfg;
  cfg.channel = ChannelKind::AmplitudeDamping;
  cfg.strengths = {0.25};
  cfg.steps = 7;
  cfg.seed = 4242;
  cfg.decode = DecodeConvention::DiagonalSqrt;
  cfg.restrict_terms = {"u", "u_x"};
  cfg.readout_error = 0.03;
  cfg.mitigate = true;

  const RunConfig back = config_from_json_text(config_canonical_json(cfg));
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(back.channel == ChannelKind::AmplitudeDamping);
  CHECK(back.decode == DecodeConvention::DiagonalSqrt);
  CHECK(back.seed == 4242);

  SUBCASE("the hash is sensitive to every changed field") {
    RunConfig other = cfg;
    other.seed = 4243;
    CHECK(config_hash(other) != config_hash(cfg));
    other = cfg;
    other.mitigate = false;
    CHECK(config_hash(other) != config_hash(cfg));
  }
}

TEST_CASE("decode conventions map to stable names") {
  CHECK(to_string(DecodeConvention::CoherentProjection) == "coherent-projection");
  CHECK(to_string(DecodeConvention::DiagonalSqrt) == "diagonal-sqrt");
  CHECK(parse_decode("coherent-projection") == DecodeConvention::CoherentProjection);
  CHECK(parse_decode("diagonal-sqrt") == DecodeConvention::DiagonalSqrt);
  CHECK_THROWS_AS(parse_decode("Coherent"), std::invalid_argument);
}

TEST_CASE("run configuration validation rejects inconsistent values") {
  RunConfig cfg;
  cfg.qubit_sizes = {11};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.strengths.clear();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.readout_error = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.total_time = -2.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.regression.stride = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.layer_counts = {-1};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("fields datasets matrices and models round-trip through files") {
  const fs::path dir = scratch("io_roundtrip");

  SUBCASE("grid field") {
    const GridField field = tiny_ic();
    io::write_field(dir / "f.csv", field);
    const GridField back = io::read_field(dir / "f.csv");
    CHECK(back.spec == field.spec);
    CHECK(back.time == field.time);
    CHECK((back.values - field.values).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("transition matrix") {
    const TransitionMatrix m = analytic_matrix(3, 0.01, 5);
    io::write_transition_matrix(dir / "m.csv", m);
    const TransitionMatrix back = io::read_transition_matrix(dir / "m.csv");
    CHECK(back.provenance.layers == 5);
    CHECK(back.provenance.strength == 0.01);
    CHECK((back.entries - m.entries).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("snapshot dataset") {
    const SnapshotDataset data = simulate_noisy(
        tiny_ic(), 4, NoisyStepConfig{make_channel(ChannelKind::BitFlip, 0.05)});
    io::write_dataset(dir / "ds", data);
    const SnapshotDataset back = io::read_dataset(dir / "ds");
    CHECK(back.spec == data.spec);
    CHECK(back.meta.noisy == data.meta.noisy);
    CHECK(back.meta.channel == data.meta.channel);
    CHECK((back.u - data.u).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("sparse model") {
    const TermLibrary lib = TermLibrary::full();
    SparseModel model;
    model.terms = lib.terms;
    model.coefficients = Eigen::VectorXd::Zero(lib.size());
    model.coefficients[lib.index_of("u")] = 0.0417;
    model.coefficients[lib.index_of("u^2")] = -0.0193;
    model.threshold = 5e-4;
    model.residual_rms = 1.25e-3;
    io::write_model(dir / "model.json", model);
    const SparseModel back = io::read_model(dir / "model.json");
    CHECK(back.support() == model.support());
    CHECK((back.coefficients - model.coefficients).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.threshold == model.threshold);
    CHECK(back.residual_rms == model.residual_rms);

    io::write_text(dir / "bad.json",
                   R"({"coefficients": {"u_t": 1.0}, "threshold": 0, "residual_rms": 0})");
    CHECK_THROWS_AS(io::read_model(dir / "bad.json"), std::runtime_error);
  }

  SUBCASE("checksums change with content") {
    io::write_text(dir / "a.txt", "alpha\n");
    io::write_text(dir / "b.txt", "beta\n");
    CHECK(io::file_checksum(dir / "a.txt") != io::file_checksum(dir / "b.txt"));
    CHECK(io::fnv1a64("alpha\n") != io::fnv1a64("beta\n"));
    CHECK(io::hex64(io::fnv1a64("alpha\n")) == io::file_checksum(dir / "a.txt"));
  }
}

TEST_CASE("simulate command writes manifests whose checksums match the files") {
  const fs::path out = scratch("cmd_simulate");
  const RunConfig cfg = tiny_config(out);

  const CommandResult result = cmd_simulate(cfg);
  REQUIRE(fs::exists(result.manifest));

  const nlohmann::json manifest =
      nlohmann::json::parse(io::read_text(result.manifest));
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["config_hash"] == config_hash(cfg));
  REQUIRE(manifest["artifacts"].size() == result.artifacts.size());
  for (const auto& entry : manifest["artifacts"]) {
    const fs::path p = entry["path"].get<std::string>();
    REQUIRE(fs::exists(p));
    CHECK(io::file_checksum(p) == entry["fnv1a64"].get<std::string>());
  }

  const SnapshotDataset ideal = io::read_dataset(out / "simulate" / "ideal");
  CHECK(ideal.snapshots() == cfg.steps + 1);
  const GridField snap = io::read_field(out / "simulate" / "ideal_t0.2.csv");
  CHECK((snap.values - ideal.u.col(10)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("transition command recovers the injected strength") {
  const fs::path out = scratch("cmd_transition");
  RunConfig cfg = tiny_config(out);
  cfg.channel = ChannelKind::BitFlip;

  const CommandResult result = cmd_transition(cfg);
  const nlohmann::json manifest =
      nlohmann::json::parse(io::read_text(result.manifest));
  const auto& fits = manifest["report"];
  REQUIRE(fits.size() == 4);  // two register sizes, two depths
  for (const auto& fit : fits) {
    CHECK(fit["strength_fitted"].get<double>() ==
          doctest::Approx(0.01).epsilon(1e-5));
    CHECK(fit["max_abs_residual"].get<double>() < 1e-12);
  }
  CHECK(fs::exists(out / "transition" / "analytic_n2_l4_p0.01.csv"));
  CHECK(fs::exists(out / "transition" / "profile_analytic_n2_p0.01.csv"));
  CHECK(fs::exists(out / "transition" / "profile_empirical_n2_l4_p0.01.csv"));
}

TEST_CASE("zero evolution steps reproduce the input field") {
  const fs::path out = scratch("cmd_simulate_zero");
  RunConfig cfg = tiny_config(out);
  cfg.steps = 0;
  cfg.snapshot_times = {0.0};

  cmd_simulate(cfg);
  const Eigen::VectorXd ic = tiny_ic().values;
  const SnapshotDataset ideal = io::read_dataset(out / "simulate" / "ideal");
  REQUIRE(ideal.snapshots() == 1);
  CHECK((ideal.u.col(0) - ic).cwiseAbs().maxCoeff() < 1e-12);
  const SnapshotDataset noisy = io::read_dataset(out / "simulate" / "noisy_p0.01");
  CHECK((noisy.u.col(0) - ic).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero layers produce identity transition matrices") {
  const fs::path out = scratch("cmd_transition_zero");
  RunConfig cfg = tiny_config(out);
  cfg.qubit_sizes = {2};
  cfg.layer_counts = {0};

  const CommandResult result = cmd_transition(cfg);
  for (const char* name :
       {"analytic_n2_l0_p0.01.csv", "empirical_n2_l0_p0.01.csv"}) {
    const TransitionMatrix m =
        io::read_transition_matrix(out / "transition" / name);
    CHECK((m.entries - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() ==
          0.0);
  }
  // The identity is reached at every strength, so no fit is reported.
  const nlohmann::json fits =
      nlohmann::json::parse(io::read_text(result.manifest))["report"];
  REQUIRE(fits.size() == 1);
  CHECK_FALSE(fits[0].contains("strength_fitted"));
  CHECK(fits[0]["max_abs_residual"].get<double>() == 0.0);
}

TEST_CASE("measured transitions with readout and shots stay reproducible") {
  const fs::path out_a = scratch("cmd_transition_shots_a");
  const fs::path out_b = scratch("cmd_transition_shots_b");
  RunConfig cfg = tiny_config(out_a);
  cfg.qubit_sizes = {2};
  cfg.layer_counts = {3};
  cfg.strengths = {0.05};
  cfg.shots = 4000;
  cfg.readout_error = 0.02;
  cfg.mitigate = true;

  const CommandResult first = cmd_transition(cfg);
  const nlohmann::json fits =
      nlohmann::json::parse(io::read_text(first.manifest))["report"];
  REQUIRE(fits.size() == 1);
  // Finite shots dominate the error budget here; mitigation keeps the fit
  // in the right neighborhood.
  CHECK(fits[0]["strength_fitted"].get<double>() ==
        doctest::Approx(0.05).epsilon(0.5));

  cfg.output_dir = out_b.string();
  cmd_transition(cfg);
  const fs::path rel = fs::path("transition") / "empirical_n2_l3_p0.05.csv";
  CHECK(io::file_checksum(out_a / rel) == io::file_checksum(out_b / rel));
}

TEST_CASE("dataset generation discovery and validation chain end to end") {
  const fs::path out = scratch("cmd_chain");
  RunConfig cfg = tiny_config(out);
  cfg.strengths = {0.002};

  const CommandResult gen = cmd_gen_datasets(cfg);
  CHECK(gen.artifacts.size() == 3);
  for (int i = 0; i < 3; ++i) {
    const SnapshotDataset data =
        io::read_dataset(out / "datasets" / ("ds_00" + std::to_string(i)));
    CHECK(data.snapshots() == 21);
    CHECK(data.meta.noisy);
    CHECK(data.meta.seed != 0);
  }

  SUBCASE("seeds differ across datasets") {
    const auto a = io::read_dataset(out / "datasets" / "ds_000");
    const auto b = io::read_dataset(out / "datasets" / "ds_001");
    CHECK(a.meta.seed != b.meta.seed);
    CHECK((a.u - b.u).cwiseAbs().maxCoeff() > 1e-6);
  }

  const CommandResult disc = cmd_discover(cfg);
  REQUIRE(fs::exists(out / "models" / "model_full.json"));
  REQUIRE(fs::exists(out / "models" / "model_restricted.json"));
  REQUIRE(fs::exists(out / "models" / "discovery_report.json"));

  const SparseModel restricted = io::read_model(out / "models" / "model_restricted.json");
  const TermLibrary lib = TermLibrary::full();
  for (const int t : restricted.support()) {
    const std::string& name = lib.terms[t].name;
    CHECK((name == "u" || name == "u^2" || name == "u_xx"));
  }
  const nlohmann::json report =
      nlohmann::json::parse(io::read_text(out / "models" / "discovery_report.json"));
  CHECK(report["datasets"] == 3);
  for (const auto& row : report["coefficients"]) {
    CHECK(row.contains("recovered_full"));
    CHECK(row.contains("baseline_full"));
    CHECK(row.contains("recovered_restricted"));
    CHECK(row.contains("baseline_restricted"));
  }

  const CommandResult val = cmd_validate(cfg);
  const nlohmann::json summary =
      nlohmann::json::parse(io::read_text(out / "validate" / "coverage_report.json"));
  for (const char* name : {"model_full", "model_restricted"}) {
    REQUIRE(summary.contains(name));
    CHECK(summary[name]["runs"].size() == 2);
    const double mean = summary[name]["mean_coverage"].get<double>();
    CHECK(mean >= 0.0);
    CHECK(mean <= 1.0);
  }
  CHECK(fs::exists(out / "validate" / "errmap_model_full_h0.csv"));
  CHECK(val.manifest.filename() == "validate-manifest.json");

  SUBCASE("validate without models fails loudly") {
    RunConfig fresh = cfg;
    fresh.output_dir = (out / "fresh").string();
    fresh.models_dir = (out / "nowhere").string();
    CHECK_THROWS_AS(cmd_validate(fresh), std::runtime_error);
  }
}

TEST_CASE("discover requires generated datasets") {
  const fs::path out = scratch("cmd_discover_empty");
  const RunConfig cfg = tiny_config(out);
  CHECK_THROWS_AS(cmd_discover(cfg), std::runtime_error);
}

TEST_CASE("qasm export command writes the circuit file") {
  const fs::path out = scratch("cmd_qasm");
  RunConfig cfg = tiny_config(out);
  cfg.steps = 5;
  cfg.qasm_basis = 3;

  const CommandResult result = cmd_export_qasm(cfg);
  REQUIRE(result.artifacts.size() == 1);
  const std::string text = io::read_text(result.artifacts.front());
  CHECK(text.rfind("OPENQASM 2.0;", 0) == 0);
  CHECK(result.artifacts.front().filename() == "circuit_n4_l5_b3.qasm");
}
