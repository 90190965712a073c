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

#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qconv/pipeline.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::vector<double>> strengths;
  std::optional<long> steps;
  std::optional<std::vector<int>> qubits;
  std::optional<std::string> channel;
  std::optional<long> shots;
  std::optional<std::vector<std::string>> restrict_terms;
  std::optional<std::uint64_t> basis;
  std::optional<std::string> decode;
};

// Shared flags; each subcommand layers them over the JSON config.
void add_common_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "JSON run configuration file");
  cmd->add_option("--seed", ov.seed, "override the run seed");
  cmd->add_option("--out", ov.out, "override the output directory");
  cmd->add_option("--p", ov.strengths, "override channel strengths");
  cmd->add_option("--steps", ov.steps, "override the evolution step count");
  cmd->add_option("--qubits", ov.qubits, "override the register-size sweep");
  cmd->add_option("--channel", ov.channel,
                  "noise channel: bit-flip, phase-flip, bit-phase-flip, "
                  "depolarizing, amplitude-damping");
  cmd->add_option("--shots", ov.shots, "override the measurement shot count");
  cmd->add_option("--restrict-terms", ov.restrict_terms,
                  "term names the restricted regression may use");
  cmd->add_option("--basis", ov.basis, "basis state prepared before export");
  cmd->add_option("--decode", ov.decode,
                  "decode convention: coherent-projection or diagonal-sqrt");
}

qconv::RunConfig resolve_config(const Overrides& ov) {
  qconv::RunConfig cfg = ov.config_path.empty()
                             ? qconv::RunConfig{}
                             : qconv::load_config(ov.config_path);
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.out) cfg.output_dir = *ov.out;
  if (ov.strengths) cfg.strengths = *ov.strengths;
  if (ov.steps) cfg.steps = *ov.steps;
  if (ov.qubits) cfg.qubit_sizes = *ov.qubits;
  if (ov.channel) cfg.channel = qconv::parse_channel(*ov.channel);
  if (ov.shots) cfg.shots = *ov.shots;
  if (ov.restrict_terms) cfg.restrict_terms = *ov.restrict_terms;
  if (ov.basis) cfg.qasm_basis = *ov.basis;
  if (ov.decode) cfg.decode = qconv::parse_decode(*ov.decode);
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral advection on a noisy simulated quantum register"};
  app.require_subcommand(1);

  Overrides ov;
  std::function<qconv::CommandResult(const qconv::RunConfig&)> action;

  const auto bind = [&](const char* name, const char* help, auto fn) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common_options(cmd, ov);
    cmd->callback([&action, fn] { action = fn; });
  };
  bind("simulate", "run ideal and noisy register evolutions", qconv::cmd_simulate);
  bind("transition", "sweep analytic and simulated transition matrices",
       qconv::cmd_transition);
  bind("gen-datasets", "generate noisy snapshot datasets for regression",
       qconv::cmd_gen_datasets);
  bind("discover", "fit sparse effective dynamics from datasets",
       qconv::cmd_discover);
  bind("validate", "integrate fitted models on holdout initial conditions",
       qconv::cmd_validate);
  bind("export-qasm", "write the phase-evolution circuit as OpenQASM",
       qconv::cmd_export_qasm);

  CLI11_PARSE(app, argc, argv);

  try {
    const qconv::CommandResult result = action(resolve_config(ov));
    std::cout << "manifest: " << result.manifest.string() << "\n";
    return 0;
  } catch (const std::exception& err) {
    std::cerr << nlohmann::json{{"error", {{"message", err.what()}}}}.dump()
              << std::endl;
    return 1;
  }
}
