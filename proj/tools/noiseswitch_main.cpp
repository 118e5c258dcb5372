// Copyright 2026 The noiseswitch Authors
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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "noiseswitch/cli.hpp"

namespace ns = noiseswitch;
namespace cli = noiseswitch::cli;

namespace {

// A bare name resolves to a bundled config.
std::string resolve_config(const std::string& arg) {
  if (std::filesystem::exists(arg)) return arg;
  const auto bundled = std::filesystem::path(NOISESWITCH_CONFIG_DIR) / (arg + ".cfg");
  if (std::filesystem::exists(bundled)) return bundled.string();
  return arg;
}

int report(const cli::RunResult& r) {
  if (r.exit_code == cli::kOk) {
    std::cout << "artifacts written to " << r.output_dir << "\n";
  } else {
    std::cerr << "noiseswitch: " << r.message << "\n";
    if (!r.output_dir.empty()) std::cerr << "artifacts written to " << r.output_dir << "\n";
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-switching open-system control toolbox"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NOISESWITCH_VERSION);

  std::string config_path;
  cli::RunOverrides overrides;
  std::string out_dir;
  std::uint64_t seed = 0;
  int restarts = 0, workers = 0;

  auto* run = app.add_subcommand("run", "Run an experiment config and write its artifacts");
  run->add_option("--config,config", config_path, "Config file or bundled experiment name")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the seed");
  run->add_option("--restarts", restarts, "Override optimizer restarts")->check(CLI::PositiveNumber);
  run->add_option("--workers", workers, "Override optimizer worker threads")->check(CLI::NonNegativeNumber);

  auto* list = app.add_subcommand("list", "List bundled experiments");

  auto* validate = app.add_subcommand("validate", "Parse and validate a config without running it");
  validate->add_option("--config,config", config_path, "Config file or bundled experiment name")->required();

  auto* bath_cmd = app.add_subcommand("bath", "Print bath rates at the given frequencies");
  ns::bath::BathSpec spec;
  std::string statistics = "boson";
  std::vector<double> omegas;
  bath_cmd->add_option("--beta", spec.beta, "Inverse temperature")->required();
  bath_cmd->add_option("--cutoff", spec.cutoff, "Lorentz-Drude cutoff");
  bath_cmd->add_option("--statistics", statistics, "boson or fermion");
  bath_cmd->add_option("--omega", omegas, "Angular frequencies")->required();

  auto* reach = app.add_subcommand("reach", "Reachability verdict for a diagonal transfer");
  std::string initial = "max_mixed", target = "ground", noise = "bit_flip";
  int qubits = 3;
  double boltzmann = 0.0;
  reach->add_option("--initial", initial, "Initial state label");
  reach->add_option("--target", target, "Target state label");
  reach->add_option("--noise", noise, "amp_damp, bit_flip or finite_T");
  reach->add_option("--qubits", qubits, "Number of qubits")->check(CLI::PositiveNumber);
  reach->add_option("--boltzmann", boltzmann, "Boltzmann factor b for finite_T");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (!out_dir.empty()) overrides.output_dir = out_dir;
      if (run->count("--seed")) overrides.seed = seed;
      if (restarts > 0) overrides.restarts = restarts;
      if (run->count("--workers")) overrides.workers = workers;
      return report(cli::run_file(resolve_config(config_path), overrides));
    }
    if (*list) {
      for (const auto& e : cli::list_experiments()) {
        std::printf("%-28s %-24s %s\n", e.name.c_str(), e.anchor.c_str(), e.description.c_str());
      }
      return cli::kOk;
    }
    if (*validate) {
      const auto c = cli::load_config(resolve_config(config_path));
      c.validate();
      std::cout << c.name << ": ok (task " << cli::to_string(c.task) << ", seed " << c.effective_seed() << ")\n";
      return cli::kOk;
    }
    if (*bath_cmd) {
      spec.statistics = ns::bath::statistics_from_string(statistics);
      spec.validate();
      std::printf("omega,damping_rate,lamb_shift_rate\n");
      for (double w : omegas) {
        std::printf("%.17e,%.17e,%.17e\n", w, ns::bath::damping_rate(w, spec), ns::bath::lamb_shift_rate(w, spec));
      }
      return cli::kOk;
    }
    if (*reach) {
      const ns::quantum::Dims dims(static_cast<std::size_t>(qubits), 2);
      const auto v = ns::protocols::reachability_verdict(cli::build_state(initial, dims), cli::build_state(target, dims),
                                                         ns::protocols::noise_kind_from_string(noise), boltzmann);
      nlohmann::json j{{"reachable", ns::protocols::to_string(v.reachable)}, {"reason", v.reason}};
      if (v.witness) j["floor"] = v.witness->floor;
      std::cout << j.dump(2) << "\n";
      return v.reachable == ns::protocols::Reachable::no ? cli::kInfeasible : cli::kOk;
    }
  } catch (const ns::ConfigError& e) {
    std::cerr << "noiseswitch: config error: " << e.what() << "\n";
    return cli::kConfigError;
  } catch (const ns::NumericError& e) {
    std::cerr << "noiseswitch: numeric failure: " << e.what() << "\n";
    return cli::kNumericFailure;
  } catch (const ns::Error& e) {
    std::cerr << "noiseswitch: " << e.what() << "\n";
    return cli::kConfigError;
  }
  return cli::kOk;
}
