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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noiseswitch/bath.hpp"
#include "noiseswitch/optimize.hpp"
#include "noiseswitch/protocols.hpp"

namespace noiseswitch::cli {

using quantum::ControlSystem;
using quantum::DensityOperator;

inline constexpr int kConfigVersion = 1;

enum class Task { optimize, sweep, protocol, reachability, bath, validate_timescales };
std::string to_string(Task t);
Task task_from_string(const std::string& s);

struct ModelConfig {
  std::string name = "ising_chain";  // ising_chain | ising_thermal | gmon | ion_trap
  int qubits = 3;
  double coupling = 1.0;             // J
  double theta = 0.0;
  double gamma_max = 5.0;
  double dephasing = 0.0;
  double lamb_ratio = 0.0;
  double boltzmann = 2.0;            // ising_thermal: b >= 1
  double omega_over_cutoff = 0.2;
  models::GmonParams gmon;
  double ion_scale = 1.0;
};

struct ProblemConfig {
  std::string initial = "max_mixed";
  std::string target = "ground";
  double total_time = 1.0;
  int slices = 20;
  int pairs = 0;             // > 0: random initial/target pairs instead of labels
  std::uint64_t pair_seed = 1;
  std::string pair_rule = "random";  // random | majorized (target majorized by initial)
  int trajectory_substeps = 1;
};

struct SweepConfig {
  std::vector<double> total_times;
};

struct ProtocolConfig {
  std::string kind = "hlp";  // hlp | greedy | hlp_vs_greedy | cooling | erasure
  std::string mode = "amp_damp_exact";
  double delta_f = 1e-4;
  protocols::PlanOptions plan;
};

struct ReachConfig {
  std::string noise = "bit_flip";
  double boltzmann = 0.0;
};

struct BathConfig {
  bath::BathSpec spec;
  std::vector<double> frequencies;  // rate table abscissae (angular)
};

struct TimescaleConfig {
  bath::Timescales scales;
  double factor = bath::kDefaultSeparation;
};

struct ExperimentConfig {
  int version = kConfigVersion;
  std::string name;
  std::string description;
  std::string anchor;  // figure/table the experiment reproduces
  Task task = Task::optimize;
  std::optional<std::uint64_t> seed;
  ModelConfig model;
  ProblemConfig problem;
  optimize::OptimizerConfig optimizer;
  SweepConfig sweep;
  ProtocolConfig protocol;
  ReachConfig reach;
  BathConfig bath;
  TimescaleConfig timescales;
  std::string output_dir = "runs";
  std::string source_path;
  std::string source_text;

  // Seed actually used: explicit or derived from the config digest.
  std::uint64_t effective_seed() const;
  // check_files = false skips the existence check for file: states.
  void validate(bool check_files = true) const;
};

ExperimentConfig parse_config_text(const std::string& text, const std::string& source_path = "");
ExperimentConfig load_config(const std::string& path);

ControlSystem build_system(const ModelConfig& m);
// Labels: ground, excited, max_mixed, ghz, file:<path>, random:<seed>,
// diag:<p1>,<p2>,..., alg_cool:<b>, test2:<b>.
DensityOperator build_state(const std::string& label, const quantum::Dims& dims,
                            const std::string& base_dir = "");

// Random state majorized by rho0: a random doubly stochastic mix of its
// spectrum in a Haar-random eigenbasis. Partner states for unital transfers.
DensityOperator majorized_random_state(const DensityOperator& rho0, std::uint64_t seed);

// Artifacts ----------------------------------------------------------------

std::string sha256_hex(const std::string& data);
// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string dir);
  void write(const std::string& name, const std::string& content);
  const std::string& dir() const { return dir_; }
  // name -> sha256
  const std::map<std::string, std::string>& digests() const { return digests_; }

 private:
  std::string dir_;
  std::map<std::string, std::string> digests_;
};

// Catalog ------------------------------------------------------------------

struct CatalogEntry {
  std::string name;
  std::string anchor;
  std::string description;
  std::string config_file;  // path of the bundled config
};

std::vector<CatalogEntry> list_experiments(const std::string& config_dir = NOISESWITCH_CONFIG_DIR);

// Runner -------------------------------------------------------------------

enum ExitCode { kOk = 0, kConfigError = 2, kInfeasible = 3, kNumericFailure = 4 };

struct RunOverrides {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> workers;
};

struct RunResult {
  int exit_code = kOk;
  std::string message;
  std::string output_dir;
  std::string result_json;
};

// Runs the configured task and writes the artifact set. Never throws; errors
// map to exit codes.
RunResult run(const ExperimentConfig& config, const RunOverrides& overrides = {});
RunResult run_file(const std::string& path, const RunOverrides& overrides = {});

}  // namespace noiseswitch::cli
