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

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "noiseswitch/cli.hpp"

namespace noiseswitch::cli {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

std::string to_string(Task t) {
  switch (t) {
    case Task::optimize: return "optimize";
    case Task::sweep: return "sweep";
    case Task::protocol: return "protocol";
    case Task::reachability: return "reachability";
    case Task::bath: return "bath";
    case Task::validate_timescales: return "validate-timescales";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  if (s == "optimize") return Task::optimize;
  if (s == "sweep") return Task::sweep;
  if (s == "protocol") return Task::protocol;
  if (s == "reachability") return Task::reachability;
  if (s == "bath") return Task::bath;
  if (s == "validate-timescales") return Task::validate_timescales;
  throw ConfigError("unknown task '" + s + "'");
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"config", {"version"}},
      {"experiment", {"name", "description", "anchor", "task", "seed"}},
      {"model", {"name", "qubits", "coupling", "theta", "gamma_max", "dephasing", "lamb_ratio",
                 "boltzmann", "omega_over_cutoff", "ion_scale"}},
      {"gmon", {"qutrits", "coupling_ghz", "anharmonicity_ghz", "carrier_ghz", "cutoff_ghz",
                "boltzmann", "gamma_max_ghz", "detuning_max_ghz", "drive_max_ghz", "lamb_shift"}},
      {"problem", {"initial", "target", "total_time", "slices", "pairs", "pair_seed",
                   "pair_rule", "trajectory_substeps"}},
      {"optimizer", {"restarts", "max_iterations", "gradient", "target_error", "init_scale",
                     "workers", "memory", "time_limit_seconds", "amplitude_cap"}},
      {"sweep", {"total_times", "start", "stop", "step"}},
      {"protocol", {"kind", "mode", "delta_f", "gamma", "budget", "target_error",
                    "duration_quantum", "trotter_k"}},
      {"reachability", {"noise", "boltzmann"}},
      {"bath", {"statistics", "beta", "cutoff", "transition", "frequencies"}},
      {"timescales", {"bath", "system", "relaxation", "control", "factor"}},
      {"output", {"dir"}},
  };
  return s;
}

void check_schema(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) {
      if (body.empty()) throw ConfigError("key '" + section + "' outside of a section");
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }
}

template <class T>
T get(const pt::ptree& tree, const std::string& path, const T& fallback) {
  const auto node = tree.get_optional<std::string>(path);
  if (!node) return fallback;
  std::istringstream in(*node);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("cannot parse '" + path + "' = '" + *node + "'");
  return value;
}

template <>
std::string get(const pt::ptree& tree, const std::string& path, const std::string& fallback) {
  return tree.get<std::string>(path, fallback);
}

template <>
bool get(const pt::ptree& tree, const std::string& path, const bool& fallback) {
  const auto node = tree.get_optional<std::string>(path);
  if (!node) return fallback;
  if (*node == "true" || *node == "1" || *node == "yes") return true;
  if (*node == "false" || *node == "0" || *node == "no") return false;
  throw ConfigError("cannot parse boolean '" + path + "' = '" + *node + "'");
}

// Numbers may be written as plain values or as multiples of pi ("0.5pi").
double get_angle(const pt::ptree& tree, const std::string& path, double fallback) {
  const auto node = tree.get_optional<std::string>(path);
  if (!node) return fallback;
  std::string s = *node;
  double scale = 1.0;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    scale = std::numbers::pi;
    s = s.substr(0, s.size() - 2);
    if (s.empty()) s = "1";
  }
  std::istringstream in(s);
  double v = 0.0;
  in >> v;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("cannot parse angle '" + path + "' = '" + *node + "'");
  return v * scale;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream v(item);
    double x = 0.0;
    v >> x;
    if (v.fail() || !(v >> std::ws).eof()) throw ConfigError("cannot parse list '" + what + "'");
    out.push_back(x);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& source_path) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  check_schema(tree);
  ExperimentConfig c;
  c.source_path = source_path;
  c.source_text = text;
  c.version = get(tree, "config.version", 0);
  c.name = get<std::string>(tree, "experiment.name", "");
  c.description = get<std::string>(tree, "experiment.description", "");
  c.anchor = get<std::string>(tree, "experiment.anchor", "");
  c.task = task_from_string(get<std::string>(tree, "experiment.task", "optimize"));
  if (tree.get_optional<std::string>("experiment.seed")) c.seed = get<std::uint64_t>(tree, "experiment.seed", 0);

  auto& m = c.model;
  m.name = get<std::string>(tree, "model.name", m.name);
  m.qubits = get(tree, "model.qubits", m.qubits);
  m.coupling = get(tree, "model.coupling", m.coupling);
  m.theta = get_angle(tree, "model.theta", m.theta);
  m.gamma_max = get(tree, "model.gamma_max", m.gamma_max);
  m.dephasing = get(tree, "model.dephasing", m.dephasing);
  m.lamb_ratio = get(tree, "model.lamb_ratio", m.lamb_ratio);
  m.boltzmann = get(tree, "model.boltzmann", m.boltzmann);
  m.omega_over_cutoff = get(tree, "model.omega_over_cutoff", m.omega_over_cutoff);
  m.ion_scale = get(tree, "model.ion_scale", m.ion_scale);
  auto& g = m.gmon;
  g.n = get(tree, "gmon.qutrits", g.n);
  g.coupling_ghz = get(tree, "gmon.coupling_ghz", g.coupling_ghz);
  g.anharmonicity_ghz = get(tree, "gmon.anharmonicity_ghz", g.anharmonicity_ghz);
  g.carrier_ghz = get(tree, "gmon.carrier_ghz", g.carrier_ghz);
  g.cutoff_ghz = get(tree, "gmon.cutoff_ghz", g.cutoff_ghz);
  g.boltzmann = get(tree, "gmon.boltzmann", g.boltzmann);
  g.gamma_max_ghz = get(tree, "gmon.gamma_max_ghz", g.gamma_max_ghz);
  g.detuning_max_ghz = get(tree, "gmon.detuning_max_ghz", g.detuning_max_ghz);
  g.drive_max_ghz = get(tree, "gmon.drive_max_ghz", g.drive_max_ghz);
  g.lamb_shift = get(tree, "gmon.lamb_shift", g.lamb_shift);

  auto& p = c.problem;
  p.initial = get<std::string>(tree, "problem.initial", p.initial);
  p.target = get<std::string>(tree, "problem.target", p.target);
  p.total_time = get(tree, "problem.total_time", p.total_time);
  p.slices = get(tree, "problem.slices", p.slices);
  p.pairs = get(tree, "problem.pairs", p.pairs);
  p.pair_seed = get(tree, "problem.pair_seed", p.pair_seed);
  p.pair_rule = get<std::string>(tree, "problem.pair_rule", p.pair_rule);
  p.trajectory_substeps = get(tree, "problem.trajectory_substeps", p.trajectory_substeps);

  auto& o = c.optimizer;
  o.restarts = get(tree, "optimizer.restarts", o.restarts);
  o.max_iterations = get(tree, "optimizer.max_iterations", o.max_iterations);
  o.gradient_method = optimize::gradient_method_from_string(
      get<std::string>(tree, "optimizer.gradient", optimize::to_string(o.gradient_method)));
  const double target_error = get(tree, "optimizer.target_error", std::sqrt(o.tolerance));
  o.tolerance = target_error * target_error;
  o.init_scale = get(tree, "optimizer.init_scale", o.init_scale);
  o.workers = get(tree, "optimizer.workers", o.workers);
  o.memory = get(tree, "optimizer.memory", o.memory);
  o.time_limit_seconds = get(tree, "optimizer.time_limit_seconds", o.time_limit_seconds);
  o.amplitude_cap = get(tree, "optimizer.amplitude_cap", o.amplitude_cap);

  if (auto list = tree.get_optional<std::string>("sweep.total_times")) {
    c.sweep.total_times = parse_list(*list, "sweep.total_times");
  } else if (tree.get_optional<std::string>("sweep.start")) {
    const double start = get(tree, "sweep.start", 0.0);
    const double stop = get(tree, "sweep.stop", 0.0);
    const double step = get(tree, "sweep.step", 0.0);
    if (!(step > 0.0) || stop < start) throw ConfigError("sweep range needs start <= stop and step > 0");
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int k = 0; k < count; ++k) c.sweep.total_times.push_back(start + k * step);
  }

  auto& pr = c.protocol;
  pr.kind = get<std::string>(tree, "protocol.kind", pr.kind);
  pr.mode = get<std::string>(tree, "protocol.mode", pr.mode);
  pr.delta_f = get(tree, "protocol.delta_f", pr.delta_f);
  pr.plan.gamma = get(tree, "protocol.gamma", pr.plan.gamma);
  pr.plan.budget = get(tree, "protocol.budget", pr.plan.budget);
  pr.plan.target_error = get(tree, "protocol.target_error", pr.plan.target_error);
  pr.plan.duration_quantum = get(tree, "protocol.duration_quantum", pr.plan.duration_quantum);
  pr.plan.trotter_k = get(tree, "protocol.trotter_k", pr.plan.trotter_k);

  c.reach.noise = get<std::string>(tree, "reachability.noise", c.reach.noise);
  c.reach.boltzmann = get(tree, "reachability.boltzmann", c.reach.boltzmann);

  auto& b = c.bath;
  b.spec.statistics = bath::statistics_from_string(
      get<std::string>(tree, "bath.statistics", bath::to_string(b.spec.statistics)));
  b.spec.beta = get(tree, "bath.beta", b.spec.beta);
  b.spec.cutoff = get(tree, "bath.cutoff", b.spec.cutoff);
  b.spec.transition = get(tree, "bath.transition", b.spec.transition);
  if (auto list = tree.get_optional<std::string>("bath.frequencies")) {
    b.frequencies = parse_list(*list, "bath.frequencies");
  }

  auto& t = c.timescales;
  t.scales.bath = get(tree, "timescales.bath", t.scales.bath);
  t.scales.system = get(tree, "timescales.system", t.scales.system);
  t.scales.relaxation = get(tree, "timescales.relaxation", t.scales.relaxation);
  t.scales.control = get(tree, "timescales.control", t.scales.control);
  t.factor = get(tree, "timescales.factor", t.factor);

  c.output_dir = get<std::string>(tree, "output.dir", c.output_dir);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::uint64_t ExperimentConfig::effective_seed() const {
  if (seed) return *seed;
  const std::string digest = sha256_hex(source_text);
  return std::stoull(digest.substr(0, 15), nullptr, 16);
}

namespace {

std::string base_dir_of(const std::string& source_path) {
  if (source_path.empty()) return "";
  return fs::path(source_path).parent_path().string();
}

void check_state_label(const std::string& label, const std::string& base) {
  if (label.rfind("file:", 0) == 0) {
    fs::path p(label.substr(5));
    if (p.is_relative() && !base.empty()) p = fs::path(base) / p;
    if (!fs::exists(p)) throw ConfigError("state file '" + p.string() + "' does not exist");
  }
}

}  // namespace

void ExperimentConfig::validate(bool check_files) const {
  if (version != kConfigVersion) {
    throw ConfigError("config version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kConfigVersion) + ")");
  }
  if (name.empty()) throw ConfigError("[experiment] name is required");
  try {
    const bool needs_system = task == Task::optimize || task == Task::sweep || task == Task::protocol;
    if (needs_system || task == Task::reachability) {
      const ControlSystem sys = build_system(model);
      const std::string base = base_dir_of(source_path);
      if (problem.pair_rule != "random" && problem.pair_rule != "majorized") {
        throw ConfigError("problem.pair_rule must be 'random' or 'majorized'");
      }
      if (problem.pairs <= 0 && check_files) {
        check_state_label(problem.initial, base);
        check_state_label(problem.target, base);
      }
      if (needs_system && task != Task::protocol) {
        if (!(problem.total_time > 0.0)) throw ConfigError("problem.total_time must be positive");
        if (problem.slices < 1) throw ConfigError("problem.slices must be >= 1");
        if (problem.trajectory_substeps < 1) throw ConfigError("problem.trajectory_substeps must be >= 1");
        optimizer.validate();
      }
      (void)sys;
    }
    if (task == Task::sweep && sweep.total_times.empty()) throw ConfigError("sweep task needs [sweep] total_times");
    if (task == Task::sweep) {
      for (double t : sweep.total_times) {
        if (!(t > 0.0)) throw ConfigError("sweep durations must be positive");
      }
    }
    if (task == Task::protocol) {
      static const std::set<std::string> kinds = {"hlp", "greedy", "hlp_vs_greedy", "cooling", "erasure"};
      if (!kinds.count(protocol.kind)) throw ConfigError("unknown protocol kind '" + protocol.kind + "'");
      if (protocol.kind == "erasure") (void)protocols::erasure_mode_from_string(protocol.mode);
      if (!(protocol.delta_f > 0.0)) throw ConfigError("protocol.delta_f must be positive");
      if (protocol.plan.trotter_k < 1) throw ConfigError("protocol.trotter_k must be >= 1");
    }
    if (task == Task::reachability) {
      const auto kind = protocols::noise_kind_from_string(reach.noise);
      if (kind == protocols::NoiseKind::finite_T && !(reach.boltzmann > 1.0)) {
        throw ConfigError("finite_T reachability needs reachability.boltzmann > 1");
      }
    }
    if (task == Task::bath) {
      bath.spec.validate();
      if (bath.frequencies.empty()) throw ConfigError("bath task needs [bath] frequencies");
    }
    if (task == Task::validate_timescales) {
      const auto& s = timescales.scales;
      if (!(s.bath > 0.0 && s.system > 0.0 && s.relaxation > 0.0 && s.control > 0.0)) {
        throw ConfigError("all [timescales] rates must be positive");
      }
      if (!(timescales.factor >= 1.0)) throw ConfigError("timescales.factor must be >= 1");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

ControlSystem build_system(const ModelConfig& m) {
  if (m.name == "ising_chain") {
    return models::ising_chain(m.qubits, m.coupling, m.theta, m.gamma_max, m.dephasing, m.lamb_ratio);
  }
  if (m.name == "ising_thermal") {
    return models::ising_chain_thermal(m.qubits, m.coupling, m.boltzmann, m.gamma_max, m.omega_over_cutoff);
  }
  if (m.name == "gmon") return models::gmon_chain(m.gmon);
  if (m.name == "ion_trap") return models::ion_trap_collective(m.qubits, m.ion_scale, m.gamma_max);
  throw ConfigError("unknown model '" + m.name + "'");
}

DensityOperator build_state(const std::string& label, const quantum::Dims& dims, const std::string& base_dir) {
  auto after = [&](std::size_t n) { return label.substr(n); };
  if (label.rfind("random:", 0) == 0) {
    return models::random_density(dims, std::stoull(after(7)));
  }
  if (label.rfind("diag:", 0) == 0) {
    std::vector<double> p = parse_list(after(5), label);
    double sum = 0.0;
    for (double v : p) sum += v;
    if (!(sum > 0.0)) throw ConfigError("diag: populations must have a positive sum");
    for (double& v : p) v /= sum;
    return models::diagonal_state(p, dims);
  }
  if (label.rfind("alg_cool:", 0) == 0 || label.rfind("test2:", 0) == 0) {
    const bool alg = label[0] == 'a';
    const double b = std::stod(after(alg ? 9 : 6));
    for (int d : dims) {
      if (d != 2) throw ConfigError("algorithmic-cooling states need qubits");
    }
    const int n = static_cast<int>(dims.size());
    return alg ? protocols::algorithmic_cooling_state(n, b) : protocols::test2_target(n, b);
  }
  if (label.rfind("file:", 0) == 0) {
    fs::path p(after(5));
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    auto rho = models::load_density_json(p.string());
    if (rho.dims() != dims) throw DimensionError("state file dims do not match the system");
    return rho;
  }
  return models::target_state(label, dims).state;
}

}  // namespace noiseswitch::cli
