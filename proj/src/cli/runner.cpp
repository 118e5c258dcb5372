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

#include <json.hpp>

#include <Eigen/Core>
#include <Eigen/QR>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <numeric>
#include <numbers>
#include <random>
#include <sstream>

#include "noiseswitch/cli.hpp"

namespace noiseswitch::cli {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using numerics::ComplexMatrix;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

struct Context {
  ExperimentConfig config;
  ArtifactWriter writer;
  Json result;
  int exit_code = kOk;
  std::string message = "ok";
};

std::string base_dir(const ExperimentConfig& c) {
  return c.source_path.empty() ? std::string() : fs::path(c.source_path).parent_path().string();
}

Json spectrum_json(const ComplexMatrix& rho) {
  Json pops = Json::array();
  for (Eigen::Index k = 0; k < rho.rows(); ++k) pops.push_back(rho(k, k).real());
  return pops;
}

Json state_summary(const ComplexMatrix& rho) {
  Json j;
  j["populations"] = spectrum_json(rho);
  j["ground_population"] = rho(0, 0).real();
  j["purity"] = (rho * rho).trace().real();
  return j;
}

Json system_summary(const ControlSystem& sys) {
  Json j;
  j["name"] = sys.name;
  j["dims"] = sys.dims;
  Json controls = Json::array();
  for (const auto& c : sys.controls) controls.push_back(c.label);
  j["controls"] = controls;
  Json channels = Json::array();
  for (const auto& ch : sys.channels) {
    channels.push_back({{"label", ch.label}, {"max_rate", ch.max_rate}, {"lamb_ratio", ch.lamb_ratio}});
  }
  j["channels"] = channels;
  return j;
}

bool is_unital_bit_flip(const ModelConfig& m) {
  return m.name == "ising_chain" && std::abs(m.theta - std::numbers::pi / 2) < 1e-12;
}

Json verdict_json(const protocols::ReachabilityVerdict& v) {
  Json j;
  j["reachable"] = protocols::to_string(v.reachable);
  j["reason"] = v.reason;
  if (v.witness) {
    Json w;
    w["initial_spectrum"] = v.witness->initial;
    w["target_spectrum"] = v.witness->target;
    w["floor"] = v.witness->floor;
    Json ts = Json::array();
    for (const auto& t : v.witness->transforms) ts.push_back({{"i", t.i}, {"j", t.j}, {"lambda", t.lambda}});
    w["transforms"] = ts;
    j["witness"] = w;
  }
  return j;
}

// Reports infeasibility under unital noise before spending optimizer time.
bool check_unital_feasibility(Context& ctx, const DensityOperator& rho0, const DensityOperator& target,
                              const std::string& tag) {
  if (!is_unital_bit_flip(ctx.config.model)) return true;
  const auto v = protocols::reachability_verdict(rho0, target, protocols::NoiseKind::bit_flip);
  if (v.reachable != protocols::Reachable::no) return true;
  ctx.writer.write("verdict" + tag + ".json", verdict_json(v).dump(2) + "\n");
  ctx.result["verdict"] = verdict_json(v);
  ctx.exit_code = kInfeasible;
  ctx.message = "target is not reachable under unital noise";
  return false;
}

std::string sequence_csv(const ControlSystem& sys, const optimize::ControlSequence& s) {
  std::ostringstream out;
  propagation::write_sequence_csv(sys, s, out);
  return out.str();
}

std::string convergence_csv(const optimize::OptimizationResult& r) {
  std::ostringstream out;
  out << "iteration";
  std::size_t rows = 0;
  for (std::size_t k = 0; k < r.restarts.size(); ++k) {
    out << ",restart_" << (k + 1);
    rows = std::max(rows, r.restarts[k].trace.size());
  }
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    out << i;
    for (const auto& rs : r.restarts) {
      out << ',';
      if (i < rs.trace.size()) out << fmt(rs.trace[i]);
    }
    out << '\n';
  }
  return out.str();
}

Json optimization_json(const optimize::OptimizationResult& r) {
  Json j;
  j["best_error"] = r.best_error;
  j["best_restart"] = r.best_restart;
  Json rs = Json::array();
  for (const auto& o : r.restarts) {
    rs.push_back({{"error", o.error},
                  {"iterations", o.iterations},
                  {"evaluations", o.evaluations},
                  {"stop_reason", o.stop_reason}});
  }
  j["restarts"] = rs;
  return j;
}

void run_optimize(Context& ctx) {
  const auto& c = ctx.config;
  const ControlSystem sys = build_system(c.model);
  struct Pair {
    std::string initial, target;
  };
  std::vector<Pair> pairs;
  if (c.problem.pairs > 0) {
    for (int i = 0; i < c.problem.pairs; ++i) {
      const std::string second = c.problem.pair_rule == "majorized" ? "majorized:" : "random:";
      pairs.push_back({"random:" + std::to_string(c.problem.pair_seed + 2 * i),
                       second + std::to_string(c.problem.pair_seed + 2 * i + 1)});
    }
  } else {
    pairs.push_back({c.problem.initial, c.problem.target});
  }
  ctx.result["system"] = system_summary(sys);
  Json runs = Json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string tag = pairs.size() > 1 ? "_pair" + std::to_string(i + 1) : "";
    const DensityOperator rho0 = build_state(pairs[i].initial, sys.dims, base_dir(c));
    const bool partner = pairs[i].target.rfind("majorized:", 0) == 0;
    const DensityOperator target =
        partner ? majorized_random_state(rho0, std::stoull(pairs[i].target.substr(10)))
                : build_state(pairs[i].target, sys.dims, base_dir(c));
    if (!check_unital_feasibility(ctx, rho0, target, tag)) return;
    optimize::TransferProblem problem{sys, rho0, {target, pairs[i].target}, c.problem.total_time, c.problem.slices};
    const auto r = optimize::optimize(problem, c.optimizer);
    const auto traj = propagation::propagate(sys, r.best_sequence, rho0, c.problem.trajectory_substeps);
    Json j = optimization_json(r);
    j["initial"] = pairs[i].initial;
    j["target"] = pairs[i].target;
    j["total_time"] = c.problem.total_time;
    j["slices"] = c.problem.slices;
    j["final_state"] = state_summary(traj.final_state().matrix());
    j["target_state"] = state_summary(target.matrix());
    runs.push_back(j);
    ctx.writer.write("sequence" + tag + ".csv", sequence_csv(sys, r.best_sequence));
    std::ostringstream tcsv;
    propagation::write_trajectory_csv(traj, tcsv);
    ctx.writer.write("trajectory" + tag + ".csv", tcsv.str());
    ctx.writer.write("convergence" + tag + ".csv", convergence_csv(r));
  }
  ctx.result["runs"] = runs;
}

// Analytic reference error for the sweep, when the scenario has one.
std::optional<double> sweep_reference(const ExperimentConfig& c, double tau) {
  const auto& m = c.model;
  if (m.name != "ising_chain" || m.dephasing != 0.0) return std::nullopt;
  if (m.theta == 0.0 && c.problem.initial == "max_mixed" && c.problem.target == "ground") {
    return protocols::cooling_error_at(m.qubits, m.coupling, m.gamma_max, tau);
  }
  if (is_unital_bit_flip(m) && c.problem.initial == "ground" && c.problem.target == "max_mixed") {
    return protocols::bit_flip_erasure_error_at(m.qubits, m.coupling, m.gamma_max, tau);
  }
  return std::nullopt;
}

void run_sweep(Context& ctx) {
  const auto& c = ctx.config;
  const ControlSystem sys = build_system(c.model);
  const DensityOperator rho0 = build_state(c.problem.initial, sys.dims, base_dir(c));
  const DensityOperator target = build_state(c.problem.target, sys.dims, base_dir(c));
  if (!check_unital_feasibility(ctx, rho0, target, "")) return;
  optimize::TransferProblem problem{sys, rho0, {target, c.problem.target}, c.problem.total_time, c.problem.slices};
  const auto rows = optimize::sweep_durations(problem, c.sweep.total_times, c.optimizer);
  std::vector<double> best;
  for (const auto& r : rows) best.push_back(r.best);
  const auto envelope = optimize::running_minimum(best);
  const bool has_ref = sweep_reference(c, rows.front().total_time).has_value();
  std::ostringstream csv;
  csv << "total_time,best,running_min";
  if (has_ref) csv << ",reference";
  for (int k = 0; k < c.optimizer.restarts; ++k) csv << ",restart_" << (k + 1);
  csv << '\n';
  Json jr = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv << fmt(rows[i].total_time) << ',' << fmt(rows[i].best) << ',' << fmt(envelope[i]);
    Json row{{"total_time", rows[i].total_time}, {"best", rows[i].best}, {"running_min", envelope[i]},
             {"per_restart", rows[i].per_restart}};
    if (has_ref) {
      const double ref = *sweep_reference(c, rows[i].total_time);
      csv << ',' << fmt(ref);
      row["reference"] = ref;
    }
    for (int k = 0; k < c.optimizer.restarts; ++k) {
      csv << ',';
      if (static_cast<std::size_t>(k) < rows[i].per_restart.size()) csv << fmt(rows[i].per_restart[static_cast<std::size_t>(k)]);
    }
    csv << '\n';
    jr.push_back(row);
  }
  ctx.writer.write("sweep.csv", csv.str());
  ctx.result["system"] = system_summary(sys);
  ctx.result["rows"] = jr;
}

Json plan_summary(const protocols::ProtocolPlan& plan, double executed) {
  return {{"name", plan.name},
          {"noise_time", plan.noise_time()},
          {"total_duration", plan.total_duration()},
          {"noise_steps", plan.noise_steps()},
          {"predicted_error", plan.predicted_error},
          {"executed_error", executed}};
}

void run_protocol(Context& ctx) {
  const auto& c = ctx.config;
  const auto& pc = c.protocol;
  const ControlSystem sys = build_system(c.model);
  if (pc.kind == "cooling" || pc.kind == "erasure") {
    const int n = static_cast<int>(sys.dims.size());
    const double gamma = pc.plan.gamma > 0.0 ? pc.plan.gamma : c.model.gamma_max;
    protocols::TimedPlan tp;
    ComplexMatrix rho0, target;
    const quantum::Dims& dims = sys.dims;
    if (pc.kind == "cooling") {
      tp = protocols::cooling_protocol(n, c.model.coupling, gamma, pc.delta_f);
      rho0 = models::target_state("max_mixed", dims).state.matrix();
      target = models::target_state("ground", dims).state.matrix();
    } else {
      tp = protocols::erasure_protocol(n, c.model.coupling, gamma, protocols::erasure_mode_from_string(pc.mode),
                                       pc.delta_f);
      rho0 = models::target_state("ground", dims).state.matrix();
      target = models::target_state("max_mixed", dims).state.matrix();
    }
    const ComplexMatrix fin = protocols::execute_plan(sys, tp.plan, rho0);
    const double err = propagation::frobenius_error(fin, target);
    Json j = plan_summary(tp.plan, err);
    j["duration_bound"] = tp.duration_bound;
    ctx.result["plans"] = Json::array({j});
    ctx.writer.write("plan.json", tp.plan.to_json() + "\n");
    return;
  }
  const DensityOperator rho0 = build_state(c.problem.initial, sys.dims, base_dir(c));
  const DensityOperator target = build_state(c.problem.target, sys.dims, base_dir(c));
  if (!is_unital_bit_flip(c.model)) throw ConfigError("HLP plans need an ising_chain model with theta = 0.5pi");
  if (!check_unital_feasibility(ctx, rho0, target, "")) return;
  std::vector<protocols::ProtocolPlan> plans;
  if (pc.kind == "hlp" || pc.kind == "hlp_vs_greedy") plans.push_back(protocols::hlp_full_plan(rho0, target, sys, pc.plan));
  if (pc.kind == "greedy" || pc.kind == "hlp_vs_greedy") plans.push_back(protocols::greedy_equalize_plan(rho0, target, sys, pc.plan));
  Json arr = Json::array();
  std::ostringstream csv;
  csv << "plan,noise_time,total_duration,predicted_error,executed_error\n";
  for (const auto& p : plans) {
    const double err = propagation::frobenius_error(protocols::execute_plan(sys, p, rho0.matrix()), target.matrix());
    arr.push_back(plan_summary(p, err));
    csv << p.name << ',' << fmt(p.noise_time()) << ',' << fmt(p.total_duration()) << ',' << fmt(p.predicted_error)
        << ',' << fmt(err) << '\n';
    ctx.writer.write(plans.size() > 1 ? "plan_" + p.name + ".json" : "plan.json", p.to_json() + "\n");
  }
  ctx.writer.write("plans.csv", csv.str());
  ctx.result["plans"] = arr;
}

void run_reachability(Context& ctx) {
  const auto& c = ctx.config;
  const ControlSystem sys = build_system(c.model);
  const DensityOperator rho0 = build_state(c.problem.initial, sys.dims, base_dir(c));
  const DensityOperator target = build_state(c.problem.target, sys.dims, base_dir(c));
  const auto kind = protocols::noise_kind_from_string(c.reach.noise);
  const auto v = protocols::reachability_verdict(rho0, target, kind, c.reach.boltzmann);
  ctx.writer.write("verdict.json", verdict_json(v).dump(2) + "\n");
  ctx.result["verdict"] = verdict_json(v);
  if (v.reachable == protocols::Reachable::no) {
    ctx.exit_code = kInfeasible;
    ctx.message = "target is not reachable";
  }
}

void run_bath(Context& ctx) {
  const auto& spec = ctx.config.bath.spec;
  std::ostringstream csv;
  csv << "omega,damping_rate,lamb_shift_rate,occupation\n";
  Json rows = Json::array();
  for (double w : ctx.config.bath.frequencies) {
    const double g = bath::damping_rate(w, spec);
    const double s = bath::lamb_shift_rate(w, spec);
    const double occ = w == 0.0 ? std::numeric_limits<double>::infinity() : bath::occupation(w, spec);
    csv << fmt(w) << ',' << fmt(g) << ',' << fmt(s) << ',' << fmt(occ) << '\n';
    Json row{{"omega", w}, {"damping_rate", g}, {"lamb_shift_rate", s}};
    if (std::isfinite(occ)) row["occupation"] = occ;
    rows.push_back(row);
  }
  ctx.writer.write("bath.csv", csv.str());
  ctx.result["rows"] = rows;
  if (spec.transition != 0.0) ctx.result["boltzmann_factor"] = bath::boltzmann_factor(spec);
}

void run_timescales(Context& ctx) {
  const auto report = bath::validate_timescales(ctx.config.timescales.scales, ctx.config.timescales.factor);
  auto check = [](const bath::TimescaleCheck& c) { return Json{{"name", c.name}, {"ratio", c.ratio}, {"pass", c.pass}}; };
  ctx.result["factor"] = report.factor;
  ctx.result["checks"] = Json::array({check(report.born_markov), check(report.secular_relaxation),
                                      check(report.secular_control)});
  ctx.result["all_pass"] = report.all_pass();
}

Json manifest_json(const Context& ctx, std::uint64_t seed, double wall) {
  Json m;
  m["name"] = ctx.config.name;
  m["task"] = to_string(ctx.config.task);
  m["config_path"] = ctx.config.source_path;
  m["config_sha256"] = sha256_hex(ctx.config.source_text);
  m["seed"] = seed;
  m["exit_code"] = ctx.exit_code;
  m["wall_time_seconds"] = wall;
  m["versions"] = {{"noiseswitch", NOISESWITCH_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__},
                   {"config_schema", kConfigVersion}};
  Json files;
  for (const auto& [name, digest] : ctx.writer.digests()) files[name] = digest;
  m["files"] = files;
  return m;
}

}  // namespace

DensityOperator majorized_random_state(const DensityOperator& rho0, std::uint64_t seed) {
  const int n = rho0.dimension();
  std::vector<double> lambda = quantum::spectrum_descending(rho0);
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<double> mixed(static_cast<std::size_t>(n), 0.0);
  std::vector<int> perm(static_cast<std::size_t>(n));
  double total = 0.0;
  constexpr int kPermutations = 4;
  for (int k = 0; k < kPermutations; ++k) {
    const double w = gamma(rng);
    total += w;
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; ++i) mixed[static_cast<std::size_t>(i)] += w * lambda[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
  }
  for (double& m : mixed) m /= total;

  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = numerics::Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = mixed[static_cast<std::size_t>(i)];
  ComplexMatrix m = q * d * q.adjoint();
  m = 0.5 * (m + m.adjoint());
  return DensityOperator(m, rho0.dims());
}

RunResult run(const ExperimentConfig& config_in, const RunOverrides& overrides) {
  RunResult out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ExperimentConfig config = config_in;
    if (overrides.restarts) config.optimizer.restarts = *overrides.restarts;
    if (overrides.workers) config.optimizer.workers = *overrides.workers;
    config.validate();
    const std::uint64_t seed = overrides.seed ? *overrides.seed : config.effective_seed();
    config.optimizer.seed = seed;
    const std::string dir = overrides.output_dir ? *overrides.output_dir
                                                 : (fs::path(config.output_dir) / config.name).string();
    Context ctx{config, ArtifactWriter(dir), Json::object()};
    ctx.result["name"] = config.name;
    ctx.result["task"] = to_string(config.task);
    ctx.result["seed"] = seed;
    switch (config.task) {
      case Task::optimize: run_optimize(ctx); break;
      case Task::sweep: run_sweep(ctx); break;
      case Task::protocol: run_protocol(ctx); break;
      case Task::reachability: run_reachability(ctx); break;
      case Task::bath: run_bath(ctx); break;
      case Task::validate_timescales: run_timescales(ctx); break;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ctx.result["exit_code"] = ctx.exit_code;
    ctx.result["wall_time_seconds"] = wall;
    out.result_json = ctx.result.dump(2) + "\n";
    ctx.writer.write("result.json", out.result_json);
    write_atomic((fs::path(dir) / "manifest.json").string(), manifest_json(ctx, seed, wall).dump(2) + "\n");
    out.exit_code = ctx.exit_code;
    out.message = ctx.message;
    out.output_dir = dir;
  } catch (const ConfigError& e) {
    out.exit_code = kConfigError;
    out.message = std::string("config error: ") + e.what();
  } catch (const ReachabilityError& e) {
    out.exit_code = kInfeasible;
    out.message = std::string("infeasible: ") + e.what();
  } catch (const NumericError& e) {
    out.exit_code = kNumericFailure;
    out.message = std::string("numeric failure: ") + e.what();
  } catch (const Error& e) {
    out.exit_code = kConfigError;
    out.message = std::string("invalid parameters: ") + e.what();
  } catch (const std::exception& e) {
    out.exit_code = kNumericFailure;
    out.message = std::string("failure: ") + e.what();
  }
  return out;
}

RunResult run_file(const std::string& path, const RunOverrides& overrides) {
  try {
    return run(load_config(path), overrides);
  } catch (const ConfigError& e) {
    RunResult r;
    r.exit_code = kConfigError;
    r.message = std::string("config error: ") + e.what();
    return r;
  }
}

}  // namespace noiseswitch::cli
