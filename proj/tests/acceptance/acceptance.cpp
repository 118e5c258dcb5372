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

// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance                  all criteria
//   acceptance --criterion N    only criterion N

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "noiseswitch/cli.hpp"

namespace ns = noiseswitch;
namespace fs = std::filesystem;
using Json = nlohmann::json;
using ns::numerics::Complex;
using ns::numerics::ComplexMatrix;
using ns::numerics::RealMatrix;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

ComplexMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(n, rng);
  return 0.5 * (a + a.adjoint());
}

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, rng));
  return qr.householderQ();
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> random_distribution(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(static_cast<std::size_t>(n));
  double s = 0.0;
  for (double& v : p) s += (v = e(rng));
  for (double& v : p) v /= s;
  return p;
}

ns::propagation::ControlSequence random_controls(const ns::quantum::ControlSystem& s, int slices, double tau,
                                                 std::mt19937_64& rng) {
  auto seq = ns::propagation::ControlSequence::uniform(slices, tau, s.control_count(), s.channel_count());
  std::normal_distribution<double> u(0.0, 2.0);
  std::uniform_real_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < slices; ++k) {
    for (int j = 0; j < s.control_count(); ++j) {
      const auto& c = s.controls[static_cast<std::size_t>(j)];
      seq.coherent(k, j) = std::clamp(u(rng), std::max(c.lower, -20.0), std::min(c.upper, 20.0));
    }
    for (int l = 0; l < s.channel_count(); ++l) {
      seq.noise(k, l) = s.channels[static_cast<std::size_t>(l)].max_rate * g(rng);
    }
  }
  return seq;
}

// ---------------------------------------------------------------------------
// 1. Golden superoperator values

// Column-stacked D[V] for V = cos(t/2)|0><1| + sin(t/2)|1><0|, basis (00, 10, 01, 11).
RealMatrix golden_generator(double theta) {
  const double s2 = std::pow(std::sin(theta / 2), 2), c2 = std::pow(std::cos(theta / 2), 2);
  RealMatrix g = RealMatrix::Zero(4, 4);
  g(0, 0) = s2;
  g(0, 3) = -c2;
  g(3, 0) = -s2;
  g(3, 3) = c2;
  g(1, 1) = g(2, 2) = 0.5;
  g(1, 2) = g(2, 1) = -0.5 * std::sin(theta);
  return g;
}

// Population block is idempotent; coherence block has eigenvalues (1 -+ sin)/2.
RealMatrix golden_exponential(double theta, double x) {
  const RealMatrix g = golden_generator(theta);
  RealMatrix e = RealMatrix::Zero(4, 4);
  const double decay = 1.0 - std::exp(-x);
  e(0, 0) = 1.0 - decay * g(0, 0);
  e(0, 3) = -decay * g(0, 3);
  e(3, 0) = -decay * g(3, 0);
  e(3, 3) = 1.0 - decay * g(3, 3);
  const double a = std::exp(-x * (1.0 - std::sin(theta)) / 2), b = std::exp(-x * (1.0 + std::sin(theta)) / 2);
  e(1, 1) = e(2, 2) = 0.5 * (a + b);
  e(1, 2) = e(2, 1) = 0.5 * (a - b);
  return e;
}

Verdict criterion_golden() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> gt(0.0, 8.0);
  double worst = 0.0;
  for (double theta : {0.0, kPi / 4, kPi / 2}) {
    const ComplexMatrix g = ns::quantum::dissipator_superop(ns::models::noise_generator(theta)).matrix;
    worst = std::max(worst, max_abs(g - golden_generator(theta).cast<Complex>()));
    for (int trial = 0; trial < 100; ++trial) {
      const double x = gt(rng);
      const ComplexMatrix e = ns::numerics::matrix_exponential(-x * g);
      worst = std::max(worst, max_abs(e - golden_exponential(theta, x).cast<Complex>()));
    }
  }
  return {worst <= 1e-10, "max entry deviation " + fmt("%.2e", worst) + " (tol 1e-10)"};
}

// ---------------------------------------------------------------------------
// 2. Gradients

Verdict criterion_gradients() {
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ns::models::GmonParams gp;
  double worst = 0.0;
  int problems = 0;
  for (int trial = 0; trial < 50; ++trial) {
    ns::optimize::TransferProblem p;
    const int kind = trial % 5;
    if (kind == 0) p.system = ns::models::ising_chain(1, 1.0, kPi / 2 * unit(rng), 5.0);
    if (kind == 1) p.system = ns::models::ising_chain(2, 1.0, kPi / 2 * unit(rng), 5.0, 0.1 * unit(rng));
    if (kind == 2) p.system = ns::models::ising_chain_thermal(2, 1.0, 1.0 + 3.0 * unit(rng), 5.0);
    if (kind == 3) p.system = ns::models::ion_trap_collective(2, 1.0, 5.0);
    if (kind == 4) p.system = ns::models::gmon_chain(gp);
    p.initial = ns::models::random_density(p.system.dims, 2000 + trial);
    p.target = {ns::models::random_density(p.system.dims, 3000 + trial), "random"};
    p.total_time = 0.5 + 2.0 * unit(rng);
    p.slices = kind == 4 ? 3 : 4;
    auto seq = random_controls(p.system, p.slices, p.total_time, rng);
    for (int k = 0; k < seq.slices(); ++k) {
      for (int l = 0; l < p.system.channel_count(); ++l) {
        const double m = p.system.channels[static_cast<std::size_t>(l)].max_rate;
        seq.noise(k, l) = std::clamp(seq.noise(k, l), 0.02 * m, 0.98 * m);
      }
    }
    const auto eg = ns::optimize::error_and_gradient(p, seq, ns::optimize::GradientMethod::auxiliary);
    const auto x = ns::optimize::flatten(seq);
    ns::numerics::RealVector fd(x.size());
    auto work = seq;
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      auto xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      ns::optimize::unflatten(xp, work);
      const double fp = ns::optimize::error_value(p, work);
      ns::optimize::unflatten(xm, work);
      fd(i) = (fp - ns::optimize::error_value(p, work)) / (2 * h);
    }
    worst = std::max(worst, (eg.gradient - fd).norm() / fd.norm());
    ++problems;
  }
  return {worst <= 1e-5, std::to_string(problems) + " problems, worst relative error " + fmt("%.2e", worst) +
                             " (tol 1e-5)"};
}

// ---------------------------------------------------------------------------
// 3. Conservation along trajectories

Verdict criterion_conservation() {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double trace_dev = 0.0, min_eig = 1.0, major_dev = 0.0;
  int unital = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool is_unital = trial % 2 == 0;
    const int n = 1 + trial % 3;
    const double theta = is_unital ? kPi / 2 : kPi / 2 * unit(rng) * 0.95;
    const auto s = ns::models::ising_chain(n, 1.0, theta, 5.0, is_unital ? 0.1 : 0.0);
    const auto seq = random_controls(s, 8, 3.0, rng);
    const auto traj = ns::propagation::propagate(s, seq, ns::models::random_density(s.dims, 4000 + trial), 2);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const ComplexMatrix& rho = traj.states[k].matrix();
      trace_dev = std::max(trace_dev, std::abs(rho.trace() - 1.0));
      min_eig = std::min(min_eig, traj.eigenflows[k].back());
      if (is_unital && k > 0) {
        double sp = 0.0, sc = 0.0;
        for (std::size_t i = 0; i < traj.eigenflows[k].size(); ++i) {
          sp += traj.eigenflows[k - 1][i];
          sc += traj.eigenflows[k][i];
          major_dev = std::max(major_dev, sc - sp);
        }
      }
    }
    unital += is_unital;
  }
  const bool pass = trace_dev <= 1e-10 && min_eig >= -1e-8 && major_dev <= 1e-8;
  return {pass, "100 trajectories (" + std::to_string(unital) + " unital): trace dev " + fmt("%.1e", trace_dev) +
                    ", min eigenvalue " + fmt("%.1e", min_eig) + ", majorization excess " + fmt("%.1e", major_dev)};
}

// ---------------------------------------------------------------------------
// 4. HLP and greedy schedules, tab:hlp-schedule

Verdict criterion_hlp() {
  const auto config = ns::cli::load_config(std::string(NOISESWITCH_CONFIG_DIR) + "/hlp_vs_greedy.cfg");
  const auto sys = ns::cli::build_system(config.model);
  const auto rho0 = ns::cli::build_state(config.problem.initial, sys.dims);
  const auto target = ns::cli::build_state(config.problem.target, sys.dims);
  const auto& opt = config.protocol.plan;
  const auto hlp = ns::protocols::hlp_full_plan(rho0, target, sys, opt);
  const auto greedy = ns::protocols::greedy_equalize_plan(rho0, target, sys, opt);
  const double eh = ns::propagation::frobenius_error(ns::protocols::execute_plan(sys, hlp, rho0.matrix()),
                                                     target.matrix());
  const double eg = ns::propagation::frobenius_error(ns::protocols::execute_plan(sys, greedy, rho0.matrix()),
                                                     target.matrix());
  const double paper_hlp = 9.95e-5, paper_greedy = 6.04e-5;
  const bool pass = std::abs(hlp.noise_time() - 12.0) <= 1e-9 && eh >= 0.5 * paper_hlp && eh <= 2.0 * paper_hlp &&
                    greedy.noise_time() <= 7.0 && eg <= 2.0 * paper_greedy;
  return {pass, "HLP noise time " + fmt("%.4f", hlp.noise_time()) + "/J, dF " + fmt("%.3e", eh) +
                    "; greedy noise time " + fmt("%.4f", greedy.noise_time()) + "/J, dF " + fmt("%.3e", eg)};
}

// ---------------------------------------------------------------------------
// 5-10. Optimizer experiments through the cli runner

Json run_experiment(ns::cli::ExperimentConfig c, const std::string& tag) {
  const fs::path out = fs::temp_directory_path() / "noiseswitch_acceptance" / tag;
  fs::remove_all(out);
  ns::cli::RunOverrides o;
  o.output_dir = out.string();
  const auto r = ns::cli::run(c, o);
  if (r.exit_code != 0) throw std::runtime_error(tag + ": run failed with exit code " + std::to_string(r.exit_code) +
                                                 ": " + r.message);
  return Json::parse(r.result_json);
}

ns::cli::ExperimentConfig bundled(const std::string& name) {
  return ns::cli::load_config(std::string(NOISESWITCH_CONFIG_DIR) + "/" + name + ".cfg");
}

ns::cli::ExperimentConfig as_optimize(ns::cli::ExperimentConfig c, double tau) {
  c.task = ns::cli::Task::optimize;
  c.problem.total_time = tau;
  c.sweep.total_times.clear();
  return c;
}

Verdict criterion_example1() {
  const double tau = 6.0;
  // protocol error at tau: exact residual and the inverted duration bound; beat both
  const double residual = ns::protocols::cooling_error_at(3, 1.0, 5.0, tau);
  const double inverted = std::sqrt(12.0) / 2.0 * std::exp(-(tau - 3.0) * 5.0 / 3.0);
  const double bound = std::min(residual, inverted);
  auto c = as_optimize(bundled("example1_cooling"), tau);
  c.optimizer.max_iterations = 300;
  const Json r = run_experiment(c, "example1");
  const double best = r["runs"][0]["best_error"];
  return {best < bound, "best of " + std::to_string(c.optimizer.restarts) + " restarts dF " + fmt("%.3e", best) +
                            " vs protocol " + fmt("%.3e", bound)};
}

Verdict criterion_example2() {
  const double tau = 3.0;
  const double bound = ns::protocols::bit_flip_erasure_error_at(3, 1.0, 2.5, tau);
  auto c = as_optimize(bundled("example2_erasure"), tau);
  c.optimizer.max_iterations = 300;
  const Json r = run_experiment(c, "example2");
  const double best = r["runs"][0]["best_error"];
  return {best < bound, "best dF " + fmt("%.3e", best) + " vs asymptotic-protocol bound " + fmt("%.3e", bound)};
}

Verdict criterion_example3() {
  auto c = bundled("example3_random_pairs");
  c.problem.pairs = 2;
  c.optimizer.restarts = 3;
  c.optimizer.max_iterations = 2500;
  c.optimizer.tolerance = 1e-6;  // stop at dF = 1e-3
  const Json r = run_experiment(c, "example3");
  bool pass = r["runs"].size() == 2;
  std::string detail;
  for (const auto& run : r["runs"]) {
    const double e = run["best_error"];
    pass = pass && e <= 1e-3;
    detail += (detail.empty() ? "" : ", ") + fmt("dF %.3e", e);
  }
  return {pass, "2 pairs: " + detail + " (tol 1e-3)"};
}

Verdict criterion_test1() {
  auto c = bundled("algcool_test1");
  const Json r = run_experiment(c, "algcool_test1");
  const double p0 = r["runs"][0]["final_state"]["ground_population"];
  const double alg = ns::protocols::algorithmic_cooling_state(2, 2.0).matrix()(0, 0).real();
  return {p0 >= 0.449 && p0 > alg, "ground population " + fmt("%.5f", p0) + " (need >= 0.449, alg-cooling " +
                                       fmt("%.5f", alg) + ")"};
}

Verdict criterion_gmon() {
  const Json erase = run_experiment(bundled("gmon_erase"), "gmon_erase");
  const Json ghz = run_experiment(bundled("gmon_ghz"), "gmon_ghz");
  const double e1 = erase["runs"][0]["best_error"], e2 = ghz["runs"][0]["best_error"];
  return {e1 <= 1e-3 && e2 <= 1e-2,
          "erase dF " + fmt("%.3e", e1) + " (tol 1e-3), GHZ dF " + fmt("%.3e", e2) + " (tol 1e-2); PPT skipped"};
}

Verdict criterion_iontrap() {
  const Json r = run_experiment(bundled("example5_ghz_iontrap"), "iontrap");
  const double e = r["runs"][0]["best_error"];
  return {e <= 1e-2, "GHZ4 dF " + fmt("%.3e", e) + " (tol 1e-2)"};
}

// ---------------------------------------------------------------------------
// 11. Property suite

Verdict criterion_properties() {
  std::mt19937_64 rng(1011);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kCases = 100;
  std::vector<std::string> failed;
  auto check = [&](const char* name, bool ok) {
    if (!ok) failed.emplace_back(name);
  };
  Eigen::Matrix2d swap;
  swap << 0, 1, 1, 0;

  bool kms = true, idem = true, stoch = true, neutral = true, boundary = true, trotter = true, floor_ok = true;
  for (int c = 0; c < kCases; ++c) {
    ns::bath::BathSpec spec;
    spec.beta = 0.05 + 4.0 * unit(rng);
    spec.cutoff = 0.5 + 20.0 * unit(rng);
    spec.statistics = c % 2 ? ns::bath::Statistics::fermion : ns::bath::Statistics::boson;
    const double w = 0.05 + 5.0 * unit(rng);
    const double ratio = ns::bath::damping_rate(-w, spec) / (std::exp(-spec.beta * w) * ns::bath::damping_rate(w, spec));
    kms = kms && std::abs(ratio - 1.0) <= 1e-10;

    const double b = 1.0 + 50.0 * unit(rng);
    const RealMatrix g2 = ns::bath::diagonal_restriction(b);
    idem = idem && (g2 * g2 - g2).cwiseAbs().maxCoeff() <= 1e-12;

    const double gt = 10.0 * unit(rng);
    const RealMatrix ra = ns::bath::amp_damp_pair(gt), rb = ns::bath::bit_flip_pair(gt);
    stoch = stoch && (ra.colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12 && ra.minCoeff() >= 0.0 &&
            (rb.colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12 &&
            (rb.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12 && rb.minCoeff() >= 0.0;

    const double pa = 0.01 + unit(rng), pb = 0.01 + unit(rng), gam = 0.1 + 5.0 * unit(rng), tau = 0.01 + 3.0 * unit(rng);
    const double ts = ns::protocols::amp_damp_switch_time(pa / pb, gam, tau);
    const Eigen::Vector2d q =
        swap * ns::bath::amp_damp_pair(gam * (tau - ts)) * swap * ns::bath::amp_damp_pair(gam * ts) * Eigen::Vector2d(pa, pb);
    neutral = neutral && std::abs(q(0) - pa) <= 1e-12 && std::abs(q(1) - pb) <= 1e-12;

    const double bb = 1.1 + 30.0 * unit(rng);
    const auto edge = ns::protocols::finite_T_switch_time(bb, bb, gam, tau);
    boundary = boundary && edge.has_value() && std::abs(*edge - tau) <= 1e-12 &&
               !ns::protocols::finite_T_switch_time(bb * 1.01, bb, gam, tau).has_value() &&
               !ns::protocols::finite_T_switch_time(0.99 / bb, bb, gam, tau).has_value();

    // Trotter: random bit-flip dissipator and diagonal drift on a random site of 2 qubits
    const ComplexMatrix v = ns::quantum::embed_local(ns::models::pauli_x() / std::sqrt(2.0), 1, {2, 2});
    ComplexMatrix h = ComplexMatrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k) h(k, k) = 2.0 * unit(rng) - 1.0;
    const ComplexMatrix gamma = (0.5 + 2.0 * unit(rng)) * ns::quantum::dissipator_superop(v).matrix;
    const ComplexMatrix hp = ns::quantum::commutator_superop(h).matrix;
    const double t = 0.2 + unit(rng);
    const ComplexMatrix exact = ns::numerics::matrix_exponential(-t * gamma);
    double prev = std::numeric_limits<double>::infinity();
    for (int k : {4, 16, 64, 256}) {
      const double err = (ns::propagation::trotter_decoupled_propagator(gamma, hp, t, k) - exact).norm();
      trotter = trotter && (err < prev || err < 1e-13);
      prev = err;
    }
    trotter = trotter && prev < 1e-2;

    // unital evolution cannot beat the majorization floor
    const auto s = ns::models::ising_chain(2, 1.0, kPi / 2, 5.0);
    const auto rho0 = ns::models::random_density(s.dims, 5000 + c);
    const auto y = ns::quantum::spectrum_descending(rho0);
    auto x = random_distribution(4, rng);
    std::sort(x.begin(), x.end(), std::greater<>());
    x[0] = std::max(x[0], y[0] + 0.05);
    double rest = 0.0;
    for (std::size_t i = 1; i < 4; ++i) rest += x[i];
    for (std::size_t i = 1; i < 4; ++i) x[i] *= (1.0 - x[0]) / rest;
    const ComplexMatrix u = random_unitary(4, rng);
    ComplexMatrix d = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) d(i, i) = x[static_cast<std::size_t>(i)];
    ComplexMatrix tm = u * d * u.adjoint();
    tm = 0.5 * (tm + tm.adjoint());
    const double floor = ns::protocols::majorization_floor(x, y);
    const auto seq = random_controls(s, 6, 1.0 + 3.0 * unit(rng), rng);
    const ComplexMatrix fin = ns::propagation::final_state(s, seq, rho0.matrix());
    floor_ok = floor_ok && floor > 0.0 && ns::propagation::frobenius_error(fin, tm) >= floor - 1e-12;
  }
  check("KMS", kms);
  check("idempotency", idem);
  check("stochasticity", stoch);
  check("neutralization", neutral);
  check("stopping boundary", boundary);
  check("Trotter convergence", trotter);
  check("majorization floor", floor_ok);
  std::string detail = "7 families x " + std::to_string(kCases) + " cases";
  for (const auto& f : failed) detail += "; FAILED " + f;
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<Criterion> criteria = {
      {1, "superoperator golden values", 1.0, criterion_golden},
      {2, "gradient suite", 60.0, criterion_gradients},
      {3, "conservation suite", 0.0, criterion_conservation},
      {4, "HLP instance (tab:hlp-schedule)", 30.0, criterion_hlp},
      {5, "cooling beats protocol (fig:cooling-sweep)", 1200.0, criterion_example1},
      {6, "erasure beats bound (fig:bitflip-erasure)", 1200.0, criterion_example2},
      {7, "random pairs (fig:random-pairs)", 3600.0, criterion_example3},
      {8, "algorithmic cooling test 1 (tab:algcool-tests)", 1800.0, criterion_test1},
      {9, "GMon tasks (tab:gmon-results)", 3600.0, criterion_gmon},
      {10, "ion-trap GHZ4 (fig:iontrap-ghz)", 3600.0, criterion_iontrap},
      {11, "property suite", 300.0, criterion_properties},
  };
  bool all = true;
  int ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_seconds <= 0.0 || secs <= c.limit_seconds;
    const bool pass = v.pass && in_time;
    all = all && pass;
    std::printf("criterion %2d %-48s %s  %s [%.1f s%s]\n", c.id, c.name, pass ? "PASS" : "FAIL", v.detail.c_str(),
                secs, in_time ? "" : fmt(", over limit %.0f s", c.limit_seconds).c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion selected\n");
    return 2;
  }
  return all ? 0 : 1;
}
