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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "noiseswitch/optimize.hpp"

namespace noiseswitch::optimize {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RealVector project(const RealVector& x, const RealVector& lo, const RealVector& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

std::string to_string(GradientMethod m) {
  return m == GradientMethod::auxiliary ? "auxiliary" : "finite_difference";
}

GradientMethod gradient_method_from_string(const std::string& s) {
  if (s == "auxiliary") return GradientMethod::auxiliary;
  if (s == "finite_difference") return GradientMethod::finite_difference;
  throw DomainError("unknown gradient method '" + s + "'");
}

void OptimizerConfig::validate() const {
  if (restarts < 1) throw DomainError("optimizer needs at least one restart");
  if (max_iterations < 0) throw DomainError("max_iterations must be >= 0");
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be >= 0");
  if (!(amplitude_cap > 0.0)) throw DomainError("amplitude cap must be positive");
  if (!(init_scale >= 0.0)) throw DomainError("init_scale must be >= 0");
  if (memory < 1) throw DomainError("L-BFGS memory must be >= 1");
  if (workers < 0) throw DomainError("workers must be >= 0");
}

BoxResult minimize_box(const ValueFn& value, const ValueGradFn& value_grad, RealVector x0,
                       const RealVector& lower, const RealVector& upper, const BoxOptions& options) {
  const auto t0 = Clock::now();
  BoxResult r;
  RealVector x = project(x0, lower, upper);
  RealVector g(x.size());
  double f = value_grad(x, g);
  r.evaluations = 1;
  r.trace.push_back(f);
  std::deque<std::pair<RealVector, RealVector>> history;  // (s, y)
  int stall = 0;
  r.stop_reason = "max_iterations";
  for (int it = 0; it < options.max_iterations; ++it) {
    if (f <= options.f_target) {
      r.stop_reason = "tolerance";
      break;
    }
    if (options.time_limit_seconds > 0.0 && seconds_since(t0) > options.time_limit_seconds) {
      r.stop_reason = "time_limit";
      break;
    }
    const RealVector pg = x - project(x - g, lower, upper);
    if (pg.lpNorm<Eigen::Infinity>() <= options.pg_tolerance) {
      r.stop_reason = "stationary";
      break;
    }
    // Variables pinned at a bound with the gradient pushing outward stay fixed.
    Eigen::Array<bool, Eigen::Dynamic, 1> free(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      free(i) = !((x(i) <= lower(i) && g(i) > 0.0) || (x(i) >= upper(i) && g(i) < 0.0));
    }
    auto mask = [&](RealVector v) {
      for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!free(i)) v(i) = 0.0;
      return v;
    };
    bool accepted = false;
    RealVector x_new, g_new;
    double f_new = f;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      RealVector d;
      if (history.empty()) {
        d = -mask(g);
      } else {
        RealVector q = mask(g);
        std::vector<double> alpha(history.size());
        for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
          const auto& [s, y] = history[static_cast<std::size_t>(i)];
          alpha[static_cast<std::size_t>(i)] = mask(s).dot(q) / s.dot(y);
          q -= alpha[static_cast<std::size_t>(i)] * mask(y);
        }
        const auto& [sl, yl] = history.back();
        q *= sl.dot(yl) / yl.dot(yl);
        for (std::size_t i = 0; i < history.size(); ++i) {
          const auto& [s, y] = history[i];
          const double beta = mask(y).dot(q) / s.dot(y);
          q += (alpha[i] - beta) * mask(s);
        }
        d = -mask(q);
        if (d.dot(g) >= 0.0) {
          history.clear();
          d = -mask(g);
        }
      }
      double step = history.empty() ? std::min(1.0, 1.0 / std::max(1e-300, d.norm())) : 1.0;
      for (int ls = 0; ls < 40; ++ls) {
        x_new = project(x + step * d, lower, upper);
        const RealVector s = x_new - x;
        if (s.lpNorm<Eigen::Infinity>() == 0.0) break;
        f_new = value(x_new);
        ++r.evaluations;
        if (std::isfinite(f_new) && f_new <= f + 1e-4 * g.dot(s)) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) history.clear();
    }
    if (!accepted) {
      r.stop_reason = "line_search";
      break;
    }
    g_new.resize(x.size());
    f_new = value_grad(x_new, g_new);
    ++r.evaluations;
    const RealVector s = x_new - x;
    const RealVector y = g_new - g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      history.emplace_back(s, y);
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }
    const double decrease = f - f_new;
    stall = decrease <= 1e-12 * std::max(f, 1e-300) ? stall + 1 : 0;
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    r.trace.push_back(f);
    ++r.iterations;
    if (stall >= 8) {
      r.stop_reason = "stalled";
      break;
    }
  }
  if (f <= options.f_target) r.stop_reason = "tolerance";
  r.x = std::move(x);
  r.f = f;
  return r;
}

ControlSequence random_sequence(const TransferProblem& problem, const OptimizerConfig& config,
                                std::uint64_t stream) {
  const auto& sys = problem.system;
  ControlSequence s = ControlSequence::uniform(problem.slices, problem.total_time, sys.control_count(),
                                               sys.channel_count());
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  const double sigma = config.init_scale * std::numbers::pi / (2.0 * problem.total_time) *
                       std::sqrt(static_cast<double>(problem.slices));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < problem.slices; ++k) {
    for (int j = 0; j < sys.control_count(); ++j) {
      const auto& c = sys.controls[static_cast<std::size_t>(j)];
      const double lo = std::max(c.lower, -config.amplitude_cap);
      const double hi = std::min(c.upper, config.amplitude_cap);
      s.coherent(k, j) = std::clamp(sigma * normal(rng), lo, hi);
    }
    for (int l = 0; l < sys.channel_count(); ++l) {
      s.noise(k, l) = unit(rng) * sys.channels[static_cast<std::size_t>(l)].max_rate;
    }
  }
  return s;
}

namespace {

RestartOutcome run_restart(const TransferProblem& problem, const OptimizerConfig& config, int index) {
  ControlSequence seq = random_sequence(problem, config, static_cast<std::uint64_t>(index));
  RealVector lower, upper;
  parameter_bounds(problem, config.amplitude_cap, lower, upper);
  ControlSequence work = seq;
  auto value = [&](const RealVector& x) {
    unflatten(x, work);
    return error_value(problem, work);
  };
  auto value_grad = [&](const RealVector& x, RealVector& g) {
    unflatten(x, work);
    ErrorGradient eg = error_and_gradient(problem, work, config.gradient_method);
    g = std::move(eg.gradient);
    return eg.value;
  };
  BoxOptions opts;
  opts.max_iterations = config.max_iterations;
  opts.memory = config.memory;
  opts.f_target = config.tolerance;
  opts.time_limit_seconds = config.time_limit_seconds;
  BoxResult br = minimize_box(value, value_grad, flatten(seq), lower, upper, opts);
  RestartOutcome out;
  unflatten(br.x, seq);
  // Projection may leave noise amplitudes a rounding error outside the box.
  for (int k = 0; k < seq.slices(); ++k) {
    for (int l = 0; l < seq.noise.cols(); ++l) {
      seq.noise(k, l) = std::clamp(seq.noise(k, l), 0.0, problem.system.channels[static_cast<std::size_t>(l)].max_rate);
    }
  }
  out.sequence = seq;
  out.error = std::sqrt(std::max(0.0, error_value(problem, seq)));
  out.iterations = br.iterations;
  out.evaluations = br.evaluations;
  out.stop_reason = br.stop_reason;
  out.trace.reserve(br.trace.size());
  for (double f : br.trace) out.trace.push_back(std::sqrt(std::max(0.0, f)));
  return out;
}

}  // namespace

OptimizationResult optimize(const TransferProblem& problem, const OptimizerConfig& config) {
  problem.validate();
  config.validate();
  const auto t0 = Clock::now();
  OptimizationResult result;
  const auto& sys = problem.system;
  // A sequence that does nothing already solves the problem when the
  // initial state is the target and stationary under the drift.
  {
    ControlSequence zero = ControlSequence::uniform(problem.slices, problem.total_time,
                                                    sys.control_count(), sys.channel_count());
    const double f0 = error_value(problem, zero);
    if (f0 <= config.tolerance) {
      RestartOutcome r;
      r.sequence = zero;
      r.error = std::sqrt(f0);
      r.stop_reason = "tolerance";
      r.trace = {r.error};
      result.restarts.push_back(r);
      result.best_sequence = zero;
      result.best_error = r.error;
      result.wall_time_seconds = seconds_since(t0);
      return result;
    }
  }
  result.restarts.resize(static_cast<std::size_t>(config.restarts));
  int workers = config.workers > 0 ? config.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, config.restarts);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr failure;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= config.restarts) return;
      try {
        result.restarts[static_cast<std::size_t>(i)] = run_restart(problem, config, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  result.best_restart = 0;
  for (int i = 1; i < config.restarts; ++i) {
    if (result.restarts[static_cast<std::size_t>(i)].error <
        result.restarts[static_cast<std::size_t>(result.best_restart)].error) {
      result.best_restart = i;
    }
  }
  const auto& best = result.restarts[static_cast<std::size_t>(result.best_restart)];
  result.best_sequence = best.sequence;
  result.best_error = best.error;
  result.wall_time_seconds = seconds_since(t0);
  return result;
}

std::vector<SweepRow> sweep_durations(const TransferProblem& problem_template,
                                      const std::vector<double>& total_times,
                                      const OptimizerConfig& config) {
  if (total_times.empty()) throw DomainError("sweep needs at least one duration");
  config.validate();
  std::vector<SweepRow> rows;
  for (double tau : total_times) {
    TransferProblem p = problem_template;
    p.total_time = tau;
    const OptimizationResult r = optimize(p, config);
    SweepRow row;
    row.total_time = tau;
    row.best = r.best_error;
    for (const auto& o : r.restarts) row.per_restart.push_back(o.error);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> running_minimum(const std::vector<double>& values) {
  std::vector<double> out(values.size());
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    m = std::min(m, values[i]);
    out[i] = m;
  }
  return out;
}

}  // namespace noiseswitch::optimize
