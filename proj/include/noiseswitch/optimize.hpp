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
#include <functional>
#include <string>
#include <vector>

#include "noiseswitch/models.hpp"
#include "noiseswitch/propagation.hpp"

namespace noiseswitch::optimize {

using numerics::RealVector;
using propagation::ControlSequence;
using quantum::ControlSystem;
using quantum::DensityOperator;

struct TransferProblem {
  ControlSystem system;
  DensityOperator initial;
  models::TargetState target;
  double total_time = 1.0;
  int slices = 1;

  void validate() const;
};

enum class GradientMethod { auxiliary, finite_difference };

std::string to_string(GradientMethod m);
GradientMethod gradient_method_from_string(const std::string& s);

struct OptimizerConfig {
  int restarts = 9;
  int max_iterations = 500;
  GradientMethod gradient_method = GradientMethod::auxiliary;
  double tolerance = 1e-10;  // stop once delta_F^2 falls below this
  std::uint64_t seed = 1;
  double amplitude_cap = 20.0;  // soft cap for unbounded coherent controls
  // Coherent initial amplitudes ~ N(0, init_scale * pi / (2 tau) * sqrt(M)).
  double init_scale = 1.0;
  int workers = 0;  // 0 = hardware concurrency
  int memory = 12;  // L-BFGS history length
  double time_limit_seconds = 0.0;  // per restart; 0 = none

  void validate() const;
};

struct RestartOutcome {
  double error = 0.0;  // delta_F
  int iterations = 0;
  int evaluations = 0;
  std::string stop_reason;
  std::vector<double> trace;  // delta_F after each iteration
  ControlSequence sequence;
};

struct OptimizationResult {
  ControlSequence best_sequence;
  double best_error = 0.0;
  int best_restart = 0;
  std::vector<RestartOutcome> restarts;
  double wall_time_seconds = 0.0;
};

// Flattened parameter layout: coherent amplitudes slice-major, then noise
// amplitudes slice-major.
RealVector flatten(const ControlSequence& s);
void unflatten(const RealVector& x, ControlSequence& s);

struct ErrorGradient {
  double value = 0.0;  // delta_F^2
  RealVector gradient;
};

// delta_F^2 = |rho(tau) - rho_target|_F^2 and its gradient over all amplitudes.
ErrorGradient error_and_gradient(const TransferProblem& problem, const ControlSequence& sequence,
                                 GradientMethod method = GradientMethod::auxiliary);
double error_value(const TransferProblem& problem, const ControlSequence& sequence);

// Lower/upper bounds for the flattened parameters.
void parameter_bounds(const TransferProblem& problem, double amplitude_cap, RealVector& lower,
                      RealVector& upper);

ControlSequence random_sequence(const TransferProblem& problem, const OptimizerConfig& config,
                                std::uint64_t stream);

OptimizationResult optimize(const TransferProblem& problem, const OptimizerConfig& config);

struct SweepRow {
  double total_time = 0.0;
  double best = 0.0;
  std::vector<double> per_restart;
};

std::vector<SweepRow> sweep_durations(const TransferProblem& problem_template,
                                      const std::vector<double>& total_times,
                                      const OptimizerConfig& config);

std::vector<double> running_minimum(const std::vector<double>& values);

// Projected L-BFGS on a box; exposed for tests.
struct BoxResult {
  RealVector x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  std::string stop_reason;
  std::vector<double> trace;  // f after each iteration
};

struct BoxOptions {
  int max_iterations = 500;
  int memory = 12;
  double f_target = 0.0;
  double pg_tolerance = 1e-12;
  double time_limit_seconds = 0.0;
};

using ValueFn = std::function<double(const RealVector&)>;
using ValueGradFn = std::function<double(const RealVector&, RealVector&)>;

BoxResult minimize_box(const ValueFn& value, const ValueGradFn& value_grad, RealVector x0,
                       const RealVector& lower, const RealVector& upper, const BoxOptions& options);

}  // namespace noiseswitch::optimize
