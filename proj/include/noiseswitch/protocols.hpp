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

#include <optional>
#include <string>
#include <vector>

#include "noiseswitch/models.hpp"
#include "noiseswitch/propagation.hpp"

namespace noiseswitch::protocols {

using numerics::ComplexMatrix;
using numerics::RealMatrix;
using quantum::ControlSystem;
using quantum::DensityOperator;
using quantum::Dims;

// ---------------------------------------------------------------------------
// Majorization

// x ≺ y: descending partial sums of x never exceed those of y.
bool majorizes(const std::vector<double>& x, const std::vector<double>& y);

// Lower bound on the Frobenius distance between `target` and any state whose
// spectrum is majorized by `initial`: max_k (S_k(target) - S_k(initial))_+ / sqrt(k).
double majorization_floor(const std::vector<double>& target, const std::vector<double>& initial);

std::vector<double> sorted_descending(std::vector<double> v);

// lambda * 1 + (1 - lambda) * Q_ij on a population vector.
struct TTransform {
  int i = 0;
  int j = 1;
  double lambda = 1.0;

  double mixing() const { return 1.0 - lambda; }
};

std::vector<double> apply_t_transform(std::vector<double> v, const TTransform& t);
// Applies each transform to the descending-sorted vector and re-sorts.
std::vector<double> apply_t_transforms(std::vector<double> v, const std::vector<TTransform>& ts);

// Constructive decomposition of x ≺ y into at most N-1 T-transforms. Both
// inputs descending. Throws ReachabilityError if x is not majorized by y.
std::vector<TTransform> hlp_t_transforms(const std::vector<double>& y, const std::vector<double>& x);

// R_a and R_b acting on the diagonal of an n-qubit state whose last qubit
// is the noisy one.
RealMatrix amp_damp_diagonal_map(int n, double gamma_t);
RealMatrix bit_flip_diagonal_map(int n, double gamma_t);

// ---------------------------------------------------------------------------
// Switching and stopping times

// Bit-flip duration realizing a T-transform: -(1/gamma) ln|1 - 2 lambda|.
// Returns +infinity at lambda = 1/2.
double t_transform_noise_duration(double lambda, double gamma);

double amp_damp_switch_time(double ratio, double gamma, double tau);
// Empty when the ratio violates 1/b <= ratio <= b.
std::optional<double> finite_T_switch_time(double ratio, double b, double gamma, double tau);
// Same switching condition written in terms of the generator angle theta.
std::optional<double> theta_switch_time(double ratio, double theta, double gamma, double tau);
// e^{-gamma tau} realizing a T-transform with mixing weight `mixing` on a
// pair with population ratio `ratio` (<= 1) in a bath with factor b.
double t_transform_epsilon(double mixing, double b, double ratio);
bool stopping_condition(double ratio, double b);

// ---------------------------------------------------------------------------
// Plans

enum class StepKind { unitary, noise, trotter_decouple };
std::string to_string(StepKind k);
StepKind step_kind_from_string(const std::string& s);

struct PlanStep {
  StepKind kind = StepKind::unitary;
  std::string label;
  ComplexMatrix unitary;   // unitary steps; the pi pulse for trotter_decouple
  int channel = 0;         // noise channel index
  double rate = 0.0;       // gamma during the step
  double duration = 0.0;
  int trotter_k = 0;       // decoupling periods
};

struct ProtocolPlan {
  std::string name;
  Dims dims;
  std::vector<PlanStep> steps;
  double predicted_error = 0.0;

  double total_duration() const;
  double noise_time() const;
  int noise_steps() const;
  void validate(const ControlSystem& system) const;
  std::string to_json() const;
  static ProtocolPlan from_json(const std::string& text);
};

// Runs the plan through the master equation of `system`. Unitary steps are
// applied as instantaneous conjugations; their recorded duration is costing
// only. Sign-flip decoupling alternates the period order so consecutive
// periods form a palindrome.
ComplexMatrix execute_plan(const ControlSystem& system, const ProtocolPlan& plan,
                           const ComplexMatrix& rho0);

struct PlanOptions {
  double gamma = 0.0;           // 0 = channel maximum
  double budget = 20.0;         // gamma*tau for asymptotic steps when target_error = 0
  double target_error = 0.0;    // > 0: smallest uniform budget reaching this error
  double duration_quantum = 0.0;  // > 0: asymptotic step durations rounded up to multiples
  int trotter_k = 512;
};

// Bit-flip transfer following the HLP decomposition. `system` must carry a
// theta = pi/2 channel on its last qubit.
ProtocolPlan hlp_full_plan(const DensityOperator& rho0, const DensityOperator& target,
                           const ControlSystem& system, const PlanOptions& options = {});

// Pairwise transfers chosen by largest reduction of the squared Frobenius
// distance per unit noise time; any remainder is completed by HLP steps. The
// HLP plan is returned instead when it needs less noise time.
ProtocolPlan greedy_equalize_plan(const DensityOperator& rho0, const DensityOperator& target,
                                  const ControlSystem& system, const PlanOptions& options = {});

struct TimedPlan {
  ProtocolPlan plan;
  double duration_bound = 0.0;
};

// n rounds of amplitude-damping cooling with nearest-neighbour swaps costing
// 1/J each.
TimedPlan cooling_protocol(int n, double J, double gamma_max, double delta_f);
double cooling_duration_bound(int n, double J, double gamma_max, double delta_f);
double cooling_residual(int n, double epsilon);
// Error of the cooling scheme compressed into total time tau.
double cooling_error_at(int n, double J, double gamma_max, double tau);

enum class ErasureMode { amp_damp_exact, bit_flip_asymptotic };
std::string to_string(ErasureMode m);
ErasureMode erasure_mode_from_string(const std::string& s);

TimedPlan erasure_protocol(int n, double J, double gamma_max, ErasureMode mode,
                           double delta_f = 1e-3);
double bit_flip_erasure_bound(int n, double J, double gamma_max, double delta_f);
double bit_flip_erasure_residual(int n, double epsilon);
double bit_flip_erasure_error_at(int n, double J, double gamma_max, double tau);

// Swap of neighbouring qubits `site` and `site + 1`.
ComplexMatrix swap_sites(int site, int n);
ComplexMatrix permutation_unitary(const std::vector<int>& perm);  // |perm[k]><k|

// ---------------------------------------------------------------------------
// Algorithmic cooling and reachability

DensityOperator algorithmic_cooling_state(int n, double b);
DensityOperator test2_target(int n, double b);

enum class NoiseKind { amp_damp, bit_flip, finite_T };
std::string to_string(NoiseKind k);
NoiseKind noise_kind_from_string(const std::string& s);

enum class Reachable { yes_exact, yes_asymptotic, no, conservative_unknown };
std::string to_string(Reachable r);

struct MajorizationCertificate {
  std::vector<double> initial;   // descending spectra
  std::vector<double> target;
  std::vector<TTransform> transforms;
  double floor = 0.0;            // distance floor when not majorized
};

struct ReachabilityVerdict {
  Reachable reachable = Reachable::conservative_unknown;
  std::optional<MajorizationCertificate> witness;
  std::string reason;
};

// Whether N-2 passive populations can be paired to satisfy the stopping
// condition for factor b.
bool passive_pairs_feasible(std::vector<double> passive, double b);

ReachabilityVerdict reachability_verdict(const DensityOperator& rho0, const DensityOperator& target,
                                         NoiseKind kind, double b = 0.0);

}  // namespace noiseswitch::protocols
