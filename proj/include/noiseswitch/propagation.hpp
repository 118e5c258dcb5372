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

#include <ostream>
#include <string>
#include <vector>

#include "noiseswitch/quantum.hpp"

namespace noiseswitch::propagation {

using numerics::ComplexMatrix;
using numerics::RealMatrix;
using quantum::ControlSystem;
using quantum::DensityOperator;
using quantum::Superoperator;

struct ControlSequence {
  std::vector<double> durations;  // one per slice
  RealMatrix coherent;            // slices x controls
  RealMatrix noise;               // slices x switchable channels

  static ControlSequence uniform(int slices, double total_time, int controls, int channels);

  int slices() const { return static_cast<int>(durations.size()); }
  double total_time() const;
  std::vector<double> coherent_row(int k) const;
  std::vector<double> noise_row(int k) const;
  // Shapes, positive durations and channel bounds.
  void validate(const ControlSystem& system) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityOperator> states;
  std::vector<std::vector<double>> eigenflows;  // descending spectra

  const DensityOperator& final_state() const { return states.back(); }
};

Superoperator slice_propagator(const ControlSystem& system, const std::vector<double>& coherent,
                               const std::vector<double>& noise, double dt);

// rho -> e^{-dt L} rho using the action form (no N^2 x N^2 matrices).
void evolve_in_place(const quantum::LindbladForm& form, double dt, ComplexMatrix& rho);
ComplexMatrix evolve(const ControlSystem& system, const std::vector<double>& coherent,
                     const std::vector<double>& noise, double dt, const ComplexMatrix& rho);

// Records the state at every slice boundary, plus `substeps - 1` interior
// points per slice when substeps > 1.
Trajectory propagate(const ControlSystem& system, const ControlSequence& sequence,
                     const DensityOperator& rho0, int substeps = 1);
ComplexMatrix final_state(const ControlSystem& system, const ControlSequence& sequence,
                          const ComplexMatrix& rho0);

double frobenius_error(const ComplexMatrix& rho, const ComplexMatrix& sigma);
double frobenius_error(const DensityOperator& rho, const DensityOperator& sigma);

enum class DecouplingMethod { sign_flip, compensator };

// sign_flip:   (e^{-h(G + iH')} e^{-h(G - iH')})^k with h = t / 2k
// compensator: (e^{+i(t/k)H'} e^{-(t/k)(G + iH')})^k
// `gamma` is a rate-scaled dissipator superoperator, `h_prime` a
// commutator superoperator.
ComplexMatrix trotter_decoupled_propagator(const ComplexMatrix& gamma, const ComplexMatrix& h_prime,
                                           double t, int k,
                                           DecouplingMethod method = DecouplingMethod::sign_flip);

// Trajectory CSV: header "t,lambda_1,...,lambda_N", eigenvalues descending.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);
// Sequence CSV: "slice,dt,<control labels>,<channel labels>".
void write_sequence_csv(const ControlSystem& system, const ControlSequence& sequence,
                        std::ostream& out);

}  // namespace noiseswitch::propagation
