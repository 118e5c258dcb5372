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
#include <string>
#include <vector>

#include "noiseswitch/bath.hpp"
#include "noiseswitch/quantum.hpp"

namespace noiseswitch::models {

using numerics::ComplexMatrix;
using quantum::ControlSystem;
using quantum::DensityOperator;
using quantum::Dims;

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix lowering(int levels);  // a = sum_k sqrt(k) |k-1><k|

// V_theta = ((0, cos(theta/2)), (sin(theta/2), 0)).
ComplexMatrix noise_generator(double theta);

// Uniform Ising-ZZ chain, H0 = pi J sum 1/2 Z_k Z_{k+1}, with x and y
// controls (1/2 X_k, 1/2 Y_k) on every qubit. The switchable channel V_theta
// acts on the last qubit (site n-1); its Lamb operator is 1/2 Z there.
ControlSystem ising_chain(int n, double J, double theta, double gamma_max,
                          double gamma_dephasing = 0.0, double lamb_ratio = 0.0);

// Ising chain whose terminal qubit couples to a finite-temperature bath
// (qubit convention, b >= 1): jump |0><1| with weight b/(b+1) and |1><0| with
// weight 1/(b+1), Lamb ratio from bath::qubit_lamb_ratio.
ControlSystem ising_chain_thermal(int n, double J, double b, double gamma_max,
                                  double omega_over_cutoff = 0.2);

// Physical GMon parameters. Frequencies are ordinary (GHz, not angular) and
// the model is expressed in units of the coupling J (time unit 1/J).
struct GmonParams {
  int n = 2;
  double coupling_ghz = 0.16;
  double anharmonicity_ghz = 0.4;
  double carrier_ghz = 4.8;
  double cutoff_ghz = 40.0;
  double boltzmann = 1e-3;
  double gamma_max_ghz = 0.8;
  double detuning_max_ghz = 0.2;
  double drive_max_ghz = 0.8;
  bool lamb_shift = true;
};

bath::BathSpec gmon_bath(const GmonParams& p);
ControlSystem gmon_chain(const GmonParams& p);
// gamma = 2 kappa^2 gamma(w_d) (b + 1), in units of J.
double gmon_kappa_to_rate(double kappa, const GmonParams& p);

struct EinsteinCoefficients {
  double down_10 = 0.0;
  double up_01 = 0.0;
  double down_21 = 0.0;
  double up_12 = 0.0;
};

// Transition rates of a single undriven GMon in units of J.
EinsteinCoefficients einstein_coefficients(const GmonParams& p, double kappa);
// Rates read off the assembled dissipator: rate(i -> f) = -<f|L(|i><i|)|f>.
EinsteinCoefficients rates_from_dissipator(const ControlSystem& gmon, double gamma);

// Four-qubit (by default) collective ion-trap controls: F_x, F_y, F_x^2,
// F_y^2 and 1/2 Z_k; amplitude damping on the last qubit. Operators are
// scaled by `a` so amplitudes are in multiples of a.
ControlSystem ion_trap_collective(int n = 4, double a = 1.0, double gamma_max = 5.0);

struct TargetState {
  DensityOperator state;
  std::string label;
};

// Labels: ground, max_mixed, ghz, excited, file:<path>.
TargetState target_state(const std::string& label, const Dims& dims);

DensityOperator diagonal_state(const std::vector<double>& populations, const Dims& dims);
// Ginibre-distributed mixed state of the given rank (rank <= 0 means full).
DensityOperator random_density(const Dims& dims, std::uint64_t seed, int rank = 0);

// JSON file with "dims" and "matrix": row-major list of [re, im] pairs.
DensityOperator load_density_json(const std::string& path);
void save_density_json(const DensityOperator& rho, const std::string& path);

}  // namespace noiseswitch::models
