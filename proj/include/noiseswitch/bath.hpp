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

#include <string>

#include "noiseswitch/quantum.hpp"

namespace noiseswitch::bath {

using numerics::RealMatrix;
using quantum::Superoperator;

enum class Statistics { boson, fermion };

std::string to_string(Statistics s);
Statistics statistics_from_string(const std::string& s);

// Ohmic bath with Lorentz-Drude cutoff. Units: hbar = 1, frequencies are
// angular; beta has units of inverse angular frequency.
struct BathSpec {
  double beta = 0.0;
  double cutoff = 1.0;
  Statistics statistics = Statistics::boson;
  double transition = 0.0;  // signed transition frequency of the coupled system

  void validate() const;
};

struct ThermalChannel {
  double boltzmann = 1.0;
  double rate = 0.0;
  double lamb_ratio = 0.0;
};

// Principal-value integrals run over [-kCeilingMultiple * cutoff, +...]
// with the tails beyond the ceiling added by a separate mapped quadrature.
inline constexpr double kCeilingMultiple = 50.0;
inline constexpr double kQuadratureAbsTol = 1e-8;

double lorentz_drude(double x);
double occupation(double omega, const BathSpec& spec);
double damping_rate(double omega, const BathSpec& spec);
// S(omega) = (1/2pi) PV int gamma(w) / (omega - w) dw
double lamb_shift_rate(double omega, const BathSpec& spec);

// e^{-beta * transition}
double boltzmann_factor(const BathSpec& spec);

// Qubit bath convention (transition < 0, b >= 1):
// (S(w_n) - S(-w_n)) / (gamma(w_n) (b + 1)) with |w_n| / w_c = omega_over_cutoff.
double qubit_lamb_ratio(double b, double omega_over_cutoff = 0.2,
                        Statistics statistics = Statistics::boson);

// GMon convention (carrier > 0, b < 1):
// (S(w_d) + S(-w_d)) / (2 gamma(w_d) (b + 1)).
double gmon_lamb_ratio(double b, double carrier_over_cutoff);
double gmon_lamb_ratio_closed_form(double b, double carrier_over_cutoff);

// Qubit thermal dissipator: weights 1/(b+1) on |1><0| and 1/(1/b+1) on |0><1|.
Superoperator thermal_dissipator(double b);
// Restriction of the thermal dissipator to the populations (idempotent).
RealMatrix diagonal_restriction(double b);
// R_T(t) = I + (e^{-gamma t} - 1) Gamma''.
RealMatrix thermal_propagator(double b, double gamma, double t);
// Population propagator of the generalized generator V_theta.
RealMatrix theta_propagator(double theta, double gamma, double t);

// R_a, R_b on one population pair (upper level first).
RealMatrix amp_damp_pair(double gamma_t);
RealMatrix bit_flip_pair(double gamma_t);

// Temperature in kelvin giving Boltzmann factor b at a transition of
// `frequency_ghz` (ordinary frequency, not angular).
double temperature_for_boltzmann(double b, double frequency_ghz);
double boltzmann_for_temperature(double kelvin, double frequency_ghz);

// Rates in consistent units (e.g. GHz, not angular).
struct Timescales {
  double bath = 0.0;        // 1/tau_B
  double system = 0.0;      // 1/tau_S
  double relaxation = 0.0;  // 1/tau_R
  double control = 0.0;     // 1/tau_C
};

struct TimescaleCheck {
  std::string name;
  double ratio = 0.0;
  bool pass = false;
};

struct TimescaleReport {
  double factor = 0.0;
  TimescaleCheck born_markov;        // tau_R >> tau_B
  TimescaleCheck secular_relaxation; // tau_R >> tau_S
  TimescaleCheck secular_control;    // tau_C >> tau_S
  bool all_pass() const {
    return born_markov.pass && secular_relaxation.pass && secular_control.pass;
  }
};

inline constexpr double kDefaultSeparation = 5.0;

// A check passes when the slower rate is at least `factor` times smaller
// (equality passes).
TimescaleReport validate_timescales(const Timescales& t, double factor = kDefaultSeparation);

}  // namespace noiseswitch::bath
