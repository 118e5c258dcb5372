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

#include "noiseswitch/propagation.hpp"

#include <cstdio>
#include <sstream>

namespace noiseswitch::propagation {

using numerics::kI;

ControlSequence ControlSequence::uniform(int slices, double total_time, int controls, int channels) {
  if (slices < 1) throw DomainError("a control sequence needs at least one slice");
  if (!(total_time > 0.0)) throw DomainError("total time must be positive");
  ControlSequence s;
  s.durations.assign(static_cast<std::size_t>(slices), total_time / slices);
  s.coherent = RealMatrix::Zero(slices, controls);
  s.noise = RealMatrix::Zero(slices, channels);
  return s;
}

double ControlSequence::total_time() const {
  double t = 0.0;
  for (double d : durations) t += d;
  return t;
}

std::vector<double> ControlSequence::coherent_row(int k) const {
  std::vector<double> row(static_cast<std::size_t>(coherent.cols()));
  for (Eigen::Index j = 0; j < coherent.cols(); ++j) row[static_cast<std::size_t>(j)] = coherent(k, j);
  return row;
}

std::vector<double> ControlSequence::noise_row(int k) const {
  std::vector<double> row(static_cast<std::size_t>(noise.cols()));
  for (Eigen::Index j = 0; j < noise.cols(); ++j) row[static_cast<std::size_t>(j)] = noise(k, j);
  return row;
}

void ControlSequence::validate(const ControlSystem& system) const {
  const int m = slices();
  if (m < 1) throw DomainError("control sequence has no slices");
  if (coherent.rows() != m || coherent.cols() != system.control_count()) {
    throw DimensionError("coherent amplitudes do not match the system");
  }
  if (noise.rows() != m || noise.cols() != system.channel_count()) {
    throw DimensionError("noise amplitudes do not match the system");
  }
  for (double d : durations) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("slice durations must be finite and >= 0");
  }
  for (int k = 0; k < m; ++k) quantum::check_amplitudes(system, coherent_row(k), noise_row(k));
}

Superoperator slice_propagator(const ControlSystem& system, const std::vector<double>& coherent,
                               const std::vector<double>& noise, double dt) {
  if (dt < 0.0) throw DomainError("slice duration must be >= 0");
  const Superoperator l = quantum::liouvillian(system, coherent, noise);
  return {numerics::matrix_exponential(-dt * l.matrix), system.dims};
}

void evolve_in_place(const quantum::LindbladForm& form, double dt, ComplexMatrix& rho) {
  if (dt == 0.0) return;
  const double norm = dt * form.norm_bound();
  numerics::expm_action(
      [&](const ComplexMatrix& in, ComplexMatrix& out) {
        form.apply(in, out);
        out *= -dt;
      },
      rho, norm);
}

ComplexMatrix evolve(const ControlSystem& system, const std::vector<double>& coherent,
                     const std::vector<double>& noise, double dt, const ComplexMatrix& rho) {
  quantum::check_amplitudes(system, coherent, noise);
  ComplexMatrix out = rho;
  evolve_in_place(quantum::lindblad_form(system, coherent, noise), dt, out);
  return out;
}

namespace {

std::vector<double> safe_spectrum(const ComplexMatrix& rho) {
  const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
  return quantum::spectrum_descending(sym, numerics::Tolerances::trajectory);
}

}  // namespace

Trajectory propagate(const ControlSystem& system, const ControlSequence& sequence,
                     const DensityOperator& rho0, int substeps) {
  if (rho0.dimension() != system.dimension()) {
    throw DimensionError("initial state dimension does not match the system");
  }
  if (substeps < 1) throw DomainError("substeps must be >= 1");
  sequence.validate(system);
  Trajectory tr;
  ComplexMatrix rho = rho0.matrix();
  double t = 0.0;
  auto record = [&]() {
    tr.times.push_back(t);
    tr.states.push_back(DensityOperator::unchecked(rho, system.dims));
    tr.eigenflows.push_back(safe_spectrum(rho));
  };
  record();
  for (int k = 0; k < sequence.slices(); ++k) {
    const auto form = quantum::lindblad_form(system, sequence.coherent_row(k), sequence.noise_row(k));
    const double dt = sequence.durations[static_cast<std::size_t>(k)];
    for (int s = 0; s < substeps; ++s) {
      evolve_in_place(form, dt / substeps, rho);
      t += dt / substeps;
      record();
    }
  }
  return tr;
}

ComplexMatrix final_state(const ControlSystem& system, const ControlSequence& sequence,
                          const ComplexMatrix& rho0) {
  sequence.validate(system);
  ComplexMatrix rho = rho0;
  for (int k = 0; k < sequence.slices(); ++k) {
    const auto form = quantum::lindblad_form(system, sequence.coherent_row(k), sequence.noise_row(k));
    evolve_in_place(form, sequence.durations[static_cast<std::size_t>(k)], rho);
  }
  return rho;
}

double frobenius_error(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("frobenius_error: shapes differ");
  }
  return (rho - sigma).norm();
}

double frobenius_error(const DensityOperator& rho, const DensityOperator& sigma) {
  return frobenius_error(rho.matrix(), sigma.matrix());
}

ComplexMatrix trotter_decoupled_propagator(const ComplexMatrix& gamma, const ComplexMatrix& h_prime,
                                           double t, int k, DecouplingMethod method) {
  if (k < 1) throw DomainError("Trotter step count must be >= 1");
  if (gamma.rows() != h_prime.rows()) throw DimensionError("Trotter: superoperator sizes differ");
  ComplexMatrix period;
  if (method == DecouplingMethod::sign_flip) {
    const double h = t / (2.0 * k);
    period = numerics::matrix_exponential(-h * (gamma + kI * h_prime)) *
             numerics::matrix_exponential(-h * (gamma - kI * h_prime));
  } else {
    const double h = t / k;
    period = numerics::matrix_exponential(kI * h * h_prime) *
             numerics::matrix_exponential(-h * (gamma + kI * h_prime));
  }
  // k-th power by repeated squaring
  ComplexMatrix result = ComplexMatrix::Identity(gamma.rows(), gamma.cols());
  int e = k;
  while (e > 0) {
    if (e & 1) result = result * period;
    e >>= 1;
    if (e > 0) period = period * period;
  }
  return result;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  if (trajectory.states.empty()) return;
  const int n = trajectory.states.front().dimension();
  out << "t";
  for (int k = 1; k <= n; ++k) out << ",lambda_" << k;
  out << '\n';
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    out << fmt(trajectory.times[i]);
    for (double v : trajectory.eigenflows[i]) out << ',' << fmt(v);
    out << '\n';
  }
}

void write_sequence_csv(const ControlSystem& system, const ControlSequence& sequence,
                        std::ostream& out) {
  out << "slice,dt";
  for (const auto& c : system.controls) out << ',' << c.label;
  for (const auto& ch : system.channels) out << ",gamma_" << ch.label;
  out << '\n';
  for (int k = 0; k < sequence.slices(); ++k) {
    out << k << ',' << fmt(sequence.durations[static_cast<std::size_t>(k)]);
    for (Eigen::Index j = 0; j < sequence.coherent.cols(); ++j) out << ',' << fmt(sequence.coherent(k, j));
    for (Eigen::Index j = 0; j < sequence.noise.cols(); ++j) out << ',' << fmt(sequence.noise(k, j));
    out << '\n';
  }
}

}  // namespace noiseswitch::propagation
