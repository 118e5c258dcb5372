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

#include <limits>
#include <string>
#include <vector>

#include "noiseswitch/numerics.hpp"

namespace noiseswitch::quantum {

using numerics::Complex;
using numerics::ComplexMatrix;
using numerics::ComplexVector;
using numerics::RealVector;
using Dims = std::vector<int>;

int total_dimension(const Dims& dims);

class DensityOperator {
 public:
  DensityOperator() = default;
  // Validates Hermiticity, unit trace and positivity against `tolerance`.
  DensityOperator(ComplexMatrix matrix, Dims dims,
                  double tolerance = numerics::Tolerances::hermitian);

  // Skips validation; for intermediate propagation results.
  static DensityOperator unchecked(ComplexMatrix matrix, Dims dims);

  const ComplexMatrix& matrix() const { return matrix_; }
  const Dims& dims() const { return dims_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }

 private:
  ComplexMatrix matrix_;
  Dims dims_;
};

// Throws DomainError describing the first violated invariant.
void validate_density(const ComplexMatrix& m, double tolerance);

struct Superoperator {
  ComplexMatrix matrix;  // N^2 x N^2, column-stacking convention
  Dims dims;
};

// Weighted jump operator inside a channel; the channel rate multiplies
// every weight.
struct JumpTerm {
  ComplexMatrix op;
  double weight = 1.0;
};

struct LindbladChannel {
  std::string label;
  std::vector<JumpTerm> terms;
  double max_rate = 0.0;
  bool switchable = true;
  double lamb_ratio = 0.0;
  ComplexMatrix lamb_operator;  // empty means no Lamb shift
};

struct Control {
  std::string label;
  ComplexMatrix op;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

struct StaticChannel {
  std::string label;
  ComplexMatrix op;
  double rate = 0.0;
};

struct ControlSystem {
  std::string name;
  Dims dims;
  ComplexMatrix drift;
  std::vector<Control> controls;
  std::vector<LindbladChannel> channels;  // switchable
  std::vector<StaticChannel> static_channels;

  int dimension() const { return static_cast<int>(drift.rows()); }
  int control_count() const { return static_cast<int>(controls.size()); }
  int channel_count() const { return static_cast<int>(channels.size()); }
};

// Checks Hermiticity and shapes of all operators.
void validate_system(const ControlSystem& system);

ComplexVector vectorize(const ComplexMatrix& rho);
ComplexVector vectorize(const DensityOperator& rho);
ComplexMatrix unvectorize(const ComplexVector& v);
DensityOperator unvectorize(const ComplexVector& v, const Dims& dims);

Superoperator commutator_superop(const ComplexMatrix& h, const Dims& dims = {});
Superoperator dissipator_superop(const ComplexMatrix& v, const Dims& dims = {});
// vec(A rho B) = (B^T kron A) vec(rho)
ComplexMatrix sandwich_superop(const ComplexMatrix& a, const ComplexMatrix& b);

// Channel dissipator at unit rate: sum of weighted term dissipators.
ComplexMatrix channel_dissipator(const LindbladChannel& channel);

// Total Hamiltonian H0 + sum u_j H_j + sum gamma_l r_l H_LS,l.
ComplexMatrix total_hamiltonian(const ControlSystem& system, const std::vector<double>& coherent,
                                const std::vector<double>& noise);

// Checks amplitude counts and 0 <= gamma_l <= gamma*_l.
void check_amplitudes(const ControlSystem& system, const std::vector<double>& coherent,
                      const std::vector<double>& noise);

Superoperator liouvillian(const ControlSystem& system, const std::vector<double>& coherent,
                          const std::vector<double>& noise);

ComplexMatrix embed_local(const ComplexMatrix& op, int site, const Dims& dims);

std::vector<double> spectrum_descending(const DensityOperator& rho);
std::vector<double> spectrum_descending(const ComplexMatrix& rho,
                                        double tolerance = numerics::Tolerances::trajectory);

// Real Lie algebra generated by {iH0, iH_j}; returns its dimension.
int lie_closure_dimension(const ComplexMatrix& drift, const std::vector<ComplexMatrix>& controls);
bool hamiltonian_controllability(const ControlSystem& system);

// Action form of a generator: A(rho) = G rho + rho G^dagger - sum c_k V_k rho V_k^dagger.
// With G = iH + 1/2 sum c_k V_k^dagger V_k this is L(rho) = i[H, rho] + Gamma(rho).
struct LindbladForm {
  ComplexMatrix g;
  std::vector<std::pair<double, ComplexMatrix>> jumps;

  void apply(const ComplexMatrix& in, ComplexMatrix& out) const;
  void apply_adjoint(const ComplexMatrix& in, ComplexMatrix& out) const;
  // Upper bound on the induced Frobenius norm of the action.
  double norm_bound() const;
};

// Generator for one slice in action form.
LindbladForm lindblad_form(const ControlSystem& system, const std::vector<double>& coherent,
                           const std::vector<double>& noise);

// d/d gamma_l of the generator: Gamma_l + i r_l [H_LS, .].
LindbladForm channel_direction(const LindbladChannel& channel);

}  // namespace noiseswitch::quantum
