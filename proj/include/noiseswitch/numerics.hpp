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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "noiseswitch/errors.hpp"

namespace noiseswitch::numerics {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Every tolerance used by invariant checks lives here.
struct Tolerances {
  static constexpr double hermitian = 1e-10;
  static constexpr double trace = 1e-10;
  static constexpr double positivity = 1e-10;
  static constexpr double trajectory = 1e-8;
  static constexpr double majorization = 1e-12;
  static constexpr double probability_sum = 1e-10;
  static constexpr double lie_rank = 1e-9;
  static constexpr double unitary = 1e-10;
  // Taylor series for exponential actions stop once a term drops below this
  // fraction of the accumulated sum.
  static constexpr double series = 1e-17;
};

// Scaling threshold for the degree-13 Pade approximant (Higham 2005, double).
inline constexpr double kPade13Theta = 5.371920351148152;
// Per-substep norm bound used by the truncated Taylor exponential action.
inline constexpr double kTaylorTheta = 3.0;
inline constexpr int kTaylorMaxTerms = 80;

ComplexMatrix matrix_exponential(const ComplexMatrix& a);

struct ExpDerivative {
  ComplexMatrix value;       // e^{-dt L}
  ComplexMatrix derivative;  // derivative along the direction D
};

// X = e^{-dt L} and its derivative along D, read off the top-right block of
// exp([[-dt L, -dt D], [0, -dt L]]).
ExpDerivative exp_action_with_derivative(const ComplexMatrix& generator,
                                         const ComplexMatrix& direction, double dt);

struct Eigensystem {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns match values
};

Eigensystem hermitian_eigensystem(const ComplexMatrix& a,
                                  double tolerance = Tolerances::hermitian);

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kronecker(const std::vector<ComplexMatrix>& factors);

bool is_hermitian(const ComplexMatrix& a, double tolerance = Tolerances::hermitian);
bool all_finite(const ComplexMatrix& a);
void require_square(const ComplexMatrix& a, const char* what);

// Cheap upper bound on the spectral norm: sqrt(|A|_1 |A|_inf).
double spectral_norm_bound(const ComplexMatrix& a);

// Frobenius inner product <a, b> = tr(a^dagger b).
inline Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.array().conjugate() * b.array()).sum();
}

// Number of equal substeps s with norm / s <= kTaylorTheta.
int taylor_substeps(double norm);

// Overwrites v with exp(A) v where A is given only through its action.
// `apply(in, out)` must write A*in into out (A already includes any dt
// scaling). `norm` is an upper bound for |A|. Returns the number of A
// applications spent.
template <class Apply>
int expm_action(Apply&& apply, ComplexMatrix& v, double norm) {
  const int s = taylor_substeps(norm);
  ComplexMatrix term(v.rows(), v.cols());
  ComplexMatrix next(v.rows(), v.cols());
  ComplexMatrix sum(v.rows(), v.cols());
  int applications = 0;
  for (int step = 0; step < s; ++step) {
    sum = v;
    term = v;
    double previous = term.norm();
    for (int k = 1; k <= kTaylorMaxTerms; ++k) {
      apply(term, next);
      ++applications;
      term = next / (static_cast<double>(k) * s);
      sum += term;
      const double tn = term.norm();
      if (tn + previous <= Tolerances::series * sum.norm() || tn == 0.0) break;
      previous = tn;
      if (k == kTaylorMaxTerms) {
        throw NumericError("Taylor series for the exponential action did not converge");
      }
    }
    v = sum;
  }
  return applications;
}

}  // namespace noiseswitch::numerics
