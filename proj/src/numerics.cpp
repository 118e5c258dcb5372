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

#include "noiseswitch/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <numeric>
#include <string>

namespace noiseswitch::numerics {

namespace {

// Coefficients of the [13/13] Pade approximant.
constexpr double kPadeB[] = {64764752532480000.0,
                             32382376266240000.0,
                             7771770303897600.0,
                             1187353796428800.0,
                             129060195264000.0,
                             10559470521600.0,
                             670442572800.0,
                             33522128640.0,
                             1323241920.0,
                             40840800.0,
                             960960.0,
                             16380.0,
                             182.0,
                             1.0};

double one_norm(const ComplexMatrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

bool all_finite(const ComplexMatrix& a) {
  return a.array().real().allFinite() && a.array().imag().allFinite();
}

bool is_hermitian(const ComplexMatrix& a, double tolerance) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

double spectral_norm_bound(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  const double n1 = one_norm(a);
  const double ninf = a.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(n1 * ninf);
}

int taylor_substeps(double norm) {
  if (!(norm >= 0.0) || !std::isfinite(norm)) {
    throw NumericError("exponential action: non-finite generator norm");
  }
  return std::max(1, static_cast<int>(std::ceil(norm / kTaylorTheta)));
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
  require_square(a, "matrix_exponential");
  if (!all_finite(a)) throw NumericError("matrix_exponential: non-finite input");
  const Eigen::Index n = a.rows();
  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > kPade13Theta) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kPade13Theta)));
  }
  const ComplexMatrix as = a / std::ldexp(1.0, squarings);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = as * as;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const double* b = kPadeB;
  ComplexMatrix inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  ComplexMatrix u_tail = a6 * inner;
  u_tail += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const ComplexMatrix u = as * u_tail;
  ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  ComplexMatrix result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  if (!all_finite(result)) throw NumericError("matrix_exponential: overflow");
  return result;
}

ExpDerivative exp_action_with_derivative(const ComplexMatrix& generator,
                                         const ComplexMatrix& direction, double dt) {
  require_square(generator, "exp_action_with_derivative");
  require_square(direction, "exp_action_with_derivative");
  if (generator.rows() != direction.rows()) {
    throw DimensionError("exp_action_with_derivative: generator and direction differ in size");
  }
  if (dt < 0.0) throw DomainError("exp_action_with_derivative: dt must be non-negative");
  const Eigen::Index n = generator.rows();
  ComplexMatrix block = ComplexMatrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = -dt * generator;
  block.bottomRightCorner(n, n) = -dt * generator;
  block.topRightCorner(n, n) = -dt * direction;
  const ComplexMatrix e = matrix_exponential(block);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, n)};
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& a, double tolerance) {
  require_square(a, "hermitian_eigensystem");
  if (!is_hermitian(a, tolerance)) {
    throw DomainError("hermitian_eigensystem: input is not Hermitian within tolerance");
  }
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian_eigensystem: eigensolver failed");
  }
  const Eigen::Index n = a.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const RealVector& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return ev(x) > ev(y); });
  Eigensystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = ev(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kronecker(const std::vector<ComplexMatrix>& factors) {
  if (factors.empty()) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kronecker(out, factors[k]);
  return out;
}

}  // namespace noiseswitch::numerics
