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

#include <gtest/gtest.h>

#include <algorithm>

#include "noiseswitch/numerics.hpp"
#include "test_util.hpp"

namespace noiseswitch {
namespace {

using numerics::Complex;
using numerics::ComplexMatrix;
using testing::max_abs;

TEST(MatrixExponential, ZeroIsIdentity) {
  const ComplexMatrix e = numerics::matrix_exponential(ComplexMatrix::Zero(4, 4));
  EXPECT_LT(max_abs(e - ComplexMatrix::Identity(4, 4)), 1e-15);
}

TEST(MatrixExponential, Diagonal) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1.3;
  a(1, 1) = Complex(-0.4, 2.0);
  const ComplexMatrix e = numerics::matrix_exponential(a);
  EXPECT_NEAR(std::abs(e(0, 0) - std::exp(Complex(1.3))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e(1, 1) - std::exp(Complex(-0.4, 2.0))), 0.0, 1e-14);
  EXPECT_EQ(e(0, 1), Complex(0.0));
}

TEST(MatrixExponential, RejectsNonSquare) {
  EXPECT_THROW(numerics::matrix_exponential(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST(MatrixExponential, InverseProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> norm(0.01, 10.0);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int trial = 0; trial < 100; ++trial) {
    ComplexMatrix a = testing::random_matrix(dim(rng), rng);
    a *= norm(rng) / a.norm();
    const ComplexMatrix p = numerics::matrix_exponential(a) * numerics::matrix_exponential(-a);
    EXPECT_LT(max_abs(p - ComplexMatrix::Identity(a.rows(), a.cols())), 1e-10) << "trial " << trial;
  }
}

TEST(MatrixExponential, HermitianAgainstEigendecomposition) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = testing::random_hermitian(6, rng, 3.0);
    const auto es = numerics::hermitian_eigensystem(h);
    ComplexMatrix d = ComplexMatrix::Zero(6, 6);
    for (int k = 0; k < 6; ++k) d(k, k) = std::exp(Complex(0.0, -es.values(k)));
    const ComplexMatrix oracle = es.vectors * d * es.vectors.adjoint();
    const ComplexMatrix e = numerics::matrix_exponential(Complex(0.0, -1.0) * h);
    EXPECT_LT(max_abs(e - oracle) / max_abs(oracle), 1e-12);
  }
}

TEST(ExpDerivative, ZeroDirection) {
  std::mt19937_64 rng(13);
  const ComplexMatrix l = testing::random_matrix(4, rng);
  const auto r = numerics::exp_action_with_derivative(l, ComplexMatrix::Zero(4, 4), 0.3);
  EXPECT_LT(max_abs(r.derivative), 1e-15);
  EXPECT_LT(max_abs(r.value - numerics::matrix_exponential(-0.3 * l)), 1e-13);
}

TEST(ExpDerivative, CommutingDiagonal) {
  ComplexMatrix l = ComplexMatrix::Zero(3, 3), d = ComplexMatrix::Zero(3, 3);
  l.diagonal() << 0.5, 1.5, Complex(0.2, 1.0);
  d.diagonal() << 2.0, -1.0, 0.7;
  const double dt = 0.8;
  const auto r = numerics::exp_action_with_derivative(l, d, dt);
  const ComplexMatrix oracle = -dt * d * numerics::matrix_exponential(-dt * l);
  EXPECT_LT(max_abs(r.derivative - oracle), 1e-13);
}

TEST(ExpDerivative, RejectsMismatchedShapes) {
  EXPECT_THROW(numerics::exp_action_with_derivative(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3), 0.1),
               DimensionError);
}

// Central finite differences of u -> e^{-dt (L + u D)} at u = 0.
TEST(ExpDerivative, FiniteDifferenceProperty) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> dim(2, 64);
  std::uniform_real_distribution<double> step(0.01, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = trial == 0 ? 4 : (trial < 90 ? dim(rng) % 16 + 2 : dim(rng));
    const double dt = trial == 0 ? 0.1 : step(rng);
    ComplexMatrix l = testing::random_matrix(n, rng);
    l /= l.norm() / std::sqrt(static_cast<double>(n));
    ComplexMatrix d = testing::random_matrix(n, rng);
    d /= d.norm() / std::sqrt(static_cast<double>(n));
    const auto r = numerics::exp_action_with_derivative(l, d, dt);
    const double h = 1e-6;
    const ComplexMatrix fd = (numerics::matrix_exponential(-dt * (l + h * d)) -
                              numerics::matrix_exponential(-dt * (l - h * d))) /
                             (2.0 * h);
    EXPECT_LT((r.derivative - fd).norm() / fd.norm(), 1e-6) << "trial " << trial << " n " << n;
  }
}

TEST(HermitianEigensystem, Identity) {
  const auto es = numerics::hermitian_eigensystem(ComplexMatrix::Identity(8, 8));
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(es.values(k), 1.0, 1e-14);
}

TEST(HermitianEigensystem, DiagonalSortedDescending) {
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a.diagonal() << 3.0, 1.0, 2.0;
  const auto es = numerics::hermitian_eigensystem(a);
  EXPECT_DOUBLE_EQ(es.values(0), 3.0);
  EXPECT_DOUBLE_EQ(es.values(1), 2.0);
  EXPECT_DOUBLE_EQ(es.values(2), 1.0);
  EXPECT_NEAR(std::abs(es.vectors(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(es.vectors(2, 1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(es.vectors(1, 2)), 1.0, 1e-14);
}

TEST(HermitianEigensystem, RejectsNonHermitian) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(numerics::hermitian_eigensystem(a), DomainError);
}

TEST(HermitianEigensystem, ReconstructionAndUnitaryInvariance) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix a = testing::random_hermitian(8, rng);
    const auto es = numerics::hermitian_eigensystem(a);
    const ComplexMatrix rec = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    EXPECT_LT((a - rec).norm(), 1e-10);
    const ComplexMatrix u = testing::random_unitary(8, rng);
    ComplexMatrix b = u * a * u.adjoint();
    b = 0.5 * (b + b.adjoint());
    const auto eb = numerics::hermitian_eigensystem(b);
    EXPECT_LT((es.values - eb.values).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Kronecker, Identities) {
  EXPECT_EQ(numerics::kronecker(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)),
            ComplexMatrix::Identity(4, 4));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d.diagonal() << 1.0, 2.0;
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1.0, 1.0, 2.0, 2.0;
  EXPECT_EQ(numerics::kronecker(d, ComplexMatrix::Identity(2, 2)), expected);
}

TEST(Kronecker, MixedProduct) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix a = testing::random_matrix(2, rng), b = testing::random_matrix(2, rng);
    const ComplexMatrix c = testing::random_matrix(2, rng), d = testing::random_matrix(2, rng);
    const ComplexMatrix lhs = numerics::kronecker(a, b) * numerics::kronecker(c, d);
    EXPECT_LT(max_abs(lhs - numerics::kronecker(a * c, b * d)), 1e-12);
  }
}

TEST(Kronecker, ListFoldsLeft) {
  std::mt19937_64 rng(17);
  const ComplexMatrix a = testing::random_matrix(2, rng), b = testing::random_matrix(3, rng);
  const ComplexMatrix c = testing::random_matrix(2, rng);
  EXPECT_LT(max_abs(numerics::kronecker({a, b, c}) - numerics::kronecker(numerics::kronecker(a, b), c)), 1e-14);
}

TEST(ExpmAction, MatchesDenseExponential) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix a = testing::random_matrix(6, rng);
    a *= (0.5 + trial) / a.norm();
    ComplexMatrix v = testing::random_matrix(6, rng);
    const ComplexMatrix oracle = numerics::matrix_exponential(a) * v;
    numerics::expm_action([&](const ComplexMatrix& in, ComplexMatrix& out) { out.noalias() = a * in; }, v,
                          numerics::spectral_norm_bound(a));
    EXPECT_LT(max_abs(v - oracle) / max_abs(oracle), 1e-12);
  }
}

}  // namespace
}  // namespace noiseswitch
