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

#include <numbers>
#include <random>

#include "noiseswitch/bath.hpp"
#include "noiseswitch/models.hpp"
#include "test_util.hpp"

namespace noiseswitch {
namespace {

using bath::BathSpec;
using bath::Statistics;
using numerics::ComplexMatrix;
using numerics::RealMatrix;

constexpr double kPi = std::numbers::pi;

BathSpec spec(double beta, double cutoff, Statistics s = Statistics::boson) {
  BathSpec b;
  b.beta = beta;
  b.cutoff = cutoff;
  b.statistics = s;
  return b;
}

RealMatrix amp_damp_closed_form(double eps) {
  RealMatrix a(2, 2);
  a << 1.0, 1.0 - eps, 0.0, eps;
  return a;
}

RealMatrix bit_flip_closed_form(double eps) {
  RealMatrix b(2, 2);
  b << 1.0 + eps, 1.0 - eps, 1.0 - eps, 1.0 + eps;
  return 0.5 * b;
}

TEST(Occupation, Cases) {
  EXPECT_NEAR(bath::occupation(1.0, spec(1e6, 1.0)), 0.0, 1e-300);
  EXPECT_NEAR(bath::occupation(std::log(2.0), spec(1.0, 1.0)), 1.0, 1e-14);
  EXPECT_NEAR(bath::occupation(std::log(2.0), spec(1.0, 1.0, Statistics::fermion)), 1.0 / 3.0, 1e-14);
  EXPECT_THROW(bath::occupation(0.0, spec(1.0, 1.0)), DomainError);
}

TEST(BathSpec, Validation) {
  EXPECT_THROW(spec(1.0, 0.0).validate(), DomainError);
  EXPECT_THROW(spec(-1.0, 1.0).validate(), DomainError);
  EXPECT_NO_THROW(spec(0.0, 1.0).validate());
}

TEST(DampingRate, Cases) {
  // n = 1 at omega = cutoff when beta * cutoff = ln 2
  const double wc = 3.0;
  EXPECT_NEAR(bath::damping_rate(wc, spec(std::log(2.0) / wc, wc)), 2 * kPi * wc, 1e-12);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> w(0.01, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double omega = w(rng);
    const auto s = spec(1e9, 2.0);
    EXPECT_NEAR(bath::damping_rate(omega, s), 2 * kPi * omega * bath::lorentz_drude(omega / 2.0), 1e-12);
    EXPECT_EQ(bath::occupation(omega, s), 0.0);
  }
}

TEST(DampingRate, KmsProperty) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> w(0.05, 5.0), beta(0.05, 4.0), cut(0.5, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    for (Statistics st : {Statistics::boson, Statistics::fermion}) {
      const auto s = spec(beta(rng), cut(rng), st);
      const double omega = w(rng);
      const double lhs = bath::damping_rate(-omega, s);
      const double rhs = std::exp(-s.beta * omega) * bath::damping_rate(omega, s);
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-10) << "trial " << trial;
    }
  }
}

TEST(LambShift, GmonRatioMatchesClosedForm) {
  for (double b : {1e-3, 0.05, 0.3}) {
    for (double x : {0.12, 0.2, 0.5}) {
      const double closed = -0.25 * (1 - b) / (1 + b) / x;
      EXPECT_NEAR(bath::gmon_lamb_ratio_closed_form(b, x), closed, 1e-14);
      EXPECT_NEAR(bath::gmon_lamb_ratio(b, x) / closed, 1.0, 1e-3) << "b " << b << " x " << x;
    }
  }
  EXPECT_NEAR(bath::gmon_lamb_ratio(1.0, 0.12), 0.0, 1e-8);
}

TEST(LambShift, QubitRatioDependsOnlyOnBoltzmannAndFrequencyRatio) {
  const double b = 2.0, x = 0.2;
  auto ratio = [&](double scale) {
    const double wn = -x * scale;  // qubit convention: negative transition
    BathSpec s = spec(std::log(b) / (x * scale), scale);
    const double num = bath::lamb_shift_rate(wn, s) - bath::lamb_shift_rate(-wn, s);
    return num / (2 * bath::damping_rate(wn, s) * (b + 1));
  };
  EXPECT_NEAR(ratio(1.0), ratio(7.5), 1e-7 * std::abs(ratio(1.0)) + 1e-9);
  EXPECT_NEAR(2 * ratio(1.0), bath::qubit_lamb_ratio(b, x), 1e-7);
}

TEST(ThermalDissipator, SpectrumLimitAndFixedPoint) {
  for (double b : {1.0, 2.0, 8.0}) {
    const ComplexMatrix g = bath::thermal_dissipator(b).matrix;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(g);
    std::vector<double> ev;
    for (int k = 0; k < 4; ++k) ev.push_back(es.eigenvalues()(k).real());
    std::sort(ev.begin(), ev.end());
    EXPECT_NEAR(ev[0], 0.0, 1e-12);
    EXPECT_NEAR(ev[1], 0.5, 1e-12);
    EXPECT_NEAR(ev[2], 0.5, 1e-12);
    EXPECT_NEAR(ev[3], 1.0, 1e-12);
    ComplexMatrix eq = ComplexMatrix::Zero(2, 2);
    eq(0, 0) = b / (1 + b);
    eq(1, 1) = 1 / (1 + b);
    EXPECT_LT((g * quantum::vectorize(eq)).cwiseAbs().maxCoeff(), 1e-12);
    const auto id = quantum::vectorize(ComplexMatrix(ComplexMatrix::Identity(2, 2)));
    EXPECT_LT((id.transpose() * g).cwiseAbs().maxCoeff(), 1e-14);
    const double unital_defect = (g * id).cwiseAbs().maxCoeff();
    if (b == 1.0) {
      EXPECT_LT(unital_defect, 1e-14);
    } else {
      EXPECT_GT(unital_defect, 1e-3);
    }
  }
  ComplexMatrix raise = ComplexMatrix::Zero(2, 2);
  raise(1, 0) = 1.0;
  const ComplexMatrix half = 0.5 * (quantum::dissipator_superop(models::noise_generator(0.0)).matrix +
                                    quantum::dissipator_superop(raise).matrix);
  EXPECT_LT(testing::max_abs(bath::thermal_dissipator(1.0).matrix - half), 1e-14);
  EXPECT_THROW(bath::thermal_dissipator(-1.0), DomainError);
}

TEST(DiagonalRestriction, IdempotentAndStochasticProperty) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> bd(1.0, 50.0), gt(0.0, 6.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double b = bd(rng), t = gt(rng);
    const RealMatrix g2 = bath::diagonal_restriction(b);
    EXPECT_LT((g2 * g2 - g2).cwiseAbs().maxCoeff(), 1e-12);
    const RealMatrix r = bath::thermal_propagator(b, 1.0, t);
    EXPECT_LT((r.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_GE(r.minCoeff(), -1e-15);
    const double eps = std::exp(-t);
    const RealMatrix mix = (b - 1) / (b + 1) * amp_damp_closed_form(eps) + 2 / (b + 1) * bit_flip_closed_form(eps);
    EXPECT_LT((r - mix).cwiseAbs().maxCoeff(), 1e-12);
    // generalized generator with tan^2(theta/2) = 1/b reproduces R_T
    const double theta = 2 * std::atan(std::sqrt(1 / b));
    EXPECT_LT((bath::theta_propagator(theta, 1.0, t) - r).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LT((bath::thermal_propagator(3.0, 2.0, 0.0) - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PairMaps, StochasticProperty) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> gt(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double t = gt(rng), eps = std::exp(-t);
    const RealMatrix ra = bath::amp_damp_pair(t), rb = bath::bit_flip_pair(t);
    for (const RealMatrix* m : {&ra, &rb}) {
      EXPECT_LT((m->colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
      EXPECT_GE(m->minCoeff(), 0.0);
    }
    EXPECT_LT((rb.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);  // doubly stochastic
    EXPECT_LT((ra - amp_damp_closed_form(eps)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((rb - bit_flip_closed_form(eps)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Timescales, GmonTableAndBoundaries) {
  const auto gm = bath::validate_timescales({550.0, 4.8, 0.8, 0.8});
  EXPECT_TRUE(gm.all_pass());
  const auto same = bath::validate_timescales({1.0, 100.0, 1.0, 1.0});
  EXPECT_FALSE(same.born_markov.pass);
  const auto edge = bath::validate_timescales({10.0, 10.0, 1.0, 1.0}, 10.0);
  EXPECT_TRUE(edge.born_markov.pass);
  EXPECT_TRUE(edge.secular_relaxation.pass);
  const auto below = bath::validate_timescales({9.99, 10.0, 1.0, 1.0}, 10.0);
  EXPECT_FALSE(below.born_markov.pass);
  EXPECT_THROW(bath::validate_timescales({0.0, 1.0, 1.0, 1.0}), DomainError);
}

TEST(Boltzmann, TemperatureRoundTrip) {
  const double t = bath::temperature_for_boltzmann(1e-3, 4.8);
  EXPECT_GT(t, 0.030);
  EXPECT_LT(t, 0.036);
  EXPECT_NEAR(bath::boltzmann_for_temperature(t, 4.8), 1e-3, 1e-15);
  BathSpec s = spec(0.5, 1.0);
  s.transition = -2.0;
  EXPECT_NEAR(bath::boltzmann_factor(s), std::exp(1.0), 1e-14);
}

}  // namespace
}  // namespace noiseswitch
