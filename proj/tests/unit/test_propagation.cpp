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
#include <sstream>

#include "noiseswitch/models.hpp"
#include "noiseswitch/propagation.hpp"
#include "noiseswitch/protocols.hpp"
#include "test_util.hpp"

namespace noiseswitch {
namespace {

using numerics::Complex;
using numerics::ComplexMatrix;
using numerics::ComplexVector;
using propagation::ControlSequence;
using quantum::ControlSystem;
using testing::max_abs;

constexpr double kPi = std::numbers::pi;

ControlSystem amp_damp_qubit(double gamma_max) {
  auto s = models::ising_chain(1, 1.0, 0.0, gamma_max);
  return s;
}

ControlSequence random_sequence(const ControlSystem& s, int slices, double tau, std::mt19937_64& rng) {
  auto seq = ControlSequence::uniform(slices, tau, s.control_count(), s.channel_count());
  std::normal_distribution<double> u(0.0, 2.0);
  std::uniform_real_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < slices; ++k) {
    for (int j = 0; j < s.control_count(); ++j) seq.coherent(k, j) = u(rng);
    for (int l = 0; l < s.channel_count(); ++l) seq.noise(k, l) = s.channels[static_cast<std::size_t>(l)].max_rate * g(rng);
  }
  return seq;
}

TEST(SlicePropagator, Cases) {
  const auto q = amp_damp_qubit(5.0);
  EXPECT_LT(max_abs(propagation::slice_propagator(q, {0.3, -0.2}, {1.0}, 0.0).matrix - ComplexMatrix::Identity(4, 4)),
            1e-15);
  // gamma dt = ln 2 gives epsilon = 1/2
  const ComplexMatrix x = propagation::slice_propagator(q, {0.0, 0.0}, {1.0}, std::log(2.0)).matrix;
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(0, 3) = 0.5;
  expected(3, 3) = 0.5;
  expected(1, 1) = expected(2, 2) = std::sqrt(0.5);
  EXPECT_LT(max_abs(x - expected), 1e-12);
  const auto s = models::ising_chain(2, 1.0, kPi / 3, 5.0);
  const std::vector<double> u = {0.3, -1.1, 0.7, 0.2};
  const ComplexMatrix x1 = propagation::slice_propagator(s, u, {2.0}, 0.15).matrix;
  const ComplexMatrix x2 = propagation::slice_propagator(s, u, {2.0}, 0.3).matrix;
  EXPECT_LT(max_abs(x1 * x1 - x2), 1e-12);
  EXPECT_THROW(propagation::slice_propagator(s, u, {6.0}, 0.1), BoundError);
}

TEST(Propagate, StationaryDiagonalState) {
  const auto s = models::ising_chain(3, 1.0, 0.0, 5.0);
  const auto seq = ControlSequence::uniform(5, 2.0, s.control_count(), s.channel_count());
  const auto rho0 = protocols::algorithmic_cooling_state(3, 2.0);
  const auto traj = propagation::propagate(s, seq, rho0);
  ASSERT_EQ(traj.states.size(), 6u);
  for (const auto& st : traj.states) EXPECT_LT(max_abs(st.matrix() - rho0.matrix()), 1e-12);
}

TEST(Propagate, AmplitudeDampingDecay) {
  const auto q = amp_damp_qubit(5.0);
  auto seq = ControlSequence::uniform(4, 4.0, q.control_count(), q.channel_count());
  seq.noise.setConstant(5.0);
  const auto traj = propagation::propagate(q, seq, models::target_state("max_mixed", {2}).state, 3);
  EXPECT_EQ(traj.states.size(), 13u);
  EXPECT_LT(max_abs(traj.final_state().matrix() - models::target_state("ground", {2}).state.matrix()), 1e-8);
  for (const auto& st : traj.states) EXPECT_NEAR(st.matrix().trace().real(), 1.0, 1e-10);
  EXPECT_NEAR(traj.times.back(), 4.0, 1e-14);
  EXPECT_THROW(propagation::propagate(q, seq, models::target_state("max_mixed", {2, 2}).state), DimensionError);
}

TEST(FrobeniusError, Cases) {
  const auto g = models::target_state("ground", {2, 2, 2}).state;
  const auto m = models::target_state("max_mixed", {2, 2, 2}).state;
  EXPECT_EQ(propagation::frobenius_error(g, g), 0.0);
  EXPECT_NEAR(propagation::frobenius_error(g, models::target_state("excited", {2, 2, 2}).state), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(propagation::frobenius_error(m, g), std::sqrt(7.0 / 8.0), 1e-15);
  EXPECT_NEAR(std::sqrt(7.0 / 8.0), 0.93541, 1e-5);
}

TEST(TrotterDecoupling, CommutingCaseIsExact) {
  const ComplexMatrix gamma = quantum::dissipator_superop(models::pauli_z() / std::sqrt(2.0)).matrix;
  const ComplexMatrix hp = quantum::commutator_superop(models::pauli_z()).matrix;
  const ComplexMatrix x = propagation::trotter_decoupled_propagator(gamma, hp, 0.7, 1);
  EXPECT_LT(max_abs(x - numerics::matrix_exponential(-0.7 * gamma)), 1e-12);
}

TEST(TrotterDecoupling, ConvergesInK) {
  const ComplexMatrix gamma = quantum::dissipator_superop(models::pauli_x() / std::sqrt(2.0)).matrix;
  const ComplexMatrix hp = quantum::commutator_superop(0.5 * models::pauli_z()).matrix;
  const ComplexMatrix exact = numerics::matrix_exponential(-gamma);
  // first-order splitting: doubling k roughly halves the error
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 256; k *= 2) {
    const ComplexMatrix x = propagation::trotter_decoupled_propagator(gamma, hp, 1.0, k);
    const double err = (x - exact).operatorNorm();
    EXPECT_LT(err, previous) << "k " << k;
    if (k >= 8) EXPECT_LT(err, 0.6 * previous) << "k " << k;
    previous = err;
  }
  EXPECT_LT(previous, 1e-3);
  for (int k : {4, 16, 64}) {
    const ComplexMatrix x =
        propagation::trotter_decoupled_propagator(gamma, hp, 1.0, k, propagation::DecouplingMethod::compensator);
    EXPECT_LT((x - exact).operatorNorm(), 2.0 / k);
  }
}

TEST(TrotterDecoupling, PiPulseConjugation) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = numerics::kronecker(testing::random_hermitian(2, rng), models::pauli_z());
    const ComplexMatrix gb = quantum::dissipator_superop(
                                 quantum::embed_local(models::pauli_x() / std::sqrt(2.0), 1, {2, 2}))
                                 .matrix;
    const ComplexMatrix hs = quantum::commutator_superop(h).matrix;
    const ComplexMatrix u = numerics::kronecker(ComplexMatrix::Identity(2, 2), Complex(0, 1) * models::pauli_x());
    const ComplexMatrix su = quantum::sandwich_superop(u, u.adjoint());
    const double t = 0.4 + 0.1 * trial;
    const ComplexMatrix lhs = su * numerics::matrix_exponential(-t * (gb + Complex(0, 1) * hs)) * su.adjoint();
    const ComplexMatrix rhs = numerics::matrix_exponential(-t * (gb - Complex(0, 1) * hs));
    EXPECT_LT(max_abs(lhs - rhs), 1e-10);
  }
}

TEST(Propagate, UnitalMonotonicityAndPurity) {
  std::mt19937_64 rng(52);
  const auto s = models::ising_chain(2, 1.0, kPi / 2, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto seq = random_sequence(s, 6, 2.0, rng);
    const auto traj = propagation::propagate(s, seq, models::random_density(s.dims, 300 + trial));
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      const auto& prev = traj.eigenflows[k - 1];
      const auto& cur = traj.eigenflows[k];
      double sp = 0.0, sc = 0.0;
      for (std::size_t i = 0; i < cur.size(); ++i) {
        sp += prev[i];
        sc += cur[i];
        EXPECT_LE(sc, sp + 1e-8);
      }
      const double pp = (traj.states[k - 1].matrix() * traj.states[k - 1].matrix()).trace().real();
      const double pc = (traj.states[k].matrix() * traj.states[k].matrix()).trace().real();
      EXPECT_LE(pc, pp + 1e-10);
    }
  }
  // amplitude damping can purify
  const auto q = amp_damp_qubit(5.0);
  auto seq = ControlSequence::uniform(1, 1.0, q.control_count(), q.channel_count());
  seq.noise.setConstant(5.0);
  const auto traj = propagation::propagate(q, seq, models::target_state("max_mixed", {2}).state);
  EXPECT_GT((traj.final_state().matrix() * traj.final_state().matrix()).trace().real(), 0.9);
}

TEST(Csv, Headers) {
  const auto s = models::ising_chain(2, 1.0, 0.0, 5.0);
  std::mt19937_64 rng(53);
  const auto seq = random_sequence(s, 3, 1.0, rng);
  std::ostringstream out;
  propagation::write_sequence_csv(s, seq, out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "slice,dt,x1,y1,x2,y2,gamma_noise");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  std::ostringstream tout;
  propagation::write_trajectory_csv(propagation::propagate(s, seq, models::target_state("max_mixed", s.dims).state),
                                    tout);
  const std::string t = tout.str();
  EXPECT_EQ(t.substr(0, t.find('\n')), "t,lambda_1,lambda_2,lambda_3,lambda_4");
  EXPECT_NE(t.find("e+00"), std::string::npos);
}

}  // namespace
}  // namespace noiseswitch
