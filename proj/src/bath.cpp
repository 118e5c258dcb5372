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

#include "noiseswitch/bath.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace noiseswitch::bath {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// h / k_B in kelvin per GHz.
constexpr double kPlanckOverBoltzmann = 6.62607015e-34 * 1e9 / 1.380649e-23;

struct Quad {
  double value = 0.0;
  double error = 0.0;
};

template <class F>
Quad integrate(F&& f, double a, double b) {
  Quad q;
  double l1 = 0.0;
  q.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 30, 1e-12,
                                                                           &q.error, &l1);
  return q;
}

}  // namespace

std::string to_string(Statistics s) { return s == Statistics::boson ? "boson" : "fermion"; }

Statistics statistics_from_string(const std::string& s) {
  if (s == "boson") return Statistics::boson;
  if (s == "fermion") return Statistics::fermion;
  throw DomainError("unknown bath statistics '" + s + "'");
}

void BathSpec::validate() const {
  if (!(cutoff > 0.0)) throw DomainError("bath cutoff must be positive");
  if (!(beta >= 0.0)) throw DomainError("bath beta must be non-negative");
}

double lorentz_drude(double x) { return 1.0 / (1.0 + x * x); }

double occupation(double omega, const BathSpec& spec) {
  spec.validate();
  const double x = spec.beta * omega;
  if (spec.statistics == Statistics::boson) {
    if (x == 0.0) throw DomainError("bosonic occupation diverges at beta*omega = 0");
    return 1.0 / std::expm1(x);
  }
  if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
  return 1.0 / (std::exp(x) + 1.0);
}

double damping_rate(double omega, const BathSpec& spec) {
  spec.validate();
  const double f = lorentz_drude(std::abs(omega) / spec.cutoff);
  if (spec.statistics == Statistics::boson) {
    if (omega == 0.0) {
      // (1 + n) * omega -> 1 / beta
      if (spec.beta == 0.0) throw DomainError("bosonic rate diverges at zero frequency and beta = 0");
      return kTwoPi / spec.beta;
    }
    // (1 + n(w)) w = w / (1 - e^{-beta w})
    const double x = spec.beta * omega;
    if (x == 0.0) throw DomainError("bosonic rate diverges at beta = 0");
    return kTwoPi * f * omega / (-std::expm1(-x));
  }
  // 1 - n = 1 / (e^{-x} + 1), without the cancellation when n -> 1
  const double x = spec.beta * omega;
  return kTwoPi * f * std::abs(omega) / (std::exp(-x) + 1.0);
}

double lamb_shift_rate(double omega, const BathSpec& spec) {
  spec.validate();
  const double ceiling = kCeilingMultiple * spec.cutoff;
  if (!(std::abs(omega) < ceiling)) {
    throw DomainError("lamb_shift_rate: |omega| must stay below the integration ceiling");
  }
  const double g0 = damping_rate(omega, spec);
  auto subtracted = [&](double w) { return (damping_rate(w, spec) - g0) / (omega - w); };
  // Breakpoints at the pole and at zero frequency (kink for fermions).
  double points[4] = {-ceiling, std::min(0.0, omega), std::max(0.0, omega), ceiling};
  Quad total;
  for (int k = 0; k < 3; ++k) {
    if (points[k + 1] <= points[k]) continue;
    const Quad q = integrate(subtracted, points[k], points[k + 1]);
    total.value += q.value;
    total.error += q.error;
  }
  total.value += g0 * std::log((ceiling + omega) / (ceiling - omega));
  // Tails beyond the ceiling through w = +-ceiling / t, t in (0, 1].
  auto upper = [&](double t) {
    const double w = ceiling / t;
    return damping_rate(w, spec) / (omega - w) * ceiling / (t * t);
  };
  auto lower = [&](double t) {
    const double w = -ceiling / t;
    return damping_rate(w, spec) / (omega - w) * ceiling / (t * t);
  };
  const Quad qu = integrate(upper, 0.0, 1.0);
  const Quad ql = integrate(lower, 0.0, 1.0);
  total.value += qu.value + ql.value;
  total.error += qu.error + ql.error;
  if (!std::isfinite(total.value) || total.error > kQuadratureAbsTol * std::max(1.0, std::abs(total.value))) {
    std::ostringstream os;
    os << "lamb_shift_rate: quadrature did not converge (omega=" << omega << ", beta=" << spec.beta
       << ", estimate=" << total.value << ", error=" << total.error << ")";
    throw NumericError(os.str());
  }
  return total.value / kTwoPi;
}

double boltzmann_factor(const BathSpec& spec) { return std::exp(-spec.beta * spec.transition); }

namespace {

BathSpec qubit_bath(double b, double omega_over_cutoff, Statistics statistics) {
  if (!(b >= 1.0)) throw DomainError("qubit bath convention requires b >= 1");
  if (!(omega_over_cutoff > 0.0)) throw DomainError("omega/cutoff must be positive");
  BathSpec spec;
  spec.cutoff = 1.0;
  spec.transition = -omega_over_cutoff;
  spec.beta = std::log(b) / omega_over_cutoff;
  spec.statistics = statistics;
  return spec;
}

}  // namespace

double qubit_lamb_ratio(double b, double omega_over_cutoff, Statistics statistics) {
  if (b == 1.0 && statistics == Statistics::boson) return 0.0;
  const BathSpec spec = qubit_bath(b, omega_over_cutoff, statistics);
  const double w = spec.transition;
  return (lamb_shift_rate(w, spec) - lamb_shift_rate(-w, spec)) / (damping_rate(w, spec) * (b + 1.0));
}

double gmon_lamb_ratio(double b, double carrier_over_cutoff) {
  if (!(b > 0.0) || !(b <= 1.0)) throw DomainError("GMon convention requires 0 < b <= 1");
  if (!(carrier_over_cutoff > 0.0)) throw DomainError("carrier/cutoff must be positive");
  // b = 1 is the infinite-temperature limit, where the ratio vanishes.
  if (b == 1.0) return 0.0;
  BathSpec spec;
  spec.cutoff = 1.0;
  spec.transition = carrier_over_cutoff;
  spec.beta = -std::log(b) / carrier_over_cutoff;
  const double w = spec.transition;
  return (lamb_shift_rate(w, spec) + lamb_shift_rate(-w, spec)) /
         (2.0 * damping_rate(w, spec) * (b + 1.0));
}

double gmon_lamb_ratio_closed_form(double b, double carrier_over_cutoff) {
  return -0.25 * (1.0 - b) / (1.0 + b) / carrier_over_cutoff;
}

Superoperator thermal_dissipator(double b) {
  if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("thermal_dissipator: b must be >= 0");
  quantum::ComplexMatrix up = quantum::ComplexMatrix::Zero(2, 2);
  quantum::ComplexMatrix down = quantum::ComplexMatrix::Zero(2, 2);
  up(1, 0) = 1.0;
  down(0, 1) = 1.0;
  const double w_up = 1.0 / (b + 1.0);
  const double w_down = b / (b + 1.0);
  quantum::Superoperator out;
  out.matrix = w_up * quantum::dissipator_superop(up).matrix + w_down * quantum::dissipator_superop(down).matrix;
  out.dims = {2};
  return out;
}

RealMatrix diagonal_restriction(double b) {
  if (!(b >= 0.0)) throw DomainError("diagonal_restriction: b must be >= 0");
  RealMatrix g(2, 2);
  const double p = 1.0 / (b + 1.0);
  const double q = b / (b + 1.0);
  g << p, -q, -p, q;
  return g;
}

RealMatrix thermal_propagator(double b, double gamma, double t) {
  if (t < 0.0) throw DomainError("thermal_propagator: t must be >= 0");
  return RealMatrix::Identity(2, 2) + std::expm1(-gamma * t) * diagonal_restriction(b);
}

RealMatrix theta_propagator(double theta, double gamma, double t) {
  const double s2 = std::pow(std::sin(theta / 2.0), 2);
  const double c2 = std::pow(std::cos(theta / 2.0), 2);
  RealMatrix g(2, 2);
  g << s2, -c2, -s2, c2;
  return RealMatrix::Identity(2, 2) + std::expm1(-gamma * t) * g;
}

RealMatrix amp_damp_pair(double gamma_t) {
  const double eps = std::exp(-gamma_t);
  RealMatrix r(2, 2);
  r << 1.0, 1.0 - eps, 0.0, eps;
  return r;
}

RealMatrix bit_flip_pair(double gamma_t) {
  const double eps = std::exp(-gamma_t);
  RealMatrix r(2, 2);
  r << 1.0 + eps, 1.0 - eps, 1.0 - eps, 1.0 + eps;
  return 0.5 * r;
}

double temperature_for_boltzmann(double b, double frequency_ghz) {
  if (!(b > 0.0) || b == 1.0) throw DomainError("temperature_for_boltzmann: need b > 0, b != 1");
  return kPlanckOverBoltzmann * std::abs(frequency_ghz) / std::abs(std::log(b));
}

double boltzmann_for_temperature(double kelvin, double frequency_ghz) {
  if (!(kelvin > 0.0)) throw DomainError("temperature must be positive");
  return std::exp(-kPlanckOverBoltzmann * frequency_ghz / kelvin);
}

TimescaleReport validate_timescales(const Timescales& t, double factor) {
  if (!(t.bath > 0.0 && t.system > 0.0 && t.relaxation > 0.0 && t.control > 0.0)) {
    throw DomainError("validate_timescales: all rates must be positive");
  }
  auto check = [&](const std::string& name, double fast, double slow) {
    TimescaleCheck c;
    c.name = name;
    c.ratio = fast / slow;
    c.pass = c.ratio >= factor * (1.0 - 1e-12);
    return c;
  };
  TimescaleReport r;
  r.factor = factor;
  r.born_markov = check("born_markov", t.bath, t.relaxation);
  r.secular_relaxation = check("secular_relaxation", t.system, t.relaxation);
  r.secular_control = check("secular_control", t.system, t.control);
  return r;
}

}  // namespace noiseswitch::bath
