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

#include <cmath>
#include <limits>
#include <numbers>

#include "noiseswitch/protocols.hpp"

namespace noiseswitch::protocols {

namespace {

void require_rate_time(double gamma, double tau) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  if (!(tau >= 0.0)) throw DomainError("tau must be >= 0");
}

void require_ratio(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw DomainError("population ratio must be positive");
}

}  // namespace

double t_transform_noise_duration(double lambda, double gamma) {
  if (lambda < 0.0 || lambda > 1.0) throw DomainError("lambda outside [0, 1]");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const double a = std::abs(1.0 - 2.0 * lambda);
  if (a < 1e-15) return std::numeric_limits<double>::infinity();
  return -std::log(a) / gamma;
}

double amp_damp_switch_time(double ratio, double gamma, double tau) {
  require_ratio(ratio);
  require_rate_time(gamma, tau);
  // ln((r e^{g t} + 1) / (r + 1)) without overflow for large g t
  const double gt = gamma * tau;
  return (gt + std::log(ratio + std::exp(-gt)) - std::log1p(ratio)) / gamma;
}

bool stopping_condition(double ratio, double b) {
  const double lo = 1.0 / b;
  return ratio >= lo * (1.0 - 1e-12) && ratio <= b * (1.0 + 1e-12);
}

std::optional<double> finite_T_switch_time(double ratio, double b, double gamma, double tau) {
  require_ratio(ratio);
  require_rate_time(gamma, tau);
  if (!(b > 1.0) || !std::isfinite(b)) throw DomainError("finite_T_switch_time needs finite b > 1");
  if (!stopping_condition(ratio, b)) return std::nullopt;
  const double gt = gamma * tau;
  const double num = (ratio * b - 1.0) + (b - ratio) * std::exp(-gt);
  if (num <= 0.0) return 0.0;
  const double t = (gt + std::log(num) - std::log(b - 1.0) - std::log1p(ratio)) / gamma;
  return std::clamp(t, 0.0, tau);
}

std::optional<double> theta_switch_time(double ratio, double theta, double gamma, double tau) {
  require_ratio(ratio);
  require_rate_time(gamma, tau);
  if (!(theta >= 0.0) || !(theta < std::numbers::pi / 2)) {
    throw DomainError("theta_switch_time needs theta in [0, pi/2)");
  }
  const double t2 = std::pow(std::tan(theta / 2.0), 2);
  if (ratio < t2 * (1.0 - 1e-12) || ratio * t2 > 1.0 + 1e-12) return std::nullopt;
  const double gt = gamma * tau;
  const double num = (ratio - t2) + (1.0 - t2 * ratio) * std::exp(-gt);
  if (num <= 0.0) return 0.0;
  const double t = (gt + std::log(num) - std::log(1.0 - t2) - std::log1p(ratio)) / gamma;
  return std::clamp(t, 0.0, tau);
}

double t_transform_epsilon(double mixing, double b, double ratio) {
  if (mixing < 0.0 || mixing > 1.0) throw DomainError("mixing weight outside [0, 1]");
  require_ratio(ratio);
  if (!(b > 1.0)) throw DomainError("t_transform_epsilon needs b > 1");
  if (ratio > 1.0 + 1e-12) throw DomainError("swap the pair first so that ratio <= 1");
  if (!std::isfinite(b)) return 1.0 - mixing * (1.0 - ratio);
  return 1.0 - mixing * (1.0 + b) * (1.0 - ratio) / (b - ratio);
}

}  // namespace noiseswitch::protocols
