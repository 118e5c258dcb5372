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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "noiseswitch/protocols.hpp"

namespace noiseswitch::protocols {

namespace {

constexpr double kHlpTolerance = 1e-13;

void check_distribution(const std::vector<double>& v, const char* what) {
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (std::abs(s - 1.0) > numerics::Tolerances::probability_sum) {
    throw DomainError(std::string(what) + " does not sum to 1");
  }
}

}  // namespace

std::vector<double> sorted_descending(std::vector<double> v) {
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  return v;
}

bool majorizes(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("majorizes: length mismatch");
  check_distribution(x, "x");
  check_distribution(y, "y");
  const auto xs = sorted_descending(x);
  const auto ys = sorted_descending(y);
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    if (sx > sy + numerics::Tolerances::majorization) return false;
  }
  return true;
}

double majorization_floor(const std::vector<double>& target, const std::vector<double>& initial) {
  if (target.size() != initial.size()) throw DimensionError("majorization_floor: length mismatch");
  const auto xs = sorted_descending(target);
  const auto ys = sorted_descending(initial);
  double sx = 0.0, sy = 0.0, floor = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    floor = std::max(floor, (sx - sy) / std::sqrt(static_cast<double>(k + 1)));
  }
  return floor;
}

std::vector<double> apply_t_transform(std::vector<double> v, const TTransform& t) {
  const auto n = static_cast<int>(v.size());
  if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n || t.i == t.j) {
    throw DomainError("T-transform indices out of range");
  }
  if (t.lambda < 0.0 || t.lambda > 1.0) throw DomainError("T-transform lambda outside [0, 1]");
  const double a = v[static_cast<std::size_t>(t.i)];
  const double b = v[static_cast<std::size_t>(t.j)];
  v[static_cast<std::size_t>(t.i)] = t.lambda * a + (1.0 - t.lambda) * b;
  v[static_cast<std::size_t>(t.j)] = t.lambda * b + (1.0 - t.lambda) * a;
  return v;
}

std::vector<double> apply_t_transforms(std::vector<double> v, const std::vector<TTransform>& ts) {
  v = sorted_descending(std::move(v));
  for (const auto& t : ts) v = sorted_descending(apply_t_transform(std::move(v), t));
  return v;
}

std::vector<TTransform> hlp_t_transforms(const std::vector<double>& y_in, const std::vector<double>& x_in) {
  if (y_in.size() != x_in.size()) throw DimensionError("hlp_t_transforms: length mismatch");
  if (!majorizes(x_in, y_in)) throw ReachabilityError("target spectrum is not majorized by the initial one");
  std::vector<double> y = sorted_descending(y_in);
  const std::vector<double> x = sorted_descending(x_in);
  const int n = static_cast<int>(y.size());
  std::vector<TTransform> out;
  for (int iter = 0; iter < n; ++iter) {
    int j = -1;
    for (int i = n - 1; i >= 0; --i) {
      if (x[static_cast<std::size_t>(i)] < y[static_cast<std::size_t>(i)] - kHlpTolerance) {
        j = i;
        break;
      }
    }
    if (j < 0) break;
    int k = -1;
    for (int i = j + 1; i < n; ++i) {
      if (x[static_cast<std::size_t>(i)] > y[static_cast<std::size_t>(i)] + kHlpTolerance) {
        k = i;
        break;
      }
    }
    if (k < 0) break;
    const double yj = y[static_cast<std::size_t>(j)];
    const double yk = y[static_cast<std::size_t>(k)];
    const double delta = std::min(yj - x[static_cast<std::size_t>(j)], x[static_cast<std::size_t>(k)] - yk);
    TTransform t{j, k, 1.0 - delta / (yj - yk)};
    out.push_back(t);
    y = apply_t_transform(std::move(y), t);
    // Land the touched coordinate exactly so rounding cannot spawn extra steps.
    if (std::abs(y[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)]) <= 4 * kHlpTolerance) {
      y[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
    }
    if (std::abs(y[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(k)]) <= 4 * kHlpTolerance) {
      y[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(k)];
    }
    y = sorted_descending(std::move(y));
  }
  double residual = 0.0;
  for (int i = 0; i < n; ++i) {
    residual = std::max(residual, std::abs(y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]));
  }
  if (residual > 1e-12) throw NumericError("HLP decomposition did not converge");
  return out;
}

namespace {

RealMatrix lift_pair(int n, const RealMatrix& pair) {
  if (n < 1) throw DomainError("need at least one qubit");
  const int rest = 1 << (n - 1);
  RealMatrix out = RealMatrix::Zero(2 * rest, 2 * rest);
  for (int m = 0; m < rest; ++m) out.block(2 * m, 2 * m, 2, 2) = pair;
  return out;
}

}  // namespace

RealMatrix amp_damp_diagonal_map(int n, double gamma_t) {
  return lift_pair(n, bath::amp_damp_pair(gamma_t));
}

RealMatrix bit_flip_diagonal_map(int n, double gamma_t) {
  return lift_pair(n, bath::bit_flip_pair(gamma_t));
}

DensityOperator algorithmic_cooling_state(int n, double b) {
  if (n < 1) throw DomainError("need at least one qubit");
  if (!(b >= 1.0) || !std::isfinite(b)) throw DomainError("algorithmic cooling needs finite b >= 1");
  const int big_n = 1 << n;
  const int half = big_n / 2;
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(big_n));
  p.push_back(std::pow(b, half));
  for (int e = half - 1; e >= 1; --e) {
    p.push_back(std::pow(b, e));
    p.push_back(std::pow(b, e));
  }
  p.push_back(1.0);
  const double z = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= z;
  return models::diagonal_state(p, Dims(static_cast<std::size_t>(n), 2));
}

DensityOperator test2_target(int n, double b) {
  if (!(b > 1.0)) throw DomainError("test2_target needs b > 1");
  const auto alg = algorithmic_cooling_state(n, b);
  const int big_n = 1 << n;
  const double top = std::real(alg.matrix()(0, 0));
  std::vector<double> p(static_cast<std::size_t>(big_n), (1.0 - top) / (big_n - 1));
  p[0] = top;
  return models::diagonal_state(p, alg.dims());
}

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::amp_damp: return "amp_damp";
    case NoiseKind::bit_flip: return "bit_flip";
    case NoiseKind::finite_T: return "finite_T";
  }
  return "?";
}

NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "amp_damp") return NoiseKind::amp_damp;
  if (s == "bit_flip") return NoiseKind::bit_flip;
  if (s == "finite_T") return NoiseKind::finite_T;
  throw DomainError("unknown noise kind '" + s + "'");
}

std::string to_string(Reachable r) {
  switch (r) {
    case Reachable::yes_exact: return "yes_exact";
    case Reachable::yes_asymptotic: return "yes_asymptotic";
    case Reachable::no: return "no";
    case Reachable::conservative_unknown: return "conservative_unknown";
  }
  return "?";
}

bool passive_pairs_feasible(std::vector<double> passive, double b) {
  if (passive.size() % 2 != 0) return false;
  // Adjacent pairing of the sorted values minimizes the largest pair ratio.
  passive = sorted_descending(std::move(passive));
  for (std::size_t i = 0; i + 1 < passive.size(); i += 2) {
    if (!stopping_condition(passive[i] / passive[i + 1], b)) return false;
  }
  return true;
}

namespace {

bool spectra_equal(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-10) return false;
  }
  return true;
}

bool chain_feasible(std::vector<double> y, const std::vector<TTransform>& ts, double b) {
  for (const auto& t : ts) {
    std::vector<double> passive;
    for (int i = 0; i < static_cast<int>(y.size()); ++i) {
      if (i != t.i && i != t.j) passive.push_back(y[static_cast<std::size_t>(i)]);
    }
    if (!passive_pairs_feasible(passive, b)) return false;
    y = sorted_descending(apply_t_transform(std::move(y), t));
  }
  return true;
}

}  // namespace

ReachabilityVerdict reachability_verdict(const DensityOperator& rho0, const DensityOperator& target,
                                         NoiseKind kind, double b) {
  if (rho0.dims() != target.dims()) throw DimensionError("states have different dims");
  const auto y = quantum::spectrum_descending(rho0);
  const auto x = quantum::spectrum_descending(target);
  const int n = static_cast<int>(x.size());
  ReachabilityVerdict v;
  if (spectra_equal(x, y)) {
    v.reachable = Reachable::yes_exact;
    v.reason = "equal spectra: reachable by unitary control alone";
    return v;
  }
  switch (kind) {
    case NoiseKind::amp_damp:
      v.reachable = Reachable::yes_asymptotic;
      v.reason = "amplitude damping acts transitively on all states";
      return v;
    case NoiseKind::bit_flip: {
      MajorizationCertificate cert{y, x, {}, 0.0};
      if (majorizes(x, y)) {
        cert.transforms = hlp_t_transforms(y, x);
        const bool finite = std::none_of(cert.transforms.begin(), cert.transforms.end(),
                                         [](const TTransform& t) { return std::abs(2.0 * t.lambda - 1.0) < 1e-12; });
        v.reachable = finite ? Reachable::yes_exact : Reachable::yes_asymptotic;
        v.reason = "target spectrum is majorized by the initial spectrum";
      } else {
        cert.floor = majorization_floor(x, y);
        v.reachable = Reachable::no;
        v.reason = "target spectrum is not majorized by the initial spectrum";
      }
      v.witness = cert;
      return v;
    }
    case NoiseKind::finite_T: {
      if (!(b > 1.0) || !std::isfinite(b)) throw DomainError("finite_T verdict needs a finite b > 1");
      const double uniform = 1.0 / n;
      const bool to_mixed = std::all_of(x.begin(), x.end(), [&](double p) { return std::abs(p - uniform) <= 1e-10; });
      if (to_mixed) {
        v.reachable = Reachable::yes_asymptotic;
        v.reason = "the maximally mixed state is reachable by averaging";
        return v;
      }
      int qubits = 0;
      while ((1 << qubits) < n) ++qubits;
      if ((1 << qubits) == n) {
        const auto alg = quantum::spectrum_descending(algorithmic_cooling_state(qubits, b));
        if (majorizes(x, alg)) {
          MajorizationCertificate cert{alg, x, hlp_t_transforms(alg, x), 0.0};
          if (chain_feasible(alg, cert.transforms, b)) {
            v.reachable = Reachable::yes_asymptotic;
            v.reason = "reachable from the algorithmic-cooling state by stopping-feasible T-transforms";
            v.witness = cert;
            return v;
          }
        }
      }
      v.reachable = Reachable::conservative_unknown;
      v.reason = "not covered by the finite-temperature inclusions";
      return v;
    }
  }
  return v;
}

}  // namespace noiseswitch::protocols
