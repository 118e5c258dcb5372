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

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "noiseswitch/protocols.hpp"

namespace noiseswitch::protocols {

using numerics::Complex;
using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Plan container

std::string to_string(StepKind k) {
  switch (k) {
    case StepKind::unitary: return "unitary";
    case StepKind::noise: return "noise";
    case StepKind::trotter_decouple: return "trotter_decouple";
  }
  return "?";
}

StepKind step_kind_from_string(const std::string& s) {
  if (s == "unitary") return StepKind::unitary;
  if (s == "noise") return StepKind::noise;
  if (s == "trotter_decouple") return StepKind::trotter_decouple;
  throw DomainError("unknown plan step kind '" + s + "'");
}

double ProtocolPlan::total_duration() const {
  double t = 0.0;
  for (const auto& s : steps) t += s.duration;
  return t;
}

double ProtocolPlan::noise_time() const {
  double t = 0.0;
  for (const auto& s : steps) {
    if (s.kind != StepKind::unitary && s.rate > 0.0) t += s.duration;
  }
  return t;
}

int ProtocolPlan::noise_steps() const {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const PlanStep& s) {
    return s.kind != StepKind::unitary && s.rate > 0.0 && s.duration > 0.0;
  }));
}

void ProtocolPlan::validate(const ControlSystem& system) const {
  const int n = system.dimension();
  if (quantum::total_dimension(dims) != n) throw DimensionError("plan dims do not match the system");
  for (const auto& s : steps) {
    if (!(s.duration >= 0.0) || !std::isfinite(s.duration)) throw DomainError("plan step duration must be >= 0");
    if (s.kind == StepKind::unitary || s.kind == StepKind::trotter_decouple) {
      if (s.unitary.rows() != n || s.unitary.cols() != n) throw DimensionError("plan unitary has the wrong size");
      const ComplexMatrix id = s.unitary.adjoint() * s.unitary;
      if (!id.isApprox(ComplexMatrix::Identity(n, n), 1e-9)) throw DomainError("plan step '" + s.label + "' is not unitary");
    }
    if (s.kind != StepKind::unitary) {
      if (s.channel < 0 || s.channel >= system.channel_count()) throw DomainError("plan noise channel out of range");
      const double cap = system.channels[static_cast<std::size_t>(s.channel)].max_rate;
      if (s.rate < 0.0 || s.rate > cap * (1.0 + 1e-12)) throw BoundError("plan noise rate outside channel bounds");
    }
    if (s.kind == StepKind::trotter_decouple && s.trotter_k < 1) throw DomainError("trotter_k must be >= 1");
  }
}

namespace {

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return {};
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c));
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

std::string ProtocolPlan::to_json() const {
  Json j;
  j["name"] = name;
  j["dims"] = dims;
  j["predicted_error"] = predicted_error;
  j["total_duration"] = total_duration();
  j["noise_time"] = noise_time();
  Json arr = Json::array();
  for (const auto& s : steps) {
    Json e;
    e["kind"] = to_string(s.kind);
    e["label"] = s.label;
    e["duration"] = s.duration;
    if (s.kind != StepKind::unitary) {
      e["channel"] = s.channel;
      e["rate"] = s.rate;
    }
    if (s.kind == StepKind::trotter_decouple) e["trotter_k"] = s.trotter_k;
    if (s.unitary.size() > 0) e["unitary"] = matrix_to_json(s.unitary);
    arr.push_back(e);
  }
  j["steps"] = arr;
  return j.dump(2);
}

ProtocolPlan ProtocolPlan::from_json(const std::string& text) {
  ProtocolPlan p;
  try {
    const Json j = Json::parse(text);
    p.name = j.value("name", "");
    p.dims = j.at("dims").get<Dims>();
    p.predicted_error = j.value("predicted_error", 0.0);
    for (const auto& e : j.at("steps")) {
      PlanStep s;
      s.kind = step_kind_from_string(e.at("kind").get<std::string>());
      s.label = e.value("label", "");
      s.duration = e.at("duration").get<double>();
      s.channel = e.value("channel", 0);
      s.rate = e.value("rate", 0.0);
      s.trotter_k = e.value("trotter_k", 0);
      if (e.contains("unitary")) s.unitary = matrix_from_json(e.at("unitary"));
      p.steps.push_back(std::move(s));
    }
  } catch (const Json::exception& ex) {
    throw ConfigError(std::string("malformed plan JSON: ") + ex.what());
  }
  return p;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

void conjugate(const ComplexMatrix& u, ComplexMatrix& rho) { rho = u * rho * u.adjoint(); }

}  // namespace

ComplexMatrix execute_plan(const ControlSystem& system, const ProtocolPlan& plan, const ComplexMatrix& rho0) {
  plan.validate(system);
  if (rho0.rows() != system.dimension()) throw DimensionError("initial state does not match the system");
  ComplexMatrix rho = rho0;
  const std::vector<double> coherent(static_cast<std::size_t>(system.control_count()), 0.0);
  for (const auto& s : plan.steps) {
    if (s.kind == StepKind::unitary) {
      conjugate(s.unitary, rho);
      continue;
    }
    std::vector<double> noise(static_cast<std::size_t>(system.channel_count()), 0.0);
    noise[static_cast<std::size_t>(s.channel)] = s.rate;
    const auto form = quantum::lindblad_form(system, coherent, noise);
    if (s.kind == StepKind::noise) {
      propagation::evolve_in_place(form, s.duration, rho);
      continue;
    }
    const double h = s.duration / (2.0 * s.trotter_k);
    for (int p = 0; p < s.trotter_k; ++p) {
      if (p % 2 == 0) {
        propagation::evolve_in_place(form, h, rho);
        conjugate(s.unitary, rho);
        propagation::evolve_in_place(form, h, rho);
        conjugate(s.unitary.adjoint(), rho);
      } else {
        conjugate(s.unitary, rho);
        propagation::evolve_in_place(form, h, rho);
        conjugate(s.unitary.adjoint(), rho);
        propagation::evolve_in_place(form, h, rho);
      }
    }
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Building blocks

ComplexMatrix permutation_unitary(const std::vector<int>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) u(perm[static_cast<std::size_t>(k)], k) = 1.0;
  return u;
}

ComplexMatrix swap_sites(int site, int n) {
  if (site < 0 || site + 1 >= n) throw DomainError("swap_sites: site out of range");
  const int dim = 1 << n;
  std::vector<int> perm(static_cast<std::size_t>(dim));
  const int hi = n - 1 - site;  // bit of `site` (site 0 is the most significant)
  const int lo = hi - 1;
  for (int k = 0; k < dim; ++k) {
    const int a = (k >> hi) & 1;
    const int b = (k >> lo) & 1;
    int m = k & ~((1 << hi) | (1 << lo));
    m |= (b << hi) | (a << lo);
    perm[static_cast<std::size_t>(k)] = m;
  }
  return permutation_unitary(perm);
}

namespace {

int qubit_count(const Dims& dims) {
  for (int d : dims) {
    if (d != 2) throw DimensionError("protocol plans need a qubit register");
  }
  return static_cast<int>(dims.size());
}

// 1 ⊕ R ⊕ ... ⊕ R with R a pi/2 rotation about y: every pair except the
// first is turned into an eigenstate of the bit flip.
ComplexMatrix protection_unitary(int dim) {
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  const double c = std::sqrt(0.5);
  for (int m = 2; m < dim; m += 2) {
    u(m, m) = c;
    u(m, m + 1) = -c;
    u(m + 1, m) = c;
    u(m + 1, m + 1) = c;
  }
  return u;
}

PlanStep unitary_step(std::string label, ComplexMatrix u, double duration = 0.0) {
  PlanStep s;
  s.kind = StepKind::unitary;
  s.label = std::move(label);
  s.unitary = std::move(u);
  s.duration = duration;
  return s;
}

PlanStep noise_step(std::string label, double rate, double duration) {
  PlanStep s;
  s.kind = StepKind::noise;
  s.label = std::move(label);
  s.rate = rate;
  s.duration = duration;
  return s;
}

// Permutation sending basis index order[r] to r.
std::vector<int> ranking_permutation(const std::vector<double>& v) {
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return v[static_cast<std::size_t>(a)] > v[static_cast<std::size_t>(b)];
  });
  std::vector<int> perm(v.size());
  for (std::size_t r = 0; r < order.size(); ++r) perm[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
  return perm;
}

bool is_half(double lambda) { return std::abs(2.0 * lambda - 1.0) < 1e-12; }

// Realized eps for every transform given a budget for the asymptotic ones.
struct Realization {
  std::vector<double> eps;
  std::vector<bool> swap;
  std::vector<double> durations;
};

Realization realize(const std::vector<TTransform>& ts, double gamma, double asym_duration) {
  Realization r;
  for (const auto& t : ts) {
    if (is_half(t.lambda)) {
      r.durations.push_back(asym_duration);
      r.eps.push_back(std::exp(-gamma * asym_duration));
      r.swap.push_back(false);
    } else {
      const bool swap = t.lambda < 0.5;
      const double e = swap ? 1.0 - 2.0 * t.lambda : 2.0 * t.lambda - 1.0;
      r.eps.push_back(e);
      r.swap.push_back(swap);
      r.durations.push_back(-std::log(e) / gamma);
    }
  }
  return r;
}

// Diagonal bookkeeping: ideal vector drives the ordering, `actual` follows
// the realized maps. Returns the final error against x.
double predicted_error(const std::vector<double>& y, const std::vector<double>& x,
                       const std::vector<TTransform>& ts, const Realization& r) {
  std::vector<double> ideal = sorted_descending(y);
  std::vector<double> actual = ideal;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    const auto& t = ts[s];
    const auto i = static_cast<std::size_t>(t.i);
    const auto j = static_cast<std::size_t>(t.j);
    double a = actual[i], b = actual[j];
    if (r.swap[s]) std::swap(a, b);
    const double e = r.eps[s];
    actual[i] = 0.5 * (1.0 + e) * a + 0.5 * (1.0 - e) * b;
    actual[j] = 0.5 * (1.0 - e) * a + 0.5 * (1.0 + e) * b;
    ideal = apply_t_transform(std::move(ideal), t);
    const auto perm = ranking_permutation(ideal);
    std::vector<double> ni(ideal.size()), na(ideal.size());
    for (std::size_t k = 0; k < ideal.size(); ++k) {
      ni[static_cast<std::size_t>(perm[k])] = ideal[k];
      na[static_cast<std::size_t>(perm[k])] = actual[k];
    }
    ideal = std::move(ni);
    actual = std::move(na);
  }
  double err = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) err += (actual[k] - x[k]) * (actual[k] - x[k]);
  return std::sqrt(err);
}

double round_up(double t, double quantum) {
  if (quantum <= 0.0) return t;
  return std::ceil(t / quantum - 1e-9) * quantum;
}

double choose_asymptotic_duration(const std::vector<double>& y, const std::vector<double>& x,
                                  const std::vector<TTransform>& ts, double gamma, const PlanOptions& o) {
  double budget = o.budget;
  if (o.target_error > 0.0) {
    constexpr double kMaxBudget = 60.0;
    auto err = [&](double b) { return predicted_error(y, x, ts, realize(ts, gamma, b / gamma)); };
    if (err(kMaxBudget) > o.target_error) {
      budget = kMaxBudget;
    } else {
      double lo = 0.0, hi = kMaxBudget;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (err(mid) <= o.target_error ? hi : lo) = mid;
      }
      budget = hi;
    }
  }
  return round_up(budget / gamma, o.duration_quantum);
}

struct Spectral {
  std::vector<double> values;
  ComplexMatrix vectors;
};

Spectral spectral(const DensityOperator& rho) {
  const auto e = numerics::hermitian_eigensystem(rho.matrix());
  Spectral s;
  s.values.assign(e.values.data(), e.values.data() + e.values.size());
  s.vectors = e.vectors;
  return s;
}

ProtocolPlan build_bit_flip_plan(const std::string& name, const DensityOperator& rho0,
                                 const DensityOperator& target, const ControlSystem& system,
                                 const std::vector<TTransform>& ts, const PlanOptions& o) {
  if (rho0.dims() != target.dims() || rho0.dims() != system.dims) throw DimensionError("plan states do not match the system");
  const int n = qubit_count(system.dims);
  if (system.channel_count() < 1) throw DomainError("plan needs a switchable channel");
  const int dim = 1 << n;
  const double gamma = o.gamma > 0.0 ? o.gamma : system.channels.front().max_rate;
  if (!(gamma > 0.0)) throw DomainError("plan noise rate must be positive");
  if (o.trotter_k < 1) throw DomainError("trotter_k must be >= 1");
  const Spectral sy = spectral(rho0);
  const Spectral sx = spectral(target);
  const double asym = choose_asymptotic_duration(sy.values, sx.values, ts, gamma, o);
  const Realization r = realize(ts, gamma, asym);

  ProtocolPlan plan;
  plan.name = name;
  plan.dims = system.dims;
  plan.predicted_error = predicted_error(sy.values, sx.values, ts, r);
  plan.steps.push_back(unitary_step("diagonalize initial state", sy.vectors.adjoint()));
  const ComplexMatrix protect = protection_unitary(dim);
  const ComplexMatrix pulse = quantum::embed_local(models::pauli_x(), n - 1, system.dims);
  std::vector<double> ideal = sy.values;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    const auto& t = ts[s];
    if (r.durations[s] <= 0.0) {
      ideal = sorted_descending(apply_t_transform(std::move(ideal), t));
      continue;
    }
    std::vector<int> perm(static_cast<std::size_t>(dim));
    int next = 2;
    for (int k = 0; k < dim; ++k) {
      if (k == t.i) perm[static_cast<std::size_t>(k)] = 0;
      else if (k == t.j) perm[static_cast<std::size_t>(k)] = 1;
      else perm[static_cast<std::size_t>(k)] = next++;
    }
    plan.steps.push_back(unitary_step("route pair and protect", protect * permutation_unitary(perm)));
    PlanStep noise;
    noise.kind = StepKind::trotter_decouple;
    noise.label = is_half(t.lambda) ? "bit-flip averaging (truncated)" : "bit-flip T-transform";
    noise.unitary = pulse;
    noise.rate = gamma;
    noise.duration = r.durations[s];
    noise.trotter_k = o.trotter_k;
    plan.steps.push_back(noise);
    // Physical positions after routing: ideal[k] -> perm[k]. For lambda < 1/2
    // the bit flip realizes the transform with the pair labels exchanged.
    std::vector<double> routed(static_cast<std::size_t>(dim));
    const auto after = apply_t_transform(ideal, t);
    for (int k = 0; k < dim; ++k) routed[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = after[static_cast<std::size_t>(k)];
    if (r.swap[s]) std::swap(routed[0], routed[1]);
    const auto sort_perm = ranking_permutation(routed);
    plan.steps.push_back(unitary_step("unprotect and sort", permutation_unitary(sort_perm) * protect.adjoint()));
    ideal = sorted_descending(after);
  }
  plan.steps.push_back(unitary_step("rotate into target eigenbasis", sx.vectors));
  return plan;
}

std::vector<TTransform> greedy_transforms(std::vector<double> y, const std::vector<double>& x) {
  std::vector<TTransform> out;
  const int n = static_cast<int>(y.size());
  auto dist2 = [&](const std::vector<double>& v) {
    double d = 0.0;
    for (int k = 0; k < n; ++k) d += (v[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(k)]) * (v[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(k)]);
    return d;
  };
  constexpr double kTol = 1e-13;
  for (int iter = 0; iter < 4 * n * n; ++iter) {
    double best_score = 0.0;
    TTransform best{};
    bool found = false;
    std::vector<double> best_y;
    const double d0 = dist2(y);
    for (int i = 0; i < n; ++i) {
      const double di = y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
      if (di <= kTol) continue;
      for (int j = 0; j < n; ++j) {
        const double dj = x[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(j)];
        if (dj <= kTol) continue;
        const double gap = y[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)];
        if (gap <= kTol) continue;
        const double m = std::min(di, dj);
        const double eps = 1.0 - 2.0 * m / gap;
        if (eps <= 1e-9) continue;  // an averaging step; left to the completion
        const TTransform t{i, j, 1.0 - m / gap};
        auto ny = apply_t_transform(y, t);
        if (std::abs(ny[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]) <= 4 * kTol) ny[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
        if (std::abs(ny[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)]) <= 4 * kTol) ny[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
        ny = sorted_descending(std::move(ny));
        if (!majorizes(x, ny)) continue;
        const double score = (d0 - dist2(ny)) / -std::log(eps);
        if (!found || score > best_score * (1.0 + 1e-12)) {
          found = true;
          best_score = score;
          best = t;
          best_y = std::move(ny);
        }
      }
    }
    if (!found) break;
    out.push_back(best);
    y = std::move(best_y);
  }
  const auto rest = hlp_t_transforms(y, x);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace

ProtocolPlan hlp_full_plan(const DensityOperator& rho0, const DensityOperator& target,
                           const ControlSystem& system, const PlanOptions& options) {
  const auto y = quantum::spectrum_descending(rho0);
  const auto x = quantum::spectrum_descending(target);
  return build_bit_flip_plan("hlp", rho0, target, system, hlp_t_transforms(y, x), options);
}

ProtocolPlan greedy_equalize_plan(const DensityOperator& rho0, const DensityOperator& target,
                                  const ControlSystem& system, const PlanOptions& options) {
  const auto y = quantum::spectrum_descending(rho0);
  const auto x = quantum::spectrum_descending(target);
  if (!majorizes(x, y)) throw ReachabilityError("target spectrum is not majorized by the initial one");
  ProtocolPlan greedy = build_bit_flip_plan("greedy", rho0, target, system, greedy_transforms(y, x), options);
  ProtocolPlan hlp = hlp_full_plan(rho0, target, system, options);
  if (hlp.noise_time() < greedy.noise_time() * (1.0 - 1e-12)) {
    hlp.name = "greedy";
    return hlp;
  }
  return greedy;
}

// ---------------------------------------------------------------------------
// Cooling and erasure

namespace {

double pairs(int n) { return 0.5 * n * (n - 1); }

ControlSystem qubit_register_check(int n, double J, double gamma_max) {
  if (n < 1) throw DomainError("need at least one qubit");
  if (!(J > 0.0)) throw DomainError("J must be positive");
  if (!(gamma_max > 0.0)) throw DomainError("gamma_max must be positive");
  return {};
}

// Rounds bringing each qubit in turn to the terminal site.
template <class Round>
void for_each_round(int n, double J, ProtocolPlan& plan, Round&& round) {
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < r; ++s) {
      plan.steps.push_back(unitary_step("swap", swap_sites(n - 1 - r + s, n), 1.0 / J));
    }
    round();
  }
}

}  // namespace

double cooling_residual(int n, double epsilon) {
  const double d2 = 1.0 - 2.0 * std::pow(1.0 - 0.5 * epsilon, n) +
                    std::pow(1.0 - epsilon + 0.5 * epsilon * epsilon, n);
  return std::sqrt(std::max(0.0, d2));
}

double cooling_duration_bound(int n, double J, double gamma_max, double delta_f) {
  qubit_register_check(n, J, gamma_max);
  if (!(delta_f > 0.0)) throw DomainError("delta_F must be positive");
  return pairs(n) / J + (n / gamma_max) * std::log(std::sqrt(n * (n + 1.0)) / (2.0 * delta_f));
}

double cooling_error_at(int n, double J, double gamma_max, double tau) {
  qubit_register_check(n, J, gamma_max);
  const double tq = std::max(0.0, tau - pairs(n) / J) / n;
  return cooling_residual(n, std::exp(-gamma_max * tq));
}

TimedPlan cooling_protocol(int n, double J, double gamma_max, double delta_f) {
  TimedPlan out;
  out.duration_bound = cooling_duration_bound(n, J, gamma_max, delta_f);
  const double tq = std::max(0.0, (out.duration_bound - pairs(n) / J) / n);
  out.plan.name = "cooling";
  out.plan.dims = Dims(static_cast<std::size_t>(n), 2);
  for_each_round(n, J, out.plan, [&] { out.plan.steps.push_back(noise_step("amplitude damping", gamma_max, tq)); });
  out.plan.predicted_error = cooling_residual(n, std::exp(-gamma_max * tq));
  return out;
}

std::string to_string(ErasureMode m) {
  return m == ErasureMode::amp_damp_exact ? "amp_damp_exact" : "bit_flip_asymptotic";
}

ErasureMode erasure_mode_from_string(const std::string& s) {
  if (s == "amp_damp_exact") return ErasureMode::amp_damp_exact;
  if (s == "bit_flip_asymptotic") return ErasureMode::bit_flip_asymptotic;
  throw DomainError("unknown erasure mode '" + s + "'");
}

double bit_flip_erasure_residual(int n, double epsilon) {
  const double d2 = (std::pow(1.0 + epsilon * epsilon, n) - 1.0) / std::pow(2.0, n);
  return std::sqrt(std::max(0.0, d2));
}

double bit_flip_erasure_bound(int n, double J, double gamma_max, double delta_f) {
  qubit_register_check(n, J, gamma_max);
  if (!(delta_f > 0.0)) throw DomainError("delta_F must be positive");
  const double e2 = std::pow(std::pow(2.0, n) * delta_f * delta_f + 1.0, 1.0 / n) - 1.0;
  return pairs(n) / J - (n / (2.0 * gamma_max)) * std::log(e2);
}

double bit_flip_erasure_error_at(int n, double J, double gamma_max, double tau) {
  qubit_register_check(n, J, gamma_max);
  const double tq = std::max(0.0, tau - pairs(n) / J) / n;
  return bit_flip_erasure_residual(n, std::exp(-gamma_max * tq));
}

TimedPlan erasure_protocol(int n, double J, double gamma_max, ErasureMode mode, double delta_f) {
  qubit_register_check(n, J, gamma_max);
  TimedPlan out;
  out.plan.dims = Dims(static_cast<std::size_t>(n), 2);
  if (mode == ErasureMode::amp_damp_exact) {
    out.plan.name = "erasure_amp_damp";
    const double t = std::log(2.0) / gamma_max;
    const ComplexMatrix flip = quantum::embed_local(models::pauli_x(), n - 1, out.plan.dims);
    for_each_round(n, J, out.plan, [&] {
      out.plan.steps.push_back(unitary_step("flip terminal qubit", flip));
      out.plan.steps.push_back(noise_step("amplitude damping", gamma_max, t));
    });
    out.plan.predicted_error = 0.0;
    out.duration_bound = pairs(n) / J + n * t;
  } else {
    out.plan.name = "erasure_bit_flip";
    out.duration_bound = bit_flip_erasure_bound(n, J, gamma_max, delta_f);
    const double tq = std::max(0.0, (out.duration_bound - pairs(n) / J) / n);
    for_each_round(n, J, out.plan, [&] { out.plan.steps.push_back(noise_step("bit flip", gamma_max, tq)); });
    out.plan.predicted_error = bit_flip_erasure_residual(n, std::exp(-gamma_max * tq));
  }
  return out;
}

}  // namespace noiseswitch::protocols
