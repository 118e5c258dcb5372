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

#include "noiseswitch/models.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace noiseswitch::models {

using numerics::Complex;
using numerics::kI;
using quantum::Control;
using quantum::embed_local;
using quantum::JumpTerm;
using quantum::LindbladChannel;
using quantum::StaticChannel;

namespace {
constexpr double kPi = std::numbers::pi;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = -kI;
  m(1, 0) = kI;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

ComplexMatrix lowering(int levels) {
  ComplexMatrix a = ComplexMatrix::Zero(levels, levels);
  for (int k = 1; k < levels; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

ComplexMatrix noise_generator(double theta) {
  if (!(theta >= 0.0 && theta <= kPi / 2.0 + 1e-15)) {
    throw DomainError("noise_generator: theta must lie in [0, pi/2]");
  }
  ComplexMatrix v = ComplexMatrix::Zero(2, 2);
  v(0, 1) = std::cos(theta / 2.0);
  v(1, 0) = std::sin(theta / 2.0);
  return v;
}

namespace {

ComplexMatrix zz_chain(int n, double J) {
  const Dims dims(static_cast<std::size_t>(n), 2);
  const int dim = quantum::total_dimension(dims);
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k + 1 < n; ++k) {
    h += (kPi * J * 0.5) * (embed_local(pauli_z(), k, dims) * embed_local(pauli_z(), k + 1, dims));
  }
  return h;
}

void add_local_xy_controls(ControlSystem& s) {
  const int n = static_cast<int>(s.dims.size());
  for (int k = 0; k < n; ++k) {
    s.controls.push_back({"x" + std::to_string(k + 1), 0.5 * embed_local(pauli_x(), k, s.dims)});
    s.controls.push_back({"y" + std::to_string(k + 1), 0.5 * embed_local(pauli_y(), k, s.dims)});
  }
}

void check_chain_args(int n, double J, double gamma_max) {
  if (n < 1) throw DomainError("chain length must be >= 1");
  if (!(J > 0.0)) throw DomainError("coupling J must be positive");
  if (!(gamma_max >= 0.0)) throw DomainError("gamma_max must be >= 0");
}

}  // namespace

ControlSystem ising_chain(int n, double J, double theta, double gamma_max, double gamma_dephasing,
                          double lamb_ratio) {
  check_chain_args(n, J, gamma_max);
  if (!(gamma_dephasing >= 0.0)) throw DomainError("gamma_dephasing must be >= 0");
  ControlSystem s;
  s.name = "ising_chain";
  s.dims = Dims(static_cast<std::size_t>(n), 2);
  s.drift = zz_chain(n, J);
  add_local_xy_controls(s);
  LindbladChannel ch;
  ch.label = "noise";
  ch.terms.push_back({embed_local(noise_generator(theta), n - 1, s.dims), 1.0});
  ch.max_rate = gamma_max;
  ch.lamb_ratio = lamb_ratio;
  ch.lamb_operator = 0.5 * embed_local(pauli_z(), n - 1, s.dims);
  s.channels.push_back(std::move(ch));
  if (gamma_dephasing > 0.0) {
    for (int k = 0; k < n; ++k) {
      s.static_channels.push_back({"dephasing" + std::to_string(k + 1),
                                   embed_local(pauli_z(), k, s.dims) / std::sqrt(2.0),
                                   gamma_dephasing});
    }
  }
  quantum::validate_system(s);
  return s;
}

ControlSystem ising_chain_thermal(int n, double J, double b, double gamma_max,
                                  double omega_over_cutoff) {
  check_chain_args(n, J, gamma_max);
  if (!(b >= 1.0) || !std::isfinite(b)) throw DomainError("thermal Ising chain needs finite b >= 1");
  ControlSystem s;
  s.name = "ising_chain_thermal";
  s.dims = Dims(static_cast<std::size_t>(n), 2);
  s.drift = zz_chain(n, J);
  add_local_xy_controls(s);
  ComplexMatrix down = ComplexMatrix::Zero(2, 2);
  ComplexMatrix up = ComplexMatrix::Zero(2, 2);
  down(0, 1) = 1.0;
  up(1, 0) = 1.0;
  LindbladChannel ch;
  ch.label = "bath";
  ch.terms.push_back({embed_local(down, n - 1, s.dims), b / (b + 1.0)});
  ch.terms.push_back({embed_local(up, n - 1, s.dims), 1.0 / (b + 1.0)});
  ch.max_rate = gamma_max;
  ch.lamb_ratio = bath::qubit_lamb_ratio(b, omega_over_cutoff);
  ch.lamb_operator = 0.5 * embed_local(pauli_z(), n - 1, s.dims);
  s.channels.push_back(std::move(ch));
  quantum::validate_system(s);
  return s;
}

bath::BathSpec gmon_bath(const GmonParams& p) {
  if (!(p.boltzmann > 0.0 && p.boltzmann < 1.0)) {
    throw DomainError("GMon bath needs 0 < b < 1");
  }
  if (!(p.carrier_ghz > 0.0 && p.cutoff_ghz > 0.0)) throw DomainError("GMon frequencies must be positive");
  bath::BathSpec spec;
  spec.cutoff = 2.0 * kPi * p.cutoff_ghz;
  spec.transition = 2.0 * kPi * p.carrier_ghz;
  spec.beta = -std::log(p.boltzmann) / spec.transition;
  spec.statistics = bath::Statistics::boson;
  return spec;
}

ControlSystem gmon_chain(const GmonParams& p) {
  if (p.n < 1) throw DomainError("GMon chain length must be >= 1");
  if (!(p.coupling_ghz > 0.0)) throw DomainError("GMon coupling must be positive");
  const bath::BathSpec spec = gmon_bath(p);
  const double unit = p.coupling_ghz;  // rates in units of J
  ControlSystem s;
  s.name = "gmon_chain";
  s.dims = Dims(static_cast<std::size_t>(p.n), 3);
  const int dim = quantum::total_dimension(s.dims);
  const ComplexMatrix a = lowering(3);
  const ComplexMatrix num = a.adjoint() * a;
  ComplexMatrix level2 = ComplexMatrix::Zero(3, 3);
  level2(2, 2) = 1.0;
  const double anharm = 2.0 * kPi * p.anharmonicity_ghz / unit;
  s.drift = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k + 1 < p.n; ++k) {
    const ComplexMatrix hop = embed_local(a.adjoint(), k, s.dims) * embed_local(a, k + 1, s.dims);
    s.drift += (kPi * 0.5) * (hop + hop.adjoint());
  }
  for (int k = 0; k < p.n; ++k) s.drift -= anharm * embed_local(level2, k, s.dims);
  const double detuning = 2.0 * kPi * p.detuning_max_ghz / unit;
  const double drive = 2.0 * kPi * p.drive_max_ghz / unit;
  for (int k = 0; k < p.n; ++k) {
    s.controls.push_back({"z" + std::to_string(k + 1), embed_local(num, k, s.dims), -detuning, detuning});
  }
  ComplexMatrix fx = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix fy = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < p.n; ++k) {
    const ComplexMatrix ak = embed_local(a, k, s.dims);
    fx += 0.5 * (ak + ak.adjoint());
    fy += (0.5 * kI) * (ak - ak.adjoint());
  }
  s.controls.push_back({"x", fx, -drive, drive});
  s.controls.push_back({"y", fy, -drive, drive});
  const double b = p.boltzmann;
  LindbladChannel ch;
  ch.label = "line";
  ch.terms.push_back({embed_local(a, p.n - 1, s.dims), 0.5 / (b + 1.0)});
  ch.terms.push_back({embed_local(a.adjoint(), p.n - 1, s.dims), 0.5 * b / (b + 1.0)});
  ch.max_rate = p.gamma_max_ghz / unit;
  ch.lamb_ratio = p.lamb_shift ? bath::gmon_lamb_ratio(b, spec.transition / spec.cutoff) : 0.0;
  ch.lamb_operator = embed_local(num, p.n - 1, s.dims);
  s.channels.push_back(std::move(ch));
  quantum::validate_system(s);
  return s;
}

double gmon_kappa_to_rate(double kappa, const GmonParams& p) {
  const bath::BathSpec spec = gmon_bath(p);
  return 2.0 * kappa * kappa * bath::damping_rate(spec.transition, spec) * (p.boltzmann + 1.0) /
         p.coupling_ghz;
}

EinsteinCoefficients einstein_coefficients(const GmonParams& p, double kappa) {
  const bath::BathSpec spec = gmon_bath(p);
  const double k2 = kappa * kappa / p.coupling_ghz;
  EinsteinCoefficients e;
  e.down_10 = k2 * bath::damping_rate(spec.transition, spec);
  e.up_01 = k2 * bath::damping_rate(-spec.transition, spec);
  e.down_21 = 2.0 * e.down_10;
  e.up_12 = 2.0 * e.up_01;
  return e;
}

EinsteinCoefficients rates_from_dissipator(const ControlSystem& gmon, double gamma) {
  if (gmon.dims.size() != 1 || gmon.dims[0] != 3) {
    throw DimensionError("rates_from_dissipator expects a single GMon");
  }
  const ComplexMatrix g = gamma * quantum::channel_dissipator(gmon.channels.at(0));
  // vec index of |k><k| is k * 3 + k under column stacking.
  auto rate = [&](int from, int to) { return -g(to * 3 + to, from * 3 + from).real(); };
  return {rate(1, 0), rate(0, 1), rate(2, 1), rate(1, 2)};
}

ControlSystem ion_trap_collective(int n, double a, double gamma_max) {
  if (n < 1) throw DomainError("ion trap needs at least one qubit");
  if (!(a > 0.0)) throw DomainError("interaction a must be positive");
  if (!(gamma_max >= 0.0)) throw DomainError("gamma_max must be >= 0");
  ControlSystem s;
  s.name = "ion_trap_collective";
  s.dims = Dims(static_cast<std::size_t>(n), 2);
  const int dim = quantum::total_dimension(s.dims);
  s.drift = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix fx = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix fy = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    fx += 0.5 * embed_local(pauli_x(), k, s.dims);
    fy += 0.5 * embed_local(pauli_y(), k, s.dims);
  }
  s.controls.push_back({"Fx", a * fx});
  s.controls.push_back({"Fy", a * fy});
  s.controls.push_back({"Fx2", a * (fx * fx)});
  s.controls.push_back({"Fy2", a * (fy * fy)});
  for (int k = 0; k < n; ++k) {
    s.controls.push_back({"z" + std::to_string(k + 1), (0.5 * a) * embed_local(pauli_z(), k, s.dims)});
  }
  LindbladChannel ch;
  ch.label = "noise";
  ch.terms.push_back({embed_local(noise_generator(0.0), n - 1, s.dims), 1.0});
  ch.max_rate = gamma_max * a;
  ch.lamb_operator = 0.5 * embed_local(pauli_z(), n - 1, s.dims);
  s.channels.push_back(std::move(ch));
  quantum::validate_system(s);
  return s;
}

DensityOperator diagonal_state(const std::vector<double>& populations, const Dims& dims) {
  const int n = quantum::total_dimension(dims);
  if (static_cast<int>(populations.size()) != n) {
    throw DimensionError("population count does not match dims");
  }
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = populations[static_cast<std::size_t>(k)];
  return DensityOperator(m, dims);
}

TargetState target_state(const std::string& label, const Dims& dims) {
  const int n = quantum::total_dimension(dims);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  if (label == "ground") {
    m(0, 0) = 1.0;
  } else if (label == "excited") {
    m(n - 1, n - 1) = 1.0;
  } else if (label == "max_mixed") {
    m = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
  } else if (label == "ghz") {
    const int d = dims.front();
    for (int x : dims) {
      if (x != d) throw DimensionError("ghz target needs equal local dimensions");
    }
    numerics::ComplexVector psi = numerics::ComplexVector::Zero(n);
    for (int level = 0; level < d; ++level) {
      int index = 0;
      for (std::size_t k = 0; k < dims.size(); ++k) index = index * d + level;
      psi(index) = 1.0 / std::sqrt(static_cast<double>(d));
    }
    m = psi * psi.adjoint();
  } else if (label.rfind("file:", 0) == 0) {
    DensityOperator rho = load_density_json(label.substr(5));
    if (rho.dims() != dims) throw DimensionError("target file dims do not match the system");
    return {rho, label};
  } else {
    throw DomainError("unknown target label '" + label + "'");
  }
  return {DensityOperator(m, dims), label};
}

DensityOperator random_density(const Dims& dims, std::uint64_t seed, int rank) {
  const int n = quantum::total_dimension(dims);
  const int r = rank <= 0 ? n : std::min(rank, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, r);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint());
  return DensityOperator(m, dims);
}

DensityOperator load_density_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open density matrix file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("malformed density matrix file '" + path + "': " + e.what());
  }
  if (!j.contains("dims") || !j.contains("matrix")) {
    throw DomainError("density matrix file needs 'dims' and 'matrix'");
  }
  const Dims dims = j.at("dims").get<Dims>();
  const int n = quantum::total_dimension(dims);
  const auto& entries = j.at("matrix");
  if (!entries.is_array() || static_cast<int>(entries.size()) != n * n) {
    throw DimensionError("density matrix file has the wrong number of entries");
  }
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const auto& e = entries.at(static_cast<std::size_t>(r * n + c));
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return DensityOperator(m, dims);
}

void save_density_json(const DensityOperator& rho, const std::string& path) {
  nlohmann::json j;
  j["dims"] = rho.dims();
  nlohmann::json entries = nlohmann::json::array();
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  j["matrix"] = entries;
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write density matrix file '" + path + "'");
  out << j.dump(1) << '\n';
}

}  // namespace noiseswitch::models
