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

#include "noiseswitch/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <sstream>

namespace noiseswitch::quantum {

using numerics::kI;
using numerics::Tolerances;

int total_dimension(const Dims& dims) {
  if (dims.empty()) throw DimensionError("empty list of local dimensions");
  int n = 1;
  for (int d : dims) {
    if (d < 1) throw DimensionError("local dimensions must be positive");
    n *= d;
  }
  return n;
}

void validate_density(const ComplexMatrix& m, double tolerance) {
  numerics::require_square(m, "density operator");
  if (!numerics::all_finite(m)) throw DomainError("density operator has non-finite entries");
  if (!numerics::is_hermitian(m, tolerance)) {
    throw DomainError("density operator is not Hermitian");
  }
  const double tr_im = std::abs(m.trace().imag());
  const double tr_re = m.trace().real();
  if (std::abs(tr_re - 1.0) > tolerance || tr_im > tolerance) {
    std::ostringstream os;
    os << "density operator trace is " << tr_re << " (expected 1)";
    throw DomainError(os.str());
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  const double min_ev = solver.eigenvalues().minCoeff();
  if (min_ev < -tolerance) {
    std::ostringstream os;
    os << "density operator has negative eigenvalue " << min_ev;
    throw DomainError(os.str());
  }
}

DensityOperator::DensityOperator(ComplexMatrix matrix, Dims dims, double tolerance)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  if (total_dimension(dims_) != matrix_.rows()) {
    throw DimensionError("density operator size does not match its local dimensions");
  }
  validate_density(matrix_, tolerance);
}

DensityOperator DensityOperator::unchecked(ComplexMatrix matrix, Dims dims) {
  DensityOperator out;
  out.matrix_ = std::move(matrix);
  out.dims_ = std::move(dims);
  return out;
}

void validate_system(const ControlSystem& s) {
  const int n = total_dimension(s.dims);
  auto check = [&](const ComplexMatrix& op, const std::string& what, bool hermitian) {
    if (op.rows() != n || op.cols() != n) {
      throw DimensionError(what + " does not match the total dimension");
    }
    if (hermitian && !numerics::is_hermitian(op)) throw DomainError(what + " is not Hermitian");
  };
  check(s.drift, "drift Hamiltonian", true);
  for (const auto& c : s.controls) {
    check(c.op, "control '" + c.label + "'", true);
    if (!(c.lower <= c.upper)) throw DomainError("control '" + c.label + "' has empty bounds");
  }
  for (const auto& ch : s.channels) {
    if (!(ch.max_rate >= 0.0)) throw DomainError("channel '" + ch.label + "' has negative max rate");
    for (const auto& t : ch.terms) {
      check(t.op, "jump operator of '" + ch.label + "'", false);
      if (t.weight < 0.0) throw DomainError("negative jump weight in '" + ch.label + "'");
    }
    if (ch.lamb_operator.size() > 0) check(ch.lamb_operator, "Lamb operator of '" + ch.label + "'", true);
  }
  for (const auto& st : s.static_channels) {
    check(st.op, "static channel '" + st.label + "'", false);
    if (st.rate < 0.0) throw DomainError("static channel '" + st.label + "' has negative rate");
  }
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexVector vectorize(const DensityOperator& rho) { return vectorize(rho.matrix()); }

ComplexMatrix unvectorize(const ComplexVector& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) throw DimensionError("vector length is not a perfect square");
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

DensityOperator unvectorize(const ComplexVector& v, const Dims& dims) {
  ComplexMatrix m = unvectorize(v);
  if (total_dimension(dims) != m.rows()) throw DimensionError("vector length does not match dims");
  return DensityOperator(std::move(m), dims);
}

ComplexMatrix sandwich_superop(const ComplexMatrix& a, const ComplexMatrix& b) {
  return numerics::kronecker(b.transpose(), a);
}

Superoperator commutator_superop(const ComplexMatrix& h, const Dims& dims) {
  numerics::require_square(h, "commutator_superop");
  if (!numerics::is_hermitian(h)) throw DomainError("commutator_superop: H is not Hermitian");
  const Eigen::Index n = h.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  return {sandwich_superop(h, id) - sandwich_superop(id, h), dims};
}

Superoperator dissipator_superop(const ComplexMatrix& v, const Dims& dims) {
  numerics::require_square(v, "dissipator_superop");
  const Eigen::Index n = v.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix vdv = v.adjoint() * v;
  ComplexMatrix g = -sandwich_superop(v, v.adjoint());
  g += 0.5 * sandwich_superop(vdv, id);
  g += 0.5 * sandwich_superop(id, vdv);
  return {g, dims};
}

ComplexMatrix channel_dissipator(const LindbladChannel& channel) {
  if (channel.terms.empty()) throw DomainError("channel '" + channel.label + "' has no jump terms");
  const Eigen::Index n = channel.terms.front().op.rows();
  ComplexMatrix g = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& t : channel.terms) g += t.weight * dissipator_superop(t.op).matrix;
  return g;
}

void check_amplitudes(const ControlSystem& system, const std::vector<double>& coherent,
                      const std::vector<double>& noise) {
  if (static_cast<int>(coherent.size()) != system.control_count()) {
    throw DimensionError("coherent amplitude count does not match the system");
  }
  if (static_cast<int>(noise.size()) != system.channel_count()) {
    throw DimensionError("noise amplitude count does not match the system");
  }
  for (std::size_t l = 0; l < noise.size(); ++l) {
    const auto& ch = system.channels[l];
    if (!(noise[l] >= 0.0) || noise[l] > ch.max_rate * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "noise amplitude " << noise[l] << " of channel '" << ch.label << "' outside [0, "
         << ch.max_rate << "]";
      throw BoundError(os.str());
    }
  }
}

ComplexMatrix total_hamiltonian(const ControlSystem& system, const std::vector<double>& coherent,
                                const std::vector<double>& noise) {
  ComplexMatrix h = system.drift;
  for (std::size_t j = 0; j < coherent.size(); ++j) {
    if (coherent[j] != 0.0) h += coherent[j] * system.controls[j].op;
  }
  for (std::size_t l = 0; l < noise.size(); ++l) {
    const auto& ch = system.channels[l];
    if (ch.lamb_ratio != 0.0 && ch.lamb_operator.size() > 0 && noise[l] != 0.0) {
      h += noise[l] * ch.lamb_ratio * ch.lamb_operator;
    }
  }
  return h;
}

Superoperator liouvillian(const ControlSystem& system, const std::vector<double>& coherent,
                          const std::vector<double>& noise) {
  check_amplitudes(system, coherent, noise);
  const ComplexMatrix h = total_hamiltonian(system, coherent, noise);
  ComplexMatrix l = kI * commutator_superop(h).matrix;
  for (std::size_t k = 0; k < noise.size(); ++k) {
    if (noise[k] != 0.0) l += noise[k] * channel_dissipator(system.channels[k]);
  }
  for (const auto& st : system.static_channels) {
    if (st.rate != 0.0) l += st.rate * dissipator_superop(st.op).matrix;
  }
  return {l, system.dims};
}

ComplexMatrix embed_local(const ComplexMatrix& op, int site, const Dims& dims) {
  if (site < 0 || site >= static_cast<int>(dims.size())) {
    throw DimensionError("embed_local: site index out of range");
  }
  if (op.rows() != dims[static_cast<std::size_t>(site)] || op.cols() != op.rows()) {
    throw DimensionError("embed_local: operator does not match the local dimension");
  }
  int left = 1;
  int right = 1;
  for (int k = 0; k < site; ++k) left *= dims[static_cast<std::size_t>(k)];
  for (int k = site + 1; k < static_cast<int>(dims.size()); ++k) right *= dims[static_cast<std::size_t>(k)];
  ComplexMatrix out = numerics::kronecker(ComplexMatrix::Identity(left, left), op);
  return numerics::kronecker(out, ComplexMatrix::Identity(right, right));
}

std::vector<double> spectrum_descending(const ComplexMatrix& rho, double tolerance) {
  const auto es = numerics::hermitian_eigensystem(rho, tolerance);
  return {es.values.data(), es.values.data() + es.values.size()};
}

std::vector<double> spectrum_descending(const DensityOperator& rho) {
  validate_density(rho.matrix(), Tolerances::hermitian);
  return spectrum_descending(rho.matrix(), Tolerances::hermitian);
}

namespace {

// Real coordinates of a skew-Hermitian matrix.
RealVector real_coordinates(const ComplexMatrix& a) {
  RealVector v(2 * a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    v(2 * k) = a.data()[k].real();
    v(2 * k + 1) = a.data()[k].imag();
  }
  return v;
}

class OrthonormalBasis {
 public:
  // Adds the component of `a` orthogonal to the span; returns true if new.
  bool add(const ComplexMatrix& a) {
    RealVector v = real_coordinates(a);
    const double norm = v.norm();
    if (norm == 0.0) return false;
    v /= norm;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : vectors_) v -= b.dot(v) * b;
    }
    const double rest = v.norm();
    if (rest <= Tolerances::lie_rank) return false;
    vectors_.push_back(v / rest);
    return true;
  }
  int size() const { return static_cast<int>(vectors_.size()); }

 private:
  std::vector<RealVector> vectors_;
};

ComplexMatrix traceless(const ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  return a - (a.trace() / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
}

}  // namespace

int lie_closure_dimension(const ComplexMatrix& drift, const std::vector<ComplexMatrix>& controls) {
  const Eigen::Index n = drift.rows();
  const int target = static_cast<int>(n * n - 1);
  std::vector<ComplexMatrix> generators;
  OrthonormalBasis basis;
  std::vector<ComplexMatrix> frontier;
  auto consider = [&](const ComplexMatrix& h) {
    ComplexMatrix g = traceless(kI * h);
    if (basis.add(g)) {
      generators.push_back(g);
      frontier.push_back(g);
    }
  };
  consider(drift);
  for (const auto& c : controls) consider(c);
  const int max_rounds = static_cast<int>(2 * n * n);
  for (int round = 0; round < max_rounds && !frontier.empty() && basis.size() < target; ++round) {
    std::vector<ComplexMatrix> next;
    for (const auto& e : frontier) {
      for (const auto& g : generators) {
        ComplexMatrix c = g * e - e * g;
        const double cn = c.norm();
        if (cn <= Tolerances::lie_rank) continue;
        c /= cn;
        if (basis.add(c)) next.push_back(c);
        if (basis.size() >= target) break;
      }
      if (basis.size() >= target) break;
    }
    frontier = std::move(next);
  }
  return basis.size();
}

bool hamiltonian_controllability(const ControlSystem& system) {
  std::vector<ComplexMatrix> ops;
  for (const auto& c : system.controls) ops.push_back(c.op);
  const Eigen::Index n = system.drift.rows();
  return lie_closure_dimension(system.drift, ops) == static_cast<int>(n * n - 1);
}

void LindbladForm::apply(const ComplexMatrix& in, ComplexMatrix& out) const {
  out.noalias() = g * in;
  out.noalias() += in * g.adjoint();
  ComplexMatrix tmp(in.rows(), in.cols());
  for (const auto& [c, v] : jumps) {
    tmp.noalias() = v * in;
    out.noalias() -= c * (tmp * v.adjoint());
  }
}

void LindbladForm::apply_adjoint(const ComplexMatrix& in, ComplexMatrix& out) const {
  out.noalias() = g.adjoint() * in;
  out.noalias() += in * g;
  ComplexMatrix tmp(in.rows(), in.cols());
  for (const auto& [c, v] : jumps) {
    tmp.noalias() = v.adjoint() * in;
    out.noalias() -= c * (tmp * v);
  }
}

double LindbladForm::norm_bound() const {
  double bound = 2.0 * numerics::spectral_norm_bound(g);
  for (const auto& [c, v] : jumps) {
    const double vn = numerics::spectral_norm_bound(v);
    bound += std::abs(c) * vn * vn;
  }
  return bound;
}

namespace {

void add_channel_terms(LindbladForm& form, const LindbladChannel& ch, double rate) {
  for (const auto& t : ch.terms) {
    const double c = rate * t.weight;
    if (c == 0.0) continue;
    form.g += (0.5 * c) * (t.op.adjoint() * t.op);
    form.jumps.emplace_back(c, t.op);
  }
}

}  // namespace

LindbladForm lindblad_form(const ControlSystem& system, const std::vector<double>& coherent,
                           const std::vector<double>& noise) {
  LindbladForm form;
  form.g = kI * total_hamiltonian(system, coherent, noise);
  for (std::size_t l = 0; l < noise.size(); ++l) {
    if (noise[l] != 0.0) add_channel_terms(form, system.channels[l], noise[l]);
  }
  for (const auto& st : system.static_channels) {
    if (st.rate == 0.0) continue;
    form.g += (0.5 * st.rate) * (st.op.adjoint() * st.op);
    form.jumps.emplace_back(st.rate, st.op);
  }
  return form;
}

LindbladForm channel_direction(const LindbladChannel& channel) {
  const Eigen::Index n = channel.terms.front().op.rows();
  LindbladForm form;
  form.g = ComplexMatrix::Zero(n, n);
  if (channel.lamb_ratio != 0.0 && channel.lamb_operator.size() > 0) {
    form.g += (kI * channel.lamb_ratio) * channel.lamb_operator;
  }
  add_channel_terms(form, channel, 1.0);
  return form;
}

}  // namespace noiseswitch::quantum
