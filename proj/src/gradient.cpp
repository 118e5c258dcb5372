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

// Gradient of the state-transfer error.
//
// For a slice with generator A = -dt L and direction E = dA/du, the
// derivative of e^A is the top-right block of exp([[A, E], [0, A]]). We
// evaluate that block with the same scaling (s equal substeps) and Taylor
// truncation as the forward exponential action, and contract it on both
// sides: with T = e^{A/s}, rho_i the state at the start of substep i and
// mu_i the costate at its end,
//
//   <mu_i, dT rho_i> = sum_{a,m} a! m! / (a+m+1)! <b_a, (E/s) t_m>,
//
// where t_m = (A/s)^m rho_i / m! and b_a = (A^dagger/s)^a mu_i / a!. The
// coefficient sums collapse into two matrices P = sum t_m c_m^dagger and
// Q = sum c_m^dagger t_m (c_m the weighted costate terms), so every
// Hamiltonian control costs a single trace.

#include <cmath>
#include <vector>

#include "noiseswitch/optimize.hpp"

namespace noiseswitch::optimize {

using numerics::Complex;
using numerics::ComplexMatrix;
using numerics::kI;
using quantum::LindbladForm;

namespace {

constexpr int kMaxTerms = numerics::kTaylorMaxTerms + 2;

// a! m! / (a + m + 1)!
const std::vector<std::vector<double>>& pair_weights() {
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> w(kMaxTerms + 1, std::vector<double>(kMaxTerms + 1));
    for (int a = 0; a <= kMaxTerms; ++a) {
      for (int m = 0; m <= kMaxTerms; ++m) {
        w[a][m] = std::exp(std::lgamma(a + 1.0) + std::lgamma(m + 1.0) - std::lgamma(a + m + 2.0));
      }
    }
    return w;
  }();
  return table;
}

// Taylor terms x_k = (op/s)^k v / k! until the series has converged; the
// sum is written to `sum`.
template <class Apply>
void taylor_terms(Apply&& apply, const ComplexMatrix& v, int s, std::vector<ComplexMatrix>& terms,
                  ComplexMatrix& sum) {
  terms.clear();
  terms.push_back(v);
  sum = v;
  ComplexMatrix next(v.rows(), v.cols());
  double previous = v.norm();
  for (int k = 1; k <= numerics::kTaylorMaxTerms; ++k) {
    apply(terms.back(), next);
    next /= static_cast<double>(k) * s;
    sum += next;
    terms.push_back(next);
    const double tn = next.norm();
    if (tn + previous <= numerics::Tolerances::series * sum.norm() || tn == 0.0) return;
    previous = tn;
  }
  throw NumericError("gradient: Taylor series did not converge");
}

ComplexMatrix target_matrix(const TransferProblem& p) { return p.target.state.matrix(); }

}  // namespace

RealVector flatten(const ControlSequence& s) {
  const Eigen::Index m = s.coherent.rows();
  const Eigen::Index nc = s.coherent.cols();
  const Eigen::Index nn = s.noise.cols();
  RealVector x(m * (nc + nn));
  Eigen::Index i = 0;
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index j = 0; j < nc; ++j) x(i++) = s.coherent(k, j);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index j = 0; j < nn; ++j) x(i++) = s.noise(k, j);
  return x;
}

void unflatten(const RealVector& x, ControlSequence& s) {
  const Eigen::Index m = s.coherent.rows();
  const Eigen::Index nc = s.coherent.cols();
  const Eigen::Index nn = s.noise.cols();
  if (x.size() != m * (nc + nn)) throw DimensionError("parameter vector has the wrong length");
  Eigen::Index i = 0;
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index j = 0; j < nc; ++j) s.coherent(k, j) = x(i++);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index j = 0; j < nn; ++j) s.noise(k, j) = x(i++);
}

void TransferProblem::validate() const {
  quantum::validate_system(system);
  if (initial.dimension() != system.dimension() || target.state.dimension() != system.dimension()) {
    throw DimensionError("transfer problem: state dimensions do not match the system");
  }
  if (!(total_time > 0.0)) throw DomainError("transfer problem: total time must be positive");
  if (slices < 1) throw DomainError("transfer problem: slice count must be >= 1");
}

double error_value(const TransferProblem& problem, const ControlSequence& sequence) {
  const ComplexMatrix rho = propagation::final_state(problem.system, sequence, problem.initial.matrix());
  return (rho - target_matrix(problem)).squaredNorm();
}

namespace {

// Evaluates forms without bound checks so finite differences may step
// slightly outside the admissible box.
double unchecked_error(const TransferProblem& problem, const ControlSequence& s) {
  ComplexMatrix rho = problem.initial.matrix();
  for (int k = 0; k < s.slices(); ++k) {
    const auto form = quantum::lindblad_form(problem.system, s.coherent_row(k), s.noise_row(k));
    propagation::evolve_in_place(form, s.durations[static_cast<std::size_t>(k)], rho);
  }
  return (rho - target_matrix(problem)).squaredNorm();
}

ErrorGradient finite_difference_gradient(const TransferProblem& problem, const ControlSequence& seq) {
  ErrorGradient out;
  out.value = unchecked_error(problem, seq);
  RealVector x = flatten(seq);
  out.gradient.resize(x.size());
  ControlSequence work = seq;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
    const double keep = x(i);
    x(i) = keep + h;
    unflatten(x, work);
    const double fp = unchecked_error(problem, work);
    x(i) = keep - h;
    unflatten(x, work);
    const double fm = unchecked_error(problem, work);
    x(i) = keep;
    out.gradient(i) = (fp - fm) / (2.0 * h);
  }
  return out;
}

ErrorGradient auxiliary_gradient(const TransferProblem& problem, const ControlSequence& seq) {
  const auto& sys = problem.system;
  const int m = seq.slices();
  const int nc = sys.control_count();
  const int nn = sys.channel_count();
  const auto& weights = pair_weights();

  std::vector<LindbladForm> forms;
  forms.reserve(static_cast<std::size_t>(m));
  std::vector<ComplexMatrix> starts;
  starts.reserve(static_cast<std::size_t>(m));
  ComplexMatrix rho = problem.initial.matrix();
  for (int k = 0; k < m; ++k) {
    forms.push_back(quantum::lindblad_form(sys, seq.coherent_row(k), seq.noise_row(k)));
    starts.push_back(rho);
    propagation::evolve_in_place(forms.back(), seq.durations[static_cast<std::size_t>(k)], rho);
  }
  ErrorGradient out;
  const ComplexMatrix residual = rho - target_matrix(problem);
  out.value = residual.squaredNorm();
  out.gradient = RealVector::Zero(static_cast<Eigen::Index>(m) * (nc + nn));

  std::vector<LindbladForm> directions;
  for (const auto& ch : sys.channels) directions.push_back(quantum::channel_direction(ch));

  const Eigen::Index n = rho.rows();
  ComplexMatrix costate = residual;
  std::vector<std::vector<ComplexMatrix>> fwd_terms;
  std::vector<ComplexMatrix> bwd_terms;
  std::vector<ComplexMatrix> combined;
  ComplexMatrix sum(n, n), p(n, n), q(n, n), tmp(n, n), tmp2(n, n);

  for (int k = m - 1; k >= 0; --k) {
    const double dt = seq.durations[static_cast<std::size_t>(k)];
    if (dt == 0.0) continue;
    const LindbladForm& form = forms[static_cast<std::size_t>(k)];
    const int s = numerics::taylor_substeps(dt * form.norm_bound());
    auto apply = [&](const ComplexMatrix& in, ComplexMatrix& o) {
      form.apply(in, o);
      o *= -dt;
    };
    auto apply_adj = [&](const ComplexMatrix& in, ComplexMatrix& o) {
      form.apply_adjoint(in, o);
      o *= -dt;
    };
    // Forward sweep over the substeps, keeping every Taylor term.
    fwd_terms.assign(static_cast<std::size_t>(s), {});
    ComplexMatrix state = starts[static_cast<std::size_t>(k)];
    for (int i = 0; i < s; ++i) {
      taylor_terms(apply, state, s, fwd_terms[static_cast<std::size_t>(i)], sum);
      state = sum;
    }
    // Backward sweep: accumulate contributions, then step the costate.
    std::vector<Complex> coh(static_cast<std::size_t>(nc), Complex(0.0));
    std::vector<Complex> noi(static_cast<std::size_t>(nn), Complex(0.0));
    for (int i = s - 1; i >= 0; --i) {
      const auto& t = fwd_terms[static_cast<std::size_t>(i)];
      taylor_terms(apply_adj, costate, s, bwd_terms, sum);
      const int kf = static_cast<int>(t.size()) - 1;
      const int kb = static_cast<int>(bwd_terms.size()) - 1;
      const int kmax = std::max(kf, kb) + 1;
      combined.resize(static_cast<std::size_t>(kf + 1));
      p.setZero();
      q.setZero();
      for (int mm = 0; mm <= kf; ++mm) {
        ComplexMatrix& c = combined[static_cast<std::size_t>(mm)];
        c.setZero(n, n);
        const int amax = std::min(kb, kmax - mm);
        for (int a = 0; a <= amax; ++a) c += weights[a][mm] * bwd_terms[static_cast<std::size_t>(a)];
        p.noalias() += t[static_cast<std::size_t>(mm)] * c.adjoint();
        q.noalias() += c.adjoint() * t[static_cast<std::size_t>(mm)];
      }
      const double scale = dt / s;
      // Coherent: E = -dt i[H_j, .]
      const ComplexMatrix pq = p - q;
      for (int j = 0; j < nc; ++j) {
        const ComplexMatrix& h = sys.controls[static_cast<std::size_t>(j)].op;
        coh[static_cast<std::size_t>(j)] += -scale * kI * (h.transpose().cwiseProduct(pq)).sum();
      }
      // Noise: E = -dt D_l with D_l(x) = G x + x G^dag - sum c V x V^dag
      for (int l = 0; l < nn; ++l) {
        const LindbladForm& d = directions[static_cast<std::size_t>(l)];
        Complex val = (d.g.transpose().cwiseProduct(p)).sum() +
                      (d.g.adjoint().transpose().cwiseProduct(q)).sum();
        for (const auto& [c, v] : d.jumps) {
          for (int mm = 0; mm <= kf; ++mm) {
            tmp.noalias() = v * t[static_cast<std::size_t>(mm)];
            tmp2.noalias() = tmp * v.adjoint();
            val -= c * numerics::frobenius_inner(combined[static_cast<std::size_t>(mm)], tmp2);
          }
        }
        noi[static_cast<std::size_t>(l)] += -scale * val;
      }
      costate = sum;
    }
    for (int j = 0; j < nc; ++j) {
      out.gradient(static_cast<Eigen::Index>(k) * nc + j) = 2.0 * coh[static_cast<std::size_t>(j)].real();
    }
    const Eigen::Index offset = static_cast<Eigen::Index>(m) * nc;
    for (int l = 0; l < nn; ++l) {
      out.gradient(offset + static_cast<Eigen::Index>(k) * nn + l) = 2.0 * noi[static_cast<std::size_t>(l)].real();
    }
  }
  return out;
}

}  // namespace

ErrorGradient error_and_gradient(const TransferProblem& problem, const ControlSequence& sequence,
                                 GradientMethod method) {
  if (sequence.coherent.cols() != problem.system.control_count() ||
      sequence.noise.cols() != problem.system.channel_count() ||
      sequence.coherent.rows() != sequence.slices() || sequence.noise.rows() != sequence.slices()) {
    throw DimensionError("control sequence does not match the problem");
  }
  if (method == GradientMethod::finite_difference) return finite_difference_gradient(problem, sequence);
  return auxiliary_gradient(problem, sequence);
}

void parameter_bounds(const TransferProblem& problem, double amplitude_cap, RealVector& lower,
                      RealVector& upper) {
  const auto& sys = problem.system;
  const int m = problem.slices;
  const int nc = sys.control_count();
  const int nn = sys.channel_count();
  lower.resize(static_cast<Eigen::Index>(m) * (nc + nn));
  upper.resize(lower.size());
  Eigen::Index i = 0;
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < nc; ++j) {
      const auto& c = sys.controls[static_cast<std::size_t>(j)];
      lower(i) = std::max(c.lower, -amplitude_cap);
      upper(i) = std::min(c.upper, amplitude_cap);
      ++i;
    }
  }
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < nn; ++l) {
      lower(i) = 0.0;
      upper(i) = sys.channels[static_cast<std::size_t>(l)].max_rate;
      ++i;
    }
  }
}

}  // namespace noiseswitch::optimize
