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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "noiseswitch/cli.hpp"

namespace py = pybind11;
namespace ns = noiseswitch;

using ns::quantum::ComplexMatrix;
using ns::quantum::ControlSystem;
using ns::quantum::DensityOperator;
using ns::quantum::Dims;

namespace {

DensityOperator density(const ComplexMatrix& m, const Dims& dims) { return DensityOperator(m, dims); }

py::dict restart_dict(const ns::optimize::RestartOutcome& r) {
  py::dict d;
  d["error"] = r.error;
  d["iterations"] = r.iterations;
  d["stop_reason"] = r.stop_reason;
  d["trace"] = r.trace;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "noiseswitch C++ core";
  m.attr("__version__") = NOISESWITCH_VERSION_INFO;

  py::register_exception<ns::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ns::ReachabilityError>(m, "ReachabilityError", PyExc_ValueError);
  py::register_exception<ns::NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<ns::Error>(m, "Error", PyExc_RuntimeError);

  py::class_<ControlSystem>(m, "ControlSystem")
      .def_readonly("name", &ControlSystem::name)
      .def_readonly("dims", &ControlSystem::dims)
      .def_readonly("drift", &ControlSystem::drift)
      .def_property_readonly("control_labels",
                             [](const ControlSystem& s) {
                               std::vector<std::string> out;
                               for (const auto& c : s.controls) out.push_back(c.label);
                               return out;
                             })
      .def_property_readonly("channel_labels",
                             [](const ControlSystem& s) {
                               std::vector<std::string> out;
                               for (const auto& c : s.channels) out.push_back(c.label);
                               return out;
                             })
      .def("dimension", &ControlSystem::dimension);

  m.def("ising_chain", &ns::models::ising_chain, py::arg("n"), py::arg("J"), py::arg("theta"),
        py::arg("gamma_max"), py::arg("dephasing") = 0.0, py::arg("lamb_ratio") = 0.0);
  m.def("ion_trap_collective", &ns::models::ion_trap_collective, py::arg("n") = 4, py::arg("a") = 1.0,
        py::arg("gamma_max") = 5.0);
  m.def(
      "target_state",
      [](const std::string& label, const Dims& dims) { return ns::models::target_state(label, dims).state.matrix(); },
      py::arg("label"), py::arg("dims"));
  m.def(
      "random_density",
      [](const Dims& dims, std::uint64_t seed, int rank) { return ns::models::random_density(dims, seed, rank).matrix(); },
      py::arg("dims"), py::arg("seed"), py::arg("rank") = 0);
  m.def(
      "spectrum",
      [](const ComplexMatrix& rho) { return ns::quantum::spectrum_descending(rho); }, py::arg("rho"));

  m.def(
      "final_state",
      [](const ControlSystem& sys, const ns::numerics::RealMatrix& coherent, const ns::numerics::RealMatrix& noise,
         double total_time, const ComplexMatrix& rho0) {
        auto seq = ns::propagation::ControlSequence::uniform(static_cast<int>(coherent.rows()), total_time,
                                                             sys.control_count(), sys.channel_count());
        seq.coherent = coherent;
        seq.noise = noise;
        seq.validate(sys);
        return ns::propagation::final_state(sys, seq, rho0);
      },
      py::arg("system"), py::arg("coherent"), py::arg("noise"), py::arg("total_time"), py::arg("rho0"));

  m.def(
      "optimize",
      [](const ControlSystem& sys, const ComplexMatrix& rho0, const ComplexMatrix& target, double total_time,
         int slices, int restarts, int max_iterations, std::uint64_t seed, int workers) {
        ns::optimize::TransferProblem problem{sys, density(rho0, sys.dims), {density(target, sys.dims), "target"},
                                              total_time, slices};
        ns::optimize::OptimizerConfig cfg;
        cfg.restarts = restarts;
        cfg.max_iterations = max_iterations;
        cfg.seed = seed;
        cfg.workers = workers;
        ns::optimize::OptimizationResult r;
        {
          py::gil_scoped_release release;
          r = ns::optimize::optimize(problem, cfg);
        }
        py::dict d;
        d["best_error"] = r.best_error;
        d["best_restart"] = r.best_restart;
        d["coherent"] = r.best_sequence.coherent;
        d["noise"] = r.best_sequence.noise;
        py::list rs;
        for (const auto& o : r.restarts) rs.append(restart_dict(o));
        d["restarts"] = rs;
        return d;
      },
      py::arg("system"), py::arg("rho0"), py::arg("target"), py::arg("total_time"), py::arg("slices"),
      py::arg("restarts") = 1, py::arg("max_iterations") = 200, py::arg("seed") = 1, py::arg("workers") = 0);

  m.def("majorizes", &ns::protocols::majorizes, py::arg("x"), py::arg("y"),
        "True when x is majorized by y.");
  m.def("majorization_floor", &ns::protocols::majorization_floor, py::arg("x"), py::arg("y"));
  m.def(
      "hlp_t_transforms",
      [](const std::vector<double>& y, const std::vector<double>& x) {
        std::vector<std::tuple<int, int, double>> out;
        for (const auto& t : ns::protocols::hlp_t_transforms(y, x)) out.emplace_back(t.i, t.j, t.lambda);
        return out;
      },
      py::arg("y"), py::arg("x"));
  m.def(
      "reachability",
      [](const ComplexMatrix& rho0, const ComplexMatrix& target, const Dims& dims, const std::string& noise,
         double b) {
        const auto v = ns::protocols::reachability_verdict(density(rho0, dims), density(target, dims),
                                                           ns::protocols::noise_kind_from_string(noise), b);
        return std::make_pair(ns::protocols::to_string(v.reachable), v.reason);
      },
      py::arg("rho0"), py::arg("target"), py::arg("dims"), py::arg("noise"), py::arg("b") = 0.0);
  m.def("cooling_error_at", &ns::protocols::cooling_error_at, py::arg("n"), py::arg("J"), py::arg("gamma"),
        py::arg("tau"));
  m.def("bit_flip_erasure_error_at", &ns::protocols::bit_flip_erasure_error_at, py::arg("n"), py::arg("J"),
        py::arg("gamma"), py::arg("tau"));

  m.def(
      "damping_rate",
      [](double omega, double beta, double cutoff) {
        ns::bath::BathSpec s;
        s.beta = beta;
        s.cutoff = cutoff;
        s.validate();
        return ns::bath::damping_rate(omega, s);
      },
      py::arg("omega"), py::arg("beta"), py::arg("cutoff") = 1.0);

  m.def(
      "list_experiments",
      []() {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const auto& e : ns::cli::list_experiments()) out.emplace_back(e.name, e.anchor, e.config_file);
        return out;
      });
  m.def(
      "run",
      [](const std::string& path, std::optional<std::string> out, std::optional<std::uint64_t> seed,
         std::optional<int> restarts) {
        ns::cli::RunOverrides o{out, seed, restarts, std::nullopt};
        ns::cli::RunResult r;
        {
          py::gil_scoped_release release;
          r = ns::cli::run_file(path, o);
        }
        return py::make_tuple(r.exit_code, r.message, r.output_dir);
      },
      py::arg("config"), py::arg("out") = py::none(), py::arg("seed") = py::none(),
      py::arg("restarts") = py::none());
}
