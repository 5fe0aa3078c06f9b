// Copyright 2026 The phaseconc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phaseconc/analytic.hpp"
#include "phaseconc/errors.hpp"
#include "phaseconc/fock.hpp"
#include "phaseconc/phase_metrics.hpp"
#include "phaseconc/pipeline.hpp"
#include "phaseconc/tomography.hpp"

namespace py = pybind11;
using namespace phaseconc;

namespace {

py::dict stats_dict(const PhaseStats& s) {
  py::dict d;
  d["mu"] = s.mu;
  d["variance_canonical"] = s.variance_canonical;
  d["gain"] = s.gain;
  d["gamma"] = s.gamma ? py::cast(*s.gamma) : py::none();
  return d;
}

template <typename T>
py::dict estimate_dict(const MCEstimate<T>& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["n_effective"] = e.n_effective;
  return d;
}

}  // namespace

PYBIND11_MODULE(_phaseconc, m) {
  m.doc() = "Heralded noise-assisted phase concentration in a truncated Fock space";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<CutoffError>(m, "CutoffError", base.ptr());
  py::register_exception<HeraldImpossible>(m, "HeraldImpossible", base.ptr());
  py::register_exception<SeriesNotConverged>(m, "SeriesNotConverged", base.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());

  py::class_<FockDensity>(m, "FockDensity")
      .def(py::init([](const ComplexMatrix& rho) { return FockDensity(rho); }), py::arg("elements"))
      .def_static("vacuum", &FockDensity::vacuum, py::arg("dim"))
      .def_static("number_state", &FockDensity::number_state, py::arg("n"), py::arg("dim"))
      .def_property_readonly("dim", &FockDensity::dim)
      .def_property_readonly("elements", &FockDensity::elements)
      .def_property_readonly("truncation_deficit", &FockDensity::truncation_deficit)
      .def("trace", &FockDensity::trace)
      .def("mean_photon_number", &FockDensity::mean_photon_number)
      .def("photon_distribution", &FockDensity::photon_distribution)
      .def("rotated", &FockDensity::rotated, py::arg("theta"))
      .def("is_valid", [](const FockDensity& r) { return r.is_valid(); })
      .def("__repr__", [](const FockDensity& r) {
        return "<FockDensity dim=" + std::to_string(r.dim()) + ">";
      });

  m.def("choose_cutoff",
        [](Complex a, double n, double tol, int hard_max) {
          return choose_cutoff(a, n, {tol, hard_max});
        },
        py::arg("alpha"), py::arg("n_th"), py::arg("tail_tol") = 1e-10, py::arg("hard_max") = 256);
  m.def("coherent_state", &coherent_state, py::arg("alpha"), py::arg("dim"));
  m.def("thermal_state", &thermal_state, py::arg("n_th"), py::arg("dim"));
  m.def("displaced_thermal",
        [](Complex a, double n, int dim) { return displaced_thermal(a, n, dim); },
        py::arg("alpha"), py::arg("n_th"), py::arg("dim"));
  m.def("mean_amplitude", &mean_amplitude, py::arg("rho"));
  m.def("pure_loss", &pure_loss, py::arg("rho"), py::arg("T"));
  m.def("condition_on_click",
        [](const FockDensity& rho, double T, double eta, int M) {
          const auto h = condition_on_click(rho, T, eta, M);
          return py::make_tuple(h.state, h.success_probability);
        },
        py::arg("rho"), py::arg("T"), py::arg("eta"), py::arg("M"));
  m.def("subtract_photons_ideal",
        [](const FockDensity& rho, int M) {
          const auto h = subtract_photons_ideal(rho, M);
          return py::make_tuple(h.state, h.success_probability);
        },
        py::arg("rho"), py::arg("M"));
  m.def("wigner_grid",
        [](const FockDensity& rho, const std::vector<double>& xs, const std::vector<double>& ps) {
          return wigner_grid(rho, xs, ps);
        },
        py::arg("rho"), py::arg("xs"), py::arg("ps"));

  m.def("mu_canonical", &mu_canonical, py::arg("rho"));
  m.def("holevo_variance", &holevo_variance, py::arg("mu"));
  m.def("phase_distribution",
        [](const FockDensity& rho, const std::vector<double>& thetas) {
          return phase_distribution(rho, thetas);
        },
        py::arg("rho"), py::arg("thetas"));
  m.def("uniform_phase_grid", &uniform_phase_grid, py::arg("n") = 2048);
  m.def("gain_and_gamma",
        [](const FockDensity& rho, Complex a) { return stats_dict(gain_and_gamma(rho, a)); },
        py::arg("rho_out"), py::arg("alpha_in"));

  py::class_<AmplifierParams>(m, "AmplifierParams")
      .def(py::init([](Complex alpha, double n_th, double T, double eta, int M) {
             AmplifierParams p{alpha, n_th, T, eta, M};
             p.validate();
             return p;
           }),
           py::arg("alpha"), py::arg("n_th"), py::arg("T") = 0.8, py::arg("eta") = 0.63,
           py::arg("M") = 1)
      .def_readwrite("alpha", &AmplifierParams::alpha)
      .def_readwrite("n_th", &AmplifierParams::n_th)
      .def_readwrite("T", &AmplifierParams::T)
      .def_readwrite("eta", &AmplifierParams::eta)
      .def_readwrite("M", &AmplifierParams::M);

  m.def("gaussian_moment",
        [](int k, double mean, double var) { return gaussian_moment(k, {mean, var}); },
        py::arg("k"), py::arg("mean"), py::arg("variance"));
  m.def("cal_I", &cal_I, py::arg("n"), py::arg("A"), py::arg("B"));
  m.def("cal_J", &cal_J, py::arg("n"), py::arg("A"), py::arg("B"));
  m.def("mu_coherent", &mu_coherent, py::arg("alpha"));
  m.def("mu_displaced_thermal", &mu_displaced_thermal, py::arg("alpha"), py::arg("n_th"));
  m.def("mu_parametric", &mu_parametric, py::arg("alpha"), py::arg("G"));
  m.def("success_probability",
        [](const AmplifierParams& p, bool literal) {
          return success_probability(p, literal ? Transcription::literal : Transcription::corrected);
        },
        py::arg("params"), py::arg("literal") = false);
  m.def("mu_amplified",
        [](const AmplifierParams& p, bool literal) {
          return mu_amplified(p, literal ? Transcription::literal : Transcription::corrected);
        },
        py::arg("params"), py::arg("literal") = false);
  m.def("mean_amplitude_amplified",
        [](const AmplifierParams& p) { return mean_amplitude_amplified(p); }, py::arg("params"));
  m.def("normalized_variance", &normalized_variance, py::arg("params"));
  m.def("optimal_noise",
        [](Complex a, double T, double eta, int M) {
          const auto o = optimal_noise(a, T, eta, M);
          return py::make_tuple(o.n_th, o.gamma, o.improves);
        },
        py::arg("alpha"), py::arg("T"), py::arg("eta"), py::arg("M"));

  m.def("amplify_exact",
        [](const AmplifierParams& p) {
          const auto r = amplify_exact(p);
          py::dict d;
          d["state"] = r.state;
          d["stats"] = stats_dict(r.stats);
          d["success_probability"] = r.success_probability;
          d["cutoff"] = r.cutoff;
          return d;
        },
        py::arg("params"));
  m.def("mc_heralded",
        [](const AmplifierParams& p, std::uint64_t n, std::uint64_t seed) {
          MCHeralded r;
          {
            py::gil_scoped_release release;
            r = mc_heralded(p, {n, seed});
          }
          py::dict d;
          d["success_probability"] = estimate_dict(r.success_probability);
          d["mu"] = estimate_dict(r.mu);
          d["mu_abs"] = estimate_dict(r.mu_abs);
          d["mean_amplitude"] = estimate_dict(r.mean_amplitude);
          d["bootstrap"] = r.bootstrap;
          return d;
        },
        py::arg("params"), py::arg("n_samples") = 100000, py::arg("seed") = 0);

  m.def("sample_homodyne",
        [](const FockDensity& rho, std::size_t n, double eta, std::uint64_t seed) {
          const auto rec = sample_homodyne(rho, n, eta, seed);
          py::array_t<double> th(rec.size()), x(rec.size());
          auto t = th.mutable_unchecked<1>();
          auto v = x.mutable_unchecked<1>();
          for (std::size_t i = 0; i < rec.size(); ++i) t(i) = rec[i].theta, v(i) = rec[i].x;
          return py::make_tuple(th, x);
        },
        py::arg("rho"), py::arg("n"), py::arg("eta_hd") = 1.0, py::arg("seed") = 0);
  m.def("maxlik_reconstruct",
        [](py::array_t<double> theta, py::array_t<double> x, int dim, double eta_hd,
           int n_phase_bins, int n_x_bins, int max_iters, double tol) {
          if (theta.size() != x.size()) throw std::invalid_argument("theta and x differ in length");
          std::vector<QuadratureRecord> rec(theta.size());
          auto t = theta.unchecked<1>();
          auto v = x.unchecked<1>();
          for (py::ssize_t i = 0; i < theta.size(); ++i) rec[i] = {t(i), v(i)};
          TomoConfig cfg;
          cfg.dim = dim;
          cfg.eta_hd = eta_hd;
          cfg.n_phase_bins = n_phase_bins;
          cfg.n_x_bins = n_x_bins;
          cfg.max_iters = max_iters;
          cfg.tol = tol;
          Reconstruction r = [&] {
            py::gil_scoped_release release;
            return maxlik_reconstruct(rec, cfg);
          }();
          py::dict d;
          d["state"] = r.state;
          d["iterations"] = r.iterations;
          d["converged"] = r.converged;
          d["log_likelihood"] = r.log_likelihood;
          return d;
        },
        py::arg("theta"), py::arg("x"), py::arg("dim") = 12, py::arg("eta_hd") = 1.0,
        py::arg("n_phase_bins") = 12, py::arg("n_x_bins") = 64, py::arg("max_iters") = 2000,
        py::arg("tol") = 1e-8);
  m.def("fidelity", &fidelity, py::arg("rho"), py::arg("sigma"));
}
