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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "phaseconc/errors.hpp"
#include "phaseconc/fock.hpp"
#include "phaseconc/phase_metrics.hpp"

using namespace phaseconc;

namespace {

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("choose_cutoff") {
  CHECK(choose_cutoff({0, 0}, 0) == 0);
  // Smallest N with tail beyond N below 1e-10, from the Laguerre form.
  CHECK(choose_cutoff({0.48, 0}, 0.5) == 24);
  double tail = 1.0;
  for (int n = 0; n <= 24; ++n) tail -= oracle::displaced_thermal_pn(n, 0.48 * 0.48, 0.5);
  CHECK(tail < 1e-10);
  CHECK(tail + oracle::displaced_thermal_pn(24, 0.48 * 0.48, 0.5) >= 1e-10);
  CHECK_THROWS_AS(choose_cutoff({10, 0}, 0, CutoffPolicy{1e-10, 32}), CutoffError);
  CHECK_THROWS_AS((CutoffPolicy{0.0, 256}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CutoffPolicy{1e-10, 1}.validate()), std::invalid_argument);
}

TEST_CASE("displaced thermal distribution matches Laguerre form") {
  for (double nth : {0.0, 0.15, 1.0, 3.0}) {
    for (double a : {0.0, 0.431, 1.7}) {
      const auto p = displaced_thermal_distribution({a, 0}, nth, 40);
      for (int n = 0; n <= 40; ++n) {
        CHECK(p[n] == doctest::Approx(oracle::displaced_thermal_pn(n, a * a, nth)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("coherent_state") {
  const auto vac = coherent_state({0, 0}, 5);
  CHECK(std::abs(vac(0, 0) - 1.0) < 1e-15);
  CHECK(vac.elements().cwiseAbs().sum() == doctest::Approx(1.0));

  const int dim = choose_cutoff({0.431, 0}, 0) + 1;
  const auto c = coherent_state({0.431, 0}, dim);
  CHECK(c.mean_photon_number() == doctest::Approx(0.431 * 0.431).epsilon(1e-8));
  CHECK(std::abs(c.mean_photon_number() - 0.186) < 5e-4);
  CHECK(c.is_valid());

  const auto one = coherent_state({1, 0}, 40);
  CHECK(std::abs(mean_amplitude(one) - Complex(1, 0)) < 1e-10);

  const auto small = coherent_state({2, 0}, 4);
  CHECK(small.truncation_deficit() > 0.1);
  CHECK(small.trace() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("displaced_thermal") {
  const Complex alpha(0.3, -0.2);
  const auto dt0 = displaced_thermal(alpha, 0.0, 30);
  CHECK(max_abs_diff(dt0.elements(), coherent_state(alpha, 30).elements()) < 1e-9);

  const auto th = displaced_thermal({0, 0}, 0.7, 60);
  for (int m = 0; m < 60; ++m)
    for (int n = 0; n < 60; ++n)
      if (m != n) CHECK(std::abs(th(m, n)) < 1e-12);

  const int dim = choose_cutoff({0.431, 0}, 0.15) + 1;
  const auto dt = displaced_thermal({0.431, 0}, 0.15, dim);
  CHECK(dt.mean_photon_number() == doctest::Approx(0.431 * 0.431 + 0.15).epsilon(1e-8));
  CHECK(std::abs(dt.mean_photon_number() - 0.336) < 5e-4);
  CHECK(std::abs(mean_amplitude(dt) - Complex(0.431, 0)) < 1e-9);
  CHECK(dt.is_valid());

  // Independent route: padded matrix exponential.
  const auto ref = oracle::displaced_thermal_expm({0.8, 0.5}, 0.4, 25);
  const auto got = displaced_thermal({0.8, 0.5}, 0.4, 25, CutoffPolicy{1e-5, 256});
  CHECK(max_abs_diff(got.elements(), ref / ref.trace().real()) < 1e-9);

  CHECK_THROWS_AS(displaced_thermal({3, 0}, 0.5, 6), CutoffError);
}

TEST_CASE("displacement matrix is unitary on the retained block") {
  const auto D = displacement_matrix({0.6, 0.2}, 80, 80);
  const ComplexMatrix id = (D.adjoint() * D).topLeftCorner(30, 30);
  CHECK(max_abs_diff(id, ComplexMatrix::Identity(30, 30)) < 1e-12);
}

TEST_CASE("mean_amplitude") {
  CHECK(std::abs(mean_amplitude(thermal_state(0.8, 40))) < 1e-14);
  CHECK(std::abs(mean_amplitude(coherent_state({0.2, 0.9}, 40)) - Complex(0.2, 0.9)) < 1e-12);
}

TEST_CASE("FockDensity helpers") {
  const auto n2 = FockDensity::number_state(2, 4);
  CHECK(n2.mean_photon_number() == doctest::Approx(2.0));
  CHECK(n2.resized(6).dim() == 6);
  CHECK(n2.resized(2).trace() == doctest::Approx(0.0));
  const auto c = coherent_state({0.5, 0}, 20);
  const auto r = c.rotated(0.7);
  CHECK(std::abs(std::abs(mu_canonical(r)) - std::abs(mu_canonical(c))) < 1e-12);
  CHECK(std::abs(mean_amplitude(r) - std::polar(0.5, 0.7)) < 1e-12);
  ComplexMatrix bad = ComplexMatrix::Identity(3, 3);
  bad(0, 1) = 0.5;
  const auto rep = FockDensity(bad).check();
  CHECK_FALSE(rep.ok);
  CHECK(rep.hermiticity_error == doctest::Approx(0.5));
}

TEST_CASE("pure loss") {
  const auto dt = displaced_thermal({0.7, 0.1}, 0.4, 40);
  const auto out = pure_loss(dt, 0.8);
  CHECK(out.mean_photon_number() == doctest::Approx(0.8 * dt.mean_photon_number()).epsilon(1e-8));
  CHECK(out.is_valid());
  CHECK(max_abs_diff(pure_loss(dt, 1.0).elements(), dt.elements()) < 1e-14);
  // Loss maps displaced thermal to displaced thermal.
  const auto ref = displaced_thermal(std::sqrt(0.8) * Complex(0.7, 0.1), 0.8 * 0.4, 40);
  CHECK(max_abs_diff(out.elements(), ref.elements()) < 1e-9);
}

TEST_CASE("condition_on_click") {
  const auto c = coherent_state({0.6, 0}, 30);
  {
    const auto h = condition_on_click(c, 0.8, 0.7, 0);
    CHECK(h.success_probability == 1.0);
    CHECK(max_abs_diff(h.state.elements(), pure_loss(c, 0.8).elements()) < 1e-14);
  }
  CHECK_THROWS_AS(condition_on_click(c, 0.8, 0.0, 1), HeraldImpossible);
  {
    const auto h = condition_on_click(c, 0.8, 0.7, 1);
    CHECK(h.success_probability == doctest::Approx(1 - std::exp(-0.7 * 0.2 * 0.36)).epsilon(1e-12));
    CHECK(max_abs_diff(h.state.elements(),
                       coherent_state(std::sqrt(0.8) * Complex(0.6, 0), 30).elements()) < 1e-9);
  }
  // Two-mode beam-splitter route in a small basis.
  const auto dt = displaced_thermal({0.5, 0.2}, 0.3, 9, CutoffPolicy{1e-3, 256});
  for (int M : {1, 2, 3}) {
    const auto h = condition_on_click(dt, 0.75, 0.6, M);
    const auto ref = oracle::herald_two_mode(dt.elements(), 0.75, 0.6, M);
    const double ps = ref.trace().real();
    CHECK(h.success_probability == doctest::Approx(ps).epsilon(1e-10));
    CHECK(max_abs_diff(h.state.elements(), ref / ps) < 1e-10);
    CHECK(h.state.is_valid());
  }
}

TEST_CASE("beam splitter unitary") {
  const auto U1 = beam_splitter_unitary(1.0, 5);
  CHECK(max_abs_diff(U1, ComplexMatrix::Identity(25, 25)) < 1e-10);
  const auto U = beam_splitter_unitary(0.6, 5);
  CHECK(max_abs_diff(U.adjoint() * U, ComplexMatrix::Identity(25, 25)) < 1e-10);
}

TEST_CASE("unconditioned tap keeps T of the energy") {
  const auto dt = displaced_thermal({0.9, 0}, 0.5, 40);
  const auto h = condition_on_click(dt, 0.7, 0.5, 0);
  CHECK(h.state.mean_photon_number() ==
        doctest::Approx(0.7 * dt.mean_photon_number()).epsilon(1e-8));
}

TEST_CASE("heralding brightens displaced thermal inputs") {
  const auto dt = displaced_thermal({0.4, 0}, 0.3, 40);
  const double n_in = dt.mean_photon_number();
  for (int M = 1; M <= 3; ++M) {
    const auto herald = condition_on_click(dt, 0.999, 1.0, M);
    const auto ideal = subtract_photons_ideal(dt, M);
    CHECK(herald.state.mean_photon_number() > n_in);
    CHECK(ideal.state.mean_photon_number() > n_in);
  }
}

TEST_CASE("subtract_photons_ideal") {
  const auto dt = displaced_thermal({0.2, 0}, 0.3, 40);
  const auto id = subtract_photons_ideal(dt, 0);
  CHECK(id.success_probability == 1.0);
  CHECK(max_abs_diff(id.state.elements(), dt.elements()) < 1e-15);

  const auto c = coherent_state({0.7, 0.1}, 40);
  const auto cs = subtract_photons_ideal(c, 3);
  CHECK(cs.success_probability == doctest::Approx(std::pow(0.5, 3)).epsilon(1e-9));
  CHECK(max_abs_diff(cs.state.elements(), c.elements()) < 1e-8);

  // Golden values from direct application of a twice.
  const auto s = subtract_photons_ideal(dt, 2);
  CHECK(s.success_probability == doctest::Approx(0.2296).epsilon(1e-9));
  CHECK(s.state(0, 0).real() == doctest::Approx(0.418824647621492).epsilon(1e-9));
  CHECK(s.state(1, 1).real() == doctest::Approx(0.31708841741266586).epsilon(1e-9));
  CHECK(s.state(1, 0).real() == doctest::Approx(0.17636379888561385).epsilon(1e-9));
  CHECK(s.state(2, 2).real() == doctest::Approx(0.1594931809644011).epsilon(1e-9));
  CHECK(s.state(3, 1).real() == doctest::Approx(0.025582915797708484).epsilon(1e-9));

  CHECK_THROWS_AS(subtract_photons_ideal(FockDensity::vacuum(4), 1), HeraldImpossible);
}

TEST_CASE("wigner_grid") {
  const std::vector<double> z{0.0};
  const auto w0 = wigner_grid(FockDensity::vacuum(6), z, z);
  CHECK(w0(0, 0) == doctest::Approx(2 / std::numbers::pi).epsilon(1e-12));

  const auto xs = linspace(-1, 2, 61);
  const auto c = coherent_state({0.7, 0}, 30);
  const auto w = wigner_grid(c, xs, xs);
  Eigen::Index i, j;
  w.maxCoeff(&i, &j);
  CHECK(xs[i] == doctest::Approx(0.7));
  CHECK(xs[j] == doctest::Approx(0.0));

  const auto g = linspace(-3, 3, 121);
  const auto dt = displaced_thermal({0.431, 0}, 0.15, 30);
  const auto wd = wigner_grid(dt, g, g);
  const double h = g[1] - g[0];
  CHECK(std::abs(wd.sum() * h * h - 1.0) < 1e-3);

  // A Fock state has negative Wigner value at the origin.
  CHECK(wigner_grid(FockDensity::number_state(1, 4), z, z)(0, 0) ==
        doctest::Approx(-2 / std::numbers::pi));
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(coherent_state({1, 0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(displaced_thermal({1, 0}, -0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(condition_on_click(FockDensity::vacuum(3), 1.5, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(condition_on_click(FockDensity::vacuum(3), 0.5, 0.5, -1), std::invalid_argument);
}
