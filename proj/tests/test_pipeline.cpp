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

#include "doctest.h"
#include "phaseconc/errors.hpp"
#include "phaseconc/pipeline.hpp"
#include "phaseconc/tomography.hpp"

using namespace phaseconc;

TEST_CASE("amplify_exact at the operating point") {
  const Complex alpha(std::sqrt(0.186), 0);
  const double v_in = holevo_variance(mu_coherent(alpha));
  double prev_v = v_in, prev_g = 1.0;
  for (int M = 1; M <= 4; ++M) {
    const auto r = amplify_exact({alpha, 0.15, 0.8, 0.63, M});
    CHECK(r.state.is_valid());
    CHECK(r.stats.variance_canonical < prev_v);
    CHECK(r.stats.gain > prev_g);
    CHECK(r.stats.gain > 1.0);
    REQUIRE(r.stats.gamma);
    CHECK(*r.stats.gamma < 1.0);
    prev_v = r.stats.variance_canonical;
    prev_g = r.stats.gain;
  }
}

TEST_CASE("amplify_exact without noise or heralding is pure loss") {
  const Complex alpha(0.5, 0.3);
  const auto r = amplify_exact({alpha, 0.0, 0.8, 0.63, 0});
  CHECK(r.success_probability == 1.0);
  const auto ref = coherent_state(std::sqrt(0.8) * alpha, r.state.dim());
  CHECK(fidelity(r.state, ref) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(r.stats.mu - mu_coherent(std::sqrt(0.8) * alpha)) < 1e-9);
  CHECK(r.stats.gain == doctest::Approx(std::sqrt(0.8)).epsilon(1e-9));
  CHECK(*r.stats.gamma > 1.0);
}

TEST_CASE("amplify_exact golden") {
  const auto r = amplify_exact({{0.48, 0}, 0.2, 0.8, 0.63, 4});
  CHECK(std::abs(r.stats.mu) == doctest::Approx(0.7119236627591998).epsilon(1e-9));
  CHECK(r.success_probability == doctest::Approx(3.70170066682631e-06).epsilon(1e-9));
}

TEST_CASE("amplify_exact is stable under cutoff doubling") {
  const AmplifierParams p{{1.0, 0}, 1.0, 0.8, 0.63, 3};
  const auto r = amplify_exact(p);
  const auto big = condition_on_click(displaced_thermal(p.alpha, p.n_th, 2 * (r.cutoff + 1)),
                                      p.T, p.eta, p.M);
  CHECK(std::abs(r.success_probability - big.success_probability) < 1e-8);
  CHECK(std::abs(r.stats.mu - mu_canonical(big.state)) < 1e-8);
  CHECK(std::abs(mean_amplitude(r.state) - mean_amplitude(big.state)) < 1e-8);
}

TEST_CASE("amplify_exact rejects bad input") {
  CHECK_THROWS_AS(amplify_exact({{0.4, 0}, 0.1, 0.8, 0.63, 9}), std::invalid_argument);
  CHECK_THROWS_AS(amplify_exact({{0.4, 0}, 0.1, 0.8, 0.0, 1}), HeraldImpossible);
  CHECK_THROWS_AS(amplify_exact({{0.4, 0}, -0.1, 0.8, 0.63, 1}), std::invalid_argument);
}

TEST_CASE("mc_heralded degenerate cases") {
  const AmplifierParams p{{0.48, 0}, 0.0, 0.8, 0.63, 2};
  const auto mc = mc_heralded(p, {1000, 5});
  CHECK(mc.success_probability.mean == doctest::Approx(success_probability(p)).epsilon(1e-12));
  CHECK(mc.success_probability.std_error < 1e-15);
  CHECK(std::abs(mc.mu.mean - mu_amplified(p)) < 1e-12);
  CHECK(std::abs(mc.mean_amplitude.mean - mean_amplitude_amplified(p)) < 1e-12);

  const auto m0 = mc_heralded({{0.48, 0}, 0.3, 0.8, 0.63, 0}, {1000, 5});
  CHECK(m0.success_probability.mean == 1.0);
  CHECK(m0.success_probability.std_error == 0.0);

  CHECK_THROWS_AS(mc_heralded({{0.48, 0}, 0.3, 0.8, 0.0, 1}, {100, 1}), HeraldImpossible);
  CHECK_THROWS_AS(MCConfig({0, 1}).validate(), std::invalid_argument);
}

TEST_CASE("mc_heralded agrees with the exact pipeline") {
  const AmplifierParams p{{0.48, 0}, 0.2, 0.8, 0.63, 1};
  const auto exact = amplify_exact(p);
  const auto mc = mc_heralded(p, {200000, 42});
  CHECK(std::abs(mc.success_probability.mean - exact.success_probability) <
        3 * mc.success_probability.std_error);
  CHECK(std::abs(mc.mu_abs.mean - std::abs(exact.stats.mu)) < 3 * mc.mu_abs.std_error);
  CHECK(mc.success_probability.n_effective == 200000.0);
}

TEST_CASE("mc_heralded is deterministic") {
  const AmplifierParams p{{0.3, 0.1}, 0.4, 0.9, 0.8, 1};
  const auto a = mc_heralded(p, {5000, 9});
  const auto b = mc_heralded(p, {5000, 9});
  const auto c = mc_heralded(p, {5000, 10});
  CHECK(a.success_probability.mean == b.success_probability.mean);
  CHECK(a.mu.mean == b.mu.mean);
  CHECK(a.success_probability.mean != c.success_probability.mean);
}

TEST_CASE("mc_heralded uses the bootstrap for few effective heralds") {
  const AmplifierParams p{{0.48, 0}, 0.2, 0.8, 0.63, 3};
  const auto mc = mc_heralded(p, {20000, 1});
  CHECK(mc.bootstrap);
  CHECK(mc.mu_abs.std_error > 0.0);
}

TEST_CASE("infer_input_amplitude") {
  const auto one = infer_input_amplitude(0.1, 0.2, 1.0);
  CHECK(one.mean_photon_number == doctest::Approx(0.3));
  const auto op = infer_input_amplitude(0.15, 0.0227, kPnrdEfficiency);
  CHECK(op.mean_photon_number == doctest::Approx(0.186).epsilon(1e-3));
  CHECK(op.amplitude == doctest::Approx(std::sqrt(op.mean_photon_number)));
  CHECK_THROWS_AS(infer_input_amplitude(0.1, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("validate_grid") {
  std::vector<AmplifierParams> empty;
  CHECK_THROWS_AS(validate_grid(empty, {}), std::invalid_argument);

  std::vector<AmplifierParams> grid{{{0.48, 0}, 0.2, 0.8, 0.63, 2}, {{1.0, 0}, 1.0, 0.95, 1.0, 3}};
  const auto rep = validate_grid(grid, {2000, 3});
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.within(1e-6));
  CHECK(rep.literal_discrepancy());
  for (const auto& r : rep.rows) {
    CHECK_FALSE(r.herald_impossible);
    CHECK(r.ps_mc > 0.0);
  }

  const auto g = acceptance_grid();
  CHECK(g.size() == 240);
}

TEST_CASE("success probability does not grow with the threshold") {
  for (const auto& p : acceptance_grid()) {
    if (p.M == 0) continue;
    AmplifierParams q = p;
    q.M = p.M - 1;
    CHECK(success_probability(p) <= success_probability(q));
  }
}

TEST_CASE("heralded output is brighter than the unconditioned tap") {
  for (int M = 1; M <= 3; ++M) {
    const AmplifierParams p{{0.48, 0}, 0.2, 0.8, 0.63, M};
    const auto r = amplify_exact(p);
    const auto tap = amplify_exact({p.alpha, p.n_th, p.T, p.eta, 0});
    CHECK(r.state.mean_photon_number() >= tap.state.mean_photon_number());
  }
}
