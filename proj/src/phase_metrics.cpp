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

#include "phaseconc/phase_metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "phaseconc/analytic.hpp"

namespace phaseconc {

Complex mu_canonical(const FockDensity& rho) {
  Complex s = 0.0;
  for (int n = 0; n + 1 < rho.dim(); ++n) s += rho(n + 1, n);
  return s;
}

double holevo_variance(Complex mu) {
  const double m2 = std::norm(mu);
  if (m2 == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / m2 - 1.0;
}

std::vector<double> phase_distribution(const FockDensity& rho,
                                       std::span<const double> thetas) {
  const int dim = rho.dim();
  // Diagonal sums s_d = sum_m <m+d|rho|m>.
  std::vector<Complex> s(dim, 0.0);
  for (int d = 0; d < dim; ++d) {
    for (int m = 0; m + d < dim; ++m) s[d] += rho(m + d, m);
  }
  std::vector<double> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    double v = s[0].real();
    for (int d = 1; d < dim; ++d) v += 2.0 * (std::polar(1.0, -theta * d) * s[d]).real();
    out.push_back(v / (2.0 * std::numbers::pi));
  }
  return out;
}

std::vector<double> uniform_phase_grid(int n) {
  if (n < 2) throw std::invalid_argument("phase grid needs at least 2 points");
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j) t[j] = -std::numbers::pi + 2.0 * std::numbers::pi * j / n;
  return t;
}

double integrate_periodic(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s * 2.0 * std::numbers::pi / static_cast<double>(values.size());
}

PhaseStats phase_stats(const FockDensity& rho) {
  const Complex mu = mu_canonical(rho);
  return PhaseStats{mu, holevo_variance(mu), 0.0, std::nullopt};
}

PhaseStats gain_and_gamma(const FockDensity& rho_out, Complex alpha_in) {
  if (alpha_in == Complex(0.0, 0.0)) {
    throw std::invalid_argument("gain and Gamma need a non-zero reference amplitude");
  }
  PhaseStats st = phase_stats(rho_out);
  st.gain = std::abs(mean_amplitude(rho_out)) / std::abs(alpha_in);
  st.gamma = st.variance_canonical / holevo_variance(mu_coherent(alpha_in));
  return st;
}

}  // namespace phaseconc
