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

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "phaseconc/fock.hpp"

namespace phaseconc {

/// Phase figures of merit of a single-mode state.
struct PhaseStats {
  Complex mu;                  ///< <exp(i theta)> under the canonical measurement
  double variance_canonical;   ///< |mu|^-2 - 1, +inf when mu = 0
  double gain = 0.0;           ///< |<a>| / |alpha_in|
  std::optional<double> gamma; ///< V_C / V_C(coherent alpha_in)
};

/// Sum of the first subdiagonal, sum_n <n+1|rho|n>.
Complex mu_canonical(const FockDensity& rho);

double holevo_variance(Complex mu);

/// Canonical phase distribution P(theta) on the caller's grid.
std::vector<double> phase_distribution(const FockDensity& rho,
                                       std::span<const double> thetas);

/// n equally spaced angles covering [-pi, pi).
std::vector<double> uniform_phase_grid(int n = 2048);

/// Trapezoid integral of a 2pi-periodic function sampled on
/// uniform_phase_grid(values.size()).
double integrate_periodic(std::span<const double> values);

/// Phase statistics without a reference input (gain 0, gamma empty).
PhaseStats phase_stats(const FockDensity& rho);

/// Gain and normalized variance of rho_out relative to the coherent state
/// |alpha_in>. Throws std::invalid_argument for alpha_in = 0.
PhaseStats gain_and_gamma(const FockDensity& rho_out, Complex alpha_in);

}  // namespace phaseconc
