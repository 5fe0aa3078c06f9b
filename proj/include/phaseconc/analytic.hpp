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

// Closed-form phase statistics of coherent, displaced thermal and heralded
// states, built from Gaussian moments of the state's P-function.

#include <complex>
#include <optional>

#include "phaseconc/fock.hpp"

namespace phaseconc {

/// Mean and variance of one real Gaussian coordinate.
struct GaussianMomentArgs {
  double mean = 0.0;
  double variance = 0.0;
};

/// k-th raw moment E[x^k] of N(mean, variance), 0 <= k <= 200.
double gaussian_moment(int k, GaussianMomentArgs args);

/// E[beta |beta|^(2n)] for beta = beta_r + i beta_i with independent
/// components N(Re A, B) and N(Im A, B).
Complex cal_I(int n, Complex A, double B);

/// E[|beta|^(2n)] for the same distribution as cal_I.
double cal_J(int n, Complex A, double B);

/// mu of the coherent state |alpha>, |alpha| <= 12.
Complex mu_coherent(Complex alpha);

/// mu of D(alpha) rho_th(n_th) D(alpha)^dag from the P-function series.
Complex mu_displaced_thermal(Complex alpha, double n_th);

/// mu of a coherent state after a phase-insensitive amplifier of gain G,
/// evaluated from the integral representation with alpha' = sqrt(G) alpha
/// and n_th = 2G - 2 added thermal photons.
Complex mu_parametric(Complex alpha, double G);

/// The integral (alpha/sqrt(pi)) int_0^{1/(1+n)} exp(-x|alpha|^2) /
/// sqrt(-ln[1 - x/(1 - x n)]) dx for a displaced thermal state with n mean
/// thermal photons.
Complex parametric_integral(Complex alpha, double n_th);

/// One amplification scenario: input amplitude, added thermal photons, tap
/// transmissivity, detector efficiency and click threshold.
struct AmplifierParams {
  Complex alpha{0.0, 0.0};
  double n_th = 0.0;
  double T = 0.8;
  double eta = 0.63;
  int M = 1;

  /// Throws std::invalid_argument when a field is out of range.
  void validate(int max_M = 32) const;
};

/// Which transcription of the heralded-state expressions to evaluate.
///  - corrected: expressions re-derived from the P-function integral; these
///    agree with the Fock-space pipeline.
///  - literal: the form with (eta(1-T)/T)^(2k) and alpha*T in the
///    success probability, kept for comparison.
enum class Transcription { corrected, literal };

/// Heralding (success) probability of the tapped displaced thermal state.
double success_probability(const AmplifierParams& p,
                           Transcription form = Transcription::corrected);

/// mu of the heralded output state. Throws HeraldImpossible when the
/// success probability is below `herald_floor`.
Complex mu_amplified(const AmplifierParams& p,
                     Transcription form = Transcription::corrected,
                     double herald_floor = 1e-14);

/// <a> of the heralded output state.
Complex mean_amplitude_amplified(const AmplifierParams& p, double herald_floor = 1e-14);

/// Gamma = V_C(heralded) / V_C(|alpha>), from the closed forms.
double normalized_variance(const AmplifierParams& p);

struct ApproxAmplified {
  FockDensity state;   ///< two-level small-signal heralded state
  double variance;     ///< small-signal canonical phase variance
  bool in_validity_range;
};

/// Small-signal model of single-photon subtraction after weak noise
/// addition, valid for |alpha|^2 < 0.1 and n_th < 0.3.
ApproxAmplified approx_amplified(Complex alpha, double n_th);

struct NoiseOptimum {
  double n_th;
  double gamma;
  bool improves;  ///< false when Gamma >= 1 everywhere in the bracket
};

/// Golden-section search for the added noise minimizing Gamma over
/// n_th in [1e-4, 5].
NoiseOptimum optimal_noise(Complex alpha, double T, double eta, int M,
                           double lo = 1e-4, double hi = 5.0, double tol = 1e-4);

}  // namespace phaseconc
