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

// Homodyne sampling and binned maximum-likelihood state reconstruction.
//
// Quadrature x_theta = (a e^{-i theta} + a^dag e^{i theta}) / 2, so the
// vacuum variance is 1/4 at every phase.

#include <cstdint>
#include <span>
#include <vector>

#include "phaseconc/fock.hpp"

namespace phaseconc {

struct QuadratureRecord {
  double theta;  ///< local-oscillator phase, [0, pi)
  double x;      ///< measured quadrature value
};

struct TomoConfig {
  int dim = 12;
  double eta_hd = 1.0;
  int n_phase_bins = 12;
  int n_x_bins = 64;
  /// Half-width of the x histogram; 0 picks a range covering every record
  /// and the support of the basis wavefunctions.
  double x_range = 0.0;
  /// Average each cell's projector over its phase bin. When false the
  /// projector is taken at the bin center.
  bool phase_averaged = true;
  int max_iters = 2000;
  double tol = 1e-8;

  void validate() const;
};

/// Wavefunctions <x|n> for n < dim, rows follow xs.
RealMatrix quadrature_wavefunctions(std::span<const double> xs, int dim);

/// Draws n homodyne records from rho after a pure-loss channel of
/// transmissivity eta_hd. Record i depends only on (seed, i).
std::vector<QuadratureRecord> sample_homodyne(const FockDensity& rho, std::size_t n,
                                              double eta_hd, std::uint64_t seed);

struct Reconstruction {
  FockDensity state;
  int iterations = 0;
  bool converged = false;
  std::vector<double> log_likelihood;  ///< one entry per accepted iterate
  bool floor_applied = false;          ///< a populated cell had p < 1e-12
  double x_range = 0.0;
};

/// Iterative R rho R reconstruction from binned records. The detector
/// efficiency is folded into the POVM so the result is the pre-loss state.
/// When a full R rho R step would lower the likelihood the step is diluted
/// to rho <- (1 + eps R) rho (1 + eps R) with eps halved until it does not.
Reconstruction maxlik_reconstruct(std::span<const QuadratureRecord> records,
                                  const TomoConfig& cfg);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const FockDensity& rho, const FockDensity& sigma);

}  // namespace phaseconc
