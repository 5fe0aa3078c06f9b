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

// Truncated Fock-space states and channels for a single bosonic mode.
//
// A state with cutoff N is stored as a (N+1)x(N+1) complex density matrix
// with entry (m, n) = <m|rho|n>. Quadratures follow X = (a + a^dag)/2 and
// P = (a - a^dag)/(2i), so the vacuum has Var(X) = 1/4 and <X> = Re(alpha)
// for a coherent state.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace phaseconc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Numerical tolerances shared by state validation and heralding.
struct Tolerances {
  double trace = 1e-8;
  double hermiticity = 1e-10;
  double min_eigenvalue = -1e-8;
  double herald_floor = 1e-14;
};

struct ValidityReport {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool ok = false;
};

class FockDensity {
 public:
  /// Takes ownership of a square matrix. No normalization is applied.
  explicit FockDensity(ComplexMatrix elements, double truncation_deficit = 0.0);

  static FockDensity vacuum(int dim);
  static FockDensity number_state(int n, int dim);

  int dim() const noexcept { return static_cast<int>(elements_.rows()); }
  int cutoff() const noexcept { return dim() - 1; }
  const ComplexMatrix& elements() const noexcept { return elements_; }
  Complex operator()(int m, int n) const { return elements_(m, n); }

  /// Probability mass that was dropped when the state was truncated to
  /// this basis (before renormalization).
  double truncation_deficit() const noexcept { return truncation_deficit_; }

  double trace() const;
  double mean_photon_number() const;
  std::vector<double> photon_distribution() const;

  FockDensity normalized() const;
  /// Zero-pads or truncates to `dim` levels. Truncation does not renormalize.
  FockDensity resized(int dim) const;
  /// exp(i theta n) rho exp(-i theta n).
  FockDensity rotated(double theta) const;

  ValidityReport check(const Tolerances& tol = {}) const;
  bool is_valid(const Tolerances& tol = {}) const { return check(tol).ok; }

 private:
  ComplexMatrix elements_;
  double truncation_deficit_ = 0.0;
};

/// Controls how many Fock levels are kept for a given state.
struct CutoffPolicy {
  double tail_tol = 1e-10;
  int hard_max = 256;

  void validate() const;
};

/// Photon-number distribution p_0..p_max_n of the displaced thermal state
/// D(alpha) rho_th(n_th) D(alpha)^dag, computed from exact displacement
/// matrix elements (no truncation of the infinite-dimensional operator).
std::vector<double> displaced_thermal_distribution(Complex alpha, double n_th,
                                                   int max_n);

/// Smallest cutoff N such that the displaced thermal photon-number tail
/// beyond N is below policy.tail_tol. Throws CutoffError when N would
/// exceed policy.hard_max.
int choose_cutoff(Complex alpha, double n_th, const CutoffPolicy& policy = {});

/// <m|D(alpha)|n> for 0 <= m < rows, 0 <= n < cols, exact (not the
/// exponential of a truncated generator).
ComplexMatrix displacement_matrix(Complex alpha, int rows, int cols);

FockDensity coherent_state(Complex alpha, int dim);
FockDensity thermal_state(double n_th, int dim);

/// D(alpha) rho_th D(alpha)^dag projected onto `dim` levels and
/// renormalized. Throws CutoffError if the dropped mass exceeds
/// policy.tail_tol.
FockDensity displaced_thermal(Complex alpha, double n_th, int dim,
                              const CutoffPolicy& policy = {});

/// Tr[a rho].
Complex mean_amplitude(const FockDensity& rho);

/// Kraus operators A_k (k photons lost into the tap) of a beam splitter
/// with transmissivity T and vacuum in the second port.
std::vector<RealMatrix> loss_kraus(double T, int dim);

FockDensity pure_loss(const FockDensity& rho, double T);

/// Diagonal of the tap-detector POVM element "at least M clicks" for a
/// detector of efficiency eta, indexed by tap photon number 0..dim-1.
std::vector<double> click_povm_weights(int dim, double eta, int M);

struct Heralded {
  FockDensity state;
  double success_probability;
};

/// Sends rho through a beam splitter (transmissivity T, vacuum in the tap),
/// measures the tap with an efficiency-eta detector and keeps the
/// transmitted mode when at least M photons are registered.
Heralded condition_on_click(const FockDensity& rho, double T, double eta, int M,
                            const Tolerances& tol = {});

/// a^M rho a^dag^M, normalized; the weight is its trace before normalization.
Heralded subtract_photons_ideal(const FockDensity& rho, int M,
                                const Tolerances& tol = {});

/// Two-mode beam-splitter unitary exp(theta (a^dag b - a b^dag)),
/// cos^2(theta) = T, on the dim x dim product basis |m>|n> -> index m*dim+n.
/// Exact on the subspace with total photon number < dim.
ComplexMatrix beam_splitter_unitary(double T, int dim);

/// Wigner function W(x, p) on the grid (rows follow xs, columns ps) via the
/// displaced-parity formula W = (2/pi) Tr[rho D(beta) Pi D(beta)^dag],
/// beta = x + i p.
RealMatrix wigner_grid(const FockDensity& rho, std::span<const double> xs,
                       std::span<const double> ps);

}  // namespace phaseconc
