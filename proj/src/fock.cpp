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

#include "phaseconc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/binomial.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "phaseconc/errors.hpp"

namespace phaseconc {
namespace {

void require_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("Fock dimension must be >= 1");
}

// Number of thermal components whose omitted weight is below 1e-30.
int thermal_support(double n_th, int at_least) {
  if (n_th <= 0.0) return std::max(1, at_least);
  const double ratio = n_th / (1.0 + n_th);
  const double needed = std::log(1e-30) / std::log(ratio);
  const int k = static_cast<int>(std::ceil(needed)) + 1;
  return std::clamp(k, std::max(1, at_least), 8192);
}

std::vector<double> thermal_weights(double n_th, int count) {
  std::vector<double> p(count, 0.0);
  if (n_th <= 0.0) {
    p[0] = 1.0;
    return p;
  }
  const double ratio = n_th / (1.0 + n_th);
  double w = 1.0 / (1.0 + n_th);
  for (int k = 0; k < count; ++k) {
    p[k] = w;
    w *= ratio;
  }
  return p;
}

double binomial(int n, int k) {
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n),
                                                   static_cast<unsigned>(k));
}

// amp(n, k) = sqrt(C(n,k) T^(n-k) (1-T)^k): amplitude for n photons to leave
// k of them in the tap port.
RealMatrix tap_amplitudes(double T, int dim) {
  RealMatrix amp = RealMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int k = 0; k <= n; ++k) {
      amp(n, k) = std::sqrt(binomial(n, k) * std::pow(T, n - k) *
                            std::pow(1.0 - T, k));
    }
  }
  return amp;
}

// sum_k w_k A_k rho A_k^T, without normalization.
ComplexMatrix apply_tap(const ComplexMatrix& rho, double T,
                        const std::vector<double>& weights) {
  const int dim = static_cast<int>(rho.rows());
  const RealMatrix amp = tap_amplitudes(T, dim);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    for (int n = 0; n + k < dim; ++n) {
      const double an = amp(n + k, k);
      for (int m = 0; m + k < dim; ++m) {
        out(m, n) += w * amp(m + k, k) * an * rho(m + k, n + k);
      }
    }
  }
  return out;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace

FockDensity::FockDensity(ComplexMatrix elements, double truncation_deficit)
    : elements_(std::move(elements)), truncation_deficit_(truncation_deficit) {
  if (elements_.rows() != elements_.cols() || elements_.rows() < 1) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
}

FockDensity FockDensity::vacuum(int dim) { return number_state(0, dim); }

FockDensity FockDensity::number_state(int n, int dim) {
  require_dim(dim);
  if (n < 0 || n >= dim) throw std::invalid_argument("number state outside basis");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(n, n) = 1.0;
  return FockDensity(std::move(m));
}

double FockDensity::trace() const { return elements_.trace().real(); }

double FockDensity::mean_photon_number() const {
  double s = 0.0;
  for (int n = 1; n < dim(); ++n) s += n * elements_(n, n).real();
  return s;
}

std::vector<double> FockDensity::photon_distribution() const {
  std::vector<double> p(dim());
  for (int n = 0; n < dim(); ++n) p[n] = elements_(n, n).real();
  return p;
}

FockDensity FockDensity::normalized() const {
  const double t = trace();
  if (!(t > 0.0)) throw Error("cannot normalize a state with non-positive trace");
  return FockDensity(elements_ / t, truncation_deficit_);
}

FockDensity FockDensity::resized(int new_dim) const {
  require_dim(new_dim);
  ComplexMatrix m = ComplexMatrix::Zero(new_dim, new_dim);
  const int keep = std::min(new_dim, dim());
  m.topLeftCorner(keep, keep) = elements_.topLeftCorner(keep, keep);
  return FockDensity(std::move(m), truncation_deficit_);
}

FockDensity FockDensity::rotated(double theta) const {
  ComplexMatrix m = elements_;
  for (int r = 0; r < dim(); ++r) {
    for (int c = 0; c < dim(); ++c) {
      m(r, c) *= std::polar(1.0, theta * (r - c));
    }
  }
  return FockDensity(std::move(m), truncation_deficit_);
}

ValidityReport FockDensity::check(const Tolerances& tol) const {
  ValidityReport r;
  r.hermiticity_error = (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
  r.trace_error = std::abs(elements_.trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(elements_),
                                                  Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.ok = r.hermiticity_error <= tol.hermiticity && r.trace_error <= tol.trace &&
         r.min_eigenvalue >= tol.min_eigenvalue;
  return r;
}

void CutoffPolicy::validate() const {
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw std::invalid_argument("tail_tol must lie in (0, 1)");
  }
  if (hard_max < 2) throw std::invalid_argument("hard_max must be >= 2");
}

ComplexMatrix displacement_matrix(Complex alpha, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("empty displacement block");
  ComplexMatrix d(rows, cols);
  d(0, 0) = std::exp(-0.5 * std::norm(alpha));
  for (int m = 1; m < rows; ++m) d(m, 0) = d(m - 1, 0) * alpha / std::sqrt(double(m));
  // D a^dag = (a^dag - conj(alpha)) D
  const Complex ac = std::conj(alpha);
  for (int n = 1; n < cols; ++n) {
    const double inv = 1.0 / std::sqrt(double(n));
    d(0, n) = -ac * d(0, n - 1) * inv;
    for (int m = 1; m < rows; ++m) {
      d(m, n) = (std::sqrt(double(m)) * d(m - 1, n - 1) - ac * d(m, n - 1)) * inv;
    }
  }
  return d;
}

std::vector<double> displaced_thermal_distribution(Complex alpha, double n_th,
                                                   int max_n) {
  if (max_n < 0) throw std::invalid_argument("max_n must be >= 0");
  if (!(n_th >= 0.0) || !std::isfinite(n_th)) {
    throw std::invalid_argument("n_th must be finite and >= 0");
  }
  const int rows = max_n + 1;
  const int k_count = thermal_support(n_th, rows);
  const std::vector<double> pk = thermal_weights(n_th, k_count);
  const ComplexMatrix d = displacement_matrix(alpha, rows, k_count);
  std::vector<double> p(rows, 0.0);
  for (int k = 0; k < k_count; ++k) {
    if (pk[k] == 0.0) continue;
    for (int n = 0; n < rows; ++n) p[n] += pk[k] * std::norm(d(n, k));
  }
  return p;
}

int choose_cutoff(Complex alpha, double n_th, const CutoffPolicy& policy) {
  policy.validate();
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("alpha must be finite");
  }
  const double mean = std::norm(alpha) + n_th;
  int limit = static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(mean + 1.0) + 20.0));
  limit = std::max(limit, policy.hard_max + 1);
  const int ceiling = 4 * limit;

  std::vector<double> p;
  double remainder = 0.0;
  for (;;) {
    p = displaced_thermal_distribution(alpha, n_th, limit);
    const double last = p[limit];
    const double prev = p[limit - 1];
    const double ratio = prev > 0.0 ? last / prev : 0.0;
    const bool decaying = ratio < 0.95;
    remainder = decaying ? last * ratio / (1.0 - ratio) : last;
    if (decaying && last < 1e-3 * policy.tail_tol) break;
    if (2 * limit > ceiling) {
      throw CutoffError("photon-number tail does not decay within " +
                        std::to_string(limit) + " levels");
    }
    limit *= 2;
  }

  // Trim downward from the top: tail(N) = sum_{n>N} p_n + remainder.
  double tail = remainder;
  int cutoff = limit;
  for (int n = limit; n >= 1; --n) {
    tail += p[n];
    if (tail >= policy.tail_tol) break;
    cutoff = n - 1;
  }
  if (cutoff > policy.hard_max) {
    throw CutoffError("required cutoff " + std::to_string(cutoff) +
                      " exceeds hard_max " + std::to_string(policy.hard_max));
  }
  return cutoff;
}

FockDensity coherent_state(Complex alpha, int dim) {
  require_dim(dim);
  Eigen::VectorXcd c = displacement_matrix(alpha, dim, 1).col(0);
  const double kept = c.squaredNorm();
  c /= std::sqrt(kept);
  return FockDensity(c * c.adjoint(), std::max(0.0, 1.0 - kept));
}

FockDensity thermal_state(double n_th, int dim) {
  require_dim(dim);
  if (!(n_th >= 0.0)) throw std::invalid_argument("n_th must be >= 0");
  const std::vector<double> p = thermal_weights(n_th, dim);
  double kept = 0.0;
  for (double v : p) kept += v;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = p[n] / kept;
  return FockDensity(std::move(m), std::max(0.0, 1.0 - kept));
}

FockDensity displaced_thermal(Complex alpha, double n_th, int dim,
                              const CutoffPolicy& policy) {
  require_dim(dim);
  if (!(n_th >= 0.0) || !std::isfinite(n_th)) {
    throw std::invalid_argument("n_th must be finite and >= 0");
  }
  const int k_count = thermal_support(n_th, dim);
  const std::vector<double> pk = thermal_weights(n_th, k_count);
  const ComplexMatrix d = displacement_matrix(alpha, dim, k_count);
  Eigen::VectorXd w(k_count);
  for (int k = 0; k < k_count; ++k) w(k) = pk[k];
  ComplexMatrix rho = hermitian_part(d * w.asDiagonal() * d.adjoint());
  const double kept = rho.trace().real();
  const double deficit = std::max(0.0, 1.0 - kept);
  if (deficit > policy.tail_tol) {
    throw CutoffError("truncation to " + std::to_string(dim) +
                      " levels drops probability " + std::to_string(deficit));
  }
  return FockDensity(rho / kept, deficit);
}

Complex mean_amplitude(const FockDensity& rho) {
  Complex s = 0.0;
  for (int n = 0; n + 1 < rho.dim(); ++n) s += std::sqrt(double(n + 1)) * rho(n + 1, n);
  return s;
}

std::vector<RealMatrix> loss_kraus(double T, int dim) {
  require_dim(dim);
  if (!(T >= 0.0 && T <= 1.0)) throw std::invalid_argument("T must lie in [0, 1]");
  const RealMatrix amp = tap_amplitudes(T, dim);
  std::vector<RealMatrix> ops;
  ops.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    RealMatrix a = RealMatrix::Zero(dim, dim);
    for (int n = k; n < dim; ++n) a(n - k, n) = amp(n, k);
    ops.push_back(std::move(a));
  }
  return ops;
}

FockDensity pure_loss(const FockDensity& rho, double T) {
  if (!(T >= 0.0 && T <= 1.0)) throw std::invalid_argument("T must lie in [0, 1]");
  const std::vector<double> ones(rho.dim(), 1.0);
  return FockDensity(apply_tap(rho.elements(), T, ones), rho.truncation_deficit());
}

std::vector<double> click_povm_weights(int dim, double eta, int M) {
  require_dim(dim);
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (M < 0) throw std::invalid_argument("M must be >= 0");
  std::vector<double> q(dim, 0.0);
  for (int k = 0; k < dim; ++k) {
    if (M == 0) {
      q[k] = 1.0;
      continue;
    }
    // P(Binomial(k, eta) >= M), summed over the upper tail.
    double s = 0.0;
    for (int j = M; j <= k; ++j) {
      s += binomial(k, j) * std::pow(eta, j) * std::pow(1.0 - eta, k - j);
    }
    q[k] = std::min(1.0, s);
  }
  return q;
}

Heralded condition_on_click(const FockDensity& rho, double T, double eta, int M,
                            const Tolerances& tol) {
  if (!(T > 0.0 && T <= 1.0)) throw std::invalid_argument("T must lie in (0, 1]");
  const std::vector<double> q = click_povm_weights(rho.dim(), eta, M);
  ComplexMatrix out = apply_tap(rho.elements(), T, q);
  const double weight = out.trace().real();
  // With no threshold every outcome heralds.
  const double ps = M == 0 ? 1.0 : weight;
  if (!(ps >= tol.herald_floor)) {
    throw HeraldImpossible("heralding probability " + std::to_string(ps) +
                               " below floor for M=" + std::to_string(M),
                           M);
  }
  out = hermitian_part(out) / weight;
  return {FockDensity(std::move(out), rho.truncation_deficit()), ps};
}

Heralded subtract_photons_ideal(const FockDensity& rho, int M, const Tolerances& tol) {
  if (M < 0 || M > rho.dim() - 1) {
    throw std::invalid_argument("M must lie in [0, dim-1]");
  }
  const int dim = rho.dim();
  // sqrt((n+1)(n+2)...(n+M)) = <n|a^M|n+M>
  std::vector<double> f(dim, 0.0);
  for (int n = 0; n + M < dim; ++n) {
    double v = 1.0;
    for (int j = 1; j <= M; ++j) v *= n + j;
    f[n] = std::sqrt(v);
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n + M < dim; ++n) {
    for (int m = 0; m + M < dim; ++m) out(m, n) = f[m] * f[n] * rho(m + M, n + M);
  }
  const double w = out.trace().real();
  if (!(w >= tol.herald_floor)) {
    throw HeraldImpossible("subtraction weight below floor for M=" + std::to_string(M), M);
  }
  return {FockDensity(hermitian_part(out) / w, rho.truncation_deficit()), w};
}

ComplexMatrix beam_splitter_unitary(double T, int dim) {
  require_dim(dim);
  if (!(T >= 0.0 && T <= 1.0)) throw std::invalid_argument("T must lie in [0, 1]");
  const int n = dim * dim;
  const double theta = std::acos(std::sqrt(T));
  RealMatrix gen = RealMatrix::Zero(n, n);
  // theta (a^dag b - a b^dag) on |i>|j> -> index i*dim + j
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const int from = i * dim + j;
      if (i + 1 < dim && j >= 1) {
        const double c = theta * std::sqrt(double(i + 1) * j);
        gen((i + 1) * dim + (j - 1), from) += c;
        gen(from, (i + 1) * dim + (j - 1)) -= c;
      }
    }
  }
  const RealMatrix u = gen.exp();
  return u.cast<Complex>();
}

RealMatrix wigner_grid(const FockDensity& rho, std::span<const double> xs,
                       std::span<const double> ps) {
  const int dim = rho.dim();
  RealMatrix w(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ps.size()));
  // D(beta) Pi D(beta)^dag = D(2 beta) Pi
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const ComplexMatrix d = displacement_matrix(2.0 * Complex(xs[i], ps[j]), dim, dim);
      Complex s = 0.0;
      for (int n = 0; n < dim; ++n) {
        const double parity = (n % 2 == 0) ? 1.0 : -1.0;
        Complex col = 0.0;
        for (int m = 0; m < dim; ++m) col += rho(n, m) * d(m, n);
        s += parity * col;
      }
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          2.0 / std::numbers::pi * s.real();
    }
  }
  return w;
}

}  // namespace phaseconc
