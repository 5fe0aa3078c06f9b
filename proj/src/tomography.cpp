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

#include "phaseconc/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "phaseconc/rng.hpp"

namespace phaseconc {
namespace {

constexpr int kMarginalPoints = 4096;
constexpr double kProbabilityFloor = 1e-12;

double auto_support(int dim) { return std::sqrt(dim - 0.5) + 2.0; }

// Puts theta into [0, pi); a shift by pi flips the sign of x.
QuadratureRecord fold(QuadratureRecord r) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(r.theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= std::numbers::pi) {
    t -= std::numbers::pi;
    r.x = -r.x;
  }
  r.theta = std::min(t, std::nextafter(std::numbers::pi, 0.0));
  return r;
}

double log_likelihood(const std::vector<double>& counts, const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    s += counts[j] * std::log(std::max(p[j], kProbabilityFloor));
  }
  return s;
}

}  // namespace

void TomoConfig::validate() const {
  if (dim < 2) throw std::invalid_argument("tomography dim must be >= 2");
  if (!(eta_hd > 0.0 && eta_hd <= 1.0)) throw std::invalid_argument("eta_hd must lie in (0, 1]");
  if (n_phase_bins < 4 || n_x_bins < 4) throw std::invalid_argument("need at least 4 bins");
  if (!(x_range >= 0.0)) throw std::invalid_argument("x_range must be >= 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
}

RealMatrix quadrature_wavefunctions(std::span<const double> xs, int dim) {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  RealMatrix psi(static_cast<Eigen::Index>(xs.size()), dim);
  // phi_n(q) in the Var = 1/2 convention, with q = sqrt(2) x.
  const double norm0 = std::pow(std::numbers::pi, -0.25) * std::pow(2.0, 0.25);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double q = std::sqrt(2.0) * xs[i];
    const auto r = static_cast<Eigen::Index>(i);
    psi(r, 0) = norm0 * std::exp(-0.5 * q * q);
    if (dim > 1) psi(r, 1) = std::sqrt(2.0) * q * psi(r, 0);
    for (int n = 2; n < dim; ++n) {
      psi(r, n) = std::sqrt(2.0 / n) * q * psi(r, n - 1) -
                  std::sqrt((n - 1.0) / n) * psi(r, n - 2);
    }
  }
  return psi;
}

std::vector<QuadratureRecord> sample_homodyne(const FockDensity& rho, std::size_t n,
                                              double eta_hd, std::uint64_t seed) {
  if (!(eta_hd > 0.0 && eta_hd <= 1.0)) throw std::invalid_argument("eta_hd must lie in (0, 1]");
  const FockDensity lossy = pure_loss(rho, eta_hd);
  const int dim = lossy.dim();
  const double half = std::sqrt(static_cast<double>(dim)) + 3.0;
  std::vector<double> xs(kMarginalPoints);
  const double dx = 2.0 * half / (kMarginalPoints - 1);
  for (int i = 0; i < kMarginalPoints; ++i) xs[i] = -half + dx * i;
  const RealMatrix psi = quadrature_wavefunctions(xs, dim);

  // g_d(x) = sum_m <m+d|rho|m> psi_{m+d}(x) psi_m(x); the marginal at phase
  // theta is Re g_0 + 2 Re sum_{d>=1} e^{-i theta d} g_d. Stored as real and
  // imaginary rows so the per-sample tabulation vectorizes.
  Eigen::MatrixXd g_re = Eigen::MatrixXd::Zero(kMarginalPoints, dim);
  Eigen::MatrixXd g_im = Eigen::MatrixXd::Zero(kMarginalPoints, dim);
  for (int d = 0; d < dim; ++d) {
    for (int m = 0; m + d < dim; ++m) {
      const Complex c = lossy(m + d, m);
      if (c == Complex(0.0)) continue;
      const Eigen::VectorXd prod = psi.col(m + d).cwiseProduct(psi.col(m));
      g_re.col(d) += c.real() * prod;
      g_im.col(d) += c.imag() * prod;
    }
  }

  const CounterRng rng(seed);
  std::vector<QuadratureRecord> out(n);
  Eigen::VectorXd a(dim), b(dim), p(kMarginalPoints);
  std::vector<double> cdf(kMarginalPoints);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = std::numbers::pi * rng.uniform(i, 0);
    for (int d = 0; d < dim; ++d) {
      const double w = d == 0 ? 1.0 : 2.0;
      a(d) = w * std::cos(theta * d);
      b(d) = -w * std::sin(theta * d);
    }
    // Re[(a + ib)(g_re + i g_im)]
    p.noalias() = g_re * a;
    p.noalias() -= g_im * b;
    double acc = 0.0, prev = 0.0;
    for (int k = 0; k < kMarginalPoints; ++k) {
      const double pk = std::max(p(k), 0.0);
      if (k > 0) acc += 0.5 * (pk + prev) * dx;
      cdf[k] = acc;
      prev = pk;
    }
    const double target = rng.uniform(i, 1) * cdf.back();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
    const auto k = static_cast<int>(std::clamp<std::ptrdiff_t>(it - cdf.begin(), 1, kMarginalPoints - 1));
    const double span = cdf[k] - cdf[k - 1];
    const double frac = span > 0.0 ? (target - cdf[k - 1]) / span : 0.5;
    out[i] = {theta, xs[k - 1] + frac * dx};
  }
  return out;
}

Reconstruction maxlik_reconstruct(std::span<const QuadratureRecord> records,
                                  const TomoConfig& cfg) {
  cfg.validate();
  if (records.size() < 100) throw std::invalid_argument("need at least 100 records");
  const int dim = cfg.dim;
  const int nb = cfg.n_phase_bins;
  const int nx = cfg.n_x_bins;

  std::vector<QuadratureRecord> folded;
  folded.reserve(records.size());
  double max_abs = 0.0;
  for (const auto& r : records) {
    if (!std::isfinite(r.theta) || !std::isfinite(r.x)) {
      throw std::invalid_argument("non-finite quadrature record");
    }
    folded.push_back(fold(r));
    max_abs = std::max(max_abs, std::abs(r.x));
  }
  const double range =
      cfg.x_range > 0.0 ? cfg.x_range : std::max(max_abs * (1.0 + 1e-9), auto_support(dim));
  const double width = 2.0 * range / nx;
  const double phase_width = std::numbers::pi / nb;

  std::vector<double> counts(static_cast<std::size_t>(nb) * nx, 0.0);
  double used = 0.0;
  for (const auto& r : folded) {
    if (std::abs(r.x) > range) continue;
    const int b = std::min(nb - 1, static_cast<int>(r.theta / phase_width));
    const int j = std::clamp(static_cast<int>((r.x + range) / width), 0, nx - 1);
    counts[static_cast<std::size_t>(b) * nx + j] += 1.0;
    used += 1.0;
  }
  if (used == 0.0) throw std::invalid_argument("no records fall inside x_range");

  // Overlap integrals S_j(m, n) = int_{bin j} psi_m psi_n dx.
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  std::vector<RealMatrix> overlap(nx, RealMatrix::Zero(dim, dim));
  for (int j = 0; j < nx; ++j) {
    const double lo = -range + j * width;
    std::vector<double> xs, ws;
    for (std::size_t a = 0; a < Gauss::abscissa().size(); ++a) {
      const double t = Gauss::abscissa()[a];
      const double w = Gauss::weights()[a];
      for (double s : {t, -t}) {
        if (a == 0 && s == -t && t == 0.0) continue;
        xs.push_back(lo + 0.5 * width * (1.0 + s));
        ws.push_back(0.5 * width * w);
      }
    }
    const RealMatrix psi = quadrature_wavefunctions(xs, dim);
    overlap[j] = psi.transpose() * Eigen::Map<const Eigen::VectorXd>(ws.data(), ws.size()).asDiagonal() * psi;
  }

  // Phases are uniform inside a bin, so averaging the projector over the bin
  // multiplies coherence d = m - n by sinc(d * width / 2).
  std::vector<double> phase_factor(dim, 1.0);
  if (cfg.phase_averaged) {
    for (int d = 1; d < dim; ++d) {
      const double h = 0.5 * d * phase_width;
      phase_factor[d] = std::sin(h) / h;
    }
  }

  const std::vector<RealMatrix> kraus = loss_kraus(cfg.eta_hd, dim);
  struct Cell {
    double f;
    ComplexMatrix povm;
  };
  std::vector<Cell> cells;
  std::vector<double> cell_counts;
  for (int b = 0; b < nb; ++b) {
    const double phi = (b + 0.5) * phase_width;
    for (int j = 0; j < nx; ++j) {
      const double c = counts[static_cast<std::size_t>(b) * nx + j];
      if (c == 0.0) continue;
      ComplexMatrix pi(dim, dim);
      for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
          pi(m, n) = std::polar(overlap[j](m, n) * phase_factor[std::abs(m - n)], phi * (m - n));
        }
      }
      if (cfg.eta_hd < 1.0) {
        ComplexMatrix folded_pi = ComplexMatrix::Zero(dim, dim);
        for (const auto& a : kraus) folded_pi += a.transpose() * pi * a;
        pi = folded_pi;
      }
      cells.push_back({c / used, std::move(pi)});
      cell_counts.push_back(c);
    }
  }

  auto probabilities = [&](const ComplexMatrix& rho, bool* floored) {
    std::vector<double> p(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      p[k] = (rho.cwiseProduct(cells[k].povm.transpose())).sum().real();
      if (floored && p[k] < kProbabilityFloor) *floored = true;
    }
    return p;
  };

  Reconstruction out{FockDensity::vacuum(dim), 0, false, {}, false, range};
  ComplexMatrix rho = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  std::vector<double> p = probabilities(rho, nullptr);
  double logl = log_likelihood(cell_counts, p);
  out.log_likelihood.push_back(logl);
  const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);

  for (int it = 0; it < cfg.max_iters; ++it) {
    ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (p[k] < kProbabilityFloor) out.floor_applied = true;
      r += (cells[k].f / std::max(p[k], kProbabilityFloor)) * cells[k].povm;
    }
    ComplexMatrix next = r * rho * r;
    next = 0.5 * (next + next.adjoint());
    next /= next.trace().real();
    std::vector<double> p_next = probabilities(next, nullptr);
    double logl_next = log_likelihood(cell_counts, p_next);
    double eps = 1.0;
    while (logl_next < logl && eps > 1e-8) {
      const ComplexMatrix g = eye + eps * r;
      next = g * rho * g;
      next = 0.5 * (next + next.adjoint());
      next /= next.trace().real();
      p_next = probabilities(next, nullptr);
      logl_next = log_likelihood(cell_counts, p_next);
      eps *= 0.5;
    }
    if (logl_next < logl) {
      // No ascent direction left: rho is at the likelihood maximum.
      out.converged = true;
      break;
    }
    const double change = (next - rho).cwiseAbs().maxCoeff();
    rho = std::move(next);
    p = std::move(p_next);
    logl = logl_next;
    out.log_likelihood.push_back(logl);
    out.iterations = it + 1;
    if (change < cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.state = FockDensity(std::move(rho));
  return out;
}

double fidelity(const FockDensity& rho, const FockDensity& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho.elements() + rho.elements().adjoint()));
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix sq = es.eigenvectors() * lam.cast<Complex>().asDiagonal() *
                           es.eigenvectors().adjoint();
  ComplexMatrix m = sq * sigma.elements() * sq;
  m = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es2(m, Eigen::EigenvaluesOnly);
  const double s = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(s * s, 0.0, 1.0);
}

}  // namespace phaseconc
