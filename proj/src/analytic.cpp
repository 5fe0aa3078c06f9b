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

#include "phaseconc/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "phaseconc/errors.hpp"
#include "phaseconc/phase_metrics.hpp"

namespace phaseconc {
namespace {

// Series are accumulated in extended precision: the Gaussian moments of
// order ~2n grow like (2n-1)!! and overflow double for n_th of a few photons.
using Real = long double;
using CReal = std::complex<long double>;

constexpr int kMaxSeriesTerms = 500;
constexpr Real kSeriesRelTol = 1e-17L;
// Below this success probability the subtractive (exclusion-sum) form loses
// too many digits and the complementary tail sum is used instead.
constexpr double kCancellationThreshold = 1e-3;

// Raw moments M_0..M_K of N(mean, var) by M_{k+1} = mean M_k + var k M_{k-1}.
class MomentTable {
 public:
  MomentTable(Real mean, Real var) : mean_(mean), var_(var), m_{1.0L, mean} {}

  Real operator()(int k) {
    while (static_cast<int>(m_.size()) <= k) {
      const int j = static_cast<int>(m_.size()) - 1;
      m_.push_back(mean_ * m_[j] + var_ * j * m_[j - 1]);
    }
    return m_[k];
  }

 private:
  Real mean_;
  Real var_;
  std::vector<Real> m_;
};

// I_n and J_n of a complex Gaussian with independent components.
class PlaneMoments {
 public:
  PlaneMoments(CReal A, Real B) : re_(A.real(), B), im_(A.imag(), B) {}

  CReal I(int n) {
    Real sr = 0.0L, si = 0.0L, c = 1.0L;
    for (int k = 0; k <= n; ++k) {
      sr += c * re_(2 * k + 1) * im_(2 * (n - k));
      si += c * re_(2 * k) * im_(2 * (n - k) + 1);
      c = c * (n - k) / (k + 1);
    }
    return {sr, si};
  }

  Real J(int n) {
    Real s = 0.0L, c = 1.0L;
    for (int k = 0; k <= n; ++k) {
      s += c * re_(2 * k) * im_(2 * (n - k));
      c = c * (n - k) / (k + 1);
    }
    return s;
  }

 private:
  MomentTable re_;
  MomentTable im_;
};

bool series_done(Real term, Real sum, int n, double peak) {
  return n > peak && term <= kSeriesRelTol * sum;
}

[[noreturn]] void not_converged(const char* what) {
  throw SeriesNotConverged(std::string(what) + ": no convergence within " +
                           std::to_string(kMaxSeriesTerms) + " terms");
}

// c_n = 1 / (n! sqrt(n+1)), n = 0..count-1
std::vector<Real> mu_coefficients(int count) {
  std::vector<Real> c(count);
  Real inv_fact = 1.0L;
  for (int n = 0; n < count; ++n) {
    if (n > 0) inv_fact /= n;
    c[n] = inv_fact / std::sqrt(static_cast<Real>(n + 1));
  }
  return c;
}

const std::vector<Real>& mu_coeff() {
  static const std::vector<Real> c = mu_coefficients(kMaxSeriesTerms + 1);
  return c;
}

// sum_n c_n I_n(A, B)
CReal mu_series(CReal A, Real B, double peak, const char* what) {
  PlaneMoments pm(A, B);
  const auto& c = mu_coeff();
  CReal sum = 0.0L;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    const CReal term = c[n] * pm.I(n);
    sum += term;
    if (series_done(std::abs(term), std::abs(sum), n, peak)) return sum;
  }
  not_converged(what);
}

// Parameters of the three Gaussian integrals appearing in the heralded
// expressions. All are written in sqrt(T)-scaled variables.
struct HeraldTerms {
  Real ratio;       // eta (1-T) / T, raised to k (or 2k in the literal form)
  CReal A1, A2, A3;
  Real B1, B2, B3;
  Real P1, P2, P3;  // exp(...)/Xi prefactors
  int exponent;     // 1 corrected, 2 literal
  double peak;
};

HeraldTerms herald_terms(const AmplifierParams& p, Transcription form) {
  const Real T = p.T, N = p.n_th, eta = p.eta;
  const CReal a(p.alpha.real(), p.alpha.imag());
  const Real a2 = std::norm(a);
  const Real s = eta * (1.0L - T);
  const Real sqT = std::sqrt(T);
  const Real xi1 = N * T + 1.0L;
  const Real xi2 = N * T + N * s + 1.0L;
  const Real xi3 = N * s + 1.0L;
  HeraldTerms h;
  h.ratio = s / T;
  h.exponent = form == Transcription::corrected ? 1 : 2;
  h.A1 = a * sqT / xi1;
  h.A2 = a * sqT / xi2;
  h.A3 = form == Transcription::corrected ? a * sqT / xi3 : a * T / xi3;
  h.B1 = N * T / (2.0L * xi1);
  h.B2 = N * T / (2.0L * xi2);
  h.B3 = N * T / (2.0L * xi3);
  h.P1 = std::exp(-a2 * T / xi1) / xi1;
  h.P2 = std::exp(-a2 * (T + s) / xi2) / xi2;
  h.P3 = std::exp(-a2 * s / xi3) / xi3;
  h.peak = static_cast<double>(a2) + p.n_th + 10.0 + p.M;
  return h;
}

// ratio^(e k) / k!
Real click_weight(Real ratio, int exponent, int k) {
  Real w = 1.0L;
  for (int j = 1; j <= k; ++j) w *= std::pow(ratio, static_cast<Real>(exponent)) / j;
  return w;
}

Real success_exclusion(const HeraldTerms& h, int M) {
  PlaneMoments pm(h.A3, h.B3);
  Real s = 0.0L;
  for (int k = 0; k < M; ++k) s += click_weight(h.ratio, h.exponent, k) * pm.J(k);
  return 1.0L - h.P3 * s;
}

Real success_tail(const HeraldTerms& h, int M) {
  PlaneMoments pm(h.A3, h.B3);
  Real s = 0.0L;
  Real w = click_weight(h.ratio, 1, M);
  for (int k = M; k < M + kMaxSeriesTerms; ++k) {
    const Real term = w * pm.J(k);
    s += term;
    if (series_done(term, s, k, h.peak)) return h.P3 * s;
    w *= h.ratio / (k + 1);
  }
  not_converged("success probability");
}

CReal mu_numerator_exclusion(const HeraldTerms& h, int M) {
  PlaneMoments pm1(h.A1, h.B1);
  PlaneMoments pm2(h.A2, h.B2);
  const auto& c = mu_coeff();
  std::vector<Real> w(M);
  for (int k = 0; k < M; ++k) w[k] = click_weight(h.ratio, h.exponent, k);
  CReal sum = 0.0L;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    CReal excl = 0.0L;
    for (int k = 0; k < M; ++k) excl += w[k] * pm2.I(n + k);
    const CReal term = c[n] * (h.P1 * pm1.I(n) - h.P2 * excl);
    sum += term;
    if (series_done(std::abs(term), std::abs(sum), n, h.peak)) return sum;
  }
  not_converged("heralded mu");
}

// P2 sum_j I_j(A2,B2) sum_{k=M}^{j} c_{j-k} ratio^k / k!
CReal mu_numerator_tail(const HeraldTerms& h, int M) {
  PlaneMoments pm(h.A2, h.B2);
  const auto& c = mu_coeff();
  std::vector<Real> w;
  CReal sum = 0.0L;
  for (int j = M; j < M + kMaxSeriesTerms; ++j) {
    w.push_back(click_weight(h.ratio, 1, j));
    Real inner = 0.0L;
    for (int k = M; k <= j; ++k) inner += c[j - k] * w[k - M];
    const CReal term = inner * pm.I(j);
    sum += term;
    if (series_done(std::abs(term), std::abs(sum), j, h.peak)) return h.P2 * sum;
  }
  not_converged("heralded mu");
}

void check_params(const AmplifierParams& p) { p.validate(); }

}  // namespace

double gaussian_moment(int k, GaussianMomentArgs args) {
  if (k < 0 || k > 200) throw std::invalid_argument("moment order must lie in [0, 200]");
  if (!(args.variance >= 0.0)) throw std::invalid_argument("variance must be >= 0");
  MomentTable t(args.mean, args.variance);
  return static_cast<double>(t(k));
}

Complex cal_I(int n, Complex A, double B) {
  if (n < 0 || n > 100) throw std::invalid_argument("n must lie in [0, 100]");
  if (!(B >= 0.0)) throw std::invalid_argument("B must be >= 0");
  PlaneMoments pm(CReal(A.real(), A.imag()), B);
  const CReal v = pm.I(n);
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

double cal_J(int n, Complex A, double B) {
  if (n < 0 || n > 100) throw std::invalid_argument("n must lie in [0, 100]");
  if (!(B >= 0.0)) throw std::invalid_argument("B must be >= 0");
  PlaneMoments pm(CReal(A.real(), A.imag()), B);
  return static_cast<double>(pm.J(n));
}

Complex mu_coherent(Complex alpha) {
  const double a2 = std::norm(alpha);
  if (!(std::abs(alpha) <= 12.0)) throw std::invalid_argument("|alpha| must be <= 12");
  double t = std::exp(-a2);  // e^{-|a|^2} |a|^{2n} / n!
  double sum = 0.0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    if (n > 0) t *= a2 / n;
    const double term = t / std::sqrt(n + 1.0);
    sum += term;
    if (n > a2 + 10.0 && term <= 1e-16 * sum) break;
  }
  return alpha * sum;
}

Complex mu_displaced_thermal(Complex alpha, double n_th) {
  if (!(n_th >= 0.0) || !std::isfinite(n_th)) {
    throw std::invalid_argument("n_th must be finite and >= 0");
  }
  const Real N = n_th;
  const CReal a(alpha.real(), alpha.imag());
  const Real pref = std::exp(-std::norm(a) / (N + 1.0L)) / (N + 1.0L);
  const CReal s = mu_series(a / (N + 1.0L), N / (2.0L * (N + 1.0L)),
                            std::norm(alpha) + n_th + 10.0, "displaced thermal mu");
  const CReal v = pref * s;
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

Complex parametric_integral(Complex alpha, double n_th) {
  if (!(n_th >= 0.0) || !std::isfinite(n_th)) {
    throw std::invalid_argument("n_th must be finite and >= 0");
  }
  const double a2 = std::norm(alpha);
  // x = w/(1 + w n) with w = 1 - exp(-u^2) maps u in [0, inf) onto the
  // integration range and removes both endpoint singularities.
  auto f = [&](double u) {
    const double e = std::exp(-u * u);
    const double w = -std::expm1(-u * u);
    const double d = 1.0 + w * n_th;
    const double x = w / d;
    return 2.0 * e * std::exp(-x * a2) / (d * d);
  };
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-13, &err);
  if (!std::isfinite(value) || err > 1e-8) {
    throw IntegrationError("parametric-amplifier integral did not converge");
  }
  return alpha * (value / std::sqrt(std::numbers::pi));
}

Complex mu_parametric(Complex alpha, double G) {
  if (!(G >= 1.0) || !std::isfinite(G)) throw std::invalid_argument("G must be >= 1");
  return parametric_integral(std::sqrt(G) * alpha, 2.0 * G - 2.0);
}

void AmplifierParams::validate(int max_M) const {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("alpha must be finite");
  }
  if (!(n_th >= 0.0) || !std::isfinite(n_th)) {
    throw std::invalid_argument("n_th must be finite and >= 0");
  }
  if (!(T > 0.0 && T <= 1.0)) throw std::invalid_argument("T must lie in (0, 1]");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (M < 0 || M > max_M) {
    throw std::invalid_argument("M must lie in [0, " + std::to_string(max_M) + "]");
  }
}

double success_probability(const AmplifierParams& p, Transcription form) {
  check_params(p);
  if (p.M == 0) return 1.0;
  const HeraldTerms h = herald_terms(p, form);
  Real ps = success_exclusion(h, p.M);
  if (form == Transcription::corrected && ps < kCancellationThreshold) {
    ps = success_tail(h, p.M);
  }
  return static_cast<double>(ps);
}

Complex mu_amplified(const AmplifierParams& p, Transcription form, double herald_floor) {
  check_params(p);
  const HeraldTerms h = herald_terms(p, form);
  Real ps = p.M == 0 ? 1.0L : success_exclusion(h, p.M);
  const bool tail = form == Transcription::corrected && p.M > 0 &&
                    ps < kCancellationThreshold;
  if (tail) ps = success_tail(h, p.M);
  if (!(ps >= herald_floor)) {
    throw HeraldImpossible("success probability below floor for M=" + std::to_string(p.M),
                           p.M);
  }
  const CReal num = tail ? mu_numerator_tail(h, p.M) : mu_numerator_exclusion(h, p.M);
  const CReal v = num / ps;
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

Complex mean_amplitude_amplified(const AmplifierParams& p, double herald_floor) {
  check_params(p);
  const HeraldTerms h = herald_terms(p, Transcription::corrected);
  const CReal a(p.alpha.real(), p.alpha.imag());
  Real ps = p.M == 0 ? 1.0L : success_exclusion(h, p.M);
  const bool tail = p.M > 0 && ps < kCancellationThreshold;
  if (tail) ps = success_tail(h, p.M);
  if (!(ps >= herald_floor)) {
    throw HeraldImpossible("success probability below floor for M=" + std::to_string(p.M),
                           p.M);
  }
  PlaneMoments pm(h.A3, h.B3);
  CReal num = 0.0L;
  if (tail) {
    Real w = click_weight(h.ratio, 1, p.M);
    for (int k = p.M;; ++k) {
      if (k >= p.M + kMaxSeriesTerms) not_converged("heralded mean amplitude");
      const CReal term = w * pm.I(k);
      num += term;
      if (series_done(std::abs(term), std::abs(num), k, h.peak)) break;
      w *= h.ratio / (k + 1);
    }
    num *= h.P3;
  } else {
    CReal excl = 0.0L;
    for (int k = 0; k < p.M; ++k) excl += click_weight(h.ratio, 1, k) * pm.I(k);
    num = a * std::sqrt(static_cast<Real>(p.T)) - h.P3 * excl;
  }
  const CReal v = num / ps;
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

double normalized_variance(const AmplifierParams& p) {
  if (p.alpha == Complex(0.0, 0.0)) {
    throw std::invalid_argument("Gamma needs a non-zero input amplitude");
  }
  return holevo_variance(mu_amplified(p)) / holevo_variance(mu_coherent(p.alpha));
}

ApproxAmplified approx_amplified(Complex alpha, double n_th) {
  const double a2 = std::norm(alpha);
  if (a2 == 0.0) throw std::invalid_argument("small-signal model undefined for alpha = 0");
  if (!(n_th > 0.0)) throw std::invalid_argument("small-signal model needs n_th > 0");
  const double norm = a2 + n_th + 4.0 * a2 * n_th;
  ComplexMatrix m(2, 2);
  m(0, 0) = (a2 + n_th) / norm;
  m(0, 1) = 2.0 * std::conj(alpha) * n_th / norm;
  m(1, 0) = 2.0 * alpha * n_th / norm;
  m(1, 1) = 4.0 * a2 * n_th / norm;
  const double variance = (1.0 + a2 / n_th) / (4.0 * a2) - 1.0;
  return {FockDensity(std::move(m)), variance, a2 < 0.1 && n_th < 0.3};
}

NoiseOptimum optimal_noise(Complex alpha, double T, double eta, int M, double lo,
                           double hi, double tol) {
  if (M < 1) throw std::invalid_argument("optimal_noise needs M >= 1");
  if (!(lo > 0.0 && hi > lo && tol > 0.0)) throw std::invalid_argument("bad bracket");
  AmplifierParams p{alpha, lo, T, eta, M};
  p.validate();
  auto gamma = [&](double n) {
    p.n_th = n;
    try {
      return normalized_variance(p);
    } catch (const HeraldImpossible&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = gamma(c), fd = gamma(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = gamma(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = gamma(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double g = gamma(x);
  return {x, g, g < 1.0};
}

}  // namespace phaseconc
