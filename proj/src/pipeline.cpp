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

#include "phaseconc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "phaseconc/errors.hpp"
#include "phaseconc/rng.hpp"

namespace phaseconc {
namespace {

using Real = long double;

constexpr int kBootstrapResamples = 200;
constexpr double kBootstrapTrigger = 100.0;

double relative_gap(Complex value, Complex reference) {
  const double scale = std::abs(reference);
  const double diff = std::abs(value - reference);
  return scale > 0.0 ? diff / scale : diff;
}

double relative_gap(double value, double reference) {
  return relative_gap(Complex(value), Complex(reference));
}

// P(Poisson(lambda) >= M)
double click_probability(double lambda, int M) {
  if (M == 0) return 1.0;
  if (lambda <= 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(M), lambda);
}

struct Sample {
  double w;
  Complex y_mu;
  Complex y_amp;
};

class HeraldSampler {
 public:
  HeraldSampler(const AmplifierParams& p, std::uint64_t seed)
      : p_(p),
        rng_(seed),
        sigma_(std::sqrt(p.n_th / 2.0)),
        s_(p.eta * (1.0 - p.T)),
        sqrt_t_(std::sqrt(p.T)) {}

  Sample operator()(std::uint64_t i) const {
    Complex gamma = p_.alpha;
    if (sigma_ > 0.0) {
      const auto [g1, g2] = rng_.normal_pair(i);
      gamma += sigma_ * Complex(g1, g2);
    }
    const double w = click_probability(s_ * std::norm(gamma), p_.M);
    if (w == 0.0) return {0.0, 0.0, 0.0};
    const Complex out = sqrt_t_ * gamma;
    return {w, w * mu_coherent(out), w * out};
  }

 private:
  AmplifierParams p_;
  CounterRng rng_;
  double sigma_;
  double s_;
  double sqrt_t_;
};

struct RatioErrors {
  double mu_complex = 0.0;
  double mu_abs = 0.0;
  double amp_complex = 0.0;
};

RatioErrors bootstrap_errors(const std::vector<Sample>& nonzero, std::uint64_t n,
                             std::uint64_t seed) {
  std::vector<double> mu_re, mu_im, mu_abs, a_re, a_im;
  for (int b = 0; b < kBootstrapResamples; ++b) {
    const CounterRng rng(seed, 1000 + static_cast<std::uint64_t>(b));
    Real sw = 0.0L;
    std::complex<Real> smu = 0.0L, sa = 0.0L;
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint64_t j = rng.bits(i) % n;
      if (j >= nonzero.size()) continue;
      const Sample& s = nonzero[j];
      sw += s.w;
      smu += std::complex<Real>(s.y_mu.real(), s.y_mu.imag());
      sa += std::complex<Real>(s.y_amp.real(), s.y_amp.imag());
    }
    if (sw == 0.0L) continue;
    const std::complex<Real> rm = smu / sw, ra = sa / sw;
    mu_re.push_back(static_cast<double>(rm.real()));
    mu_im.push_back(static_cast<double>(rm.imag()));
    mu_abs.push_back(static_cast<double>(std::abs(rm)));
    a_re.push_back(static_cast<double>(ra.real()));
    a_im.push_back(static_cast<double>(ra.imag()));
  }
  auto var = [](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
  };
  return {std::sqrt(var(mu_re) + var(mu_im)), std::sqrt(var(mu_abs)),
          std::sqrt(var(a_re) + var(a_im))};
}

}  // namespace

ExactResult amplify_exact(const AmplifierParams& params, const CutoffPolicy& policy) {
  params.validate(kPipelineMaxM);
  policy.validate();
  auto run = [&](int cutoff) {
    const FockDensity input = displaced_thermal(params.alpha, params.n_th, cutoff + 1, policy);
    return condition_on_click(input, params.T, params.eta, params.M);
  };
  int cutoff = choose_cutoff(params.alpha, params.n_th, policy);
  Heralded h = run(cutoff);
  // Heralding amplifies the relative weight of the photon-number tail by
  // 1/P_S, and V_C = |mu|^-2 - 1 amplifies errors in mu by 2/|mu|^3.
  const double mu_abs = std::abs(mu_canonical(h.state));
  const double sensitivity = mu_abs > 0.0 ? std::min(1.0, 0.5 * mu_abs * mu_abs * mu_abs) : 1.0;
  const double scale = h.success_probability * sensitivity;
  if (scale < 1.0) {
    CutoffPolicy tight = policy;
    tight.tail_tol = std::max(policy.tail_tol * scale, 1e-300);
    int refined = policy.hard_max;
    try {
      refined = choose_cutoff(params.alpha, params.n_th, tight);
    } catch (const CutoffError&) {
      // Best effort: the requested tail_tol is already met at `cutoff`.
    }
    if (refined > cutoff) {
      cutoff = refined;
      h = run(cutoff);
    }
  }
  PhaseStats stats = params.alpha == Complex(0.0, 0.0) ? phase_stats(h.state)
                                                       : gain_and_gamma(h.state, params.alpha);
  return {std::move(h.state), stats, h.success_probability, cutoff};
}

void MCConfig::validate() const {
  if (n_samples < 1 || n_samples > 1'000'000'000ULL) {
    throw std::invalid_argument("n_samples must lie in [1, 1e9]");
  }
}

MCHeralded mc_heralded(const AmplifierParams& params, const MCConfig& cfg) {
  params.validate(kPipelineMaxM);
  cfg.validate();
  const HeraldSampler sample(params, cfg.seed);
  const std::uint64_t n = cfg.n_samples;
  const double nd = static_cast<double>(n);

  // Pass 1: means. Weight moments are taken about the first weight so that
  // constant weights give an exactly zero variance.
  const double w0 = sample(0).w;
  Real sw = 0.0L, sd = 0.0L, sd2 = 0.0L;
  std::complex<Real> smu = 0.0L, sa = 0.0L;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Sample s = sample(i);
    sw += s.w;
    sd += s.w - w0;
    sd2 += static_cast<Real>(s.w - w0) * (s.w - w0);
    smu += std::complex<Real>(s.y_mu.real(), s.y_mu.imag());
    sa += std::complex<Real>(s.y_amp.real(), s.y_amp.imag());
  }
  if (sw == 0.0L) {
    throw HeraldImpossible("no sample produced a click for M=" + std::to_string(params.M),
                           params.M);
  }
  const double xbar = static_cast<double>(sw / nd);
  const Complex r_mu(static_cast<double>((smu / sw).real()),
                     static_cast<double>((smu / sw).imag()));
  const Complex r_a(static_cast<double>((sa / sw).real()),
                    static_cast<double>((sa / sw).imag()));
  const double abs_mu = std::abs(r_mu);
  const Complex dir = abs_mu > 0.0 ? r_mu / abs_mu : Complex(1.0, 0.0);

  MCHeralded out;
  const double var_w = n > 1 ? static_cast<double>((sd2 - sd * sd / nd) / (nd - 1.0)) : 0.0;
  out.success_probability = {xbar, std::sqrt(std::max(0.0, var_w) / nd), nd};
  out.mu.mean = r_mu;
  out.mu_abs.mean = abs_mu;
  out.mean_amplitude.mean = r_a;
  out.mu.n_effective = out.mu_abs.n_effective = out.mean_amplitude.n_effective = nd;

  if (xbar * nd < kBootstrapTrigger) {
    std::vector<Sample> nonzero;
    for (std::uint64_t i = 0; i < n; ++i) {
      const Sample s = sample(i);
      if (s.w > 0.0) nonzero.push_back(s);
    }
    const RatioErrors e = bootstrap_errors(nonzero, n, cfg.seed);
    out.mu.std_error = e.mu_complex;
    out.mu_abs.std_error = e.mu_abs;
    out.mean_amplitude.std_error = e.amp_complex;
    out.bootstrap = true;
    return out;
  }

  // Pass 2: delta-method residuals Y - R X of the ratio estimators.
  Real res_mu = 0.0L, res_abs = 0.0L, res_a = 0.0L;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Sample s = sample(i);
    const Complex d_mu = s.y_mu - r_mu * s.w;
    const Complex d_a = s.y_amp - r_a * s.w;
    const double z = (s.y_mu * std::conj(dir)).real() - abs_mu * s.w;
    res_mu += std::norm(d_mu);
    res_a += std::norm(d_a);
    res_abs += static_cast<Real>(z) * z;
  }
  auto se = [&](Real ss) {
    if (n < 2) return 0.0;
    return std::sqrt(static_cast<double>(ss) / (nd - 1.0) / nd) / xbar;
  };
  out.mu.std_error = se(res_mu);
  out.mu_abs.std_error = se(res_abs);
  out.mean_amplitude.std_error = se(res_a);
  return out;
}

InferredInput infer_input_amplitude(double n_hd, double n_pnrd, double eta_pnrd) {
  if (!(eta_pnrd > 0.0 && eta_pnrd <= 1.0)) {
    throw std::invalid_argument("invalid calibration: eta_pnrd must lie in (0, 1]");
  }
  if (!(n_hd >= 0.0) || !(n_pnrd >= 0.0)) {
    throw std::invalid_argument("photon numbers must be >= 0");
  }
  const double n = n_hd + n_pnrd / eta_pnrd;
  return {n, std::sqrt(n)};
}

double ValidationReport::max_gap() const {
  double g = 0.0;
  for (const auto& r : rows) {
    if (!r.herald_impossible) g = std::max(g, r.gap_rel);
  }
  return g;
}

bool ValidationReport::literal_discrepancy() const {
  for (const auto& r : rows) {
    if (!r.herald_impossible && !(r.paper_literal_gap <= 1e-3)) return true;
  }
  return false;
}

ValidationReport validate_grid(std::span<const AmplifierParams> grid, const MCConfig& cfg) {
  if (grid.empty()) throw std::invalid_argument("validation grid is empty");
  cfg.validate();
  for (const auto& p : grid) p.validate(kPipelineMaxM);

  ValidationReport report;
  report.rows.reserve(grid.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ValidationRow row;
    row.params = grid[i];
    try {
      const ExactResult ex = amplify_exact(grid[i]);
      row.ps_oracle = ex.success_probability;
      row.mu_oracle = ex.stats.mu;
      row.ps_analytic = success_probability(grid[i]);
      row.mu_analytic = mu_amplified(grid[i]);
    } catch (const HeraldImpossible&) {
      row.herald_impossible = true;
      report.rows.push_back(row);
      continue;
    }
    row.gap_rel = std::max(relative_gap(row.ps_analytic, row.ps_oracle),
                           relative_gap(row.mu_analytic, row.mu_oracle));

    try {
      row.ps_literal = success_probability(grid[i], Transcription::literal);
      row.mu_literal = mu_amplified(grid[i], Transcription::literal,
                                    -std::numeric_limits<double>::infinity());
      row.paper_literal_gap = std::max(relative_gap(row.ps_literal, row.ps_oracle),
                                       relative_gap(row.mu_literal, row.mu_oracle));
    } catch (const Error&) {
      row.ps_literal = nan;
      row.mu_literal = Complex(nan, nan);
      row.paper_literal_gap = nan;
    }

    MCConfig shard = cfg;
    shard.seed = cfg.seed + i;
    try {
      const MCHeralded mc = mc_heralded(grid[i], shard);
      row.ps_mc = mc.success_probability.mean;
      row.ps_mc_se = mc.success_probability.std_error;
      row.mu_abs_mc = mc.mu_abs.mean;
      row.mu_abs_mc_se = mc.mu_abs.std_error;
    } catch (const HeraldImpossible&) {
      // Rare events can produce no clicks in a small sample.
      row.ps_mc = 0.0;
      row.mu_abs_mc = nan;
      row.mu_abs_mc_se = nan;
    }
    report.rows.push_back(row);
  }
  return report;
}

std::vector<AmplifierParams> acceptance_grid() {
  std::vector<AmplifierParams> grid;
  for (double a : {0.2, 0.48, 1.0}) {
    for (double n : {0.05, 0.15, 0.5, 1.0}) {
      for (double T : {0.8, 0.95}) {
        for (double eta : {0.63, 1.0}) {
          for (int M = 0; M <= 4; ++M) grid.push_back({Complex(a, 0.0), n, T, eta, M});
        }
      }
    }
  }
  return grid;
}

}  // namespace phaseconc
