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

#include "phaseconc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace phaseconc {
namespace {

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json to_json(const FockDensity& rho) {
  nlohmann::json elements = nlohmann::json::array();
  for (int m = 0; m < rho.dim(); ++m) {
    for (int n = 0; n < rho.dim(); ++n) {
      elements.push_back({rho(m, n).real(), rho(m, n).imag()});
    }
  }
  return {{"dim", rho.dim()}, {"elements", std::move(elements)}};
}

FockDensity fock_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("elements")) {
    throw std::invalid_argument("state JSON needs 'dim' and 'elements'");
  }
  const int dim = j.at("dim").get<int>();
  const auto& el = j.at("elements");
  if (dim < 1 || !el.is_array() || el.size() != static_cast<std::size_t>(dim) * dim) {
    throw std::invalid_argument("state JSON has inconsistent 'dim' and 'elements'");
  }
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const auto& pair = el[static_cast<std::size_t>(r) * dim + c];
      if (!pair.is_array() || pair.size() != 2) {
        throw std::invalid_argument("state JSON elements must be [re, im] pairs");
      }
      m(r, c) = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
  }
  return FockDensity(std::move(m));
}

nlohmann::json to_json(const PhaseStats& s) {
  return {{"mu_re", s.mu.real()},
          {"mu_im", s.mu.imag()},
          {"v_canonical", finite_or_null(s.variance_canonical)},
          {"gain", finite_or_null(s.gain)},
          {"gamma", s.gamma ? finite_or_null(*s.gamma) : nlohmann::json(nullptr)}};
}

void write_wigner_csv(std::ostream& os, std::span<const double> xs,
                      std::span<const double> ps, const RealMatrix& w) {
  os << "x,p,w\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      os << format_number(xs[i]) << ',' << format_number(ps[j]) << ','
         << format_number(w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
    }
  }
}

void write_phase_csv(std::ostream& os, std::span<const double> thetas,
                     std::span<const double> p) {
  os << "theta,p\n";
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    os << format_number(thetas[i]) << ',' << format_number(p[i]) << '\n';
  }
}

void write_records_csv(std::ostream& os, std::span<const QuadratureRecord> records) {
  os << "theta,x\n";
  for (const auto& r : records) os << format_number(r.theta) << ',' << format_number(r.x) << '\n';
}

std::vector<QuadratureRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("theta,x", 0) != 0) {
    throw std::invalid_argument("records CSV must start with header 'theta,x'");
  }
  std::vector<QuadratureRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed record: " + line);
    try {
      out.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("malformed record: " + line);
    }
  }
  return out;
}

void write_validation_csv(std::ostream& os, const ValidationReport& report) {
  os << "alpha_re,alpha_im,n_th,T,eta,M,ps_analytic,ps_oracle,ps_mc,ps_mc_se,"
        "mu_abs_analytic,mu_abs_oracle,mu_abs_mc,mu_abs_mc_se,gap_rel,paper_literal_gap\n";
  for (const auto& r : report.rows) {
    const auto& p = r.params;
    os << format_number(p.alpha.real()) << ',' << format_number(p.alpha.imag()) << ','
       << format_number(p.n_th) << ',' << format_number(p.T) << ',' << format_number(p.eta)
       << ',' << p.M << ',';
    if (r.herald_impossible) {
      os << "herald_impossible,,,,,,,,,\n";
      continue;
    }
    os << format_number(r.ps_analytic) << ',' << format_number(r.ps_oracle) << ','
       << format_number(r.ps_mc) << ',' << format_number(r.ps_mc_se) << ','
       << format_number(std::abs(r.mu_analytic)) << ',' << format_number(std::abs(r.mu_oracle))
       << ',' << format_number(r.mu_abs_mc) << ',' << format_number(r.mu_abs_mc_se) << ','
       << format_number(r.gap_rel) << ',' << format_number(r.paper_literal_gap) << '\n';
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace phaseconc
