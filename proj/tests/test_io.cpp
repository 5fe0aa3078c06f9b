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

#include <limits>
#include <sstream>

#include "doctest.h"
#include "phaseconc/io.hpp"

using namespace phaseconc;

TEST_CASE("state JSON round trip is exact") {
  const auto dt = displaced_thermal({0.431, -0.2}, 0.15, 12, CutoffPolicy{1e-6, 256});
  const auto j = to_json(dt);
  CHECK(j.at("dim") == 12);
  CHECK(j.at("elements").size() == 144);
  CHECK(j.at("elements")[1][0].get<double>() == dt(0, 1).real());
  const auto back = fock_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.elements() == dt.elements());
}

TEST_CASE("state JSON rejects malformed input") {
  using nlohmann::json;
  CHECK_THROWS_AS(fock_from_json(json::object()), std::invalid_argument);
  CHECK_THROWS_AS(fock_from_json(json{{"dim", 2}, {"elements", json::array({{1, 0}})}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      fock_from_json(json{{"dim", 1}, {"elements", json::array({json::array({1, 0, 0})})}}),
      std::invalid_argument);
}

TEST_CASE("phase stats JSON") {
  PhaseStats s{{0.25, -0.5}, 3.2, 1.5, 0.8};
  const auto j = to_json(s);
  CHECK(j.at("mu_re") == 0.25);
  CHECK(j.at("mu_im") == -0.5);
  CHECK(j.at("v_canonical") == 3.2);
  CHECK(j.at("gain") == 1.5);
  CHECK(j.at("gamma") == 0.8);
  PhaseStats v{{0, 0}, std::numeric_limits<double>::infinity()};
  const auto jv = to_json(v);
  CHECK(jv.at("v_canonical").is_null());
  CHECK(jv.at("gamma").is_null());
}

TEST_CASE("number formatting keeps 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CSV writers") {
  std::ostringstream w;
  const std::vector<double> xs{0.0, 1.0}, ps{-1.0};
  RealMatrix m(2, 1);
  m << 0.5, 0.25;
  write_wigner_csv(w, xs, ps, m);
  CHECK(w.str() == "x,p,w\n0,-1,0.5\n1,-1,0.25\n");

  std::ostringstream p;
  const std::vector<double> th{-1.5, 0.0}, pr{0.125, 0.5};
  write_phase_csv(p, th, pr);
  CHECK(p.str() == "theta,p\n-1.5,0.125\n0,0.5\n");
}

TEST_CASE("records CSV round trip") {
  const std::vector<QuadratureRecord> recs{{0.1, -0.3}, {3.0, 1.0 / 7.0}};
  std::stringstream ss;
  write_records_csv(ss, recs);
  const auto back = read_records_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1].theta == 3.0);
  CHECK(back[1].x == 1.0 / 7.0);
  std::istringstream bad("a,b\n1,2\n");
  CHECK_THROWS_AS(read_records_csv(bad), std::invalid_argument);
  std::istringstream junk("theta,x\n1;2\n");
  CHECK_THROWS_AS(read_records_csv(junk), std::invalid_argument);
}

TEST_CASE("validation CSV header and rows") {
  ValidationReport rep;
  ValidationRow row;
  row.params = {{0.48, 0}, 0.2, 0.8, 0.63, 2};
  row.ps_analytic = row.ps_oracle = 0.5;
  row.mu_analytic = row.mu_oracle = {0.6, 0};
  rep.rows.push_back(row);
  ValidationRow dead = row;
  dead.herald_impossible = true;
  rep.rows.push_back(dead);
  std::ostringstream os;
  write_validation_csv(os, rep);
  std::istringstream is(os.str());
  std::string header, first, second;
  std::getline(is, header);
  std::getline(is, first);
  std::getline(is, second);
  CHECK(header ==
        "alpha_re,alpha_im,n_th,T,eta,M,ps_analytic,ps_oracle,ps_mc,ps_mc_se,mu_abs_analytic,"
        "mu_abs_oracle,mu_abs_mc,mu_abs_mc_se,gap_rel,paper_literal_gap");
  CHECK(std::count(first.begin(), first.end(), ',') == 15);
  CHECK(std::count(second.begin(), second.end(), ',') == 15);
  CHECK(second.find("herald_impossible") != std::string::npos);
}

TEST_CASE("file helpers") {
  CHECK_THROWS_AS(read_file("/nonexistent/dir/file"), std::runtime_error);
  CHECK_THROWS_AS(write_file("/nonexistent/dir/file", "x"), std::runtime_error);
}
