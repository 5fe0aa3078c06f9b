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

// File formats: FockDensity JSON, PhaseStats JSON and the CSV tables
// written by the command-line tool.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "phaseconc/fock.hpp"
#include "phaseconc/phase_metrics.hpp"
#include "phaseconc/pipeline.hpp"
#include "phaseconc/tomography.hpp"

namespace phaseconc {

/// Shortest-round-trip is not enough for byte comparisons across tools,
/// so tables use a fixed 17 significant digits.
std::string format_number(double v);

/// {"dim": d, "elements": [[re, im], ...]} in row-major order.
nlohmann::json to_json(const FockDensity& rho);
FockDensity fock_from_json(const nlohmann::json& j);

/// {"mu_re", "mu_im", "v_canonical", "gain", "gamma"}; non-finite values
/// and a missing gamma are written as null.
nlohmann::json to_json(const PhaseStats& s);

void write_wigner_csv(std::ostream& os, std::span<const double> xs,
                      std::span<const double> ps, const RealMatrix& w);
void write_phase_csv(std::ostream& os, std::span<const double> thetas,
                     std::span<const double> p);
void write_records_csv(std::ostream& os, std::span<const QuadratureRecord> records);
std::vector<QuadratureRecord> read_records_csv(std::istream& is);
void write_validation_csv(std::ostream& os, const ValidationReport& report);

/// Writes `text` to `path`, throwing std::runtime_error on failure.
void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace phaseconc
