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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace phaseconc {

/// Counter-based random stream: draw i of stream s depends only on
/// (seed, s, i), so any sharding of the index range gives identical draws.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t index, std::uint64_t lane = 0) const noexcept {
    return mix(key_ ^ mix(index * 0x9e3779b97f4a7c15ULL + lane * 0xbf58476d1ce4e5b9ULL + 1));
  }

  /// Uniform in (0, 1).
  double uniform(std::uint64_t index, std::uint64_t lane = 0) const noexcept {
    return (static_cast<double>(bits(index, lane) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair(std::uint64_t index) const noexcept {
    const double u1 = uniform(index, 0);
    const double u2 = uniform(index, 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace phaseconc
