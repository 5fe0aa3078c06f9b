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

#include <stdexcept>
#include <string>

namespace phaseconc {

/// Base class for numerical failures raised by the library. Argument
/// validation failures use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The Fock truncation needed to represent a state exceeds the policy limit.
class CutoffError : public Error {
 public:
  using Error::Error;
};

/// The heralding event has (numerically) zero probability, so the
/// conditional state is undefined.
class HeraldImpossible : public Error {
 public:
  HeraldImpossible(const std::string& what, int threshold)
      : Error(what), threshold_(threshold) {}
  int threshold() const noexcept { return threshold_; }

 private:
  int threshold_;
};

class SeriesNotConverged : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace phaseconc
