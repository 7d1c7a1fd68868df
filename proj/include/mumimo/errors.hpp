// Copyright 2026 The mumimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mumimo {

// Matrix or vector shapes that do not agree with each other or with the config.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Integer argument outside its admissible range (e.g. N > K).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Real-valued argument outside the domain of a formula (negative SINR, p <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Gram matrix of the (scaled) estimated channel is numerically rank deficient.
class SingularChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No (K, tau_rp) pair satisfies the coherence-interval constraints.
class InfeasibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mumimo
