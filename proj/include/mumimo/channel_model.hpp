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

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mumimo/errors.hpp"
#include "mumimo/rng.hpp"

namespace mumimo {

/// Dense complex matrix carrying H, Ĥ, pilots, precoders and Gaussian draws.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Where a SystemConfig is about to be used; selects which constraints apply.
enum class ConfigUse {
  kBasic,           // positivity, lengths, K <= tau_rp
  kHomogeneousSum,  // + K <= M and equal SINRs across users
  kNetRate,         // + tau_rp <= T - 2
};

/// System dimensions and per-user link qualities.
///
/// SINRs are linear scale. Weights default to 1 (unweighted problems).
struct SystemConfig {
  int M = 1;       // base-station antennas
  int K = 1;       // users
  int T = 3;       // coherence interval, symbols
  int tau_rp = 1;  // reverse-link training length, symbols
  std::vector<double> rho_f;
  std::vector<double> rho_r;
  std::vector<double> weights;

  static SystemConfig homogeneous(int M, int K, int T, int tau_rp, double rho_f, double rho_r) {
    SystemConfig c;
    c.M = M;
    c.K = K;
    c.T = T;
    c.tau_rp = tau_rp;
    const auto n = static_cast<std::size_t>(std::max(K, 0));
    c.rho_f.assign(n, rho_f);
    c.rho_r.assign(n, rho_r);
    c.weights.assign(n, 1.0);
    return c;
  }

  [[nodiscard]] bool is_homogeneous() const {
    auto all_equal = [](const std::vector<double>& v) {
      return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    return !rho_f.empty() && all_equal(rho_f) && all_equal(rho_r);
  }

  /// Every violated constraint for the given use, empty if the config is valid.
  [[nodiscard]] std::vector<std::string> violations(ConfigUse use = ConfigUse::kBasic) const {
    std::vector<std::string> out;
    if (M < 1) out.emplace_back("M >= 1");
    if (K < 1) out.emplace_back("K >= 1");
    if (tau_rp < 1) out.emplace_back("tau_rp >= 1");
    if (K > tau_rp) out.emplace_back("K <= tau_rp");
    const auto k = static_cast<std::size_t>(std::max(K, 0));
    if (rho_f.size() != k) out.emplace_back("rho_f has K entries");
    if (rho_r.size() != k) out.emplace_back("rho_r has K entries");
    if (weights.size() != k) out.emplace_back("weights has K entries");
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!std::all_of(rho_f.begin(), rho_f.end(), positive)) out.emplace_back("rho_f > 0");
    if (!std::all_of(rho_r.begin(), rho_r.end(), positive)) out.emplace_back("rho_r > 0");
    if (!std::all_of(weights.begin(), weights.end(), [](double w) { return std::isfinite(w) && w >= 0.0; }))
      out.emplace_back("weights >= 0");
    if (std::none_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; }))
      out.emplace_back("at least one weight > 0");
    if (use == ConfigUse::kHomogeneousSum) {
      if (K > M) out.emplace_back("K <= M");
      if (!is_homogeneous()) out.emplace_back("homogeneous SINRs");
    }
    if (use == ConfigUse::kNetRate && tau_rp > T - 2) out.emplace_back("tau_rp <= T-2");
    return out;
  }

  void validate(ConfigUse use = ConfigUse::kBasic) const {
    const auto v = violations(use);
    if (v.empty()) return;
    std::string msg = "invalid SystemConfig:";
    for (const auto& s : v) msg += " [" + s + "]";
    throw DomainError(msg);
  }
};

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// Fraction of channel energy captured by the LMMSE estimate,
/// rho_r tau / (1 + rho_r tau).
inline double estimate_fraction(double rho_r, int tau_rp) {
  const double snr = rho_r * tau_rp;
  return snr / (1.0 + snr);
}

/// K x M matrix of i.i.d. CN(0,1) entries, drawn row by row so that the first
/// k rows of a K-row draw equal a k-row draw from the same stream state.
inline ComplexMatrix draw_channel(int K, int M, RngStream& rng) {
  ComplexMatrix h(K, M);
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m) h(k, m) = rng.complex_normal();
  return h;
}

}  // namespace mumimo
