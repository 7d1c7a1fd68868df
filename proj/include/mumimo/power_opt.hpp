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
#include <limits>
#include <span>
#include <vector>

#include "mumimo/channel_model.hpp"

namespace mumimo {

// Large-M power weighting for the modified precoder.
//
// With Z Z^dagger ~ M I the weighted-sum bound collapses to
//   J(p) = sum_i w_i log2(1 + beta_i p_i / sum_j alpha_j p_j),
// which is invariant to scaling p. Fixing sum_j alpha_j p_j = 1 turns it into
// a concave waterfilling problem whose solution is
//   p_i = (w_i / (lambda alpha_i) - 1 / beta_i)^+.

struct PowerCoefficients {
  std::vector<double> alpha;  // 1 / estimate_fraction; always > 1
  std::vector<double> beta;   // M rho_f / (1 + rho_f / (1 + rho_r tau))
};

struct PowerAllocation {
  std::vector<double> p_star;  // normalized: sum alpha_i p_i = 1
  double lambda_star = 0.0;
  std::vector<bool> active;
};

inline PowerCoefficients alpha_beta(const SystemConfig& config) {
  const auto K = static_cast<std::size_t>(config.K);
  if (config.rho_f.size() != K || config.rho_r.size() != K)
    throw DimensionError("alpha_beta: rho_f and rho_r need K entries");
  if (config.tau_rp < 1 || config.M < 1) throw DomainError("alpha_beta: M and tau_rp must be positive");
  PowerCoefficients c;
  c.alpha.resize(K);
  c.beta.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double rf = config.rho_f[k];
    const double rr = config.rho_r[k];
    if (!(rf > 0.0) || !(rr > 0.0)) throw DomainError("alpha_beta: SINRs must be positive");
    const double snr = rr * config.tau_rp;
    c.alpha[k] = (1.0 + snr) / snr;
    c.beta[k] = config.M * rf / (1.0 + rf / (1.0 + snr));
  }
  return c;
}

inline double j_objective(std::span<const double> p, std::span<const double> w,
                          std::span<const double> alpha, std::span<const double> beta) {
  const std::size_t K = p.size();
  if (w.size() != K || alpha.size() != K || beta.size() != K)
    throw DimensionError("j_objective: length mismatch");
  double load = 0.0;
  for (std::size_t j = 0; j < K; ++j) {
    if (!(p[j] >= 0.0)) throw DomainError("j_objective: powers must be nonnegative");
    load += alpha[j] * p[j];
  }
  if (!(load > 0.0)) throw DomainError("j_objective: powers are all zero");
  double j = 0.0;
  for (std::size_t i = 0; i < K; ++i) j += w[i] * std::log2(1.0 + beta[i] * p[i] / load);
  return j;
}

namespace detail {

inline double water_level_residual(double lambda, std::span<const double> w,
                                   std::span<const double> alpha, std::span<const double> beta) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    s += alpha[i] * std::max(w[i] / (lambda * alpha[i]) - 1.0 / beta[i], 0.0);
  return s - 1.0;
}

}  // namespace detail

/// Solves max J(p) subject to sum alpha_i p_i = 1.
///
/// lambda is bracketed in [eps, max_i w_i beta_i / alpha_i] and bisected
/// geometrically; the residual is strictly decreasing there. Once the active
/// set is stable the level is recomputed in closed form,
///   lambda = sum_A w_i / (1 + sum_A alpha_i / beta_i),
/// which removes the last bisection rounding.
inline PowerAllocation waterfill(std::span<const double> w, std::span<const double> alpha,
                                 std::span<const double> beta) {
  const std::size_t K = w.size();
  if (K == 0 || alpha.size() != K || beta.size() != K) throw DimensionError("waterfill: length mismatch");
  double hi = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) throw DomainError("waterfill: weights must be nonnegative");
    if (!(alpha[i] > 0.0) || !(beta[i] > 0.0) || !std::isfinite(alpha[i]) || !std::isfinite(beta[i]))
      throw DomainError("waterfill: alpha and beta must be positive");
    hi = std::max(hi, w[i] * beta[i] / alpha[i]);
  }
  if (!(hi > 0.0)) throw DomainError("waterfill: at least one weight must be positive");

  double lo = hi * 1e-300;
  if (lo == 0.0) lo = std::numeric_limits<double>::min();
  double lambda = hi;
  for (int iter = 0; iter < 200; ++iter) {
    lambda = std::sqrt(lo) * std::sqrt(hi);
    const double r = detail::water_level_residual(lambda, w, alpha, beta);
    if (std::abs(r) <= 1e-12) break;
    (r > 0.0 ? lo : hi) = lambda;
  }

  // Closed-form level on the active set, iterated until the set is consistent.
  for (int pass = 0; pass < static_cast<int>(K) + 1; ++pass) {
    double num = 0.0;
    double den = 1.0;
    for (std::size_t i = 0; i < K; ++i) {
      if (w[i] > 0.0 && w[i] * beta[i] / alpha[i] > lambda) {
        num += w[i];
        den += alpha[i] / beta[i];
      }
    }
    const double refined = num / den;
    if (refined == lambda) break;
    lambda = refined;
  }

  PowerAllocation out;
  out.lambda_star = lambda;
  out.p_star.resize(K);
  out.active.resize(K);
  for (std::size_t i = 0; i < K; ++i) {
    out.p_star[i] = std::max(w[i] / (lambda * alpha[i]) - 1.0 / beta[i], 0.0);
    out.active[i] = out.p_star[i] > 0.0;
  }
  const double residual = detail::water_level_residual(lambda, w, alpha, beta);
  if (!(std::abs(residual) <= 1e-10))
    throw ConvergenceError("waterfill: constraint residual " + std::to_string(residual));
  return out;
}

/// alpha_beta followed by waterfill with the config's weights.
inline PowerAllocation optimized_powers(const SystemConfig& config) {
  const PowerCoefficients c = alpha_beta(config);
  if (config.weights.size() != c.alpha.size()) throw DimensionError("optimized_powers: weights need K entries");
  return waterfill(config.weights, c.alpha, c.beta);
}

}  // namespace mumimo
