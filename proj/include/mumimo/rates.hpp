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

// Achievable-rate lower bounds (bits per symbol) for pseudo-inverse
// precoding on TDD-estimated channels, and their net-of-training versions.
//
// Every per-user bound has the shape
//   log2(1 + rho_f g^2 / (1 + rho_f (err + v)))
// where g and v are the mean and variance of the effective gain statistic and
// err = 1 / (1 + rho_r tau) is the estimation error variance. Reported
// std_error values propagate the standard error of the gain mean through
// the bound to first order.
//
// Searches over N, K and tau are exhaustive. Ties within kTieTolerance keep
// the earliest candidate in search order (tau ascending, then K, then N).

#include <cmath>
#include <concepts>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mumimo/channel_model.hpp"
#include "mumimo/moments.hpp"
#include "mumimo/power_opt.hpp"

namespace mumimo {

inline constexpr double kTieTolerance = 1e-12;

/// Something that can supply E[eta] and var{eta} for (M, K, N).
template <class S>
concept EtaMomentSource = requires(S& s, int d) {
  { s.eta(d, d, d) } -> std::convertible_to<MomentEstimate>;
};

/// Something that can supply phi_F moments and scheduled phi statistics.
template <class S>
concept PhiMomentSource = requires(S& s, std::span<const double> v, int d) {
  { s.phi_f(v, d) } -> std::convertible_to<MomentEstimate>;
  { s.scheduled_phi(v, v, d) } -> std::convertible_to<ScheduledPhiStats>;
};

struct RatePoint {
  double rate = 0.0;
  double std_error = 0.0;
  int n_selected = 0;
  int tau_rp = 0;
  int K = 0;
  double prelog = 1.0;  // (T - tau - 1) / T for net rates, 1 otherwise
  double moment_mean = 0.0;
  double moment_variance = 0.0;
  std::int64_t singular_events = 0;
  std::vector<double> powers;  // p̄* at the optimum (weighted rates only)
};

namespace detail {

inline void check_link(double rho_f, double rho_r, int tau_rp, double mean, double var) {
  if (!(rho_f > 0.0) || !(rho_r > 0.0)) throw DomainError("rate bound: SINRs must be positive");
  if (tau_rp < 1) throw DomainError("rate bound: tau_rp must be positive");
  if (!(mean >= 0.0) || !(var >= 0.0)) throw DomainError("rate bound: moments must be nonnegative");
}

/// log2(1 + rho_f s m^2 / (1 + rho_f (err + s v))) and its derivative in m.
struct BoundTerm {
  double value;
  double d_mean;
};

inline BoundTerm bound_term(double rho_f, double rho_r, int tau_rp, double scale, double mean, double var) {
  const double err = 1.0 / (1.0 + rho_r * tau_rp);
  const double den = 1.0 + rho_f * (err + scale * var);
  const double snr = rho_f * scale * mean * mean / den;
  return {std::log2(1.0 + snr), 2.0 * rho_f * scale * mean / den / ((1.0 + snr) * std::numbers::ln2)};
}

}  // namespace detail

/// Per-user rate for a fixed number of served users given chi moments.
inline double c_ind_lb(double rho_f, double rho_r, int tau_rp, double e_chi, double var_chi) {
  detail::check_link(rho_f, rho_r, tau_rp, e_chi, var_chi);
  const double err = 1.0 / (1.0 + rho_r * tau_rp);
  return std::log2(1.0 + rho_f * e_chi * e_chi / (1.0 + rho_f * (err + var_chi)));
}

/// c_ind_lb with chi = sqrt(rho_r tau / (1 + rho_r tau)) eta.
inline double c_ind_lb_scheduled(double rho_f, double rho_r, int tau_rp, double e_eta, double var_eta) {
  detail::check_link(rho_f, rho_r, tau_rp, e_eta, var_eta);
  return detail::bound_term(rho_f, rho_r, tau_rp, estimate_fraction(rho_r, tau_rp), e_eta, var_eta).value;
}

/// Sum-rate bound max_N N * c_ind_lb for homogeneous users.
///
/// Scheduled: the N strongest of K estimated users, eta(M, K, N).
/// Unscheduled: N users chosen independently of the channel, eta(M, N, N).
template <EtaMomentSource Source>
RatePoint c_sum_lb(const SystemConfig& config, bool scheduled, Source& source) {
  config.validate(ConfigUse::kHomogeneousSum);
  const double rho_f = config.rho_f.front();
  const double rho_r = config.rho_r.front();
  const int tau = config.tau_rp;
  const double scale = estimate_fraction(rho_r, tau);
  RatePoint best;
  best.rate = -1.0;
  best.tau_rp = tau;
  best.K = config.K;
  for (int n = 1; n <= config.K; ++n) {
    const MomentEstimate m = scheduled ? source.eta(config.M, config.K, n) : source.eta(config.M, n, n);
    const auto term = detail::bound_term(rho_f, rho_r, tau, scale, m.mean, m.variance);
    const double rate = n * term.value;
    if (rate > best.rate + kTieTolerance) {
      best.rate = rate;
      best.std_error = n * std::abs(term.d_mean) * m.std_error_of_mean;
      best.n_selected = n;
      best.moment_mean = m.mean;
      best.moment_variance = m.variance;
      best.singular_events = m.singular_events;
    }
  }
  return best;
}

/// Net sum rate max_{K, tau} ((T - tau - 1) / T) c_sum_lb subject to
/// tau <= T - 2 and K <= min(M, tau).
template <EtaMomentSource Source>
RatePoint c_net(int M, int T, double rho_f, double rho_r, bool scheduled, Source& source) {
  if (T < 3) throw InfeasibleError("c_net: coherence interval T = " + std::to_string(T) + " < 3");
  if (M < 1) throw RangeError("c_net: M must be positive");
  RatePoint best;
  best.rate = -1.0;
  for (int tau = 1; tau <= T - 2; ++tau) {
    const double prelog = static_cast<double>(T - tau - 1) / T;
    for (int k = 1; k <= std::min(M, tau); ++k) {
      const SystemConfig cfg = SystemConfig::homogeneous(M, k, T, tau, rho_f, rho_r);
      RatePoint p = c_sum_lb(cfg, scheduled, source);
      const double net = prelog * p.rate;
      if (net > best.rate + kTieTolerance) {
        p.rate = net;
        p.std_error *= prelog;
        p.prelog = prelog;
        best = p;
      }
    }
  }
  return best;
}

/// Weighted-sum bound with the modified precoder for all users and the given
/// phi_F moments. Users with p_k = 0 (not served) or w_k = 0 contribute 0.
inline double c_wt_lb(const SystemConfig& config, std::span<const double> p, double phi_mean, double phi_var) {
  const auto K = static_cast<std::size_t>(config.K);
  if (p.size() != K || config.rho_f.size() != K || config.rho_r.size() != K || config.weights.size() != K)
    throw DimensionError("c_wt_lb: p, SINRs and weights need K entries");
  if (!(phi_mean >= 0.0) || !(phi_var >= 0.0)) throw DomainError("c_wt_lb: moments must be nonnegative");
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (!(p[k] >= 0.0) || !(config.weights[k] >= 0.0)) throw DomainError("c_wt_lb: p and weights must be nonnegative");
    detail::check_link(config.rho_f[k], config.rho_r[k], config.tau_rp, phi_mean, phi_var);
    if (p[k] == 0.0 || config.weights[k] == 0.0) continue;
    total += config.weights[k] *
             detail::bound_term(config.rho_f[k], config.rho_r[k], config.tau_rp, p[k], phi_mean, phi_var).value;
  }
  return total;
}

namespace detail {

struct WeightedRate {
  double rate = 0.0;
  double std_error = 0.0;
};

/// sum_k w_k P(k served) bound(E[phi | k served], var{phi | k served}) over
/// the users in `served` (indices into config, aligned with level.users).
inline WeightedRate scheduled_weighted_rate(const SystemConfig& config, std::span<const double> p,
                                            std::span<const int> served, const ScheduledLevel& level) {
  WeightedRate out;
  for (std::size_t j = 0; j < served.size(); ++j) {
    const auto k = static_cast<std::size_t>(served[j]);
    const ScheduledUserStats& u = level.users[j];
    if (u.selected == 0 || config.weights[k] == 0.0) continue;
    const auto term = bound_term(config.rho_f[k], config.rho_r[k], config.tau_rp, p[k], u.mean, u.variance);
    out.rate += config.weights[k] * u.selection_prob * term.value;
    out.std_error += config.weights[k] * u.selection_prob * std::abs(term.d_mean) * u.std_error_of_mean;
  }
  return out;
}

}  // namespace detail

/// Power rule for the weighted net rate: config (with tau_rp set) -> p̄*.
using PowerRule = std::function<std::vector<double>(const SystemConfig&)>;

inline std::vector<double> waterfill_powers(const SystemConfig& config) {
  return optimized_powers(config).p_star;
}

/// Net weighted-sum rate max_tau ((T - tau - 1) / T) C_wt over
/// K <= tau <= T - 2, with powers from `power` at each tau.
///
/// Unscheduled: every user with p̄*_k > 0 is served (N = active count).
/// Scheduled: users are ranked per block by p̄*_k ||z_k||^2 and the best N
/// is searched; each user's term is weighted by its scheduling probability
/// and uses phi moments conditioned on being scheduled. At N = active count
/// the scheduled bound reproduces the unscheduled one exactly.
template <PhiMomentSource Source>
RatePoint c_wt_net(const SystemConfig& config, bool scheduled, Source& source,
                   const PowerRule& power = waterfill_powers) {
  const int K = config.K;
  const int T = config.T;
  if (T < K + 2) throw InfeasibleError("c_wt_net: T = " + std::to_string(T) + " < K + 2");
  RatePoint best;
  best.rate = -1.0;
  for (int tau = K; tau <= T - 2; ++tau) {
    SystemConfig cfg = config;
    cfg.tau_rp = tau;
    cfg.validate(ConfigUse::kNetRate);
    const std::vector<double> p = power(cfg);
    if (static_cast<int>(p.size()) != K) throw DimensionError("c_wt_net: power rule returned wrong length");

    std::vector<int> served;
    std::vector<double> p_served;
    std::vector<double> frac_served;
    for (int k = 0; k < K; ++k) {
      if (p[static_cast<std::size_t>(k)] > 0.0) {
        served.push_back(k);
        p_served.push_back(p[static_cast<std::size_t>(k)]);
        frac_served.push_back(estimate_fraction(cfg.rho_r[static_cast<std::size_t>(k)], tau));
      }
    }
    if (served.empty()) throw DomainError("c_wt_net: power rule served no user");
    const double prelog = static_cast<double>(T - tau - 1) / T;

    RatePoint cand;
    cand.tau_rp = tau;
    cand.K = K;
    cand.prelog = prelog;
    cand.powers = p;
    if (!scheduled) {
      std::vector<double> f(served.size());
      for (std::size_t j = 0; j < served.size(); ++j) f[j] = std::sqrt(frac_served[j] / p_served[j]);
      const MomentEstimate m = source.phi_f(f, config.M);
      cand.rate = c_wt_lb(cfg, p, m.mean, m.variance);
      double se = 0.0;
      for (int k : served) {
        const auto uk = static_cast<std::size_t>(k);
        se += cfg.weights[uk] * std::abs(detail::bound_term(cfg.rho_f[uk], cfg.rho_r[uk], tau, p[uk], m.mean,
                                                            m.variance).d_mean) *
              m.std_error_of_mean;
      }
      cand.std_error = se;
      cand.n_selected = static_cast<int>(served.size());
      cand.moment_mean = m.mean;
      cand.moment_variance = m.variance;
      cand.singular_events = m.singular_events;
    } else {
      const ScheduledPhiStats stats = source.scheduled_phi(p_served, frac_served, config.M);
      cand.rate = -1.0;
      for (const ScheduledLevel& level : stats.levels) {
        const auto r = detail::scheduled_weighted_rate(cfg, p, served, level);
        if (r.rate > cand.rate + kTieTolerance) {
          cand.rate = r.rate;
          cand.std_error = r.std_error;
          cand.n_selected = level.N;
          cand.singular_events = level.singular_events;
        }
      }
    }
    cand.rate *= prelog;
    cand.std_error *= prelog;
    if (cand.rate > best.rate + kTieTolerance) best = std::move(cand);
  }
  return best;
}

}  // namespace mumimo
