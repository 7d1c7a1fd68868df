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

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "mumimo/channel_model.hpp"

namespace mumimo {

/// tau_rp x K matrix whose columns are the users' orthonormal pilot vectors.
struct PilotMatrix {
  ComplexMatrix psi;
};

/// M x tau_rp training block observed at the base station.
struct ReceivedPilots {
  ComplexMatrix y_r;
};

/// LMMSE channel estimate with the per-row variances of the estimate and of
/// the estimation error. Row k of h_hat has i.i.d. CN(0, est_var[k]) entries
/// and H - h_hat has i.i.d. CN(0, err_var[k]) entries independent of h_hat.
struct EstimatedChannel {
  ComplexMatrix h_hat;
  std::vector<double> est_var;
  std::vector<double> err_var;
};

/// First K columns of the unitary tau_rp-point DFT matrix.
inline PilotMatrix build_pilots(int tau_rp, int K) {
  if (K < 1 || tau_rp < 1) throw DimensionError("build_pilots: K and tau_rp must be positive");
  if (K > tau_rp)
    throw DimensionError("build_pilots: K = " + std::to_string(K) + " exceeds tau_rp = " +
                         std::to_string(tau_rp));
  ComplexMatrix psi(tau_rp, K);
  const double scale = 1.0 / std::sqrt(static_cast<double>(tau_rp));
  for (int t = 0; t < tau_rp; ++t) {
    for (int k = 0; k < K; ++k) {
      // Reduce t*k mod tau_rp first so the phase stays exact for large indices.
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((t * k) % tau_rp) / tau_rp;
      psi(t, k) = std::polar(scale, phase);
    }
  }
  return {std::move(psi)};
}

namespace detail {

inline void check_pilot_shapes(const ComplexMatrix& H, const SystemConfig& config,
                               const PilotMatrix& pilots) {
  if (H.rows() != config.K || H.cols() != config.M)
    throw DimensionError("reverse pilots: H must be K x M");
  if (pilots.psi.rows() != config.tau_rp || pilots.psi.cols() != config.K)
    throw DimensionError("reverse pilots: psi must be tau_rp x K");
  if (static_cast<int>(config.rho_r.size()) != config.K)
    throw DimensionError("reverse pilots: rho_r must have K entries");
}

/// sqrt(tau) H^T E_r Psi^dagger, the noise-free part of the training block.
inline ComplexMatrix pilot_signal(const ComplexMatrix& H, const SystemConfig& config,
                                  const PilotMatrix& pilots) {
  Eigen::VectorXd e_r(config.K);
  for (int k = 0; k < config.K; ++k) e_r(k) = std::sqrt(config.rho_r[k]);
  return std::sqrt(static_cast<double>(config.tau_rp)) * H.transpose() * e_r.asDiagonal() *
         pilots.psi.adjoint();
}

/// Test hook: the training block with the receiver noise removed.
inline ReceivedPilots noiseless_reverse_pilots(const ComplexMatrix& H, const SystemConfig& config,
                                               const PilotMatrix& pilots) {
  check_pilot_shapes(H, config, pilots);
  return {pilot_signal(H, config, pilots)};
}

}  // namespace detail

/// Y_r = sqrt(tau) H^T E_r Psi^dagger + V_r with V_r i.i.d. CN(0,1), drawn
/// column-major from `rng` after any draws already consumed.
inline ReceivedPilots simulate_reverse_pilots(const ComplexMatrix& H, const SystemConfig& config,
                                              const PilotMatrix& pilots, RngStream& rng) {
  detail::check_pilot_shapes(H, config, pilots);
  ComplexMatrix y = detail::pilot_signal(H, config, pilots);
  for (Eigen::Index t = 0; t < y.cols(); ++t)
    for (Eigen::Index m = 0; m < y.rows(); ++m) y(m, t) += rng.complex_normal();
  return {std::move(y)};
}

/// LMMSE estimate Ĥ = diag(sqrt(rho_rk tau) / (1 + rho_rk tau)) Psi^T Y_r^T.
///
/// Conjugation convention: users send sqrt(tau) psi_k^dagger, so Psi^T Y_r^T =
/// sqrt(tau) (Psi^dagger Psi)^* E_r H + Psi^T V_r^T = sqrt(tau) E_r H + noise.
/// The plain transpose (no conjugate) is what undoes the pilot; with V_r = 0
/// the estimate is exactly diag(rho_rk tau / (1 + rho_rk tau)) H.
inline EstimatedChannel lmmse_estimate(const ReceivedPilots& received, const PilotMatrix& pilots,
                                       const SystemConfig& config) {
  const int K = config.K;
  if (pilots.psi.rows() != config.tau_rp || pilots.psi.cols() != K)
    throw DimensionError("lmmse_estimate: psi must be tau_rp x K");
  if (received.y_r.rows() != config.M || received.y_r.cols() != config.tau_rp)
    throw DimensionError("lmmse_estimate: y_r must be M x tau_rp");
  if (static_cast<int>(config.rho_r.size()) != K)
    throw DimensionError("lmmse_estimate: rho_r must have K entries");

  EstimatedChannel est;
  est.est_var.resize(K);
  est.err_var.resize(K);
  Eigen::VectorXd gain(K);
  for (int k = 0; k < K; ++k) {
    const double snr = config.rho_r[k] * config.tau_rp;
    gain(k) = std::sqrt(snr) / (1.0 + snr);
    est.est_var[k] = snr / (1.0 + snr);
    est.err_var[k] = 1.0 / (1.0 + snr);
  }
  est.h_hat = gain.asDiagonal() * (pilots.psi.transpose() * received.y_r.transpose());
  return est;
}

}  // namespace mumimo
