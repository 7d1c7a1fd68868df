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
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mumimo/channel_model.hpp"

namespace mumimo {

/// Selected users, 0-based, in descending score order.
struct Selection {
  std::vector<int> indices;

  /// The same users in ascending index order.
  [[nodiscard]] std::vector<int> sorted() const {
    std::vector<int> s = indices;
    std::sort(s.begin(), s.end());
    return s;
  }
};

/// Indices of the N largest scores, descending; ties go to the lower index.
inline Selection select_by_score(std::span<const double> scores, int N) {
  const int K = static_cast<int>(scores.size());
  if (N < 1 || N > K)
    throw RangeError("selection size N = " + std::to_string(N) + " outside [1, " +
                     std::to_string(K) + "]");
  std::vector<int> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  order.resize(static_cast<std::size_t>(N));
  return {std::move(order)};
}

/// Rows of `m` listed in `indices`, in that order.
inline ComplexMatrix select_rows(const ComplexMatrix& m, std::span<const int> indices) {
  ComplexMatrix out(static_cast<Eigen::Index>(indices.size()), m.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(indices[i]);
  return out;
}

/// The N users with largest estimated channel norm.
inline Selection select_top_norm(const ComplexMatrix& h_hat, int N) {
  std::vector<double> scores(static_cast<std::size_t>(h_hat.rows()));
  for (Eigen::Index k = 0; k < h_hat.rows(); ++k) scores[static_cast<std::size_t>(k)] = h_hat.row(k).squaredNorm();
  return select_by_score(scores, N);
}

/// Heterogeneous ordering by p_k ||z_k||^2, where z_k is row k of Ĥ rescaled
/// to unit variance by sqrt((1 + rho_rk tau) / (rho_rk tau)). Users with
/// p_k = 0 score zero and rank behind every positive score.
inline Selection select_weighted_order(const ComplexMatrix& h_hat, std::span<const double> p_star,
                                       const SystemConfig& config, int N) {
  const auto K = static_cast<std::size_t>(h_hat.rows());
  if (p_star.size() != K || config.rho_r.size() != K)
    throw DimensionError("select_weighted_order: p_star and rho_r need one entry per row of h_hat");
  std::vector<double> scores(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (!(p_star[k] >= 0.0)) throw DomainError("select_weighted_order: p_star must be nonnegative");
    const double z_norm2 =
        h_hat.row(static_cast<Eigen::Index>(k)).squaredNorm() / estimate_fraction(config.rho_r[k], config.tau_rp);
    scores[k] = p_star[k] * z_norm2;
  }
  return select_by_score(scores, N);
}

}  // namespace mumimo
