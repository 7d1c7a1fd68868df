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
#include <span>
#include <string>

#include <Eigen/Eigenvalues>

#include "mumimo/channel_model.hpp"

namespace mumimo {

/// Gram matrices with a larger eigenvalue spread are treated as singular.
inline constexpr double kMaxGramCondition = 1e12;

/// M x N linear map from user symbols to antennas, normalized to tr(A^dagger A) = 1.
struct PrecodingMatrix {
  ComplexMatrix a;
};

/// A normalized pseudo-inverse precoder and the common gain it produces on
/// the (scaled) estimated channel: rows * A = gain * I.
struct Precoding {
  PrecodingMatrix precoder;
  double gain = 0.0;
};

struct ForwardReceive {
  ComplexVector x_f;
};

namespace detail {

/// Eigendecomposition of a Hermitian Gram matrix, rejecting spreads above
/// kMaxGramCondition.
inline Eigen::SelfAdjointEigenSolver<ComplexMatrix> checked_gram_eigen(const ComplexMatrix& gram,
                                                                      bool vectors) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(
      gram, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  const auto& lambda = eig.eigenvalues();  // ascending
  const double lo = lambda(0);
  const double hi = lambda(lambda.size() - 1);
  if (!(lo > 0.0) || !(hi <= kMaxGramCondition * lo) || !std::isfinite(hi))
    throw SingularChannel("Gram matrix condition number exceeds 1e12");
  return eig;
}

/// tr(G^{-1}) for a Hermitian positive definite G; throws SingularChannel.
inline double gram_matrix_inverse_trace(const ComplexMatrix& gram) {
  return checked_gram_eigen(gram, false).eigenvalues().cwiseInverse().sum();
}

inline Eigen::SelfAdjointEigenSolver<ComplexMatrix> gram_eigen(const ComplexMatrix& rows,
                                                              bool vectors) {
  if (rows.rows() < 1 || rows.rows() > rows.cols())
    throw DimensionError("Gram matrix: need 1 <= rows <= cols, got " + std::to_string(rows.rows()) +
                         " x " + std::to_string(rows.cols()));
  return checked_gram_eigen(rows * rows.adjoint(), vectors);
}

}  // namespace detail

/// tr[(X X^dagger)^{-1}] for a full-row-rank X; throws SingularChannel.
inline double gram_inverse_trace(const ComplexMatrix& rows) {
  const auto eig = detail::gram_eigen(rows, false);
  return eig.eigenvalues().cwiseInverse().sum();
}

/// chi = (tr[(Ĥ_S Ĥ_S^dagger)^{-1}])^{-1/2}.
inline double chi_of(const ComplexMatrix& h_hat_s) {
  return 1.0 / std::sqrt(gram_inverse_trace(h_hat_s));
}

/// A = Ĥ_S^dagger (Ĥ_S Ĥ_S^dagger)^{-1} / sqrt(tr[(Ĥ_S Ĥ_S^dagger)^{-1}]).
///
/// The Gram inverse comes from its eigendecomposition. Ĥ_S A = chi I_N with
/// chi real and positive.
inline Precoding pinv_precoder(const ComplexMatrix& h_hat_s) {
  const auto eig = detail::gram_eigen(h_hat_s, true);
  const Eigen::VectorXd inv_lambda = eig.eigenvalues().cwiseInverse();
  const double trace_inv = inv_lambda.sum();
  const ComplexMatrix& v = eig.eigenvectors();
  const ComplexMatrix gram_inv = v * inv_lambda.asDiagonal() * v.adjoint();
  Precoding out;
  out.precoder.a = h_hat_s.adjoint() * gram_inv / std::sqrt(trace_inv);
  out.gain = 1.0 / std::sqrt(trace_inv);
  return out;
}

/// Modified precoder: pinv_precoder applied to Ĥ_D = D Ĥ with
/// D = diag(p_k^{-1/2}). The returned gain is phi.
inline Precoding modified_precoder(const ComplexMatrix& h_hat, std::span<const double> p) {
  if (static_cast<Eigen::Index>(p.size()) != h_hat.rows())
    throw DimensionError("modified_precoder: p must have one entry per row");
  Eigen::VectorXd d(h_hat.rows());
  for (Eigen::Index k = 0; k < h_hat.rows(); ++k) {
    const double pk = p[static_cast<std::size_t>(k)];
    if (!(pk > 0.0) || !std::isfinite(pk))
      throw DomainError("modified_precoder: powers must be positive; remove zero-power users first");
    d(k) = 1.0 / std::sqrt(pk);
  }
  return pinv_precoder(d.asDiagonal() * h_hat);
}

/// phi_F = (tr[(F Z Z^dagger F)^{-1}])^{-1/2} for positive diagonal F.
inline double phi_f_of(std::span<const double> f_diag, const ComplexMatrix& z) {
  if (static_cast<Eigen::Index>(f_diag.size()) != z.rows())
    throw DimensionError("phi_f_of: F must be K x K for K x M Z");
  Eigen::VectorXd f(z.rows());
  for (Eigen::Index k = 0; k < z.rows(); ++k) {
    const double fk = f_diag[static_cast<std::size_t>(k)];
    if (!(fk > 0.0) || !std::isfinite(fk)) throw DomainError("phi_f_of: F must be positive");
    f(k) = fk;
  }
  return chi_of(f.asDiagonal() * z);
}

namespace detail {

inline ComplexVector forward_signal(const ComplexMatrix& h_s, const PrecodingMatrix& a,
                                    const ComplexVector& q, std::span<const double> rho_f) {
  if (h_s.cols() != a.a.rows() || a.a.cols() != q.size() ||
      static_cast<Eigen::Index>(rho_f.size()) != h_s.rows())
    throw DimensionError("simulate_forward: shapes of H_S, A, q, rho_f disagree");
  Eigen::VectorXd e_f(h_s.rows());
  for (Eigen::Index n = 0; n < h_s.rows(); ++n) e_f(n) = std::sqrt(rho_f[static_cast<std::size_t>(n)]);
  return e_f.asDiagonal() * (h_s * (a.a * q));
}

/// Test hook: x_f with the receiver noise removed.
inline ForwardReceive noiseless_forward(const ComplexMatrix& h_s, const PrecodingMatrix& a,
                                        const ComplexVector& q, std::span<const double> rho_f) {
  return {forward_signal(h_s, a, q, rho_f)};
}

}  // namespace detail

/// x_f = E_f H_S A q + w_f with w_f i.i.d. CN(0,1) drawn from `rng`.
inline ForwardReceive simulate_forward(const ComplexMatrix& h_s, const PrecodingMatrix& a,
                                       const ComplexVector& q, std::span<const double> rho_f,
                                       RngStream& rng) {
  ComplexVector x = detail::forward_signal(h_s, a, q, rho_f);
  for (Eigen::Index n = 0; n < x.size(); ++n) x(n) += rng.complex_normal();
  return {std::move(x)};
}

}  // namespace mumimo
