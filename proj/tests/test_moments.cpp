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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "mumimo/moments.hpp"

namespace mumimo {
namespace {

constexpr std::int64_t kSamples = 100000;

double combined_se(const MomentEstimate& a, const MomentEstimate& b) {
  return std::hypot(a.std_error_of_mean, b.std_error_of_mean);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mumimo_test_" + name);
}

TEST(Summarize, CountsNanAsSingular) {
  const std::vector<double> v{1.0, std::numeric_limits<double>::quiet_NaN(), 3.0};
  const auto est = summarize(v);
  EXPECT_EQ(est.samples, 2);
  EXPECT_EQ(est.singular_events, 1);
  EXPECT_DOUBLE_EQ(est.mean, 2.0);
  EXPECT_DOUBLE_EQ(est.variance, 2.0);
  EXPECT_DOUBLE_EQ(est.std_error_of_mean, 1.0);
}

TEST(SingularBudget, AbortsAboveOnePerMille) {
  EXPECT_NO_THROW(check_singular_budget(10, 10000, "x"));
  EXPECT_THROW(check_singular_budget(11, 10000, "x"), SingularChannel);
}

TEST(InverseSqrtTrace, SingularGramIsNan) {
  ComplexMatrix g = ComplexMatrix::Zero(2, 2);
  g(0, 0) = 1.0;
  EXPECT_TRUE(std::isnan(detail::inverse_sqrt_trace_or_nan(g)));
  g(1, 1) = 4.0;
  EXPECT_NEAR(detail::inverse_sqrt_trace_or_nan(g), 1 / std::sqrt(1.25), 1e-15);
}

TEST(EtaMoments, SingleRowMatchesGammaRatio) {
  // ||z||^2 ~ Gamma(M, 1): E||z|| = Γ(M + 1/2) / Γ(M), E||z||^2 = M.
  const int M = 4;
  const double mean = std::exp(std::lgamma(M + 0.5) - std::lgamma(M));
  const double var = M - mean * mean;
  EXPECT_NEAR(mean, 1.93862, 1e-5);
  EXPECT_NEAR(var, 0.2418, 1e-4);

  const auto draws = eta_draws(M, 1, 1, kSamples, 11);
  const auto est = summarize(draws);
  EXPECT_EQ(est.singular_events, 0);
  EXPECT_LT(std::abs(est.mean - mean), 3 * est.std_error_of_mean);
  double m4 = 0;
  for (double x : draws) m4 += std::pow(x - est.mean, 4);
  m4 /= static_cast<double>(draws.size());
  const double var_se = std::sqrt((m4 - est.variance * est.variance) / static_cast<double>(draws.size()));
  EXPECT_LT(std::abs(est.variance - var), 3 * var_se);
}

TEST(EtaMoments, InverseSquareMatchesWishartTrace) {
  // E tr[(Z Z^dagger)^{-1}] = N / (M - N) for complex Wishart.
  const int M = 4, N = 2;
  for (std::int64_t samples : {kSamples, 10 * kSamples}) {
    const auto draws = eta_draws(M, N, N, samples, 203);
    std::vector<double> inv2(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) inv2[i] = 1 / (draws[i] * draws[i]);
    const auto est = summarize(inv2);
    EXPECT_LT(std::abs(est.mean - static_cast<double>(N) / (M - N)), 3 * est.std_error_of_mean) << samples;
  }
}

TEST(EtaMoments, SchedulingGainGrowsWithK) {
  const auto k2 = eta_moments(8, 2, 2, kSamples, 13);
  const auto k4 = eta_moments(8, 4, 2, kSamples, 13);
  EXPECT_GT(k4.mean - k2.mean, 3 * combined_se(k4, k2));
}

TEST(EtaMoments, NonincreasingInN) {
  const auto all = eta_moments_all(8, 8, kSamples, 14);
  EXPECT_GT(all[1].mean - all[3].mean, combined_se(all[1], all[3]));
  EXPECT_GT(all[3].mean - all[7].mean, combined_se(all[3], all[7]));
  for (std::size_t n = 1; n < all.size(); ++n) EXPECT_GE(all[n - 1].mean, all[n].mean);
}

TEST(EtaMoments, AllLevelsMatchSingleLevel) {
  const auto all = eta_moments_all(6, 4, 2000, 15);
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(all[n - 1], eta_moments(6, 4, n, 2000, 15));
}

TEST(EtaMoments, EqualsDirectTopNormComputation) {
  const auto draws = eta_draws(5, 4, 2, 200, 16);
  for (int i = 0; i < 200; ++i) {
    RngStream rng(16, static_cast<std::uint64_t>(i));
    const ComplexMatrix z = draw_channel(4, 5, rng);
    const double direct = chi_of(select_rows(z, select_top_norm(z, 2).indices));
    EXPECT_NEAR(draws[i], direct, 1e-12 * direct);
  }
}

TEST(EtaMoments, JensenAndErrorConsistency) {
  const auto all = eta_moments_all(6, 3, 5000, 17);
  for (const auto& e : all) {
    EXPECT_GE(e.variance, 0.0);
    EXPECT_DOUBLE_EQ(e.std_error_of_mean, std::sqrt(e.variance / static_cast<double>(e.samples)));
    const double mean_sq = e.variance * (e.samples - 1) / static_cast<double>(e.samples) + e.mean * e.mean;
    EXPECT_LE(e.mean * e.mean, mean_sq);
  }
}

TEST(EtaMoments, WorkerCountIndependent) {
  const auto w1 = eta_moments_all(6, 4, 20000, 18, 1);
  const auto w2 = eta_moments_all(6, 4, 20000, 18, 2);
  const auto w8 = eta_moments_all(6, 4, 20000, 18, 8);
  EXPECT_EQ(w1, w2);
  EXPECT_EQ(w1, w8);
  const std::vector<double> f{0.5, 1.0, 2.0};
  EXPECT_EQ(phi_f_moments(f, 5, 20000, 18, 1), phi_f_moments(f, 5, 20000, 18, 8));
}

TEST(EtaMoments, DimensionErrors) {
  EXPECT_THROW(eta_moments(4, 5, 1, 10, 1), RangeError);
  EXPECT_THROW(eta_moments(4, 2, 3, 10, 1), RangeError);
  EXPECT_THROW(eta_moments(4, 2, 0, 10, 1), RangeError);
  EXPECT_THROW(phi_f_moments(std::vector<double>(5, 1.0), 4, 10, 1), RangeError);
}

TEST(PhiFMoments, IdentityReducesToEta) {
  const auto phi = phi_f_moments(std::vector<double>(3, 1.0), 6, kSamples, 19);
  const auto eta = eta_moments(6, 3, 3, kSamples, 19);
  EXPECT_LT(std::abs(phi.mean - eta.mean), 3 * combined_se(phi, eta));
  EXPECT_NEAR(phi.mean, eta.mean, 1e-12);  // same draws, same rows
}

TEST(PhiFMoments, Homogeneity) {
  const std::vector<double> f{0.4, 1.1, 0.9};
  std::vector<double> g = f;
  for (double& v : g) v *= 3.0;
  const auto a = phi_f_moments(f, 6, 20000, 20);
  const auto b = phi_f_moments(g, 6, 20000, 20);
  EXPECT_NEAR(b.mean, 3 * a.mean, 1e-12 * b.mean);
  EXPECT_NEAR(b.variance, 9 * a.variance, 1e-9 * b.variance);
}

TEST(PhiFMoments, LargeArrayLimit) {
  const std::vector<double> f{0.5, 1.0, 1.5, 2.0};
  double tr = 0;
  for (double v : f) tr += 1 / (v * v);
  const auto est = phi_f_moments(f, 256, 10000, 21);
  EXPECT_LT(std::abs(est.mean - std::sqrt(256 / tr)) / est.mean, 0.05);
}

TEST(Fingerprint, DistinguishesTinyDifferences) {
  const std::vector<double> a{1.0, 0.5, 0.25};
  std::vector<double> b = a;
  b[2] += 1e-9;
  std::vector<double> c = a;
  c[0] = std::nextafter(1.0, 2.0);
  EXPECT_NE(fingerprint(a), fingerprint(b));
  EXPECT_NE(fingerprint(a), fingerprint(c));
  EXPECT_EQ(fingerprint(a), fingerprint(std::vector<double>{1.0, 0.5, 0.25}));
  EXPECT_EQ(fingerprint(a).find(','), std::string::npos);
}

TEST(MomentCache, MissThenHit) {
  MomentCache cache;
  const MomentKey key{StatisticKind::kEta, 4, 2, 1, "-", 1000, 3};
  int calls = 0;
  auto compute = [&] {
    ++calls;
    return eta_moments(4, 2, 1, 1000, 3);
  };
  const auto first = cache.cached(key, compute);
  const auto second = cache.cached(key, compute);
  EXPECT_EQ(first, second);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(cache.hits(), 1);
  EXPECT_EQ(cache.misses(), 1);
}

TEST(MomentCache, SeedsAreSeparateEntries) {
  MomentCache cache;
  MonteCarloMoments a({2000, 1, 1}, &cache);
  MonteCarloMoments b({2000, 2, 1}, &cache);
  const auto ea = a.eta(4, 2, 2);
  const auto eb = b.eta(4, 2, 2);
  EXPECT_NE(ea.mean, eb.mean);
  EXPECT_EQ(cache.size(), 4u);  // N = 1, 2 for each seed
  EXPECT_EQ(a.eta(4, 2, 1), eta_moments(4, 2, 1, 2000, 1));
  EXPECT_EQ(cache.hits(), 1);
}

TEST(MomentCache, PhiKeysUseFingerprint) {
  MomentCache cache;
  MonteCarloMoments src({1000, 5, 1}, &cache);
  const auto x = src.phi_f(std::vector<double>{1.0, 2.0}, 4);
  const auto y = src.phi_f(std::vector<double>{1.0, 2.0 + 1e-9}, 4);
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_NE(x.mean, y.mean);
  EXPECT_EQ(src.phi_f(std::vector<double>{1.0, 2.0}, 4), x);
}

TEST(MomentCache, FileRoundTripIsExact) {
  const auto path = temp_path("roundtrip.cache");
  std::filesystem::remove(path);
  MomentCache cache(path);
  MonteCarloMoments src({3000, 9, 1}, &cache);
  src.eta(5, 3, 2);
  src.phi_f(std::vector<double>{0.3, 0.7}, 5);
  ASSERT_TRUE(cache.save());
  MomentCache reloaded(path);
  EXPECT_TRUE(reloaded.warnings().empty());
  EXPECT_EQ(reloaded.entries(), cache.entries());
  std::filesystem::remove(path);
}

TEST(MomentCache, CorruptFileWarnsAndRecomputes) {
  const auto path = temp_path("corrupt.cache");
  {
    std::ofstream out(path);
    out << MomentCache::kHeader << "\n"
        << "eta,4,2,1,-,100,1,not-a-number,1,1,100,0\n"
        << "garbage\n";
  }
  MomentCache cache(path);
  EXPECT_EQ(cache.size(), 0u);
  EXPECT_EQ(cache.warnings().size(), 2u);
  MonteCarloMoments src({100, 1, 1}, &cache);
  EXPECT_EQ(src.eta(4, 2, 1), eta_moments(4, 2, 1, 100, 1));

  {
    std::ofstream out(path);
    out << "# some other format\n";
  }
  MomentCache wrong(path);
  EXPECT_EQ(wrong.warnings().size(), 1u);
  std::filesystem::remove(path);
}

TEST(MomentCache, UnwritableLocationIsAWarning) {
  MomentCache cache;
  cache.store({StatisticKind::kEta, 1, 1, 1, "-", 1, 1}, MomentEstimate{});
  EXPECT_FALSE(cache.save("/proc/mumimo/cannot/write.cache"));
  EXPECT_FALSE(cache.warnings().empty());
}

TEST(ScheduledPhi, FullLevelMatchesUnscheduledDraws) {
  const std::vector<double> p{0.4, 0.2, 0.3};
  const std::vector<double> frac{0.5, 0.8, 0.9};
  const auto stats = scheduled_phi_stats(p, frac, 6, 5000, 22, 1);
  std::vector<double> f(3);
  for (int k = 0; k < 3; ++k) f[k] = std::sqrt(frac[k] / p[k]);
  const auto all = phi_f_moments(f, 6, 5000, 22, 1);
  const auto& full = stats.levels.back();
  ASSERT_EQ(full.N, 3);
  for (const auto& u : full.users) {
    EXPECT_EQ(u.selected, 5000);
    EXPECT_EQ(u.selection_prob, 1.0);
    EXPECT_EQ(u.mean, all.mean);
    EXPECT_EQ(u.variance, all.variance);
  }
}

TEST(ScheduledPhi, SelectionProbabilitiesSumToN) {
  const std::vector<double> p{1.0, 0.5, 0.25, 0.125};
  const std::vector<double> frac(4, 0.5);
  const auto stats = scheduled_phi_stats(p, frac, 8, 4000, 23, 2);
  for (const auto& level : stats.levels) {
    double s = 0;
    for (const auto& u : level.users) s += u.selection_prob;
    EXPECT_NEAR(s, level.N, 1e-12);
  }
  // The highest-power user is scheduled most often at N = 1.
  const auto& one = stats.levels.front().users;
  EXPECT_GT(one[0].selection_prob, one[3].selection_prob);
}

TEST(ScheduledPhi, WorkerCountIndependent) {
  const std::vector<double> p{1.0, 0.5, 0.25};
  const std::vector<double> frac(3, 0.5);
  const auto a = scheduled_phi_stats(p, frac, 5, 3000, 24, 1);
  const auto b = scheduled_phi_stats(p, frac, 5, 3000, 24, 8);
  for (std::size_t n = 0; n < a.levels.size(); ++n)
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_EQ(a.levels[n].users[k].mean, b.levels[n].users[k].mean);
      EXPECT_EQ(a.levels[n].users[k].selected, b.levels[n].users[k].selected);
    }
}

}  // namespace
}  // namespace mumimo
