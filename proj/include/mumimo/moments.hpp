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

// Monte Carlo moments of the trace-inverse statistics that enter the rate
// bounds:
//
//   eta   = (tr[(U U^dagger)^{-1}])^{-1/2}, U = the N largest-norm rows of a
//           K x M i.i.d. CN(0,1) matrix Z (N = K: no scheduling);
//   phi_F = (tr[(F Z Z^dagger F)^{-1}])^{-1/2} for a positive diagonal F.
//
// Sample i always uses RngStream(seed, i), so every estimate is a pure
// function of (dimensions, samples, seed). Per-sample values are written into
// index-addressed slots and reduced serially, which makes the result
// bit-identical for any worker count. Draws whose Gram matrix is singular are
// stored as NaN, discarded, and counted.

#include <atomic>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mumimo/channel_model.hpp"
#include "mumimo/parallel.hpp"
#include "mumimo/precoding.hpp"
#include "mumimo/scheduling.hpp"

namespace mumimo {

/// Singular draws above this fraction of the requested samples abort the estimate.
inline constexpr double kMaxSingularFraction = 1e-3;

struct MomentEstimate {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double std_error_of_mean = 0.0;
  std::int64_t samples = 0;  // draws that entered the estimate
  std::int64_t singular_events = 0;

  friend bool operator==(const MomentEstimate&, const MomentEstimate&) = default;
};

/// Mean, variance and standard error of the finite entries of `values`;
/// NaN entries count as singular events.
inline MomentEstimate summarize(std::span<const double> values) {
  MomentEstimate est;
  double sum = 0.0;
  for (double v : values) {
    if (std::isnan(v)) {
      ++est.singular_events;
    } else {
      sum += v;
      ++est.samples;
    }
  }
  if (est.samples == 0) {
    est.mean = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  est.mean = sum / static_cast<double>(est.samples);
  double ss = 0.0;
  for (double v : values)
    if (!std::isnan(v)) ss += (v - est.mean) * (v - est.mean);
  est.variance = est.samples > 1 ? ss / static_cast<double>(est.samples - 1) : 0.0;
  est.std_error_of_mean = std::sqrt(est.variance / static_cast<double>(est.samples));
  return est;
}

inline void check_singular_budget(std::int64_t singular, std::int64_t requested, const char* what) {
  if (static_cast<double>(singular) > kMaxSingularFraction * static_cast<double>(requested))
    throw SingularChannel(std::string(what) + ": " + std::to_string(singular) + " of " +
                          std::to_string(requested) + " draws singular, above the 0.1% budget");
}

enum class StatisticKind { kEta, kPhiF };

inline const char* to_string(StatisticKind k) { return k == StatisticKind::kEta ? "eta" : "phi_F"; }

/// Exact fingerprint of a diagonal: hexadecimal floating-point text of every
/// entry, so distinct vectors never collide.
inline std::string fingerprint(std::span<const double> values) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%a", values[i]);
    if (i) out += ':';
    out += buf;
  }
  return out;
}

struct MomentKey {
  StatisticKind kind = StatisticKind::kEta;
  int M = 0;
  int K = 0;
  int N = 0;
  std::string fingerprint = "-";  // F diagonal for phi_F, "-" for eta
  std::int64_t samples = 0;
  std::uint64_t seed = 0;

  friend auto operator<=>(const MomentKey&, const MomentKey&) = default;
};

/// Thread-safe map from MomentKey to MomentEstimate with an optional backing
/// file.
///
/// File format, one record per line after a version header:
///
///   # mumimo moment cache v1
///   kind,M,K,N,fingerprint,samples,seed,mean,variance,std_error_of_mean,used_samples,singular_events
///
/// Reals are written with 17 significant digits so a reload reproduces the
/// stored doubles exactly. I/O problems never throw; they are collected as
/// warnings and the caller simply recomputes.
class MomentCache {
 public:
  static constexpr const char* kHeader = "# mumimo moment cache v1";
  static constexpr const char* kColumns =
      "kind,M,K,N,fingerprint,samples,seed,mean,variance,std_error_of_mean,used_samples,singular_events";

  MomentCache() = default;
  explicit MomentCache(std::filesystem::path file) : file_(std::move(file)) {
    if (!file_.empty() && std::filesystem::exists(file_)) load(file_);
  }

  MomentCache(const MomentCache&) = delete;
  MomentCache& operator=(const MomentCache&) = delete;

  [[nodiscard]] std::optional<MomentEstimate> find(const MomentKey& key) const {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// Stores `est` unless the key is already present; stored estimates are immutable.
  void store(const MomentKey& key, const MomentEstimate& est) {
    std::unique_lock lock(mutex_);
    entries_.emplace(key, est);
  }

  /// Returns the stored estimate for `key`, computing and storing it on a miss.
  template <class Compute>
  MomentEstimate cached(const MomentKey& key, Compute&& compute) {
    if (auto hit = find(key)) {
      ++hits_;
      return *hit;
    }
    ++misses_;
    MomentEstimate est = std::invoke(std::forward<Compute>(compute));
    store(key, est);
    return *find(key);
  }

  void count_hit() { ++hits_; }
  void count_miss() { ++misses_; }

  [[nodiscard]] std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }
  [[nodiscard]] std::int64_t hits() const { return hits_; }
  [[nodiscard]] std::int64_t misses() const { return misses_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }
  [[nodiscard]] const std::filesystem::path& file() const { return file_; }

  [[nodiscard]] std::map<MomentKey, MomentEstimate> entries() const {
    std::shared_lock lock(mutex_);
    return entries_;
  }

  /// Merges records from `path`; malformed lines are skipped with a warning.
  bool load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
      warnings_.push_back("cannot open moment cache " + path.string());
      return false;
    }
    std::string line;
    if (!std::getline(in, line) || line != kHeader) {
      warnings_.push_back("moment cache " + path.string() + ": missing or unknown version header");
      return false;
    }
    int lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      auto parsed = parse_record(line);
      if (!parsed) {
        warnings_.push_back("moment cache " + path.string() + ":" + std::to_string(lineno) +
                            ": malformed record skipped");
        continue;
      }
      store(parsed->first, parsed->second);
    }
    return true;
  }

  bool save() { return file_.empty() ? false : save(file_); }

  /// Writes every record, sorted by key, via a temporary file and rename.
  bool save(const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) {
        warnings_.push_back("cannot write moment cache " + tmp.string());
        return false;
      }
      out << kHeader << '\n' << '#' << kColumns << '\n';
      for (const auto& [key, est] : entries()) out << format_record(key, est) << '\n';
      if (!out) {
        warnings_.push_back("write error on moment cache " + tmp.string());
        return false;
      }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      warnings_.push_back("cannot replace moment cache " + path.string() + ": " + ec.message());
      return false;
    }
    return true;
  }

  static std::string format_record(const MomentKey& key, const MomentEstimate& est) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%s,%lld,%llu,%.17g,%.17g,%.17g,%lld,%lld",
                  to_string(key.kind), key.M, key.K, key.N, key.fingerprint.c_str(),
                  static_cast<long long>(key.samples), static_cast<unsigned long long>(key.seed),
                  est.mean, est.variance, est.std_error_of_mean, static_cast<long long>(est.samples),
                  static_cast<long long>(est.singular_events));
    return buf;
  }

  static std::optional<std::pair<MomentKey, MomentEstimate>> parse_record(const std::string& line) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 12) return std::nullopt;
    try {
      MomentKey key;
      if (f[0] == "eta")
        key.kind = StatisticKind::kEta;
      else if (f[0] == "phi_F")
        key.kind = StatisticKind::kPhiF;
      else
        return std::nullopt;
      key.M = std::stoi(f[1]);
      key.K = std::stoi(f[2]);
      key.N = std::stoi(f[3]);
      key.fingerprint = f[4];
      key.samples = std::stoll(f[5]);
      key.seed = std::stoull(f[6]);
      MomentEstimate est;
      est.mean = std::stod(f[7]);
      est.variance = std::stod(f[8]);
      est.std_error_of_mean = std::stod(f[9]);
      est.samples = std::stoll(f[10]);
      est.singular_events = std::stoll(f[11]);
      return std::pair{key, est};
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

 private:
  std::filesystem::path file_;
  mutable std::shared_mutex mutex_;
  std::map<MomentKey, MomentEstimate> entries_;
  std::atomic<std::int64_t> hits_{0};
  std::atomic<std::int64_t> misses_{0};
  std::vector<std::string> warnings_;
};

namespace detail {

inline void check_eta_dims(int M, int K, int N) {
  if (M < 1 || K < 1 || K > M || N < 1 || N > K)
    throw RangeError("eta moments need 1 <= N <= K <= M, got M=" + std::to_string(M) +
                     " K=" + std::to_string(K) + " N=" + std::to_string(N));
}

/// (tr[G^{-1}])^{-1/2}, NaN when G is singular.
inline double inverse_sqrt_trace_or_nan(const ComplexMatrix& gram) {
  try {
    return 1.0 / std::sqrt(gram_matrix_inverse_trace(gram));
  } catch (const SingularChannel&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

/// phi of the rows `rows` (ascending) of F Z; used by both the unscheduled
/// and the scheduled phi statistics so they agree bit for bit on the full set.
inline double phi_of_rows(std::span<const double> f, const ComplexMatrix& z, std::span<const int> rows) {
  ComplexMatrix x(static_cast<Eigen::Index>(rows.size()), z.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = f[rows[i]] * z.row(rows[i]);
  return inverse_sqrt_trace_or_nan(x * x.adjoint());
}

inline std::vector<double> checked_diagonal(std::span<const double> f, int M, const char* what) {
  if (f.empty() || static_cast<int>(f.size()) > M)
    throw RangeError(std::string(what) + ": need 1 <= K <= M");
  for (double v : f)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + ": entries must be positive");
  return {f.begin(), f.end()};
}

}  // namespace detail

/// Per-sample eta for every N in 1..K from the same draws: result[N-1][i].
/// Rows of Z are sorted by norm once and the N-row Gram matrix is the leading
/// block of the sorted Gram matrix.
inline std::vector<std::vector<double>> eta_draws_all(int M, int K, std::int64_t samples,
                                                      std::uint64_t seed, int workers = 0) {
  detail::check_eta_dims(M, K, K);
  if (samples < 1) throw RangeError("samples must be positive");
  std::vector<std::vector<double>> out(static_cast<std::size_t>(K),
                                       std::vector<double>(static_cast<std::size_t>(samples)));
  parallel_for(samples, workers, [&](std::int64_t i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    const ComplexMatrix z = draw_channel(K, M, rng);
    const Selection order = select_top_norm(z, K);
    const ComplexMatrix u = select_rows(z, order.indices);
    const ComplexMatrix gram = u * u.adjoint();
    for (int n = 1; n <= K; ++n)
      out[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(i)] =
          detail::inverse_sqrt_trace_or_nan(gram.topLeftCorner(n, n));
  });
  return out;
}

/// Per-sample eta for a single N (NaN marks singular draws).
inline std::vector<double> eta_draws(int M, int K, int N, std::int64_t samples, std::uint64_t seed,
                                     int workers = 0) {
  detail::check_eta_dims(M, K, N);
  auto all = eta_draws_all(M, K, samples, seed, workers);
  return std::move(all[static_cast<std::size_t>(N - 1)]);
}

/// Moments of eta for N = 1..K (index N-1) from one set of draws.
inline std::vector<MomentEstimate> eta_moments_all(int M, int K, std::int64_t samples,
                                                   std::uint64_t seed, int workers = 0) {
  const auto draws = eta_draws_all(M, K, samples, seed, workers);
  std::vector<MomentEstimate> out;
  out.reserve(draws.size());
  for (const auto& d : draws) {
    out.push_back(summarize(d));
    check_singular_budget(out.back().singular_events, samples, "eta_moments");
  }
  return out;
}

inline MomentEstimate eta_moments(int M, int K, int N, std::int64_t samples, std::uint64_t seed,
                                  int workers = 0) {
  detail::check_eta_dims(M, K, N);
  return eta_moments_all(M, K, samples, seed, workers)[static_cast<std::size_t>(N - 1)];
}

/// Per-sample phi_F over K x M draws, K = f_diag.size().
inline std::vector<double> phi_f_draws(std::span<const double> f_diag, int M, std::int64_t samples,
                                       std::uint64_t seed, int workers = 0) {
  const std::vector<double> f = detail::checked_diagonal(f_diag, M, "phi_f_moments");
  if (samples < 1) throw RangeError("samples must be positive");
  const int K = static_cast<int>(f.size());
  std::vector<int> all(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) all[static_cast<std::size_t>(k)] = k;
  std::vector<double> out(static_cast<std::size_t>(samples));
  parallel_for(samples, workers, [&](std::int64_t i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    const ComplexMatrix z = draw_channel(K, M, rng);
    out[static_cast<std::size_t>(i)] = detail::phi_of_rows(f, z, all);
  });
  return out;
}

inline MomentEstimate phi_f_moments(std::span<const double> f_diag, int M, std::int64_t samples,
                                    std::uint64_t seed, int workers = 0) {
  const MomentEstimate est = summarize(phi_f_draws(f_diag, M, samples, seed, workers));
  check_singular_budget(est.singular_events, samples, "phi_f_moments");
  return est;
}

/// Statistics of phi for one user, conditioned on that user being scheduled.
struct ScheduledUserStats {
  std::int64_t selected = 0;     // blocks in which the user was scheduled
  double selection_prob = 0.0;   // selected / usable blocks
  double mean = 0.0;             // E[phi | user scheduled]
  double variance = 0.0;         // var{phi | user scheduled}
  double std_error_of_mean = 0.0;
};

/// Conditional phi statistics for one scheduled-set size N.
struct ScheduledLevel {
  int N = 0;
  std::int64_t usable = 0;
  std::int64_t singular_events = 0;
  std::vector<ScheduledUserStats> users;
};

/// Weighted scheduling over coherence blocks.
///
/// For each block a K x M matrix Z (the unit-variance estimate rows) is drawn,
/// users are ranked by p_k ||z_k||^2, and for every N the first N users are
/// served with the modified precoder, whose gain is phi of
/// F_S = diag(sqrt(est_fraction_k / p_k)) restricted to S. Users must all have
/// p_k > 0. levels[N-1] holds the statistics for N.
struct ScheduledPhiStats {
  std::int64_t samples = 0;
  std::vector<ScheduledLevel> levels;
};

inline ScheduledPhiStats scheduled_phi_stats(std::span<const double> p, std::span<const double> est_fraction,
                                             int M, std::int64_t samples, std::uint64_t seed,
                                             int workers = 0) {
  const int K = static_cast<int>(p.size());
  if (K < 1 || K > M || static_cast<int>(est_fraction.size()) != K)
    throw RangeError("scheduled_phi_stats: need 1 <= K <= M and one estimate fraction per user");
  if (K > 64) throw RangeError("scheduled_phi_stats: at most 64 users");
  if (samples < 1) throw RangeError("samples must be positive");
  std::vector<double> f(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    if (!(p[k] > 0.0) || !(est_fraction[k] > 0.0))
      throw DomainError("scheduled_phi_stats: powers and estimate fractions must be positive");
    f[static_cast<std::size_t>(k)] = std::sqrt(est_fraction[k] / p[k]);
  }

  const auto S = static_cast<std::size_t>(samples);
  std::vector<std::vector<double>> phi(static_cast<std::size_t>(K), std::vector<double>(S));
  std::vector<std::vector<std::uint64_t>> mask(static_cast<std::size_t>(K), std::vector<std::uint64_t>(S));
  parallel_for(samples, workers, [&](std::int64_t i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    const ComplexMatrix z = draw_channel(K, M, rng);
    std::vector<double> score(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) score[static_cast<std::size_t>(k)] = p[k] * z.row(k).squaredNorm();
    const Selection order = select_by_score(score, K);
    for (int n = 1; n <= K; ++n) {
      Selection top{{order.indices.begin(), order.indices.begin() + n}};
      const std::vector<int> rows = top.sorted();
      std::uint64_t bits = 0;
      for (int r : rows) bits |= std::uint64_t{1} << r;
      phi[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(i)] = detail::phi_of_rows(f, z, rows);
      mask[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(i)] = bits;
    }
  });

  ScheduledPhiStats out;
  out.samples = samples;
  out.levels.resize(static_cast<std::size_t>(K));
  for (int n = 1; n <= K; ++n) {
    const auto& values = phi[static_cast<std::size_t>(n - 1)];
    const auto& bits = mask[static_cast<std::size_t>(n - 1)];
    ScheduledLevel& level = out.levels[static_cast<std::size_t>(n - 1)];
    level.N = n;
    for (double v : values) (std::isnan(v) ? level.singular_events : level.usable) += 1;
    check_singular_budget(level.singular_events, samples, "scheduled_phi_stats");
    level.users.resize(static_cast<std::size_t>(K));
    std::vector<double> chosen;
    for (int k = 0; k < K; ++k) {
      chosen.clear();
      for (std::size_t i = 0; i < S; ++i)
        if (!std::isnan(values[i]) && (bits[i] >> k & 1u)) chosen.push_back(values[i]);
      ScheduledUserStats& u = level.users[static_cast<std::size_t>(k)];
      const MomentEstimate m = summarize(chosen);
      u.selected = m.samples;
      u.selection_prob = level.usable > 0 ? static_cast<double>(m.samples) / static_cast<double>(level.usable) : 0.0;
      if (m.samples > 0) {
        u.mean = m.mean;
        u.variance = m.variance;
        u.std_error_of_mean = m.std_error_of_mean;
      }
    }
  }
  return out;
}

struct MonteCarloOptions {
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  int workers = 0;
};

/// Moment source for the rate functions: Monte Carlo estimates memoized in a
/// MomentCache (a private one when none is supplied).
class MonteCarloMoments {
 public:
  explicit MonteCarloMoments(MonteCarloOptions options, MomentCache* cache = nullptr)
      : options_(options),
        own_cache_(cache ? nullptr : std::make_unique<MomentCache>()),
        cache_(cache ? cache : own_cache_.get()) {}

  [[nodiscard]] const MonteCarloOptions& options() const { return options_; }

  /// eta(M, K, N); a miss computes and stores every N for (M, K) at once.
  MomentEstimate eta(int M, int K, int N) {
    detail::check_eta_dims(M, K, N);
    MomentKey key{StatisticKind::kEta, M, K, N, "-", options_.samples, options_.seed};
    if (auto hit = cache_->find(key)) {
      cache_->count_hit();
      return *hit;
    }
    cache_->count_miss();
    const auto all = eta_moments_all(M, K, options_.samples, options_.seed, options_.workers);
    for (const auto& est : all) singular_events_ += est.singular_events;
    for (int n = 1; n <= K; ++n) {
      key.N = n;
      cache_->store(key, all[static_cast<std::size_t>(n - 1)]);
    }
    key.N = N;
    return *cache_->find(key);
  }

  MomentEstimate phi_f(std::span<const double> f_diag, int M) {
    const int K = static_cast<int>(f_diag.size());
    const MomentKey key{StatisticKind::kPhiF, M, K, K, fingerprint(f_diag), options_.samples, options_.seed};
    auto compute = [&] {
      MomentEstimate est = phi_f_moments(f_diag, M, options_.samples, options_.seed, options_.workers);
      singular_events_ += est.singular_events;
      return est;
    };
    return cache_->cached(key, compute);
  }

  ScheduledPhiStats scheduled_phi(std::span<const double> p, std::span<const double> est_fraction, int M) {
    ScheduledPhiStats s = scheduled_phi_stats(p, est_fraction, M, options_.samples, options_.seed, options_.workers);
    for (const auto& level : s.levels) singular_events_ += level.singular_events;
    return s;
  }

  [[nodiscard]] std::int64_t singular_events() const { return singular_events_; }

 private:
  MonteCarloOptions options_;
  std::unique_ptr<MomentCache> own_cache_;
  MomentCache* cache_;
  std::int64_t singular_events_ = 0;
};

}  // namespace mumimo
