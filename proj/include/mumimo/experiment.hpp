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

// Experiment specs, figure-data sweeps and CSV / manifest output.
//
// Spec files are plain text, one `key = value` per line, `#` starts a comment.
// List-valued keys may be repeated or carry comma-separated values. SINRs are
// given in dB and converted to linear scale once, at parse time.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mumimo/channel_model.hpp"
#include "mumimo/moments.hpp"
#include "mumimo/rates.hpp"

namespace mumimo {

enum class Preset { kFig2, kFig3, kFig4, kFig5, kCustom };

inline const char* to_string(Preset p) {
  switch (p) {
    case Preset::kFig2: return "fig2";
    case Preset::kFig3: return "fig3";
    case Preset::kFig4: return "fig4";
    case Preset::kFig5: return "fig5";
    case Preset::kCustom: return "custom";
  }
  return "?";
}

inline constexpr std::int64_t kDefaultSamples = 100000;
inline constexpr std::int64_t kQuickSamples = 10000;

/// A fully-resolved experiment: preset defaults filled in, SINRs linear.
///
/// Per preset:
///  - fig2: sum-rate bound, tau = K, for every K in k_list (default 1..M).
///  - fig3: net sum rate for every (T, M).
///  - fig4: net sum rate over SINR points at fixed T and M.
///  - fig5: net weighted-sum rate over M; rho_f / rho_r / weights are per user.
///  - custom: sum-rate (and fixed-tau net rate when T is given) per cell
///    M x K x tau x SINR point x T.
struct ExperimentSpec {
  Preset preset = Preset::kCustom;
  std::vector<int> m_list;
  std::vector<int> k_list;
  std::vector<int> t_list;
  std::vector<int> tau_list;        // custom only; empty means tau = K
  std::vector<double> rho_f_db;     // SINR points (fig5: per user)
  std::vector<double> rho_r_db;     // paired with rho_f_db
  std::vector<double> weights;      // fig5 per-user weights
  std::vector<int> schemes;         // 0/1 homogeneous, 2/3 weighted
  std::int64_t samples = kDefaultSamples;
  std::uint64_t seed = 1;
  bool quick = false;
  std::string output;

  [[nodiscard]] std::vector<double> rho_f() const {
    std::vector<double> v;
    for (double x : rho_f_db) v.push_back(db_to_linear(x));
    return v;
  }
  [[nodiscard]] std::vector<double> rho_r() const {
    std::vector<double> v;
    for (double x : rho_r_db) v.push_back(db_to_linear(x));
    return v;
  }
};

struct ValidationResult {
  std::optional<ExperimentSpec> spec;  // set when the document parsed
  std::vector<std::string> errors;     // parse / structural problems
  std::vector<std::string> infeasible; // cells violating system constraints

  [[nodiscard]] bool ok() const { return spec.has_value() && errors.empty() && infeasible.empty(); }
  [[nodiscard]] bool runnable() const { return spec.has_value() && errors.empty(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<long long> parse_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::optional<double> parse_real(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// Cell-level feasibility message for a (K, tau, T) triple; empty if feasible.
inline std::string cell_violation(int M, int K, int tau, std::optional<int> T) {
  std::string v;
  auto add = [&](const std::string& s) { v += v.empty() ? s : "; " + s; };
  if (K > tau) add("K <= tau_rp");
  if (K > M) add("K <= M");
  if (T && tau > *T - 2) add("tau_rp <= T-2");
  return v;
}

}  // namespace detail

/// Parses a spec document and checks it. All problems are reported, not just
/// the first; each carries its line number and field where applicable.
inline ValidationResult validate_spec(const std::string& text) {
  ValidationResult result;
  ExperimentSpec spec;
  std::map<std::string, std::vector<std::pair<int, std::string>>> fields;
  static const std::set<std::string> kList = {"M", "K", "T", "tau", "rho_f_db", "rho_r_db", "weights", "schemes"};
  static const std::set<std::string> kScalar = {"preset", "rho_r_offset_db", "samples", "seed", "quick", "output"};

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = detail::trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string::npos) {
      result.errors.push_back(where + ": expected key = value");
      continue;
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (!kList.count(key) && !kScalar.count(key)) {
      result.errors.push_back(where + ": unknown key '" + key + "'");
      continue;
    }
    if (kScalar.count(key) && fields.count(key)) {
      result.errors.push_back(where + ": field '" + key + "' given more than once");
      continue;
    }
    if (kList.count(key)) {
      std::stringstream items(value);
      std::string item;
      bool any = false;
      while (std::getline(items, item, ',')) {
        item = detail::trim(item);
        if (item.empty()) continue;
        fields[key].emplace_back(lineno, item);
        any = true;
      }
      if (!any) result.errors.push_back(where + ": field '" + key + "' has no value");
    } else {
      fields[key].emplace_back(lineno, value);
    }
  }

  auto ints = [&](const std::string& key) {
    std::vector<int> out;
    for (const auto& [ln, v] : fields[key]) {
      const auto x = detail::parse_int(v);
      if (!x || *x < 0 || *x > 1000000)
        result.errors.push_back("line " + std::to_string(ln) + ": field '" + key +
                                "': expected a nonnegative integer, got '" + v + "'");
      else
        out.push_back(static_cast<int>(*x));
    }
    return out;
  };
  auto reals = [&](const std::string& key) {
    std::vector<double> out;
    for (const auto& [ln, v] : fields[key]) {
      const auto x = detail::parse_real(v);
      if (!x)
        result.errors.push_back("line " + std::to_string(ln) + ": field '" + key + "': expected a number, got '" +
                                v + "'");
      else
        out.push_back(*x);
    }
    return out;
  };

  // preset
  std::string preset = "custom";
  if (fields.count("preset")) preset = fields["preset"].front().second;
  static const std::map<std::string, Preset> kPresets = {{"fig2", Preset::kFig2},
                                                         {"fig3", Preset::kFig3},
                                                         {"fig4", Preset::kFig4},
                                                         {"fig5", Preset::kFig5},
                                                         {"custom", Preset::kCustom}};
  if (!kPresets.count(preset)) {
    result.errors.push_back("line " + std::to_string(fields["preset"].front().first) +
                            ": field 'preset': unknown preset '" + preset + "'");
    return result;
  }
  spec.preset = kPresets.at(preset);

  spec.m_list = ints("M");
  spec.k_list = ints("K");
  spec.t_list = ints("T");
  spec.tau_list = ints("tau");
  spec.rho_f_db = reals("rho_f_db");
  spec.rho_r_db = reals("rho_r_db");
  spec.weights = reals("weights");
  spec.schemes = ints("schemes");

  std::optional<double> offset;
  if (fields.count("rho_r_offset_db")) {
    const auto& [ln, v] = fields["rho_r_offset_db"].front();
    offset = detail::parse_real(v);
    if (!offset) result.errors.push_back("line " + std::to_string(ln) + ": field 'rho_r_offset_db': expected a number");
  }
  if (fields.count("samples")) {
    const auto& [ln, v] = fields["samples"].front();
    const auto x = detail::parse_int(v);
    if (!x || *x < 2)
      result.errors.push_back("line " + std::to_string(ln) + ": field 'samples': expected an integer >= 2");
    else
      spec.samples = *x;
  }
  if (fields.count("seed")) {
    const auto& [ln, v] = fields["seed"].front();
    try {
      std::size_t used = 0;
      spec.seed = std::stoull(v, &used);
      if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    } catch (const std::exception&) {
      result.errors.push_back("line " + std::to_string(ln) + ": field 'seed': expected an unsigned 64-bit integer");
    }
  }
  if (fields.count("quick")) {
    const auto& [ln, v] = fields["quick"].front();
    if (v == "true" || v == "1")
      spec.quick = true;
    else if (v == "false" || v == "0")
      spec.quick = false;
    else
      result.errors.push_back("line " + std::to_string(ln) + ": field 'quick': expected true or false");
  }
  if (spec.quick && !fields.count("samples")) spec.samples = kQuickSamples;
  if (fields.count("output")) spec.output = fields["output"].front().second;

  // Preset defaults.
  auto default_ints = [](std::vector<int>& v, std::vector<int> d) {
    if (v.empty()) v = std::move(d);
  };
  auto default_reals = [](std::vector<double>& v, std::vector<double> d) {
    if (v.empty()) v = std::move(d);
  };
  switch (spec.preset) {
    case Preset::kFig2:
      default_ints(spec.m_list, {4, 8, 16});
      default_reals(spec.rho_f_db, {0.0});
      default_ints(spec.schemes, {0, 1});
      break;
    case Preset::kFig3:
      default_ints(spec.t_list, {20, 30});
      default_ints(spec.m_list, {2, 4, 6, 8, 10, 12, 14, 16});
      default_reals(spec.rho_f_db, {0.0});
      default_ints(spec.schemes, {0, 1});
      break;
    case Preset::kFig4:
      default_ints(spec.t_list, {20});
      default_ints(spec.m_list, {16});
      default_reals(spec.rho_f_db, {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0});
      default_ints(spec.schemes, {0, 1});
      break;
    case Preset::kFig5:
      default_ints(spec.t_list, {20});
      default_ints(spec.m_list, {8, 12, 16, 24, 32});
      default_reals(spec.rho_f_db, {-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0});
      default_reals(spec.weights, {2.0, 2.0, 2.0, 2.0, 1.0, 1.0, 1.0, 1.0});
      default_ints(spec.schemes, {2, 3});
      break;
    case Preset::kCustom:
      break;
  }
  if (spec.rho_r_db.empty() && !spec.rho_f_db.empty()) {
    for (double f : spec.rho_f_db) spec.rho_r_db.push_back(f + offset.value_or(-10.0));
  } else if (offset) {
    result.errors.push_back("field 'rho_r_offset_db' conflicts with an explicit rho_r_db list");
  }

  // Structural checks.
  auto require = [&](bool cond, const std::string& msg) {
    if (!cond) result.errors.push_back(msg);
  };
  require(!spec.m_list.empty(), "field 'M': list is empty");
  require(!spec.rho_f_db.empty(), "field 'rho_f_db': list is empty");
  require(spec.rho_r_db.size() == spec.rho_f_db.size(), "field 'rho_r_db': must pair one-to-one with rho_f_db");
  for (int m : spec.m_list) require(m >= 1, "field 'M': values must be >= 1");
  for (int k : spec.k_list) require(k >= 1, "field 'K': values must be >= 1");
  for (int t : spec.tau_list) require(t >= 1, "field 'tau': values must be >= 1");
  for (int t : spec.t_list) require(t >= 1, "field 'T': values must be >= 1");
  const bool weighted = spec.preset == Preset::kFig5;
  for (int s : spec.schemes)
    require(weighted ? (s == 2 || s == 3) : (s == 0 || s == 1),
            std::string("field 'schemes': ") + (weighted ? "fig5 accepts schemes 2 and 3" : "accepts schemes 0 and 1"));
  require(!spec.schemes.empty() || spec.preset == Preset::kCustom, "field 'schemes': list is empty");
  if (spec.schemes.empty()) spec.schemes = {0, 1};
  if (!spec.tau_list.empty() && spec.preset != Preset::kCustom)
    result.errors.push_back("field 'tau': only custom specs fix tau_rp; presets search or tie it to K");
  if (!spec.weights.empty() && !weighted)
    result.errors.push_back("field 'weights': only the weighted preset (fig5) uses weights");

  switch (spec.preset) {
    case Preset::kFig2:
      require(spec.rho_f_db.size() == 1, "field 'rho_f_db': fig2 uses a single SINR point");
      for (int m : spec.m_list)
        for (int k : spec.k_list)
          if (k > m)
            result.infeasible.push_back("fig2 cell M=" + std::to_string(m) + " K=" + std::to_string(k) + ": K <= M");
      break;
    case Preset::kFig3:
    case Preset::kFig4:
      require(!spec.t_list.empty(), "field 'T': list is empty");
      for (int t : spec.t_list)
        if (t < 3) result.infeasible.push_back("T=" + std::to_string(t) + ": T >= 3 (tau_rp <= T-2 with tau_rp >= 1)");
      break;
    case Preset::kFig5: {
      const std::size_t users = spec.rho_f_db.size();
      require(spec.k_list.empty() || (spec.k_list.size() == 1 && spec.k_list[0] == static_cast<int>(users)),
              "field 'K': fig5 takes K from the per-user SINR list");
      require(spec.weights.size() == users, "field 'weights': need one weight per user");
      bool positive = false;
      for (double w : spec.weights) {
        require(w >= 0.0, "field 'weights': values must be >= 0");
        positive = positive || w > 0.0;
      }
      require(positive, "field 'weights': at least one weight must be positive");
      require(!spec.t_list.empty(), "field 'T': list is empty");
      for (int t : spec.t_list)
        if (t < static_cast<int>(users) + 2)
          result.infeasible.push_back("T=" + std::to_string(t) + ": tau_rp <= T-2 with tau_rp >= K");
      for (int m : spec.m_list)
        if (m < static_cast<int>(users))
          result.infeasible.push_back("M=" + std::to_string(m) + ": K <= M");
      break;
    }
    case Preset::kCustom: {
      require(!spec.k_list.empty(), "field 'K': list is empty");
      for (int m : spec.m_list)
        for (int k : spec.k_list) {
          const std::vector<int> taus = spec.tau_list.empty() ? std::vector<int>{k} : spec.tau_list;
          for (int tau : taus) {
            if (spec.t_list.empty()) {
              const std::string v = detail::cell_violation(m, k, tau, std::nullopt);
              if (!v.empty())
                result.infeasible.push_back("cell M=" + std::to_string(m) + " K=" + std::to_string(k) +
                                            " tau=" + std::to_string(tau) + ": " + v);
            }
            for (int t : spec.t_list) {
              const std::string v = detail::cell_violation(m, k, tau, t);
              if (!v.empty())
                result.infeasible.push_back("cell M=" + std::to_string(m) + " K=" + std::to_string(k) +
                                            " tau=" + std::to_string(tau) + " T=" + std::to_string(t) + ": " + v);
            }
          }
        }
      break;
    }
  }
  result.spec = std::move(spec);
  return result;
}

inline ValidationResult validate_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    ValidationResult r;
    r.errors.push_back("cannot read spec file " + path.string());
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return validate_spec(ss.str());
}

/// Fixed-format CSV cell: 9 significant digits for reals.
inline std::string csv_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::filesystem::path cache_file;  // empty: <out_dir>/moments.cache
  int workers = 0;
  bool persist_cache = true;
};

struct RunReport {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  std::size_t rows = 0;
  std::size_t infeasible_rows = 0;
  std::int64_t cache_hits = 0;
  std::int64_t cache_misses = 0;
  std::int64_t singular_events = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

class CsvWriter {
 public:
  explicit CsvWriter(std::string header) { text_ = std::move(header) + "\n"; }
  template <class... Cells>
  void row(const Cells&... cells) {
    std::string line;
    ((line += (line.empty() ? "" : ","), line += cell(cells)), ...);
    text_ += line + "\n";
    ++rows_;
  }
  [[nodiscard]] const std::string& text() const { return text_; }
  [[nodiscard]] std::size_t rows() const { return rows_; }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(double x) { return csv_real(x); }
  static std::string cell(int x) { return std::to_string(x); }
  std::string text_;
  std::size_t rows_ = 0;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write error on " + path.string());
}

}  // namespace detail

/// Runs every cell of `spec`, writing <out>/<preset>.csv and <out>/manifest.txt.
/// Infeasible cells become rows with a status other than "ok". The CSV depends
/// only on (spec, seed, samples), never on the worker count or cache state.
inline RunReport run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(options.out_dir);
  const std::filesystem::path cache_path =
      options.cache_file.empty() ? options.out_dir / "moments.cache" : options.cache_file;
  MomentCache cache(options.persist_cache ? cache_path : std::filesystem::path{});
  MonteCarloMoments source({spec.samples, spec.seed, options.workers}, &cache);
  const std::vector<double> rho_f = spec.rho_f();
  const std::vector<double> rho_r = spec.rho_r();
  RunReport report;

  auto scheme_name = [](int s) { return std::to_string(s); };
  std::string csv_text;
  std::size_t infeasible = 0;

  switch (spec.preset) {
    case Preset::kFig2: {
      detail::CsvWriter csv("scheme,M,K,N_star,rate,std_error,status");
      for (int scheme : spec.schemes)
        for (int m : spec.m_list) {
          std::vector<int> ks = spec.k_list;
          if (ks.empty())
            for (int k = 1; k <= m; ++k) ks.push_back(k);
          for (int k : ks) {
            if (k > m) {
              csv.row(scheme_name(scheme), m, k, "", "", "", "infeasible: K <= M");
              ++infeasible;
              continue;
            }
            const auto cfg = SystemConfig::homogeneous(m, k, k + 2, k, rho_f.front(), rho_r.front());
            const RatePoint r = c_sum_lb(cfg, scheme == 1, source);
            csv.row(scheme_name(scheme), m, k, r.n_selected, r.rate, r.std_error, "ok");
          }
        }
      csv_text = csv.text();
      report.rows = csv.rows();
      break;
    }
    case Preset::kFig3:
    case Preset::kFig4: {
      detail::CsvWriter csv("scheme,T,M,rho_f_db,rho_r_db,K_star,tau_star,N_star,net_rate,std_error,status");
      for (int scheme : spec.schemes)
        for (int t : spec.t_list)
          for (int m : spec.m_list)
            for (std::size_t s = 0; s < rho_f.size(); ++s) {
              if (t < 3) {
                csv.row(scheme_name(scheme), t, m, spec.rho_f_db[s], spec.rho_r_db[s], "", "", "", "", "",
                        "infeasible: T >= 3");
                ++infeasible;
                continue;
              }
              const RatePoint r = c_net(m, t, rho_f[s], rho_r[s], scheme == 1, source);
              csv.row(scheme_name(scheme), t, m, spec.rho_f_db[s], spec.rho_r_db[s], r.K, r.tau_rp, r.n_selected,
                      r.rate, r.std_error, "ok");
            }
      csv_text = csv.text();
      report.rows = csv.rows();
      break;
    }
    case Preset::kFig5: {
      detail::CsvWriter csv("scheme,T,M,tau_star,N_star,wt_net_rate,std_error,status");
      const int users = static_cast<int>(rho_f.size());
      for (int scheme : spec.schemes)
        for (int t : spec.t_list)
          for (int m : spec.m_list) {
            if (t < users + 2 || m < users) {
              csv.row(scheme_name(scheme), t, m, "", "", "", "",
                      m < users ? "infeasible: K <= M" : "infeasible: tau_rp <= T-2 with tau_rp >= K");
              ++infeasible;
              continue;
            }
            SystemConfig cfg;
            cfg.M = m;
            cfg.K = users;
            cfg.T = t;
            cfg.tau_rp = users;
            cfg.rho_f = rho_f;
            cfg.rho_r = rho_r;
            cfg.weights = spec.weights;
            const RatePoint r = c_wt_net(cfg, scheme == 3, source);
            csv.row(scheme_name(scheme), t, m, r.tau_rp, r.n_selected, r.rate, r.std_error, "ok");
          }
      csv_text = csv.text();
      report.rows = csv.rows();
      break;
    }
    case Preset::kCustom: {
      detail::CsvWriter csv(
          "scheme,M,K,tau,T,rho_f_db,rho_r_db,N_star,sum_rate,sum_std_error,net_rate,net_std_error,status");
      const std::vector<int> no_t = {-1};
      const std::vector<int>& ts = spec.t_list.empty() ? no_t : spec.t_list;
      for (int scheme : spec.schemes)
        for (int m : spec.m_list)
          for (int k : spec.k_list) {
            const std::vector<int> taus = spec.tau_list.empty() ? std::vector<int>{k} : spec.tau_list;
            for (int tau : taus)
              for (int t : ts)
                for (std::size_t s = 0; s < rho_f.size(); ++s) {
                  const std::optional<int> topt = t < 0 ? std::nullopt : std::optional<int>(t);
                  const std::string t_cell = topt ? std::to_string(t) : "";
                  const std::string bad = detail::cell_violation(m, k, tau, topt);
                  if (!bad.empty()) {
                    csv.row(scheme_name(scheme), m, k, tau, t_cell, spec.rho_f_db[s], spec.rho_r_db[s], "", "", "",
                            "", "", "infeasible: " + bad);
                    ++infeasible;
                    continue;
                  }
                  const auto cfg = SystemConfig::homogeneous(m, k, topt.value_or(tau + 2), tau, rho_f[s], rho_r[s]);
                  const RatePoint r = c_sum_lb(cfg, scheme == 1, source);
                  std::string net = "";
                  std::string net_se = "";
                  if (topt) {
                    const double prelog = static_cast<double>(t - tau - 1) / t;
                    net = csv_real(prelog * r.rate);
                    net_se = csv_real(prelog * r.std_error);
                  }
                  csv.row(scheme_name(scheme), m, k, tau, t_cell, spec.rho_f_db[s], spec.rho_r_db[s], r.n_selected,
                          r.rate, r.std_error, net, net_se, "ok");
                }
          }
      csv_text = csv.text();
      report.rows = csv.rows();
      break;
    }
  }

  report.csv = options.out_dir / (std::string(to_string(spec.preset)) + ".csv");
  detail::write_file(report.csv, csv_text);
  report.infeasible_rows = infeasible;
  report.cache_hits = cache.hits();
  report.cache_misses = cache.misses();
  report.singular_events = source.singular_events();
  if (options.persist_cache) cache.save();
  report.warnings = cache.warnings();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream manifest;
  manifest << "preset=" << to_string(spec.preset) << "\n"
           << "seed=" << spec.seed << "\n"
           << "samples=" << spec.samples << "\n"
           << "quick=" << (spec.quick ? "true" : "false") << "\n"
           << "workers=" << resolve_workers(options.workers) << "\n"
           << "csv=" << report.csv.filename().string() << "\n"
           << "rows=" << report.rows << "\n"
           << "infeasible_rows=" << report.infeasible_rows << "\n"
           << "cache_file=" << (options.persist_cache ? cache_path.string() : std::string("")) << "\n"
           << "cache_hits=" << report.cache_hits << "\n"
           << "cache_misses=" << report.cache_misses << "\n"
           << "singular_events=" << report.singular_events << "\n"
           << "wall_time_s=" << csv_real(report.wall_seconds) << "\n";
  report.manifest = options.out_dir / "manifest.txt";
  detail::write_file(report.manifest, manifest.str());
  return report;
}

}  // namespace mumimo
