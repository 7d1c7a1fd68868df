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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mumimo/experiment.hpp"

namespace mumimo {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("mumimo_exp_" + name);
  fs::remove_all(d);
  return d;
}

TEST(ValidateSpec, TrainingTooLongForBlock) {
  const auto v = validate_spec("preset = custom\nM = 8\nK = 2\ntau = 19\nT = 20\nrho_f_db = 0\n");
  ASSERT_TRUE(v.runnable());
  EXPECT_FALSE(v.ok());
  EXPECT_TRUE(contains(v.infeasible, "tau_rp <= T-2"));
}

TEST(ValidateSpec, MoreUsersThanPilots) {
  const auto v = validate_spec("preset = custom\nM = 8\nK = 4\ntau = 3\nrho_f_db = 0\n");
  EXPECT_TRUE(contains(v.infeasible, "K <= tau_rp"));
}

TEST(ValidateSpec, ReportsAllViolationsAtOnce) {
  const auto v = validate_spec("preset = custom\nM = 2\nK = 4\ntau = 3\nT = 4\nrho_f_db = 0\n");
  ASSERT_EQ(v.infeasible.size(), 1u);
  EXPECT_NE(v.infeasible[0].find("K <= tau_rp"), std::string::npos);
  EXPECT_NE(v.infeasible[0].find("K <= M"), std::string::npos);
  EXPECT_NE(v.infeasible[0].find("tau_rp <= T-2"), std::string::npos);
}

TEST(ValidateSpec, Fig3Defaults) {
  const auto v = validate_spec("preset = fig3\n");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.spec->t_list, (std::vector<int>{20, 30}));
  EXPECT_EQ(v.spec->m_list, (std::vector<int>{2, 4, 6, 8, 10, 12, 14, 16}));
  EXPECT_EQ(v.spec->rho_r_db, (std::vector<double>{-10.0}));
  EXPECT_EQ(v.spec->samples, kDefaultSamples);
}

TEST(ValidateSpec, Fig5Defaults) {
  const auto v = validate_spec("preset = fig5\nquick = true\n");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.spec->weights, (std::vector<double>{2, 2, 2, 2, 1, 1, 1, 1}));
  EXPECT_EQ(v.spec->rho_r_db.front(), -14.0);
  EXPECT_EQ(v.spec->schemes, (std::vector<int>{2, 3}));
  EXPECT_EQ(v.spec->samples, kQuickSamples);
}

TEST(ValidateSpec, RepeatedKeysAndCommasBuildLists) {
  const auto v = validate_spec("preset = fig2\nM = 4\nM = 8, 16\n");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.spec->m_list, (std::vector<int>{4, 8, 16}));
}

TEST(ValidateSpec, ParseErrorsCarryLineAndField) {
  const auto v = validate_spec("preset = fig2\n\nM = four\nbogus = 1\nseed = 1\nseed = 2\nnot a pair\n");
  EXPECT_FALSE(v.runnable());
  EXPECT_TRUE(contains(v.errors, "line 3: field 'M'"));
  EXPECT_TRUE(contains(v.errors, "line 4: unknown key 'bogus'"));
  EXPECT_TRUE(contains(v.errors, "line 6: field 'seed' given more than once"));
  EXPECT_TRUE(contains(v.errors, "line 7: expected key = value"));
}

TEST(ValidateSpec, UnknownPresetAndBadScheme) {
  EXPECT_FALSE(validate_spec("preset = fig9\n").runnable());
  EXPECT_TRUE(contains(validate_spec("preset = fig3\nschemes = 2\n").errors, "schemes"));
}

TEST(ValidateSpec, CommentsAndWhitespaceIgnored) {
  const auto v = validate_spec("# header\n  preset = fig4   # trailing\n\n");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.spec->preset, Preset::kFig4);
  EXPECT_EQ(v.spec->rho_f_db.size(), 7u);
}

TEST(CsvReal, NineSignificantDigits) {
  EXPECT_EQ(csv_real(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(csv_real(2.0), "2");
  EXPECT_EQ(csv_real(123456789.123), "123456789");
}

TEST(RunExperiment, CustomSingleCell) {
  const auto v = validate_spec("preset = custom\nM = 4\nK = 2\nT = 10\nrho_f_db = 0\nrho_r_db = -10\nschemes = 1\n"
                               "samples = 2000\nseed = 3\n");
  ASSERT_TRUE(v.ok());
  const fs::path out = fresh_dir("custom");
  const auto report = run_experiment(*v.spec, {out, {}, 1, true});
  EXPECT_EQ(report.rows, 1u);
  const auto csv = lines_of(slurp(report.csv));
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(csv[0], "scheme,M,K,tau,T,rho_f_db,rho_r_db,N_star,sum_rate,sum_std_error,net_rate,net_std_error,status");
  MonteCarloMoments src({2000, 3, 1});
  const auto expect = c_sum_lb(SystemConfig::homogeneous(4, 2, 10, 2, 1.0, 0.1), true, src);
  EXPECT_EQ(csv[1].substr(0, 18), "1,4,2,2,10,0,-10," + std::to_string(expect.n_selected));
  EXPECT_EQ(csv[1].substr(csv[1].size() - 3), ",ok");
  EXPECT_NE(csv[1].find(csv_real(expect.rate)), std::string::npos);
  EXPECT_NE(csv[1].find(csv_real(expect.rate * 7 / 10)), std::string::npos);

  const auto manifest = lines_of(slurp(report.manifest));
  EXPECT_TRUE(contains(manifest, "seed=3"));
  EXPECT_TRUE(contains(manifest, "samples=2000"));
  EXPECT_TRUE(contains(manifest, "singular_events=0"));
  EXPECT_TRUE(contains(manifest, "wall_time_s="));
  EXPECT_TRUE(fs::exists(out / "moments.cache"));
}

TEST(RunExperiment, InfeasibleCellsBecomeRows) {
  const auto v = validate_spec("preset = custom\nM = 4\nK = 2, 5\nrho_f_db = 0\nschemes = 0\nsamples = 500\n");
  ASSERT_TRUE(v.runnable());
  const auto report = run_experiment(*v.spec, {fresh_dir("infeasible"), {}, 1, false});
  EXPECT_EQ(report.rows, 2u);
  EXPECT_EQ(report.infeasible_rows, 1u);
  const auto csv = lines_of(slurp(report.csv));
  EXPECT_NE(csv[2].find("infeasible: K <= M"), std::string::npos);
}

TEST(RunExperiment, ReproducibleAcrossRunsAndWorkers) {
  const auto v = validate_spec("preset = fig2\nM = 4\nsamples = 3000\nseed = 9\n");
  ASSERT_TRUE(v.ok());
  const auto a = run_experiment(*v.spec, {fresh_dir("rep_a"), {}, 1, false});
  const auto b = run_experiment(*v.spec, {fresh_dir("rep_b"), {}, 4, false});
  const auto c = run_experiment(*v.spec, {fresh_dir("rep_c"), {}, 1, false});
  EXPECT_EQ(slurp(a.csv), slurp(b.csv));
  EXPECT_EQ(slurp(a.csv), slurp(c.csv));
  EXPECT_EQ(lines_of(slurp(a.csv)).size(), 9u);  // header + 2 schemes x K = 1..4
}

TEST(RunExperiment, PersistedCacheIsReused) {
  const auto v = validate_spec("preset = fig2\nM = 4\nsamples = 1000\n");
  const fs::path out = fresh_dir("reuse");
  const auto first = run_experiment(*v.spec, {out, {}, 1, true});
  const auto second = run_experiment(*v.spec, {out, {}, 1, true});
  EXPECT_GT(first.cache_misses, 0);
  EXPECT_EQ(second.cache_misses, 0);
  EXPECT_EQ(slurp(first.csv), slurp(second.csv));
}

TEST(RunExperiment, Fig5Columns) {
  const auto v = validate_spec("preset = fig5\nM = 8\nT = 10\nsamples = 500\n");
  ASSERT_TRUE(v.ok());
  const auto report = run_experiment(*v.spec, {fresh_dir("fig5"), {}, 0, false});
  const auto csv = lines_of(slurp(report.csv));
  ASSERT_EQ(csv.size(), 3u);
  EXPECT_EQ(csv[0], "scheme,T,M,tau_star,N_star,wt_net_rate,std_error,status");
  EXPECT_EQ(csv[1].substr(0, 9), "2,10,8,8,");
  EXPECT_EQ(csv[2].substr(0, 9), "3,10,8,8,");
}

}  // namespace
}  // namespace mumimo
