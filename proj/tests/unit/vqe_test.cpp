// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rdmpt/errors.hpp"
#include "rdmpt/vqe.hpp"
#include "test_util.hpp"

namespace rdmpt::vqe {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("rdmpt_unit_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

ScanSpec exact_spec(double r) {
  ScanSpec s;
  s.fixture = "h2";
  s.geometries = {r};
  s.shots = 0;
  s.bootstrap_resamples = 0;
  return s;
}

ScanSpec noisy_spec() {
  ScanSpec s;
  s.fixture = "h2";
  s.geometries = {0.7};
  s.noise = qsim::NoiseModel::defaults(4);
  s.noise_label = "default";
  s.shots = 2000;
  s.seed = 21;
  s.optimizer.max_evaluations = 25;
  s.bootstrap_resamples = 20;
  s.threads = 2;
  return s;
}

TEST(PipelineTest, ExactOptimumReachesFci) {
  const auto rec = run_point(exact_spec(0.7), 0.7);
  ASSERT_TRUE(rec.ok());
  EXPECT_NEAR(rec.last5_mean.pure, rec.references.e_fci_frozen, 1e-5);
  EXPECT_NEAR(rec.iterations.back().energies.pure, rec.references.e_fci_frozen, 1e-6);
  EXPECT_EQ(rec.objective_calls, rec.pure_evaluations);
  EXPECT_EQ(rec.objective_calls, static_cast<int>(rec.iterations.size()));
  EXPECT_EQ(rec.bootstrap_resamples, 0u);
  for (const auto& it : rec.iterations) EXPECT_GE(it.energies.pure, rec.references.e_fci_full - 1e-9);
}

TEST(PipelineTest, LiHFrozenCoreMatchesReferences) {
  const auto& e = testing::manifest().find("lih", 1.6);
  const PointPipeline p(testing::manifest().load_table(e), e.active_space(), {});
  const auto hf = p.exact({});
  EXPECT_NEAR(hf.energies.pure, e.e_hf, 1e-9);
  EXPECT_NEAR(hf.energies.pt2_full, e.e_hf + e.e_mp2_corr_full, 1e-9);
  const auto refs = compute_references(e, testing::manifest().load_table(e));
  EXPECT_NEAR(refs.e_fci_full, e.e_exact_full, 1e-9);
  EXPECT_NEAR(refs.e_mp2, e.e_hf + e.e_mp2_corr_full, 1e-9);
}

TEST(PipelineTest, NoisyRunIsDeterministicAndReportsSpread) {
  const auto a = run_point(noisy_spec(), 0.7);
  const auto b = run_point(noisy_spec(), 0.7);
  ASSERT_EQ(a.iterations.size(), b.iterations.size());
  for (std::size_t k = 0; k < a.iterations.size(); ++k)
    EXPECT_EQ(a.iterations[k].energies.pt2_full, b.iterations[k].energies.pt2_full);
  EXPECT_GT(a.last5_std.pure, 0.0);
  EXPECT_GT(a.bootstrap_std.pure, 0.0);
  EXPECT_EQ(a.bootstrap_resamples, 20u);
  EXPECT_NEAR(a.combined_error.pure, std::hypot(a.last5_std.pure, a.bootstrap_std.pure), 1e-15);
  EXPECT_NEAR(a.combined_error.pt2_full, std::hypot(a.last5_std.pt2_full, a.bootstrap_std.pt2_full), 1e-15);
  auto other = noisy_spec();
  other.seed = 22;
  EXPECT_NE(run_point(other, 0.7).iterations.back().energies.raw, a.iterations.back().energies.raw);
}

TEST(PipelineTest, MissingFixtureIsReported) {
  auto s = exact_spec(0.7);
  s.fixture = "h2o";
  EXPECT_THROW(run_point(s, 0.7), FixtureNotFoundError);
  s.fixture = "h2";
  EXPECT_THROW(run_point(s, 0.75), FixtureNotFoundError);
  s.geometries.clear();
  EXPECT_THROW(run_point(s, 0.7), ValidationError);
}

TEST(ScanTest, CorruptFixtureDoesNotStopScan) {
  const auto dir = scratch_dir("corrupt");
  const auto src = hamio::default_manifest_path().parent_path();
  fs::copy(src, dir / "fixtures");
  std::ofstream(dir / "fixtures" / "h2_2.0.fcidump") << "&FCI NORB=2\n garbage\n";
  auto s = exact_spec(0.7);
  s.geometries = {0.7, 2.0};
  s.manifest = dir / "fixtures" / "manifest.json";
  s.out = dir / "out";
  const auto recs = run_scan(s);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_TRUE(recs[0].ok());
  EXPECT_FALSE(recs[1].ok());
  EXPECT_NE(recs[1].error.find("h2_2.0.fcidump"), std::string::npos);
  EXPECT_TRUE(fs::exists(s.out / record_filename("h2", 2.0)));
  std::ostringstream csv;
  write_csv(recs, csv);
  std::istringstream lines(csv.str());
  std::string header, first, second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(header, kCsvHeader);
  EXPECT_EQ(second, "2.0000,,,,,,,,");
  fs::remove_all(dir);
}

TEST(ScanTest, CsvErrorConventions) {
  RunRecord r;
  r.geometry = 1.6;
  r.iterations.resize(1);
  r.last5_mean = {-7.0, -7.5, -7.6, -7.7};
  r.references.e_fci_frozen = -7.51;
  r.references.e_fci_full = -7.72;
  std::ostringstream out;
  write_csv({r}, out);
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  std::vector<double> v;
  std::stringstream ss(row);
  for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
  ASSERT_EQ(v.size(), 9u);
  EXPECT_DOUBLE_EQ(v[0], 1.6);
  EXPECT_NEAR(v[5], 0.01, 1e-9);  // e_pure - e_fci_frozen
  EXPECT_NEAR(v[6], 0.02, 1e-9);  // e_pt2_full - e_fci_full
}

TEST(RecordTest, JsonRoundTripAndArchive) {
  const auto dir = scratch_dir("records");
  auto s = exact_spec(2.0);
  s.out = dir;
  const auto rec = run_point(s, 2.0);
  const auto back = read_records(dir);
  ASSERT_EQ(back.size(), 1u);
  nlohmann::json a = rec, b = back[0];
  EXPECT_EQ(a, b);
  EXPECT_EQ(record_filename("h2", 2.0).string(), "run_h2_2.0000.json");
  fs::remove_all(dir);
}

TEST(RecordTest, LastFiveStatistics) {
  std::vector<IterationRecord> it(7);
  for (int k = 0; k < 7; ++k) it[k].energies.pure = k;
  const auto [mean, sd] = last_n_statistics(it);
  EXPECT_DOUBLE_EQ(mean.pure, 4.0);
  EXPECT_NEAR(sd.pure, std::sqrt(2.5), 1e-15);
  const auto [m1, s1] = last_n_statistics({it[0]});
  EXPECT_DOUBLE_EQ(m1.pure, 0.0);
  EXPECT_DOUBLE_EQ(s1.pure, 0.0);
}

TEST(SpecTest, LoadResolvesRelativePaths) {
  const auto dir = scratch_dir("spec");
  nlohmann::json noise = qsim::NoiseModel::defaults(4);
  noise["p2"] = 0.02;
  std::ofstream(dir / "noise.json") << noise.dump();
  std::ofstream(dir / "scan.json") << R"({
    "fixture": "h2", "geometries": [0.7, 2.0], "noise": "noise.json", "shots": 1000,
    "seed": 5, "optimizer": {"method": "nelder_mead", "max_evaluations": 50},
    "bootstrap": {"resamples": 10}, "reflection": "one", "out": "results"})";
  const auto s = load_scan_spec(dir / "scan.json");
  EXPECT_EQ(s.geometries, (std::vector<double>{0.7, 2.0}));
  EXPECT_DOUBLE_EQ(s.noise.p2, 0.02);
  EXPECT_EQ(s.optimizer.kind, OptimizerKind::kNelderMead);
  EXPECT_EQ(s.optimizer.max_evaluations, 50);
  EXPECT_EQ(s.bootstrap_resamples, 10u);
  EXPECT_EQ(s.reflection, rdm::ReflectionMode::kMeasureOne);
  EXPECT_EQ(s.out, dir / "results");
  std::ofstream(dir / "bad.json") << R"({"fixture": "h2", "geometries": []})";
  EXPECT_THROW(load_scan_spec(dir / "bad.json"), ValidationError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace rdmpt::vqe
