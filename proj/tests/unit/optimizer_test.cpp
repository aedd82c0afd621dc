// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "rdmpt/optimizer.hpp"

namespace rdmpt::vqe {
namespace {

double bowl(const std::vector<double>& x) {
  const double c[] = {0.3, -1.2, 0.7};
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - c[k]) * (x[k] - c[k]);
  return s;
}

class MinimizeTest : public ::testing::TestWithParam<OptimizerKind> {};

TEST_P(MinimizeTest, QuadraticBowl) {
  OptimizerSettings s;
  s.kind = GetParam();
  s.max_evaluations = 100;
  const auto r = minimize(bowl, {0.0, 0.0, 0.0}, s);
  EXPECT_LE(r.evaluations.size(), 100u);
  EXPECT_NEAR(r.best_x[0], 0.3, 1e-3);
  EXPECT_NEAR(r.best_x[1], -1.2, 1e-3);
  EXPECT_NEAR(r.best_x[2], 0.7, 1e-3);
  EXPECT_DOUBLE_EQ(r.best_value, bowl(r.best_x));
}

TEST_P(MinimizeTest, BestSoFarIsMonotoneAndRecorded) {
  OptimizerSettings s;
  s.kind = GetParam();
  const auto r = minimize(bowl, {1.0, 1.0, 1.0}, s);
  double best = INFINITY;
  for (const auto& e : r.evaluations) {
    EXPECT_DOUBLE_EQ(e.value, bowl(e.x));
    best = std::min(best, e.value);
  }
  EXPECT_DOUBLE_EQ(best, r.best_value);
  EXPECT_EQ(r.evaluations.front().x, (std::vector<double>{1.0, 1.0, 1.0}));
}

TEST_P(MinimizeTest, RespectsEvaluationBudget) {
  OptimizerSettings s;
  s.kind = GetParam();
  s.max_evaluations = 7;
  s.rhoend = 1e-12;
  const auto r = minimize(bowl, {3.0, 3.0, 3.0}, s);
  EXPECT_EQ(r.evaluations.size(), 7u);
  EXPECT_FALSE(r.converged);
}

INSTANTIATE_TEST_SUITE_P(Kinds, MinimizeTest,
                         ::testing::Values(OptimizerKind::kLinearTrustRegion, OptimizerKind::kNelderMead));

TEST(MinimizeTest, TrustRegionStopsAtRhoend) {
  OptimizerSettings s;
  s.rhoend = 1e-3;
  s.max_evaluations = 1000;
  const auto r = minimize(bowl, {0.0, 0.0, 0.0}, s);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.final_radius, 1e-3);
  EXPECT_LT(r.evaluations.size(), 1000u);
}

TEST(MinimizeTest, ObjectiveFailureCarriesParameters) {
  int calls = 0;
  auto f = [&](const std::vector<double>& x) {
    if (++calls == 3) throw std::runtime_error("boom");
    return bowl(x);
  };
  try {
    minimize(f, {0.0, 0.0, 0.0}, {});
    FAIL() << "expected ObjectiveError";
  } catch (const ObjectiveError& e) {
    EXPECT_EQ(e.parameters().size(), 3u);
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(MinimizeTest, NamesRoundTrip) {
  EXPECT_EQ(optimizer_from_string("cobyla"), OptimizerKind::kLinearTrustRegion);
  EXPECT_EQ(optimizer_from_string(to_string(OptimizerKind::kNelderMead)), OptimizerKind::kNelderMead);
  EXPECT_ANY_THROW(optimizer_from_string("bfgs"));
}

}  // namespace
}  // namespace rdmpt::vqe
