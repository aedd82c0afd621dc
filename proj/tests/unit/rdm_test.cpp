// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rdmpt/errors.hpp"
#include "rdmpt/exact.hpp"
#include "rdmpt/rdm.hpp"
#include "test_util.hpp"

namespace rdmpt::rdm {
namespace {

using qsim::AnsatzParameters;

// Reference RDM of the ansatz state computed through Slater-Condon rules.
RdmPair exact_rdm(const AnsatzParameters& t) {
  const auto s = qsim::simulate(qsim::build_ansatz(t));
  exact::SectorBasis basis(4, 2, 0);
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) c(k) = s.amplitudes()[basis.states[k]].real();
  return exact::rdms_from_amplitudes(c, basis);
}

double max_diff(const RdmPair& a, const RdmPair& b) {
  return std::max((a.rho1 - b.rho1).cwiseAbs().maxCoeff(), Tensor4::max_abs_diff(a.rho2, b.rho2));
}

class ScheduleTest : public ::testing::TestWithParam<ReflectionMode> {};

TEST_P(ScheduleTest, ExactExpectationsReproduceStateRdm) {
  const auto sch = MeasurementSchedule::build(4, 2, GetParam());
  // Copying reflection partners is exact only for alpha<->beta symmetric
  // states (t1 == t2), which is all that measure-one mode assumes.
  const bool both = GetParam() == ReflectionMode::kMeasureBoth;
  for (const AnsatzParameters t : {AnsatzParameters{0.3, 0.5, 0.5}, AnsatzParameters{-1.1, 0.4, 0.4},
                                   AnsatzParameters{2.0, 1.5, both ? -2.5 : 1.5}}) {
    const auto state = qsim::simulate(qsim::build_ansatz(t));
    const auto got = rdm_from_expectations(expectations_from_state(state, *sch), *sch);
    EXPECT_LT(max_diff(got, exact_rdm(t)), 1e-12);
    EXPECT_EQ(got.meta.provenance, Provenance::kRaw);
  }
}

TEST_P(ScheduleTest, EveryPauliIsCoveredByABasis) {
  const auto sch = MeasurementSchedule::build(4, 2, GetParam());
  EXPECT_FALSE(sch->paulis.empty());
  EXPECT_LT(sch->bases.size(), sch->paulis.size());
  for (const auto& p : sch->paulis) {
    EXPECT_FALSE(p.is_identity());
    bool covered = false;
    for (const auto& b : sch->bases) covered |= qsim::CircuitShots{b, {}, 0, 0}.covers(p);
    EXPECT_TRUE(covered) << p.label();
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, ScheduleTest,
                         ::testing::Values(ReflectionMode::kMeasureBoth, ReflectionMode::kMeasureOne));

TEST(ScheduleTest, MeasureOneNeedsNoMoreStrings) {
  const auto both = MeasurementSchedule::build(4, 2, ReflectionMode::kMeasureBoth);
  const auto one = MeasurementSchedule::build(4, 2, ReflectionMode::kMeasureOne);
  EXPECT_LT(one->elements.size(), both->elements.size());
  EXPECT_LE(one->paulis.size(), both->paulis.size());
  EXPECT_EQ(MeasurementSchedule::build(4, 2).get(), both.get());  // cached
}

TEST(RdmTest, HartreeFockStateGivesDeterminantRdm) {
  const auto sch = MeasurementSchedule::build(4, 2);
  const auto got = rdm_from_expectations(expectations_from_state(qsim::simulate(qsim::build_ansatz({})), *sch), *sch);
  EXPECT_LT(max_diff(got, determinant_rdm(4, {0, 1})), 1e-12);
  EXPECT_LT(diagnose(got).worst(), 1e-12);
  // Sampled: number-operator strings are deterministic on a determinant.
  const auto tables = qsim::measure_bases(qsim::build_ansatz({}), sch->bases, 100, qsim::NoiseModel::noiseless(4), 1);
  const auto sampled = rdm_from_shots(tables, *sch);
  EXPECT_EQ(sampled.meta.shots, static_cast<std::int64_t>(100 * sch->bases.size()));
  for (int p = 0; p < 4; ++p) EXPECT_DOUBLE_EQ(sampled.rho1(p, p), p < 2 ? 1.0 : 0.0);
  EXPECT_DOUBLE_EQ(sampled.rho2(0, 1, 0, 1), 1.0);
}

TEST(RdmTest, MissingCircuitRaisesCoverageError) {
  const auto sch = MeasurementSchedule::build(4, 2);
  auto tables = qsim::measure_bases(qsim::build_ansatz({}), sch->bases, 10, qsim::NoiseModel::noiseless(4), 1);
  tables.circuits.pop_back();
  try {
    rdm_from_shots(tables, *sch);
    FAIL() << "expected CoverageError";
  } catch (const CoverageError& e) {
    EXPECT_FALSE(e.missing().empty());
    EXPECT_NE(std::string(e.what()).find(e.missing().front()), std::string::npos);
  }
}

TEST(RdmTest, SampledRdmConvergesToExact) {
  const AnsatzParameters t{0.5, 0.2, 0.2};
  const auto sch = MeasurementSchedule::build(4, 2);
  const auto tables = qsim::measure_bases(qsim::build_ansatz(t), sch->bases, 200000, qsim::NoiseModel::noiseless(4), 8);
  const auto got = rdm_from_shots(tables, *sch);
  EXPECT_LT(max_diff(got, exact_rdm(t)), 0.01);
  EXPECT_GT(max_diff(got, exact_rdm(t)), 0.0);
}

TEST(SymmetryTest, EnforceSzAndReflectionAreIdempotentAndCommute) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 100; ++k) {
    const auto r = testing::random_state_rdm(4, 2, rng);
    const auto a = enforce_sz(r);
    const auto b = spin_reflection_average(r);
    EXPECT_LT(max_diff(enforce_sz(a), a), 1e-15);
    EXPECT_LT(max_diff(spin_reflection_average(b), b), 1e-15);
    EXPECT_LT(max_diff(enforce_sz(b), spin_reflection_average(a)), 1e-15);
    const auto s = symmetrize(r);
    EXPECT_EQ(s.meta.provenance, Provenance::kSymmetrized);
    EXPECT_NEAR(s.trace1(), 2.0, 1e-12);
    EXPECT_NEAR(s.trace2(), 2.0, 1e-12);
    EXPECT_LT(diagnose(s).hermiticity2, 1e-14);
    EXPECT_LT(diagnose(s).antisymmetry, 1e-14);
  }
}

TEST(SymmetryTest, EnforceSzZeroesSpinFlips) {
  std::mt19937_64 rng(1);
  const auto r = enforce_sz(testing::random_state_rdm(4, 2, rng));
  EXPECT_EQ(r.rho1(0, 1), 0.0);
  EXPECT_EQ(r.rho2(0, 2, 0, 3), 0.0);  // alpha alpha -> alpha beta
  EXPECT_NE(r.rho2(0, 1, 0, 1), 0.0);
}

TEST(BootstrapTest, FairCoinMatchesBinomialStd) {
  qsim::ShotTable t;
  t.n_qubits = 1;
  t.circuits.push_back({"Z", {5000.0, 5000.0}, 10000, 0});
  const auto z = qsim::PauliString::from_label("Z");
  const auto ens = bootstrap(t, 4000, [&](const qsim::ShotTable& s) { return s.circuits[0].expectation(z); }, 3);
  EXPECT_EQ(ens.values.size(), 4000u);
  EXPECT_NEAR(ens.mean, 0.0, 0.002);
  EXPECT_NEAR(ens.std, 1.0 / std::sqrt(10000.0), 0.1 / std::sqrt(10000.0));
}

TEST(BootstrapTest, DeterministicAcrossThreadCounts) {
  qsim::ShotTable t;
  t.n_qubits = 2;
  t.circuits.push_back({"ZZ", {10, 20, 30, 40}, 100, 0});
  auto f = [](const qsim::ShotTable& s) { return s.circuits[0].counts[3] / 100.0; };
  const auto a = bootstrap(t, 64, f, 5, 1);
  const auto b = bootstrap(t, 64, f, 5, 4);
  EXPECT_EQ(a.values, b.values);
  const auto c = bootstrap(t, 64, f, 6, 4);
  EXPECT_NE(a.values, c.values);
}

TEST(BootstrapTest, ResamplePreservesShotTotals) {
  qsim::ShotTable t;
  t.n_qubits = 2;
  t.circuits.push_back({"ZZ", {0, 7, 0, 93}, 100, 0});
  auto rng = qsim::make_stream(1, {});
  const auto r = resample(t, rng);
  EXPECT_DOUBLE_EQ(r.circuits[0].counts[0] + r.circuits[0].counts[1] + r.circuits[0].counts[2] +
                       r.circuits[0].counts[3],
                   100.0);
  EXPECT_EQ(r.circuits[0].counts[0], 0.0);  // unobserved outcomes stay unobserved
}

TEST(BootstrapTest, SummarizeUsesSampleStd) {
  BootstrapEnsemble e;
  e.values = {1.0, 2.0, 3.0, 4.0};
  e.n_resamples = 4;
  e.summarize();
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std, std::sqrt(5.0 / 3.0), 1e-15);
  e.values = {1.0};
  e.summarize();
  EXPECT_EQ(e.std, 0.0);
}

TEST(RdmJsonTest, RoundTrip) {
  std::mt19937_64 rng(3);
  auto r = testing::random_state_rdm(4, 2, rng);
  r.meta.shots = 8192;
  r.meta.seed = 99;
  r.meta.provenance = Provenance::kPurified;
  r.meta.warnings = {"w"};
  nlohmann::json j = r;
  const auto back = j.get<RdmPair>();
  EXPECT_EQ(back.meta.provenance, Provenance::kPurified);
  EXPECT_EQ(back.meta.shots, 8192);
  EXPECT_EQ(back.meta.seed, 99u);
  EXPECT_EQ(back.meta.warnings, r.meta.warnings);
  EXPECT_EQ(max_diff(back, r), 0.0);
}

}  // namespace
}  // namespace rdmpt::rdm
