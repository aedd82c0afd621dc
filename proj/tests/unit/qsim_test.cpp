// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "rdmpt/errors.hpp"
#include "rdmpt/measure.hpp"
#include "rdmpt/noise.hpp"
#include "rdmpt/pauli.hpp"
#include "rdmpt/statevector.hpp"

namespace rdmpt::qsim {
namespace {

Eigen::MatrixXcd op_matrix(const FermionProduct& f, int n) { return to_matrix(jw_operator(f, n), n); }

TEST(PauliTest, LabelsAndProducts) {
  const auto p = PauliString::from_label("IXYZ");
  EXPECT_EQ(p.op(0), 'Z');
  EXPECT_EQ(p.op(1), 'Y');
  EXPECT_EQ(p.op(2), 'X');
  EXPECT_EQ(p.op(3), 'I');
  EXPECT_EQ(p.label(), "IXYZ");
  EXPECT_EQ(p.sparse_label(), "X2 Y1 Z0");
  // XY = iZ on one qubit.
  const auto q = PauliString::from_label("X") * PauliString::from_label("Y");
  EXPECT_EQ(q.label(), "Z");
  EXPECT_NEAR(std::abs(q.coeff - Complex(0, 1)), 0.0, 1e-15);
  EXPECT_TRUE(PauliString::from_label("XX").commutes(PauliString::from_label("YY")));
  EXPECT_FALSE(PauliString::from_label("XX").qubitwise_commutes(PauliString::from_label("YY")));
  EXPECT_THROW(PauliString::from_label("XQ"), ValidationError);
}

TEST(JordanWignerTest, CanonicalAnticommutation) {
  const int n = 4;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(16, 16);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const Eigen::MatrixXcd ap = op_matrix({ann(p)}, n), aq = op_matrix({ann(q)}, n);
      const Eigen::MatrixXcd cq = op_matrix({cre(q)}, n);
      EXPECT_LT((ap * cq + cq * ap - (p == q ? 1.0 : 0.0) * id).norm(), 1e-14);
      EXPECT_LT((ap * aq + aq * ap).norm(), 1e-14);
      EXPECT_LT((cq - aq.adjoint()).norm(), 1e-14);
    }
}

TEST(JordanWignerTest, NumberOperatorAndNilpotency) {
  EXPECT_TRUE(jw_operator({cre(2), cre(2)}, 4).empty());
  const auto n2 = simplify(jw_operator({cre(2), ann(2)}, 4));
  ASSERT_EQ(n2.size(), 2u);  // (I - Z_2)/2
  const auto s = StateVector::basis_state(4, 0b0100);
  EXPECT_NEAR(s.expectation(n2).real(), 1.0, 1e-15);
  // a+_1 a_0 carries no Z string between adjacent modes.
  const auto hop = simplify(jw_operator({cre(1), ann(0)}, 4));
  for (const auto& t : hop) EXPECT_EQ(t.op(2), 'I');
}

TEST(GateTest, StandardMatrices) {
  auto s = StateVector::basis_state(2, 0b01);
  s.apply(gates::cnot(0, 1));
  EXPECT_NEAR(std::abs(s.amplitudes()[0b11]), 1.0, 1e-15);
  StateVector h(1);
  h.apply(gates::h(0));
  EXPECT_NEAR(h.amplitudes()[1].real(), M_SQRT1_2, 1e-15);
  StateVector r(1);
  r.apply(gates::ry(0, 0.8));
  EXPECT_NEAR(r.amplitudes()[1].real(), std::sin(0.4), 1e-15);
  auto g = StateVector::basis_state(2, 0b01);
  g.apply(gates::givens(0, 1, 0.6));
  EXPECT_NEAR(g.amplitudes()[0b01].real(), std::cos(0.3), 1e-15);
  EXPECT_NEAR(g.amplitudes()[0b10].real(), std::sin(0.3), 1e-15);
  EXPECT_THROW(gates::cnot(1, 1), ValidationError);
}

TEST(GateTest, GivensAcrossModesKeepsFermionicSign) {
  // Rotation between spin orbitals 0 and 2 with orbital 1 occupied: the
  // fermionic generator a+_2 a_0 - a+_0 a_2 picks up the Z on qubit 1.
  auto t = simulate(build_ansatz({0.0, 1.0, 0.0}));
  const auto gen = op_matrix({cre(2), ann(0)}, 4) - op_matrix({cre(0), ann(2)}, 4);
  Eigen::VectorXcd hf = Eigen::VectorXcd::Zero(16);
  hf(0b0011) = 1.0;
  const Eigen::VectorXcd expect = (0.5 * gen).exp() * hf;
  EXPECT_LT((t.as_vector() - expect).norm(), 1e-12);
}

// Golden values from tools/fixtures/ansatz_oracle.py (numpy, dense matrices).
TEST(AnsatzTest, MatchesIndependentAmplitudes) {
  struct Case {
    AnsatzParameters t;
    double a3, a6, a9, a12;
  };
  const Case cases[] = {
      {{0.3, -0.2, 0.5}, 0.949555407501256, 0.132430547390797, 0.257858895284270, 0.119647266269122},
      {{-1.1, 0.7, 0.4}, 0.749267658307011, -0.384047944211625, 0.334757675106303, -0.423134082436495},
      {{2.0, 1.5, -2.5}, -0.419660482282629, -0.700415426889792, -0.556027470778383, -0.155360101457538},
  };
  for (const auto& c : cases) {
    const auto s = simulate(build_ansatz(c.t));
    const auto& a = s.amplitudes();
    EXPECT_NEAR(a[3].real(), c.a3, 1e-12);
    EXPECT_NEAR(a[6].real(), c.a6, 1e-12);
    EXPECT_NEAR(a[9].real(), c.a9, 1e-12);
    EXPECT_NEAR(a[12].real(), c.a12, 1e-12);
    double rest = 0.0;
    for (std::size_t i = 0; i < 16; ++i)
      if (i != 3 && i != 6 && i != 9 && i != 12) rest += std::norm(a[i]);
    EXPECT_LT(rest, 1e-24);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-14);
  }
}

TEST(AnsatzTest, ZeroAnglesGiveHartreeFock) {
  const auto s = simulate(build_ansatz({}));
  EXPECT_NEAR(std::abs(s.amplitudes()[0b0011]), 1.0, 1e-15);
}

TEST(NoiseTest, StreamsAreReproducibleAndIndependent) {
  auto a = make_stream(7, {1, 2});
  auto b = make_stream(7, {1, 2});
  auto c = make_stream(7, {2, 1});
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
}

TEST(NoiseTest, ErrorRatesMatchChannel) {
  Circuit c{2, {}};
  for (int k = 0; k < 10; ++k) {
    c.add(gates::h(0));
    c.add(gates::cnot(0, 1));
  }
  NoiseModel m = NoiseModel::noiseless(2);
  m.p1 = 0.05;
  m.p2 = 0.2;
  auto rng = make_stream(3, {});
  const int trials = 20000;
  std::vector<int> hits1(4, 0), hits2(16, 0);
  for (int t = 0; t < trials; ++t) {
    const auto pat = sample_error_pattern(c, m, rng);
    for (std::size_t g = 0; g < pat.size(); ++g) (g % 2 == 0 ? hits1 : hits2)[pat[g]]++;
  }
  const double n1 = trials * 10.0, n2 = trials * 10.0;
  EXPECT_NEAR(1.0 - hits1[0] / n1, 0.05, 4 * std::sqrt(0.05 * 0.95 / n1));
  EXPECT_NEAR(1.0 - hits2[0] / n2, 0.2, 4 * std::sqrt(0.2 * 0.8 / n2));
  EXPECT_EQ(hits2[0] + std::accumulate(hits2.begin() + 1, hits2.end(), 0), static_cast<int>(n2));
  // Uniform over the 15 non-identity two-qubit Paulis.
  for (int k = 1; k < 16; ++k) EXPECT_NEAR(hits2[k] / n2, 0.2 / 15, 0.004);
}

TEST(NoiseTest, NoiselessSamplingIsDeterministicForBasisStates) {
  Circuit c{3, {gates::x(0), gates::x(2)}};
  auto rng = make_stream(1, {});
  const auto counts = sample_counts(c, NoiseModel::noiseless(3), 500, rng);
  EXPECT_EQ(counts[0b101], 500);
}

TEST(NoiseTest, ReadoutConfusionRates) {
  Circuit c{1, {gates::x(0)}};
  NoiseModel m = NoiseModel::noiseless(1);
  m.readout[0] << 0.9, 0.3, 0.1, 0.7;  // P(0|1) = 0.3
  auto rng = make_stream(9, {});
  const auto counts = sample_counts(c, m, 100000, rng);
  EXPECT_NEAR(counts[0] / 1e5, 0.3, 0.006);
}

TEST(NoiseTest, ValidationAndJson) {
  NoiseModel m = NoiseModel::defaults(4);
  EXPECT_NO_THROW(m.validate(4));
  EXPECT_THROW(m.validate(3), ValidationError);
  nlohmann::json j = m;
  const auto back = j.get<NoiseModel>();
  EXPECT_DOUBLE_EQ(back.p2, m.p2);
  EXPECT_LT((back.readout[3] - m.readout[3]).norm(), 1e-15);
  m.p1 = 1.5;
  EXPECT_THROW(m.validate(4), ValidationError);
}

TEST(MeasureTest, QubitwiseGroupingCoversEveryObservable) {
  std::vector<PauliString> obs;
  for (const char* l : {"ZZII", "IZZI", "XXII", "YYII", "XIXI", "IIZZ", "XZXZ"})
    obs.push_back(PauliString::from_label(l));
  const auto bases = group_qubitwise(obs);
  EXPECT_LT(bases.size(), obs.size());
  for (const auto& o : obs) {
    bool covered = false;
    for (const auto& b : bases) {
      CircuitShots cs{b, {}, 0, 0};
      covered |= cs.covers(o);
    }
    EXPECT_TRUE(covered) << o.label();
  }
}

TEST(MeasureTest, BasisChangeReproducesExpectations) {
  const auto circ = build_ansatz({0.4, 0.3, -0.2});
  const auto state = simulate(circ);
  const auto obs = std::vector<PauliString>{PauliString::from_label("XXYY"), PauliString::from_label("ZIZI"),
                                            PauliString::from_label("YZYI")};
  const auto table = measure_pauli_sets(circ, obs, 200000, NoiseModel::noiseless(4), 11);
  for (const auto& o : obs) {
    const auto k = table.find_cover(o);
    ASSERT_TRUE(k.has_value());
    const double exact = state.expectation(o).real();
    EXPECT_NEAR(table.circuits[*k].expectation(o), exact, 5.0 / std::sqrt(200000.0)) << o.label();
  }
}

TEST(MeasureTest, SamplingIsSeedDeterministic) {
  const auto circ = build_ansatz({0.4, 0.3, -0.2});
  const std::vector<std::string> bases{"ZZZZ", "XXYY"};
  const auto m = NoiseModel::defaults(4);
  const auto a = measure_bases(circ, bases, 1000, m, 5);
  const auto b = measure_bases(circ, bases, 1000, m, 5);
  const auto c = measure_bases(circ, bases, 1000, m, 6);
  EXPECT_EQ(a.circuits[1].counts, b.circuits[1].counts);
  EXPECT_NE(a.circuits[1].counts, c.circuits[1].counts);
}

TEST(MeasureTest, ReadoutMitigationRemovesConfusionBias) {
  const auto circ = build_ansatz({0.4, 0.3, -0.2});
  const auto state = simulate(circ);
  NoiseModel m = NoiseModel::noiseless(4);
  for (auto& r : m.readout) r = NoiseModel::symmetric_flip(0.05);
  const auto z = PauliString::from_label("ZIIZ");
  const auto raw = measure_pauli_sets(circ, {z}, 400000, m, 2);
  const auto fixed = mitigate_readout(raw, m);
  const double exact = state.expectation(z).real();
  const double biased = raw.circuits[0].expectation(z);
  EXPECT_GT(std::abs(biased - exact), 0.05);  // attenuated by (1 - 2*0.05)^2
  EXPECT_NEAR(fixed.circuits[0].expectation(z), exact, 0.01);
  EXPECT_NEAR(std::accumulate(fixed.circuits[0].counts.begin(), fixed.circuits[0].counts.end(), 0.0),
              400000.0, 1e-6);
}

TEST(MeasureTest, ShotTableJsonRoundTrip) {
  const auto t = measure_bases(build_ansatz({0.1, 0.2, 0.3}), {"ZZZZ", "XZXZ"}, 300, NoiseModel::noiseless(4), 4);
  nlohmann::json j = t;
  const auto back = j.get<ShotTable>();
  ASSERT_EQ(back.circuits.size(), 2u);
  EXPECT_EQ(back.circuits[1].basis, "XZXZ");
  EXPECT_EQ(back.circuits[1].counts, t.circuits[1].counts);
  EXPECT_EQ(back.circuits[1].shots, 300);
}

}  // namespace
}  // namespace rdmpt::qsim
