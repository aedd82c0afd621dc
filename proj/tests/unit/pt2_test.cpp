// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rdmpt/errors.hpp"
#include "rdmpt/exact.hpp"
#include "rdmpt/pauli.hpp"
#include "rdmpt/pt2.hpp"
#include "rdmpt/statevector.hpp"
#include "test_util.hpp"

namespace rdmpt::pt2 {
namespace {

using hamio::energy_from_rdm;
using qsim::ann;
using qsim::cre;

Eigen::MatrixXcd mat(const qsim::FermionProduct& f) { return qsim::to_matrix(qsim::jw_operator(f, 4), 4); }

// Qubit Hamiltonian of a four-spin-orbital table, without the constant.
Eigen::MatrixXcd qubit_hamiltonian(const IntegralTable& t) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(16, 16);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      if (t.h(p, q) != 0.0) h += t.h(p, q) * mat({cre(p), ann(q)});
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
          if (t.g(p, q, r, s) != 0.0) h += 0.25 * t.g(p, q, r, s) * mat({cre(p), cre(q), ann(s), ann(r)});
  return h;
}

RdmPair state_rdm(const Eigen::VectorXcd& psi) {
  exact::SectorBasis basis(4, 2, 0);
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) c(k) = psi(basis.states[k]).real();
  return exact::rdms_from_amplitudes(c, basis);
}

RdmPair hf_rdm(const IntegralTable& t) {
  return determinant_rdm(t.n_spin(), ReferenceDeterminant::aufbau(t.n_spin(), t.n_electrons).occupied);
}

TEST(Mp2Test, MatchesReferencePackageOnEveryFixture) {
  for (const auto& e : testing::manifest().entries()) {
    const auto t = testing::manifest().load_table(e);
    const auto ref = ReferenceDeterminant::aufbau(t.n_spin(), t.n_electrons);
    EXPECT_NEAR(hf_mp2(t, ref), e.e_mp2_corr_full, 1e-9) << e.file;
  }
}

TEST(Mp2Test, DeterminantRdmReducesToMp2) {
  for (const auto& e : testing::manifest().entries()) {
    const auto t = testing::manifest().load_table(e);
    const auto ref = ReferenceDeterminant::aufbau(t.n_spin(), t.n_electrons);
    const auto rdm = hf_rdm(t);
    const auto full = rdm_pt2(rdm, t, ref, ActiveSpaceSpec::full(t.n_spin()), Pt2Mode::kFull);
    EXPECT_NEAR(full.energy, hf_mp2(t, ref), 1e-10) << e.file;
    EXPECT_NEAR(full.singles, 0.0, 1e-10) << e.file;
    // Frozen space on the active table: MP2 of the active Hamiltonian.
    const auto act = hamio::freeze_core(t, e.active_space());
    const auto aref = ReferenceDeterminant::aufbau(4, 2);
    const auto frozen = rdm_pt2(determinant_rdm(4, {0, 1}), act, aref, ActiveSpaceSpec::full(4), Pt2Mode::kFrozen);
    EXPECT_NEAR(frozen.energy, hf_mp2(act, aref), 1e-10) << e.file;
  }
}

TEST(Mp2Test, FrozenModeRestrictsExcitations) {
  const auto& e = testing::manifest().find("lih", 1.6);
  const auto t = testing::manifest().load_table(e);
  const auto ref = ReferenceDeterminant::aufbau(t.n_spin(), t.n_electrons);
  const auto frozen = rdm_pt2(hf_rdm(t), t, ref, e.active_space(), Pt2Mode::kFrozen);
  const auto act = hamio::freeze_core(t, e.active_space());
  EXPECT_NEAR(frozen.energy, hf_mp2(act, ReferenceDeterminant::aufbau(4, 2)), 1e-10);
  EXPECT_GT(frozen.energy, rdm_pt2(hf_rdm(t), t, ref, e.active_space(), Pt2Mode::kFull).energy);
}

TEST(ThreeRdmTest, DeterminantFactorizesExactly) {
  const auto r = determinant_rdm(8, {0, 1, 2, 5});
  EXPECT_NEAR(reducible_3rdm(r, 0, 1, 2, 0, 1, 2), 1.0, 1e-14);
  EXPECT_NEAR(reducible_3rdm(r, 0, 1, 5, 1, 0, 5), -1.0, 1e-14);
  EXPECT_NEAR(reducible_3rdm(r, 0, 1, 5, 5, 0, 1), 1.0, 1e-14);
  EXPECT_NEAR(reducible_3rdm(r, 0, 1, 3, 0, 1, 3), 0.0, 1e-14);
  EXPECT_NEAR(reducible_3rdm(r, 0, 0, 1, 0, 0, 1), 0.0, 1e-14);
}

TEST(TransformedTest, CommutatorsMatchBruteForce) {
  const auto t = hamio::freeze_core(testing::fixture_table("h2", 2.0), ActiveSpaceSpec::full(4));
  const auto ref = ReferenceDeterminant::aufbau(4, 2);
  const auto h = qubit_hamiltonian(t);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-1.5, 1.5);
  for (int k = 0; k < 5; ++k) {
    const auto psi = qsim::simulate(qsim::build_ansatz({angle(rng), angle(rng), angle(rng)})).as_vector();
    const auto rdm = state_rdm(psi);
    auto expect_comm = [&](const Eigen::MatrixXcd& a) {
      return psi.dot((h * a - a * h) * psi).real();
    };
    for (int i : ref.occupied)
      for (int a : ref.virtual_)
        EXPECT_NEAR(fbar(rdm, t, ref, i, a), expect_comm(mat({cre(i), ann(a)})), 1e-12);
    EXPECT_NEAR(gammabar(rdm, t, ref, 0, 1, 2, 3), expect_comm(mat({cre(0), cre(1), ann(3), ann(2)})), 1e-12);
  }
}

TEST(TransformedTest, AntisymmetryAndRoleChecks) {
  const auto t = testing::fixture_table("h2", 0.7);
  const auto ref = ReferenceDeterminant::aufbau(4, 2);
  const auto fci = exact::fci_ground_state(t, 2, 0);
  const auto rdm = exact::rdms_from_amplitudes(fci.amplitudes, fci.basis);
  EXPECT_EQ(gammabar(rdm, t, ref, 0, 0, 2, 3), 0.0);
  EXPECT_EQ(gammabar(rdm, t, ref, 0, 1, 2, 2), 0.0);
  EXPECT_NEAR(gammabar(rdm, t, ref, 1, 0, 2, 3), -gammabar(rdm, t, ref, 0, 1, 2, 3), 1e-15);
  EXPECT_THROW(fbar(rdm, t, ref, 2, 0), ValidationError);
  EXPECT_THROW(gammabar(rdm, t, ref, 0, 2, 1, 3), ValidationError);
}

TEST(TransformedTest, EnergiesOnDeterminantAreFockDiagonal) {
  for (const char* id : {"h2", "lih", "nah"}) {
    const auto& e = *testing::manifest().by_fixture(id).front();
    const auto t = testing::manifest().load_table(e);
    const auto ref = ReferenceDeterminant::aufbau(t.n_spin(), t.n_electrons);
    const auto eps = transformed_energies(hf_rdm(t), t, ref);
    const auto f = fock_diagonal(t, ref);
    for (int p = 0; p < t.n_spin(); ++p) EXPECT_NEAR(eps[p], f[p], 1e-12) << id << " " << p;
  }
}

TEST(TransformedTest, CorrelationLowersOccupiedEnergy) {
  const auto t = testing::fixture_table("h2", 0.7);
  const auto ref = ReferenceDeterminant::aufbau(4, 2);
  const auto fci = exact::fci_ground_state(t, 2, 0);
  const auto eps = transformed_energies(exact::rdms_from_amplitudes(fci.amplitudes, fci.basis), t, ref);
  const auto f = fock_diagonal(t, ref);
  EXPECT_LT(eps[0], f[0] - 1e-3);
  EXPECT_GT(eps[2], f[2] + 1e-3);
  EXPECT_DOUBLE_EQ(eps[0], eps[1]);
}

TEST(Pt2Test, ExactEigenstateHasNoCorrection) {
  for (double r : {0.7, 2.0, 4.0}) {
    const auto t = testing::fixture_table("h2", r);
    const auto fci = exact::fci_ground_state(t, 2, 0);
    const auto rdm = exact::rdms_from_amplitudes(fci.amplitudes, fci.basis);
    const auto res = rdm_pt2(rdm, t, ReferenceDeterminant::aufbau(4, 2), ActiveSpaceSpec::full(4), Pt2Mode::kFull);
    EXPECT_LT(std::abs(res.energy), 1e-12) << r;
    EXPECT_LT(res.max_fbar, 1e-6);
    EXPECT_LT(res.max_gammabar, 1e-6);
  }
}

TEST(Pt2Test, GuardAndProvenance) {
  const auto t = testing::fixture_table("h2", 0.7);
  const auto ref = ReferenceDeterminant::aufbau(4, 2);
  auto rdm = determinant_rdm(4, {0, 1});
  Pt2Options o;
  o.denominator_guard = 10.0;
  EXPECT_THROW(rdm_pt2(rdm, t, ref, ActiveSpaceSpec::full(4), Pt2Mode::kFull, o), DegenerateDenominatorError);
  for (auto p : {Provenance::kRaw, Provenance::kSymmetrized}) {
    rdm.meta.provenance = p;
    EXPECT_THROW(rdm_pt2(rdm, t, ref, ActiveSpaceSpec::full(4), Pt2Mode::kFull), ValidationError);
  }
  rdm.meta.provenance = Provenance::kPurified;
  EXPECT_NO_THROW(rdm_pt2(rdm, t, ref, ActiveSpaceSpec::full(4), Pt2Mode::kFull));
}

TEST(Pt2Test, ThreadCountDoesNotChangeResult) {
  const auto t = testing::fixture_table("kh", 2.3);
  const auto ref = ReferenceDeterminant::aufbau(t.n_spin(), t.n_electrons);
  Pt2Options one, many;
  one.threads = 1;
  many.threads = 4;
  EXPECT_EQ(hf_mp2(t, ref, one), hf_mp2(t, ref, many));
}

TEST(EmbedTest, EmbeddedEnergyMatchesActiveEnergy) {
  for (const char* id : {"lih", "nah", "kh"}) {
    const auto& e = *testing::manifest().by_fixture(id).front();
    const auto t = testing::manifest().load_table(e);
    const auto act = hamio::freeze_core(t, e.active_space());
    const auto fci = exact::fci_ground_state(act, 2, 0);
    const auto rdm = exact::rdms_from_amplitudes(fci.amplitudes, fci.basis);
    const auto full = embed_active_rdm(rdm, e.active_space());
    EXPECT_NEAR(energy_from_rdm(t, full), energy_from_rdm(act, rdm), 1e-9) << id;
    EXPECT_NEAR(energy_from_rdm(act, rdm), e.e_exact_frozen, 1e-9) << id;
    EXPECT_LT(diagnose(full).worst(), 1e-10) << id;
    EXPECT_EQ(full.n_electrons, t.n_electrons);
  }
}

}  // namespace
}  // namespace rdmpt::pt2
