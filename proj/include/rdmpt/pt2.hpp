// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "rdmpt/hamio.hpp"
#include "rdmpt/rdm_pair.hpp"

namespace rdmpt::pt2 {

using hamio::ActiveSpaceSpec;
using hamio::IntegralTable;
using hamio::ReferenceDeterminant;

/// Three-body RDM element from the cumulant-free factorization
/// rho_pqrstu ~ 1/3 (1 - P_pr - P_qr)(1 - P_su - P_tu) rho_pqst rho_ru.
double reducible_3rdm(const RdmPair& rdm, int p, int q, int r, int s, int t, int u);

/// Transformed one-body element <[H, a+_i a_a]> from the 1- and 2-RDM.
double fbar(const RdmPair& rdm, const IntegralTable& h, const ReferenceDeterminant& ref, int i,
            int a);

/// Transformed two-body element <[H, a+_i a+_j a_b a_a]>, with the three-body
/// terms evaluated through reducible_3rdm (and dropped for N < 3, where they vanish).
double gammabar(const RdmPair& rdm, const IntegralTable& h, const ReferenceDeterminant& ref, int i,
                int j, int a, int b);

/// Orbital energies dressed by the off-diagonal RDM blocks. Entry p holds the
/// hole energy for occupied p and the particle energy for virtual p.
std::vector<double> transformed_energies(const RdmPair& rdm, const IntegralTable& h,
                                         const ReferenceDeterminant& ref);

/// Canonical Fock diagonal f_pp = h_pp + sum_j <pj||pj> over occupied j.
std::vector<double> fock_diagonal(const IntegralTable& h, const ReferenceDeterminant& ref);

enum class Pt2Mode {
  kFrozen,  // excitations restricted to space.active
  kFull,    // excitations over every orbital
};

struct Pt2Options {
  double denominator_guard = 1e-8;
  unsigned threads = 0;  // 0: hardware concurrency
  bool check_provenance = true;
};

struct Pt2Result {
  double energy = 0.0;  // singles + doubles
  double singles = 0.0;
  double doubles = 0.0;
  double max_fbar = 0.0;
  double max_gammabar = 0.0;
  std::vector<std::string> warnings;
};

/// Second-order correction
///   sum_ia |fbar_ia|^2 / (e_i - e_a) + 1/4 sum_ijab |Gbar_ijab|^2 / (e_i + e_j - e_a - e_b)
/// with the orbital energies of transformed_energies. The RDM must be purified
/// (or exact). Throws DegenerateDenominatorError below the guard.
Pt2Result rdm_pt2(const RdmPair& rdm, const IntegralTable& h, const ReferenceDeterminant& ref,
                  const ActiveSpaceSpec& space, Pt2Mode mode, const Pt2Options& options = {});

/// Full-space RDM: frozen-occupied orbitals filled, frozen virtuals empty, the
/// active block taken from active_rdm (whose orbitals follow spec.active order).
RdmPair embed_active_rdm(const RdmPair& active_rdm, const ActiveSpaceSpec& spec);

/// Moller-Plesset second-order correlation energy for the reference
/// determinant, including the singles term (zero for canonical HF orbitals).
double hf_mp2(const IntegralTable& h, const ReferenceDeterminant& ref, const Pt2Options& options = {});

}  // namespace rdmpt::pt2
