// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdmpt/rdm_pair.hpp"
#include "rdmpt/tensor.hpp"

namespace rdmpt::hamio {

/// Molecular integrals over spin orbitals (index 2*spatial + spin).
///
/// h(p,q) is the one-body matrix and g(p,q,r,s) = <pq||rs> the antisymmetrized
/// two-electron integrals. The table is treated as immutable once built.
struct IntegralTable {
  int n_spatial = 0;
  int n_electrons = 0;
  int ms2 = 0;
  double e_nuclear = 0.0;
  Eigen::MatrixXd h;
  Tensor4 g;

  IntegralTable() = default;
  IntegralTable(int n_spatial, int n_electrons);

  int n_spin() const noexcept { return 2 * n_spatial; }
};

/// Largest violations of the IntegralTable invariants.
struct TableDiagnostics {
  double hermiticity = 0.0;
  double antisymmetry = 0.0;
  double spin_selection = 0.0;
};

TableDiagnostics diagnose(const IntegralTable& t);

struct ReferenceDeterminant {
  std::vector<int> occupied;
  std::vector<int> virtual_;

  /// Lowest n_electrons spin orbitals occupied.
  static ReferenceDeterminant aufbau(int n_spin, int n_electrons);
  static ReferenceDeterminant from_occupied(int n_spin, std::vector<int> occupied);

  bool is_occupied(int p) const;
  void validate(const IntegralTable& t) const;
};

struct NormalOrderedHamiltonian {
  double e0 = 0.0;
  Eigen::MatrixXd f;
  Tensor4 gamma;
};

/// Partition of the spin orbitals into frozen-occupied, active and frozen-virtual.
struct ActiveSpaceSpec {
  std::vector<int> frozen_occupied;
  std::vector<int> active;
  std::vector<int> frozen_virtual;

  static ActiveSpaceSpec from_spatial(const std::vector<int>& frozen_occupied,
                                      const std::vector<int>& active,
                                      const std::vector<int>& frozen_virtual);
  /// Everything active.
  static ActiveSpaceSpec full(int n_spin);

  int n_spin() const noexcept;
  void validate(int n_spin) const;
};

IntegralTable load_fcidump(const std::filesystem::path& path);
IntegralTable parse_fcidump(std::istream& in, const std::string& source_name = "<stream>");
void write_fcidump(const IntegralTable& t, const std::filesystem::path& path);
void write_fcidump(const IntegralTable& t, std::ostream& out);

NormalOrderedHamiltonian normal_order(const IntegralTable& t, const ReferenceDeterminant& ref);

/// Folds the frozen-occupied orbitals into the constant and one-body terms and
/// restricts to the active orbitals, renumbered 0..n_active-1 in spec order.
IntegralTable freeze_core(const IntegralTable& t, const ActiveSpaceSpec& spec);

/// E = H0 + sum h_pq rho_pq + 1/4 sum g_pqrs rho_pqrs.
double energy_from_rdm(const IntegralTable& t, const RdmPair& rdm);

}  // namespace rdmpt::hamio
