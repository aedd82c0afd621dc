// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdmpt/tensor.hpp"

namespace rdmpt {

enum class Provenance { kRaw, kSymmetrized, kPurified, kExact };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct RdmMeta {
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  Provenance provenance = Provenance::kRaw;
  /// Largest |Im rho| seen during assembly, when imaginary parts were measured.
  double max_imag = 0.0;
  std::vector<std::string> warnings;
};

/// One- and two-body reduced density matrices over n spin orbitals.
///
/// rho1(p,q) = <a+_p a_q>, rho2(p,q,r,s) = <a+_p a+_q a_s a_r>, so that
/// sum_p rho1(p,p) = N and sum_pq rho2(p,q,p,q) = N(N-1).
struct RdmPair {
  int n_electrons = 0;
  Eigen::MatrixXd rho1;
  Tensor4 rho2;
  RdmMeta meta;

  RdmPair() = default;
  RdmPair(int n_orbitals, int n_electrons);

  int n_orbitals() const noexcept { return static_cast<int>(rho1.rows()); }
  double trace1() const;
  double trace2() const;
};

/// Largest deviation from each RdmPair invariant.
struct RdmDiagnostics {
  double hermiticity1 = 0.0;
  double hermiticity2 = 0.0;
  double antisymmetry = 0.0;
  double trace1_error = 0.0;
  double trace2_error = 0.0;

  double worst() const;
};

RdmDiagnostics diagnose(const RdmPair& rdm);

/// RDMs of the single determinant with the given occupied spin orbitals.
RdmPair determinant_rdm(int n_orbitals, const std::vector<int>& occupied);

}  // namespace rdmpt
