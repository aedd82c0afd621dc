// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rdmpt/rdm_pair.hpp"

namespace rdmpt::purify {

/// rho2 reshaped over ordered pairs p<q: M[(pq),(rs)] = rho2(p,q,r,s).
struct PairBasisMatrix {
  int n_orbitals = 0;
  Eigen::MatrixXd matrix;

  /// Row/column of pair (p,q), p<q.
  int index(int p, int q) const;
  std::pair<int, int> pair(int k) const;
};

/// Throws ValidationError if rho2 violates antisymmetry by more than 1e-6.
PairBasisMatrix to_pair_basis(const RdmPair& rdm);
PairBasisMatrix to_pair_basis(const Tensor4& rho2);

/// Inverse reshape, filling all four antisymmetric images of each element.
Tensor4 from_pair_basis(const PairBasisMatrix& m);

struct McWeeneyOptions {
  double tol = 1e-10;
  int max_iter = 100;
  double scale = 1.0;  // the converged projector is multiplied by this
};

struct McWeeneyResult {
  PairBasisMatrix matrix;
  int iterations = 0;
  double residual = 0.0;  // ||P^2 - P||_F of the unscaled projector
  std::vector<std::string> warnings;
};

/// Iterates P <- 3P^2 - 2P^3 until ||P^2 - P||_F < tol. Throws
/// ConvergenceError carrying the last residual after max_iter iterations.
McWeeneyResult mcweeney(const PairBasisMatrix& m, const McWeeneyOptions& options = {});

/// Purifies a symmetrized two-electron RDM. rho1 is rebuilt from the purified
/// rho2 by partial trace.
RdmPair purify_rdm(const RdmPair& rdm, const McWeeneyOptions& options = {});

/// rho1(p,q) = sum_r rho2(p,r,q,r) / (N - 1).
Eigen::MatrixXd contract_rho1(const Tensor4& rho2, int n_electrons);

}  // namespace rdmpt::purify
