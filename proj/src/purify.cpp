// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/purify.hpp"

#include <cmath>
#include <sstream>

#include "rdmpt/errors.hpp"

namespace rdmpt::purify {

int PairBasisMatrix::index(int p, int q) const {
  // Row-major enumeration of the strict upper triangle.
  const int n = n_orbitals;
  return p * n - p * (p + 1) / 2 + (q - p - 1);
}

std::pair<int, int> PairBasisMatrix::pair(int k) const {
  int p = 0;
  while (k >= n_orbitals - 1 - p) {
    k -= n_orbitals - 1 - p;
    ++p;
  }
  return {p, p + 1 + k};
}

PairBasisMatrix to_pair_basis(const Tensor4& rho2) {
  const int n = rho2.dim();
  double violation = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = rho2(p, q, r, s);
          violation = std::max({violation, std::abs(v + rho2(q, p, r, s)),
                                std::abs(v + rho2(p, q, s, r))});
        }
  if (violation > 1e-6) {
    std::ostringstream msg;
    msg << "to_pair_basis: rho2 antisymmetry violated by " << violation;
    throw ValidationError(msg.str());
  }
  PairBasisMatrix m;
  m.n_orbitals = n;
  const int dim = n * (n - 1) / 2;
  m.matrix.resize(dim, dim);
  for (int k = 0; k < dim; ++k) {
    auto [p, q] = m.pair(k);
    for (int l = 0; l < dim; ++l) {
      auto [r, s] = m.pair(l);
      m.matrix(k, l) = rho2(p, q, r, s);
    }
  }
  return m;
}

PairBasisMatrix to_pair_basis(const RdmPair& rdm) { return to_pair_basis(rdm.rho2); }

Tensor4 from_pair_basis(const PairBasisMatrix& m) {
  Tensor4 t(m.n_orbitals);
  const auto dim = m.matrix.rows();
  for (int k = 0; k < dim; ++k) {
    auto [p, q] = m.pair(k);
    for (int l = 0; l < dim; ++l) {
      auto [r, s] = m.pair(l);
      const double v = m.matrix(k, l);
      t(p, q, r, s) = v;
      t(q, p, r, s) = -v;
      t(p, q, s, r) = -v;
      t(q, p, s, r) = v;
    }
  }
  return t;
}

McWeeneyResult mcweeney(const PairBasisMatrix& m, const McWeeneyOptions& options) {
  if ((m.matrix - m.matrix.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("mcweeney: input is not hermitian");
  McWeeneyResult out;
  Eigen::MatrixXd p = 0.5 * (m.matrix + m.matrix.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  if (ev.minCoeff() <= -0.3 || ev.maxCoeff() >= 1.3) {
    std::ostringstream msg;
    msg << "mcweeney: eigenvalues [" << ev.minCoeff() << ", " << ev.maxCoeff()
        << "] outside the convergence basin (-0.3, 1.3)";
    out.warnings.push_back(msg.str());
  }

  Eigen::MatrixXd p2 = p * p;
  double residual = (p2 - p).norm();
  int it = 0;
  while (residual >= options.tol) {
    if (it == options.max_iter) throw ConvergenceError("McWeeney purification did not converge", residual, it);
    p = 3.0 * p2 - 2.0 * p2 * p;
    p = 0.5 * (p + p.transpose()).eval();
    p2 = p * p;
    residual = (p2 - p).norm();
    ++it;
  }
  out.matrix.n_orbitals = m.n_orbitals;
  out.matrix.matrix = options.scale * p;
  out.iterations = it;
  out.residual = residual;
  return out;
}

Eigen::MatrixXd contract_rho1(const Tensor4& rho2, int n_electrons) {
  if (n_electrons < 2) throw ValidationError("contract_rho1: need at least two electrons");
  const int n = rho2.dim();
  Eigen::MatrixXd rho1 = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double s = 0.0;
      for (int r = 0; r < n; ++r) s += rho2(p, r, q, r);
      rho1(p, q) = s / (n_electrons - 1);
    }
  return rho1;
}

RdmPair purify_rdm(const RdmPair& rdm, const McWeeneyOptions& options) {
  if (rdm.n_electrons != 2)
    throw ValidationError(
        "purify_rdm: McWeeney purification applies to two-electron active spaces only; "
        "semidefinite N-representability purification is out of scope");
  if (rdm.meta.provenance == Provenance::kRaw)
    throw ValidationError("purify_rdm: input must be symmetrized first");

  const double scale = rdm.n_electrons * (rdm.n_electrons - 1) / 2.0;
  PairBasisMatrix m = to_pair_basis(rdm);
  const double trace = m.matrix.trace();
  if (!(std::abs(trace) > 1e-12)) throw ValidationError("purify_rdm: pair-basis trace is zero");
  m.matrix /= trace;

  McWeeneyOptions opt = options;
  opt.scale = scale;
  McWeeneyResult res = mcweeney(m, opt);
  const double rank = res.matrix.matrix.trace() / scale;
  if (std::abs(rank - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "purify_rdm: purification converged to a rank-" << std::lround(rank)
        << " projector instead of a pure two-electron state";
    throw ConvergenceError(msg.str(), res.residual, res.iterations);
  }

  RdmPair out(rdm.n_orbitals(), rdm.n_electrons);
  out.rho2 = from_pair_basis(res.matrix);
  out.rho1 = contract_rho1(out.rho2, rdm.n_electrons);
  out.meta = rdm.meta;
  out.meta.provenance = Provenance::kPurified;
  for (auto& w : res.warnings) out.meta.warnings.push_back(std::move(w));
  return out;
}

}  // namespace rdmpt::purify
