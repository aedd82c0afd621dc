// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/rdm_pair.hpp"

#include <algorithm>
#include <cmath>

#include "rdmpt/errors.hpp"

namespace rdmpt {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kRaw: return "raw";
    case Provenance::kSymmetrized: return "symmetrized";
    case Provenance::kPurified: return "purified";
    case Provenance::kExact: return "exact";
  }
  return "raw";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "raw") return Provenance::kRaw;
  if (s == "symmetrized") return Provenance::kSymmetrized;
  if (s == "purified") return Provenance::kPurified;
  if (s == "exact") return Provenance::kExact;
  throw ValidationError("unknown RDM provenance '" + s + "'");
}

RdmPair::RdmPair(int n_orbitals, int n_electrons_)
    : n_electrons(n_electrons_),
      rho1(Eigen::MatrixXd::Zero(n_orbitals, n_orbitals)),
      rho2(n_orbitals) {}

double RdmPair::trace1() const { return rho1.trace(); }

double RdmPair::trace2() const {
  double t = 0.0;
  const int n = n_orbitals();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) t += rho2(p, q, p, q);
  return t;
}

double RdmDiagnostics::worst() const {
  return std::max({hermiticity1, hermiticity2, antisymmetry, trace1_error, trace2_error});
}

RdmDiagnostics diagnose(const RdmPair& rdm) {
  RdmDiagnostics d;
  const int n = rdm.n_orbitals();
  const double N = rdm.n_electrons;
  if (n > 0) d.hermiticity1 = (rdm.rho1 - rdm.rho1.transpose()).cwiseAbs().maxCoeff();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = rdm.rho2(p, q, r, s);
          d.hermiticity2 = std::max(d.hermiticity2, std::abs(v - rdm.rho2(r, s, p, q)));
          d.antisymmetry = std::max({d.antisymmetry, std::abs(v + rdm.rho2(q, p, r, s)),
                                     std::abs(v + rdm.rho2(p, q, s, r))});
        }
  d.trace1_error = std::abs(rdm.trace1() - N);
  d.trace2_error = std::abs(rdm.trace2() - N * (N - 1.0));
  return d;
}

RdmPair determinant_rdm(int n, const std::vector<int>& occupied) {
  RdmPair rdm(n, static_cast<int>(occupied.size()));
  rdm.meta.provenance = Provenance::kExact;
  for (int i : occupied) {
    if (i < 0 || i >= n) throw ValidationError("determinant_rdm: orbital out of range");
    rdm.rho1(i, i) = 1.0;
  }
  for (int i : occupied)
    for (int j : occupied) {
      if (i == j) continue;
      rdm.rho2(i, j, i, j) = 1.0;
      rdm.rho2(i, j, j, i) = -1.0;
    }
  return rdm;
}

}  // namespace rdmpt
