// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "test_util.hpp"

#include <bit>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rdmpt/exact.hpp"

namespace rdmpt::testing {

RdmPair random_state_rdm(int n_orbitals, int n_electrons, std::mt19937_64& rng) {
  exact::SectorBasis basis;
  basis.n_orbitals = n_orbitals;
  basis.n_electrons = n_electrons;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n_orbitals); ++s)
    if (std::popcount(s) == n_electrons) basis.states.push_back(s);
  std::normal_distribution<double> normal;
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
  for (auto& x : c) x = normal(rng);
  c.normalize();
  return exact::rdms_from_amplitudes(c, basis);
}

}  // namespace rdmpt::testing
