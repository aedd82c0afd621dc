// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rdmpt/hamio.hpp"
#include "rdmpt/rdm_pair.hpp"

namespace rdmpt::exact {

/// Determinants over n spin orbitals (bit p = spin orbital p occupied) with
/// fixed electron count and 2*Sz, in increasing integer order.
struct SectorBasis {
  int n_orbitals = 0;
  int n_electrons = 0;
  int ms2 = 0;
  std::vector<std::uint64_t> states;

  SectorBasis() = default;
  SectorBasis(int n_orbitals, int n_electrons, int ms2);

  std::size_t size() const noexcept { return states.size(); }
  std::optional<std::size_t> index(std::uint64_t state) const;
  bool in_sector(std::uint64_t state) const;

  /// Sector dimension without enumerating it.
  static double dimension(int n_orbitals, int n_electrons, int ms2);
};

inline constexpr double kMaxSectorDimension = 1e6;
inline constexpr std::size_t kDenseThreshold = 2000;

struct FciOptions {
  double residual_tol = 1e-7;
  int max_iter = 500;
  int max_subspace = 40;
  unsigned threads = 0;
};

struct FciResult {
  double energy = 0.0;  // includes e_nuclear
  Eigen::VectorXd amplitudes;
  SectorBasis basis;
  int iterations = 0;  // 0 for dense diagonalization
};

/// Lowest eigenpair of H in the (N, ms2) sector. Dense below kDenseThreshold,
/// Davidson above. Throws ValidationError above kMaxSectorDimension.
FciResult fci_ground_state(const hamio::IntegralTable& h, int n_electrons, int ms2,
                           const FciOptions& options = {});

/// Dense sector Hamiltonian (without e_nuclear); intended for small sectors.
Eigen::MatrixXd sector_hamiltonian(const hamio::IntegralTable& h, const SectorBasis& basis);

/// sigma = H c in the sector basis (without e_nuclear).
Eigen::VectorXd apply_hamiltonian(const hamio::IntegralTable& h, const SectorBasis& basis,
                                  const Eigen::VectorXd& c, unsigned threads = 0);

/// Exact RDMs of a normalized state; provenance = exact.
RdmPair rdms_from_amplitudes(const Eigen::VectorXd& amplitudes, const SectorBasis& basis);

/// Sign of applying a+_p (create) or a_p (annihilate) to a determinant, and the
/// resulting determinant; nullopt if the result vanishes.
std::optional<std::pair<std::uint64_t, int>> apply_ladder(std::uint64_t state, int p, bool create);

}  // namespace rdmpt::exact
