// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rdmpt/noise.hpp"
#include "rdmpt/pauli.hpp"
#include "rdmpt/statevector.hpp"

namespace rdmpt::qsim {

/// Outcomes of one basis-rotated measurement circuit.
///
/// basis[q] is the Pauli measured on qubit q ('X', 'Y' or 'Z'). Counts are
/// indexed by outcome bitmask; they are integral for sampled data and may be
/// fractional after readout mitigation.
struct CircuitShots {
  std::string basis;  // qubit 0 first
  std::vector<double> counts;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;

  /// True when every non-identity factor of p matches the measured basis.
  bool covers(const PauliString& p) const;
  /// Empirical <p> (coefficient ignored); requires covers(p).
  double expectation(const PauliString& p) const;
};

struct ShotTable {
  int n_qubits = 0;
  std::vector<CircuitShots> circuits;

  /// Index of the first circuit covering p, if any.
  std::optional<std::size_t> find_cover(const PauliString& p) const;
};

/// Greedy qubit-wise commuting partition, stable in input order. Each group is
/// returned as its measurement basis (qubit 0 first; unconstrained qubits 'Z').
std::vector<std::string> group_qubitwise(const std::vector<PauliString>& observables);

/// Circuit followed by the single-qubit rotations that map basis onto Z.
Circuit with_basis_change(const Circuit& circuit, const std::string& basis);

/// Samples every qubit-wise commuting group of observables with the given
/// noise. Circuit k is drawn from make_stream(seed, {k}).
ShotTable measure_pauli_sets(const Circuit& circuit, const std::vector<PauliString>& observables,
                             std::int64_t shots, const NoiseModel& model, std::uint64_t seed);

/// Same, for precomputed measurement bases.
ShotTable measure_bases(const Circuit& circuit, const std::vector<std::string>& bases,
                        std::int64_t shots, const NoiseModel& model, std::uint64_t seed);

/// Applies the inverse of the per-qubit confusion matrices to each circuit's
/// outcome distribution, clips negative quasi-probabilities and renormalizes.
ShotTable mitigate_readout(const ShotTable& table, const NoiseModel& model);

void to_json(nlohmann::json& j, const CircuitShots& c);
void from_json(const nlohmann::json& j, CircuitShots& c);
void to_json(nlohmann::json& j, const ShotTable& t);
void from_json(const nlohmann::json& j, ShotTable& t);

/// Outcome bitmask rendered qubit n-1 first.
std::string bitstring(std::uint64_t outcome, int n_qubits);

}  // namespace rdmpt::qsim
