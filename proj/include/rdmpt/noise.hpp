// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "rdmpt/statevector.hpp"

namespace rdmpt::qsim {

/// Depolarizing gate noise plus per-qubit readout confusion.
///
/// readout[q](measured, true) = P(measured | true); columns sum to one.
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  std::vector<Eigen::Matrix2d> readout;

  static NoiseModel noiseless(int n_qubits);
  /// Configuration defaults: p1 = 1e-3, p2 = 1e-2, symmetric readout flip 0.02.
  static NoiseModel defaults(int n_qubits);
  static Eigen::Matrix2d symmetric_flip(double eps);

  bool has_readout_error() const;
  void validate(int n_qubits) const;
};

void to_json(nlohmann::json& j, const NoiseModel& m);
void from_json(const nlohmann::json& j, NoiseModel& m);
NoiseModel load_noise_model(const std::filesystem::path& path, int n_qubits);

/// Seeded stream for (seed, a, b, ...) so independent tasks get independent,
/// reproducible generators regardless of scheduling.
std::mt19937_64 make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Samples measurement outcomes of a circuit under stochastic Pauli
/// trajectories: after every gate a uniformly random non-identity Pauli on the
/// gate's qubits is inserted with probability p1 (one-qubit) or p2 (two-qubit).
/// Each shot is one trajectory. Readout confusion is applied per qubit.
/// Returns counts indexed by outcome bitmask (qubit k = bit k).
std::vector<std::int64_t> sample_counts(const Circuit& circuit, const NoiseModel& model,
                                        std::int64_t shots, std::mt19937_64& rng);

/// Records which Pauli (if any) each gate received in one trajectory; exposed
/// so the channel can be tested directly. Entry k is 0 for no error, else the
/// index 1..3 (one-qubit) or 1..15 (two-qubit) of the inserted Pauli, where a
/// two-qubit index encodes op(q0) + 4*op(q1) with I=0 X=1 Y=2 Z=3.
std::vector<int> sample_error_pattern(const Circuit& circuit, const NoiseModel& model,
                                      std::mt19937_64& rng);

/// Statevector of one trajectory with a given error pattern.
StateVector run_trajectory(const Circuit& circuit, const std::vector<int>& pattern);

}  // namespace rdmpt::qsim
