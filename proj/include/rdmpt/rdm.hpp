// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rdmpt/measure.hpp"
#include "rdmpt/pauli.hpp"
#include "rdmpt/rdm_pair.hpp"

namespace rdmpt::rdm {

enum class ReflectionMode {
  kMeasureBoth,  // measure every Sz-conserving element, average reflections later
  kMeasureOne,   // measure one member of each reflection pair, copy the other
};

/// A canonical RDM element and the Pauli expansion of its hermitian part.
struct ScheduledElement {
  int rank = 1;              // 1: rho1(p,q), p <= q;  2: rho2(p,q,r,s), p<q, r<s, (p,q) <= (r,s)
  std::array<int, 4> idx{};  // unused trailing entries are -1
  qsim::PauliSum real_part;
  qsim::PauliSum imag_part;  // empty unless imaginary parts are scheduled
};

/// Which Pauli strings must be measured to assemble the Sz-conserving RDM
/// elements over n qubits (qubit k = spin orbital k), and how they group.
struct MeasurementSchedule {
  int n_qubits = 0;
  int n_electrons = 0;
  ReflectionMode mode = ReflectionMode::kMeasureBoth;
  bool measure_imaginary = false;
  std::vector<ScheduledElement> elements;
  std::vector<qsim::PauliString> paulis;  // unique, identity excluded
  std::vector<std::string> bases;         // qubit-wise commuting groups

  /// Cached per (n_qubits, n_electrons, mode, imaginary).
  static std::shared_ptr<const MeasurementSchedule> build(
      int n_qubits, int n_electrons, ReflectionMode mode = ReflectionMode::kMeasureBoth,
      bool measure_imaginary = false);
};

/// Expectation value of each scheduled Pauli string.
using PauliExpectations = std::map<qsim::PauliKey, double>;

/// Exact expectations from a statevector (infinite-shot limit).
PauliExpectations expectations_from_state(const qsim::StateVector& state,
                                          const MeasurementSchedule& schedule);

/// Empirical expectations; throws CoverageError naming every uncovered string.
PauliExpectations expectations_from_shots(const qsim::ShotTable& tables,
                                          const MeasurementSchedule& schedule);

/// Assembles a raw RdmPair. Elements that are not scheduled (Sz-changing, or
/// the unmeasured reflection partner) are zero or copied from their partner.
RdmPair rdm_from_expectations(const PauliExpectations& values, const MeasurementSchedule& schedule);

RdmPair rdm_from_shots(const qsim::ShotTable& tables, const MeasurementSchedule& schedule);

/// Zeroes every element whose operator string changes total Sz.
RdmPair enforce_sz(const RdmPair& rdm);

/// Averages each element with its alpha<->beta mirror image.
RdmPair spin_reflection_average(const RdmPair& rdm);

/// enforce_sz followed by spin_reflection_average, provenance = symmetrized.
RdmPair symmetrize(const RdmPair& rdm);

struct BootstrapEnsemble {
  std::size_t n_resamples = 0;
  std::vector<double> values;  // one per resample, in resample order
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single resample

  void summarize();
};

using ShotPipeline = std::function<double(const qsim::ShotTable&)>;

/// Multinomial resampling of every circuit's counts (same total shots), the
/// pipeline rerun on each resample. Resample k draws from
/// make_stream(seed, {k}); resamples run on `threads` workers.
BootstrapEnsemble bootstrap(const qsim::ShotTable& tables, std::size_t n, const ShotPipeline& pipeline,
                            std::uint64_t seed, unsigned threads = 0);

/// Vector-valued variant for pipelines that report several scalars at once.
struct BootstrapVector {
  std::size_t n_resamples = 0;
  std::vector<std::vector<double>> values;  // [resample][component]
  std::vector<double> mean;
  std::vector<double> std;
};
using ShotPipelineVector = std::function<std::vector<double>(const qsim::ShotTable&)>;
BootstrapVector bootstrap_vector(const qsim::ShotTable& tables, std::size_t n,
                                 const ShotPipelineVector& pipeline, std::uint64_t seed,
                                 unsigned threads = 0);

/// One multinomial resample of a table.
qsim::ShotTable resample(const qsim::ShotTable& tables, std::mt19937_64& rng);

}  // namespace rdmpt::rdm

namespace rdmpt {

void to_json(nlohmann::json& j, const RdmPair& r);
void from_json(const nlohmann::json& j, RdmPair& r);

}  // namespace rdmpt
