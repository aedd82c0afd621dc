// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rdmpt/fixtures.hpp"
#include "rdmpt/hamio.hpp"
#include "rdmpt/measure.hpp"
#include "rdmpt/noise.hpp"
#include "rdmpt/optimizer.hpp"
#include "rdmpt/pt2.hpp"
#include "rdmpt/rdm.hpp"

namespace rdmpt::vqe {

/// The four energies tracked for every evaluated point.
struct EnergySet {
  double raw = 0.0;
  double pure = 0.0;
  double pt2_frozen = 0.0;  // pure + active-space correction
  double pt2_full = 0.0;    // pure + all-orbital correction
};

/// Everything the measurement pipeline produces at one parameter point.
struct PointEvaluation {
  EnergySet energies;
  double delta_frozen = 0.0;
  double delta_full = 0.0;
  RdmPair purified;  // active space
  std::vector<std::string> warnings;
};

struct PipelineConfig {
  qsim::NoiseModel noise = qsim::NoiseModel::noiseless(4);
  std::int64_t shots = 0;  // 0: exact expectation values, no sampling
  bool mitigate_readout = true;
  rdm::ReflectionMode reflection = rdm::ReflectionMode::kMeasureBoth;
  pt2::Pt2Options pt2;
};

/// Measurement-to-energy pipeline for one molecule and geometry. The ansatz
/// acts on a two-electron, two-spatial-orbital active space.
class PointPipeline {
 public:
  PointPipeline(hamio::IntegralTable full, hamio::ActiveSpaceSpec space, PipelineConfig config);

  const hamio::IntegralTable& full_table() const noexcept { return full_; }
  const hamio::IntegralTable& active_table() const noexcept { return active_; }
  const hamio::ActiveSpaceSpec& space() const noexcept { return space_; }
  const hamio::ReferenceDeterminant& full_reference() const noexcept { return full_ref_; }
  const hamio::ReferenceDeterminant& active_reference() const noexcept { return active_ref_; }
  const rdm::MeasurementSchedule& schedule() const noexcept { return *schedule_; }
  const PipelineConfig& config() const noexcept { return config_; }

  /// Sampled shot tables for the ansatz at params (requires shots > 0).
  qsim::ShotTable sample(const qsim::AnsatzParameters& params, std::uint64_t seed) const;

  /// symmetrize -> purify -> energies, starting from a raw active-space RDM.
  PointEvaluation from_raw_rdm(const RdmPair& raw) const;
  PointEvaluation from_shots(const qsim::ShotTable& tables) const;
  PointEvaluation exact(const qsim::AnsatzParameters& params) const;

 private:
  hamio::IntegralTable full_;
  hamio::IntegralTable active_;
  hamio::ActiveSpaceSpec space_;
  hamio::ReferenceDeterminant full_ref_;
  hamio::ReferenceDeterminant active_ref_;
  PipelineConfig config_;
  std::shared_ptr<const rdm::MeasurementSchedule> schedule_;
};

struct IterationRecord {
  int index = 0;
  std::array<double, 3> params{};
  EnergySet energies;
  double delta_frozen = 0.0;
  double delta_full = 0.0;
  std::optional<EnergySet> bootstrap_std;  // only when per-iteration resampling is enabled
};

struct References {
  double e_hf = 0.0;
  double e_mp2 = 0.0;  // e_hf + HF-MP2 correlation over all orbitals
  double e_fci_frozen = 0.0;
  double e_fci_full = 0.0;
  std::string fci_full_method;
};

struct RunRecord {
  std::string fixture;
  double geometry = 0.0;
  std::vector<IterationRecord> iterations;  // evaluation order
  std::array<double, 3> final_params{};
  EnergySet last5_mean;
  EnergySet last5_std;
  EnergySet bootstrap_mean;
  EnergySet bootstrap_std;
  EnergySet combined_error;  // sqrt(last5_std^2 + bootstrap_std^2)
  std::size_t bootstrap_resamples = 0;
  References references;
  int objective_calls = 0;
  int pure_evaluations = 0;
  bool converged = false;
  double final_radius = 0.0;
  std::vector<std::string> warnings;
  std::string error;  // non-empty when the point failed; iterations hold the partial trace

  bool ok() const noexcept { return error.empty(); }
};

struct ScanSpec {
  std::string fixture;
  std::vector<double> geometries;
  std::filesystem::path manifest;  // empty: bundled manifest
  qsim::NoiseModel noise = qsim::NoiseModel::noiseless(4);
  std::string noise_label = "none";
  std::int64_t shots = 8192;
  std::uint64_t seed = 0;
  OptimizerSettings optimizer;
  std::array<double, 3> start{};
  std::size_t bootstrap_resamples = 1000;
  std::size_t iteration_bootstrap_resamples = 0;
  rdm::ReflectionMode reflection = rdm::ReflectionMode::kMeasureBoth;
  bool mitigate_readout = true;
  unsigned threads = 0;
  std::filesystem::path out;  // empty: nothing written

  void validate() const;
};

/// Resolves a noise setting: "none", "default", or a path to a JSON model.
qsim::NoiseModel resolve_noise(const std::string& setting, const std::filesystem::path& base_dir);

ScanSpec load_scan_spec(const std::filesystem::path& path);
void to_json(nlohmann::json& j, const ScanSpec& s);
void from_json(const nlohmann::json& j, ScanSpec& s);  // relative paths stay relative

/// Reference energies for a fixture: HF, HF-MP2, and FCI in the frozen and
/// full spaces (full-space FCI from the manifest when the sector is too large
/// for routine diagonalization).
References compute_references(const hamio::FixtureEntry& entry, const hamio::IntegralTable& full);

/// Optimizes the pure energy at one geometry and records the trace. If
/// spec.out is set the record is written there, including on failure.
RunRecord run_point(const ScanSpec& spec, double geometry);

/// One record per geometry, geometries in parallel; per-point failures are
/// recorded in the record and do not stop the scan.
std::vector<RunRecord> run_scan(const ScanSpec& spec);

/// Mean and sample standard deviation of the last (up to) five iterations.
std::pair<EnergySet, EnergySet> last_n_statistics(const std::vector<IterationRecord>& it, std::size_t n = 5);

void to_json(nlohmann::json& j, const EnergySet& e);
void from_json(const nlohmann::json& j, EnergySet& e);
void to_json(nlohmann::json& j, const RunRecord& r);
void from_json(const nlohmann::json& j, RunRecord& r);

std::filesystem::path record_filename(const std::string& fixture, double geometry);
void write_record(const RunRecord& r, const std::filesystem::path& dir);
std::vector<RunRecord> read_records(const std::filesystem::path& dir);

inline constexpr const char* kCsvHeader =
    "r,e_raw,e_pure,e_pt2_frozen,e_pt2_full,err_pure,err_pt2,e_fci_frozen,e_fci_full";

/// err_pure = e_pure - e_fci_frozen; err_pt2 = e_pt2_full - e_fci_full.
/// Energies are last-5 means. Failed points leave the energy fields empty.
void write_csv(const std::vector<RunRecord>& records, std::ostream& out);

}  // namespace rdmpt::vqe
