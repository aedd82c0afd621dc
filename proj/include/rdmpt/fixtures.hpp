// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rdmpt/hamio.hpp"

namespace rdmpt::hamio {

/// One row of the fixture manifest: an FCIDUMP file plus its provenance and
/// classical reference energies.
struct FixtureEntry {
  std::string fixture;  // e.g. "h2"
  std::string file;
  std::string molecule;
  double geometry = 0.0;  // angstrom
  std::string basis;
  std::string package;
  int n_spatial = 0;
  int n_electrons = 0;
  std::vector<int> frozen_occupied_spatial;
  std::vector<int> active_spatial;
  std::vector<int> frozen_virtual_spatial;
  double e_hf = 0.0;
  double e_mp2_corr_full = 0.0;
  double e_exact_frozen = 0.0;
  double e_exact_full = 0.0;
  std::string e_exact_full_method;

  ActiveSpaceSpec active_space() const {
    return ActiveSpaceSpec::from_spatial(frozen_occupied_spatial, active_spatial,
                                         frozen_virtual_spatial);
  }
};

class FixtureManifest {
 public:
  static FixtureManifest load(const std::filesystem::path& manifest_path);

  const std::vector<FixtureEntry>& entries() const noexcept { return entries_; }
  const std::filesystem::path& directory() const noexcept { return dir_; }

  /// Throws FixtureNotFoundError when no entry matches within 1e-9 angstrom.
  const FixtureEntry& find(const std::string& fixture, double geometry) const;
  std::vector<const FixtureEntry*> by_fixture(const std::string& fixture) const;
  IntegralTable load_table(const FixtureEntry& entry) const;

 private:
  std::filesystem::path dir_;
  std::vector<FixtureEntry> entries_;
};

/// Location of the bundled manifest: $RDMPT_DATA_DIR/fixtures/manifest.json,
/// falling back to the source tree's data directory.
std::filesystem::path default_manifest_path();

}  // namespace rdmpt::hamio
