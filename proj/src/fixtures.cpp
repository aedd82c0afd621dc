// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rdmpt/errors.hpp"

#ifndef RDMPT_DEFAULT_DATA_DIR
#define RDMPT_DEFAULT_DATA_DIR "data"
#endif

namespace rdmpt::hamio {

FixtureManifest FixtureManifest::load(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw FixtureNotFoundError("cannot open fixture manifest " + manifest_path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(manifest_path.string(), 0, e.what());
  }
  FixtureManifest m;
  m.dir_ = manifest_path.parent_path();
  for (const auto& e : j.at("fixtures")) {
    FixtureEntry f;
    f.fixture = e.at("fixture").get<std::string>();
    f.file = e.at("file").get<std::string>();
    f.molecule = e.value("molecule", "");
    f.geometry = e.at("geometry_angstrom").get<double>();
    f.basis = e.value("basis", "");
    f.package = e.value("package", "");
    f.n_spatial = e.value("n_spatial", 0);
    f.n_electrons = e.value("n_electrons", 0);
    f.frozen_occupied_spatial = e.at("frozen_occupied_spatial").get<std::vector<int>>();
    f.active_spatial = e.at("active_spatial").get<std::vector<int>>();
    f.frozen_virtual_spatial = e.at("frozen_virtual_spatial").get<std::vector<int>>();
    f.e_hf = e.value("e_hf", 0.0);
    f.e_mp2_corr_full = e.value("e_mp2_corr_full", 0.0);
    f.e_exact_frozen = e.at("e_exact_frozen").get<double>();
    f.e_exact_full = e.at("e_exact_full").get<double>();
    f.e_exact_full_method = e.value("e_exact_full_method", "");
    m.entries_.push_back(std::move(f));
  }
  return m;
}

const FixtureEntry& FixtureManifest::find(const std::string& fixture, double geometry) const {
  for (const auto& e : entries_)
    if (e.fixture == fixture && std::abs(e.geometry - geometry) < 1e-9) return e;
  std::ostringstream msg;
  msg << "fixture '" << fixture << "' at r=" << geometry << " A not found in manifest";
  throw FixtureNotFoundError(msg.str());
}

std::vector<const FixtureEntry*> FixtureManifest::by_fixture(const std::string& fixture) const {
  std::vector<const FixtureEntry*> out;
  for (const auto& e : entries_)
    if (e.fixture == fixture) out.push_back(&e);
  return out;
}

IntegralTable FixtureManifest::load_table(const FixtureEntry& entry) const {
  const auto path = dir_ / entry.file;
  if (!std::filesystem::exists(path))
    throw FixtureNotFoundError("fixture file " + path.string() + " does not exist");
  return load_fcidump(path);
}

std::filesystem::path default_manifest_path() {
  if (const char* env = std::getenv("RDMPT_DATA_DIR"))
    return std::filesystem::path(env) / "fixtures" / "manifest.json";
  return std::filesystem::path(RDMPT_DEFAULT_DATA_DIR) / "fixtures" / "manifest.json";
}

}  // namespace rdmpt::hamio
