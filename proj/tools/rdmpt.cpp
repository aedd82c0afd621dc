// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: single points, geometry scans and CSV reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rdmpt/vqe.hpp"

namespace fs = std::filesystem;
using namespace rdmpt;

namespace {

void print_summary(const vqe::RunRecord& r) {
  if (!r.ok()) {
    std::fprintf(stderr, "%s r=%.4f failed: %s\n", r.fixture.c_str(), r.geometry, r.error.c_str());
    return;
  }
  const auto& m = r.last5_mean;
  const auto& e = r.combined_error;
  std::printf("%s r=%.4f  evals=%d  pure=%.8f(%.1e)  pt2_frozen=%.8f  pt2_full=%.8f(%.1e)\n", r.fixture.c_str(),
              r.geometry, r.objective_calls, m.pure, e.pure, m.pt2_frozen, m.pt2_full, e.pt2_full);
  std::printf("  fci_frozen=%.8f  fci_full=%.8f  err_pure=%+.2e  err_pt2=%+.2e\n", r.references.e_fci_frozen,
              r.references.e_fci_full, m.pure - r.references.e_fci_frozen, m.pt2_full - r.references.e_fci_full);
}

void write_report(const std::vector<vqe::RunRecord>& records, const fs::path& csv_path,
                  const fs::path& archive_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
  vqe::write_csv(records, csv);
  std::ofstream arch(archive_path);
  if (!arch) throw std::runtime_error("cannot write " + archive_path.string());
  arch << nlohmann::json(records).dump(1) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VQE with RDM purification and second-order corrections"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "optimize one geometry and write its RunRecord");
  vqe::ScanSpec spec;
  double geometry = 0.0;
  std::string noise = "default";
  std::string manifest;
  std::string optimizer = "cobyla";
  run->add_option("--fixture", spec.fixture, "fixture id, e.g. h2")->required();
  run->add_option("--geometry", geometry, "bond length in angstrom")->required();
  run->add_option("--noise", noise, "none, default, or a noise-model JSON file")->capture_default_str();
  run->add_option("--shots", spec.shots, "shots per measurement circuit; 0 = exact expectations")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  run->add_option("--seed", spec.seed, "master seed")->capture_default_str();
  run->add_option("--out", spec.out, "output directory")->required();
  run->add_option("--bootstrap", spec.bootstrap_resamples, "resamples at the final point")->capture_default_str();
  run->add_option("--optimizer", optimizer, "cobyla or nelder_mead")->capture_default_str();
  run->add_option("--max-evals", spec.optimizer.max_evaluations, "objective evaluation budget")
      ->capture_default_str();
  run->add_option("--manifest", manifest, "fixture manifest (default: bundled)");
  run->add_option("--threads", spec.threads, "worker threads; 0 = all cores")->capture_default_str();

  // scan
  auto* scan = app.add_subcommand("scan", "run every geometry of a scan spec and write the report");
  std::string spec_path;
  scan->add_option("--spec", spec_path, "scan spec JSON")->required()->check(CLI::ExistingFile);

  // report
  auto* report = app.add_subcommand("report", "collect RunRecords into a CSV and a JSON archive");
  std::string in_dir, csv_out, archive_out;
  report->add_option("--in", in_dir, "directory of run_*.json records")->required()->check(CLI::ExistingDirectory);
  report->add_option("--csv", csv_out, "CSV path (default: <in>/report.csv)");
  report->add_option("--archive", archive_out, "archive path (default: <in>/records.json)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      spec.geometries = {geometry};
      spec.noise = vqe::resolve_noise(noise, fs::current_path());
      spec.noise_label = noise;
      spec.optimizer.kind = vqe::optimizer_from_string(optimizer);
      if (!manifest.empty()) spec.manifest = manifest;
      fs::create_directories(spec.out);
      const auto rec = vqe::run_point(spec, geometry);
      print_summary(rec);
      return 0;
    }
    if (*scan) {
      const auto s = vqe::load_scan_spec(spec_path);
      if (!s.out.empty()) fs::create_directories(s.out);
      const auto records = vqe::run_scan(s);
      bool ok = true;
      for (const auto& r : records) {
        print_summary(r);
        ok = ok && r.ok();
      }
      // run_scan has already written report.csv next to the records.
      if (!s.out.empty()) std::ofstream(s.out / "records.json") << nlohmann::json(records).dump(1) << '\n';
      return ok ? 0 : 1;
    }
    if (*report) {
      const fs::path dir(in_dir);
      const auto records = vqe::read_records(dir);
      if (records.empty()) throw std::runtime_error("no run records in " + dir.string());
      write_report(records, csv_out.empty() ? dir / "report.csv" : fs::path(csv_out),
                   archive_out.empty() ? dir / "records.json" : fs::path(archive_out));
      vqe::write_csv(records, std::cout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rdmpt: %s\n", e.what());
    return 1;
  }
  return 0;
}
