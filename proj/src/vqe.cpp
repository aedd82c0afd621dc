// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/vqe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rdmpt/errors.hpp"
#include "rdmpt/exact.hpp"
#include "rdmpt/purify.hpp"

namespace rdmpt::vqe {

using hamio::ActiveSpaceSpec;
using hamio::IntegralTable;
using hamio::ReferenceDeterminant;
using nlohmann::json;

// ---------------------------------------------------------------------------
// PointPipeline

PointPipeline::PointPipeline(IntegralTable full, ActiveSpaceSpec space, PipelineConfig config)
    : full_(std::move(full)), space_(std::move(space)), config_(std::move(config)) {
  space_.validate(full_.n_spin());
  const int n_core = static_cast<int>(space_.frozen_occupied.size());
  if (space_.active.size() != 4 || full_.n_electrons - n_core != 2)
    throw ValidationError("the ansatz needs an active space of 2 electrons in 2 spatial orbitals");
  if (full_.ms2 != 0) throw ValidationError("the ansatz prepares singlet states only");
  config_.noise.validate(4);
  if (config_.shots < 0) throw ValidationError("shots must be non-negative");

  active_ = hamio::freeze_core(full_, space_);
  active_ref_ = ReferenceDeterminant::aufbau(4, 2);
  std::vector<int> occ = space_.frozen_occupied;
  occ.push_back(space_.active[0]);
  occ.push_back(space_.active[1]);
  full_ref_ = ReferenceDeterminant::from_occupied(full_.n_spin(), occ);
  full_ref_.validate(full_);
  schedule_ = rdm::MeasurementSchedule::build(4, 2, config_.reflection);
}

qsim::ShotTable PointPipeline::sample(const qsim::AnsatzParameters& params, std::uint64_t seed) const {
  if (config_.shots <= 0) throw ValidationError("sample: shot count must be positive");
  const auto circuit = qsim::build_ansatz(params);
  auto tables = qsim::measure_bases(circuit, schedule_->bases, config_.shots, config_.noise, seed);
  if (config_.mitigate_readout && config_.noise.has_readout_error())
    tables = qsim::mitigate_readout(tables, config_.noise);
  return tables;
}

PointEvaluation PointPipeline::from_raw_rdm(const RdmPair& raw) const {
  PointEvaluation ev;
  ev.energies.raw = hamio::energy_from_rdm(active_, raw);
  ev.purified = purify::purify_rdm(rdm::symmetrize(raw));
  ev.energies.pure = hamio::energy_from_rdm(active_, ev.purified);

  const auto frozen = pt2::rdm_pt2(ev.purified, active_, active_ref_, ActiveSpaceSpec::full(4),
                                   pt2::Pt2Mode::kFull, config_.pt2);
  const auto embedded = pt2::embed_active_rdm(ev.purified, space_);
  const auto full = pt2::rdm_pt2(embedded, full_, full_ref_, space_, pt2::Pt2Mode::kFull, config_.pt2);
  ev.delta_frozen = frozen.energy;
  ev.delta_full = full.energy;
  ev.energies.pt2_frozen = ev.energies.pure + frozen.energy;
  ev.energies.pt2_full = ev.energies.pure + full.energy;
  ev.warnings = ev.purified.meta.warnings;
  for (const auto& w : frozen.warnings) ev.warnings.push_back("active space: " + w);
  for (const auto& w : full.warnings) ev.warnings.push_back("full space: " + w);
  return ev;
}

PointEvaluation PointPipeline::from_shots(const qsim::ShotTable& tables) const {
  return from_raw_rdm(rdm::rdm_from_shots(tables, *schedule_));
}

PointEvaluation PointPipeline::exact(const qsim::AnsatzParameters& params) const {
  const auto state = qsim::simulate(qsim::build_ansatz(params));
  return from_raw_rdm(rdm::rdm_from_expectations(rdm::expectations_from_state(state, *schedule_), *schedule_));
}

// ---------------------------------------------------------------------------
// Statistics

namespace {

EnergySet apply(const EnergySet& a, const EnergySet& b, double (*f)(double, double)) {
  return {f(a.raw, b.raw), f(a.pure, b.pure), f(a.pt2_frozen, b.pt2_frozen), f(a.pt2_full, b.pt2_full)};
}

std::vector<double> as_vector(const EnergySet& e) { return {e.raw, e.pure, e.pt2_frozen, e.pt2_full}; }
EnergySet from_vector(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2), v.at(3)}; }

std::uint64_t geometry_key(double r) { return std::bit_cast<std::uint64_t>(r); }

constexpr std::uint64_t kBootstrapTag = 0xB0075u;

}  // namespace

std::pair<EnergySet, EnergySet> last_n_statistics(const std::vector<IterationRecord>& it, std::size_t n) {
  const std::size_t k = std::min(n, it.size());
  EnergySet mean, stdev;
  if (k == 0) return {mean, stdev};
  std::vector<std::vector<double>> cols(4);
  for (std::size_t t = it.size() - k; t < it.size(); ++t) {
    const auto v = as_vector(it[t].energies);
    for (int c = 0; c < 4; ++c) cols[c].push_back(v[c]);
  }
  std::vector<double> m(4), s(4);
  for (int c = 0; c < 4; ++c) {
    rdm::BootstrapEnsemble e;
    e.values = cols[c];
    e.summarize();
    m[c] = e.mean;
    s[c] = e.std;
  }
  return {from_vector(m), from_vector(s)};
}

// ---------------------------------------------------------------------------
// ScanSpec

void ScanSpec::validate() const {
  if (fixture.empty()) throw ValidationError("scan spec: fixture is required");
  if (geometries.empty()) throw ValidationError("scan spec: geometry list is empty");
  if (shots < 0) throw ValidationError("scan spec: shots must be non-negative");
  noise.validate(4);
}

qsim::NoiseModel resolve_noise(const std::string& setting, const std::filesystem::path& base_dir) {
  if (setting.empty() || setting == "none") return qsim::NoiseModel::noiseless(4);
  if (setting == "default") return qsim::NoiseModel::defaults(4);
  std::filesystem::path p(setting);
  if (p.is_relative()) p = base_dir / p;
  return qsim::load_noise_model(p, 4);
}

void to_json(json& j, const ScanSpec& s) {
  j = json{{"fixture", s.fixture},
           {"geometries", s.geometries},
           {"noise", s.noise},
           {"noise_label", s.noise_label},
           {"shots", s.shots},
           {"seed", s.seed},
           {"optimizer",
            {{"method", to_string(s.optimizer.kind)},
             {"rhobeg", s.optimizer.rhobeg},
             {"rhoend", s.optimizer.rhoend},
             {"max_evaluations", s.optimizer.max_evaluations}}},
           {"start", s.start},
           {"bootstrap",
            {{"resamples", s.bootstrap_resamples}, {"per_iteration", s.iteration_bootstrap_resamples}}},
           {"reflection", s.reflection == rdm::ReflectionMode::kMeasureOne ? "one" : "both"},
           {"mitigate_readout", s.mitigate_readout},
           {"threads", s.threads}};
  if (!s.manifest.empty()) j["manifest"] = s.manifest.string();
  if (!s.out.empty()) j["out"] = s.out.string();
}

namespace {

void parse_spec(const json& j, ScanSpec& s, const std::filesystem::path& base) {
  s = ScanSpec{};
  s.fixture = j.at("fixture").get<std::string>();
  if (j.contains("geometries"))
    s.geometries = j.at("geometries").get<std::vector<double>>();
  else if (j.contains("geometry"))
    s.geometries = {j.at("geometry").get<double>()};
  if (j.contains("manifest")) {
    s.manifest = j.at("manifest").get<std::string>();
    if (s.manifest.is_relative() && !base.empty()) s.manifest = base / s.manifest;
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    if (n.is_null()) {
      s.noise_label = "none";
    } else if (n.is_string()) {
      s.noise_label = n.get<std::string>();
      s.noise = resolve_noise(s.noise_label, base);
    } else {
      s.noise = n.get<qsim::NoiseModel>();
      s.noise_label = j.value("noise_label", std::string("inline"));
    }
  }
  s.shots = j.value("shots", s.shots);
  s.seed = j.value("seed", s.seed);
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    s.optimizer.kind = optimizer_from_string(o.value("method", std::string("cobyla")));
    s.optimizer.rhobeg = o.value("rhobeg", s.optimizer.rhobeg);
    s.optimizer.rhoend = o.value("rhoend", s.optimizer.rhoend);
    s.optimizer.max_evaluations = o.value("max_evaluations", s.optimizer.max_evaluations);
  }
  if (j.contains("start")) s.start = j.at("start").get<std::array<double, 3>>();
  if (j.contains("bootstrap")) {
    const auto& b = j.at("bootstrap");
    s.bootstrap_resamples = b.value("resamples", s.bootstrap_resamples);
    s.iteration_bootstrap_resamples = b.value("per_iteration", s.iteration_bootstrap_resamples);
  }
  const auto refl = j.value("reflection", std::string("both"));
  if (refl == "both")
    s.reflection = rdm::ReflectionMode::kMeasureBoth;
  else if (refl == "one")
    s.reflection = rdm::ReflectionMode::kMeasureOne;
  else
    throw ValidationError("scan spec: reflection must be 'both' or 'one'");
  s.mitigate_readout = j.value("mitigate_readout", s.mitigate_readout);
  s.threads = j.value("threads", s.threads);
  if (j.contains("out")) {
    s.out = j.at("out").get<std::string>();
    if (s.out.is_relative() && !base.empty()) s.out = base / s.out;
  }
  s.validate();
}

}  // namespace

void from_json(const json& j, ScanSpec& s) { parse_spec(j, s, {}); }

ScanSpec load_scan_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scan spec " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  ScanSpec s;
  try {
    parse_spec(j, s, path.parent_path());
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Runs

References compute_references(const hamio::FixtureEntry& entry, const IntegralTable& full) {
  References r;
  const auto space = entry.active_space();
  std::vector<int> occ = space.frozen_occupied;
  for (std::size_t k = 0; k < space.active.size() && static_cast<int>(occ.size()) < full.n_electrons; ++k)
    occ.push_back(space.active[k]);
  const auto ref = ReferenceDeterminant::from_occupied(full.n_spin(), occ);
  r.e_hf = hamio::energy_from_rdm(full, determinant_rdm(full.n_spin(), ref.occupied));
  r.e_mp2 = r.e_hf + pt2::hf_mp2(full, ref);

  const auto active = hamio::freeze_core(full, space);
  r.e_fci_frozen = exact::fci_ground_state(active, active.n_electrons, active.ms2).energy;
  if (exact::SectorBasis::dimension(full.n_spin(), full.n_electrons, full.ms2) <= 1e4) {
    r.e_fci_full = exact::fci_ground_state(full, full.n_electrons, full.ms2).energy;
    r.fci_full_method = "fci";
  } else {
    r.e_fci_full = entry.e_exact_full;
    r.fci_full_method = "manifest: " + entry.e_exact_full_method + " (" + entry.package + ")";
  }
  return r;
}

namespace {

void optimize_point(const ScanSpec& spec, double geometry, unsigned threads, RunRecord& rec) {
  const auto manifest =
      hamio::FixtureManifest::load(spec.manifest.empty() ? hamio::default_manifest_path() : spec.manifest);
  const auto& entry = manifest.find(spec.fixture, geometry);
  auto full = manifest.load_table(entry);
  rec.references = compute_references(entry, full);

  PipelineConfig cfg;
  cfg.noise = spec.noise;
  cfg.shots = spec.shots;
  cfg.mitigate_readout = spec.mitigate_readout;
  cfg.reflection = spec.reflection;
  cfg.pt2.threads = threads;
  const PointPipeline pipeline(std::move(full), entry.active_space(), cfg);
  const bool sampled = spec.shots > 0;

  auto shot_pipeline = [&](const qsim::ShotTable& t) { return as_vector(pipeline.from_shots(t).energies); };
  std::optional<qsim::ShotTable> last_tables;

  Objective objective = [&](const std::vector<double>& x) {
    ++rec.objective_calls;
    const qsim::AnsatzParameters params{x[0], x[1], x[2]};
    const auto k = static_cast<std::uint64_t>(rec.iterations.size());
    PointEvaluation ev;
    IterationRecord it;
    if (sampled) {
      const std::uint64_t seed = qsim::make_stream(spec.seed, {geometry_key(geometry), k})();
      last_tables = pipeline.sample(params, seed);
      ev = pipeline.from_shots(*last_tables);
      if (spec.iteration_bootstrap_resamples > 0) {
        const auto b = rdm::bootstrap_vector(*last_tables, spec.iteration_bootstrap_resamples, shot_pipeline,
                                             seed, threads);
        it.bootstrap_std = from_vector(b.std);
      }
    } else {
      ev = pipeline.exact(params);
    }
    ++rec.pure_evaluations;
    it.index = static_cast<int>(k);
    it.params = {x[0], x[1], x[2]};
    it.energies = ev.energies;
    it.delta_frozen = ev.delta_frozen;
    it.delta_full = ev.delta_full;
    rec.iterations.push_back(it);
    for (auto& w : ev.warnings)
      if (std::find(rec.warnings.begin(), rec.warnings.end(), w) == rec.warnings.end())
        rec.warnings.push_back(std::move(w));
    return ev.energies.pure;
  };

  const auto result =
      minimize(objective, {spec.start[0], spec.start[1], spec.start[2]}, spec.optimizer);
  rec.converged = result.converged;
  rec.final_radius = result.final_radius;
  const auto& last = rec.iterations.back();
  rec.final_params = last.params;
  std::tie(rec.last5_mean, rec.last5_std) = last_n_statistics(rec.iterations);

  if (sampled && spec.bootstrap_resamples > 0) {
    const std::uint64_t seed = qsim::make_stream(spec.seed, {geometry_key(geometry), kBootstrapTag})();
    const auto b = rdm::bootstrap_vector(*last_tables, spec.bootstrap_resamples, shot_pipeline, seed, threads);
    rec.bootstrap_resamples = b.n_resamples;
    rec.bootstrap_mean = from_vector(b.mean);
    rec.bootstrap_std = from_vector(b.std);
  } else {
    rec.bootstrap_mean = last.energies;
  }
  rec.combined_error = apply(rec.last5_std, rec.bootstrap_std,
                             [](double a, double b) { return std::sqrt(a * a + b * b); });
}

// Failures leave the partial trace in the record; the exception is handed
// back so callers can decide whether to rethrow.
RunRecord run_point_impl(const ScanSpec& spec, double geometry, unsigned threads,
                         std::exception_ptr& failure) {
  RunRecord rec;
  rec.fixture = spec.fixture;
  rec.geometry = geometry;
  try {
    optimize_point(spec, geometry, threads, rec);
  } catch (const std::exception& e) {
    rec.error = e.what();
    failure = std::current_exception();
  }
  if (!spec.out.empty()) write_record(rec, spec.out);
  return rec;
}

}  // namespace

RunRecord run_point(const ScanSpec& spec, double geometry) {
  spec.validate();
  std::exception_ptr failure;
  auto rec = run_point_impl(spec, geometry, spec.threads, failure);
  if (failure) std::rethrow_exception(failure);
  return rec;
}

std::vector<RunRecord> run_scan(const ScanSpec& spec) {
  spec.validate();
  const std::size_t n = spec.geometries.size();
  std::vector<RunRecord> out(n);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned budget = spec.threads == 0 ? hw : spec.threads;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(n, budget));
  const unsigned inner = std::max(1u, budget / std::max(1u, workers));

  std::mutex mu;
  std::size_t next = 0;
  auto work = [&] {
    for (;;) {
      std::size_t k;
      {
        std::lock_guard lock(mu);
        if (next == n) return;
        k = next++;
      }
      const double r = spec.geometries[k];
      std::exception_ptr failure;
      out[k] = run_point_impl(spec, r, inner, failure);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  if (!spec.out.empty()) {
    std::ofstream csv(spec.out / "report.csv");
    write_csv(out, csv);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

void to_json(json& j, const EnergySet& e) {
  j = json{{"raw", e.raw}, {"pure", e.pure}, {"pt2_frozen", e.pt2_frozen}, {"pt2_full", e.pt2_full}};
}

void from_json(const json& j, EnergySet& e) {
  e.raw = j.at("raw").get<double>();
  e.pure = j.at("pure").get<double>();
  e.pt2_frozen = j.at("pt2_frozen").get<double>();
  e.pt2_full = j.at("pt2_full").get<double>();
}

void to_json(json& j, const RunRecord& r) {
  json its = json::array();
  for (const auto& it : r.iterations) {
    json e{{"index", it.index},
           {"params", it.params},
           {"energies", it.energies},
           {"delta_frozen", it.delta_frozen},
           {"delta_full", it.delta_full},
           {"bootstrap_std", nullptr}};
    if (it.bootstrap_std) e["bootstrap_std"] = *it.bootstrap_std;
    its.push_back(std::move(e));
  }
  j = json{{"fixture", r.fixture},
           {"geometry", r.geometry},
           {"error", r.error.empty() ? json(nullptr) : json(r.error)},
           {"iterations", its},
           {"final",
            {{"params", r.final_params},
             {"last5_mean", r.last5_mean},
             {"last5_std", r.last5_std},
             {"bootstrap_mean", r.bootstrap_mean},
             {"bootstrap_std", r.bootstrap_std},
             {"bootstrap_resamples", r.bootstrap_resamples},
             {"combined_error", r.combined_error}}},
           {"references",
            {{"e_hf", r.references.e_hf},
             {"e_mp2", r.references.e_mp2},
             {"e_fci_frozen", r.references.e_fci_frozen},
             {"e_fci_full", r.references.e_fci_full},
             {"fci_full_method", r.references.fci_full_method}}},
           {"objective_calls", r.objective_calls},
           {"pure_evaluations", r.pure_evaluations},
           {"converged", r.converged},
           {"final_radius", r.final_radius},
           {"warnings", r.warnings}};
}

void from_json(const json& j, RunRecord& r) {
  r = RunRecord{};
  r.fixture = j.at("fixture").get<std::string>();
  r.geometry = j.at("geometry").get<double>();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  for (const auto& e : j.at("iterations")) {
    IterationRecord it;
    it.index = e.at("index").get<int>();
    it.params = e.at("params").get<std::array<double, 3>>();
    it.energies = e.at("energies").get<EnergySet>();
    it.delta_frozen = e.at("delta_frozen").get<double>();
    it.delta_full = e.at("delta_full").get<double>();
    if (!e.at("bootstrap_std").is_null()) it.bootstrap_std = e.at("bootstrap_std").get<EnergySet>();
    r.iterations.push_back(it);
  }
  const auto& f = j.at("final");
  r.final_params = f.at("params").get<std::array<double, 3>>();
  r.last5_mean = f.at("last5_mean").get<EnergySet>();
  r.last5_std = f.at("last5_std").get<EnergySet>();
  r.bootstrap_mean = f.at("bootstrap_mean").get<EnergySet>();
  r.bootstrap_std = f.at("bootstrap_std").get<EnergySet>();
  r.bootstrap_resamples = f.at("bootstrap_resamples").get<std::size_t>();
  r.combined_error = f.at("combined_error").get<EnergySet>();
  const auto& ref = j.at("references");
  r.references.e_hf = ref.at("e_hf").get<double>();
  r.references.e_mp2 = ref.at("e_mp2").get<double>();
  r.references.e_fci_frozen = ref.at("e_fci_frozen").get<double>();
  r.references.e_fci_full = ref.at("e_fci_full").get<double>();
  r.references.fci_full_method = ref.at("fci_full_method").get<std::string>();
  r.objective_calls = j.at("objective_calls").get<int>();
  r.pure_evaluations = j.at("pure_evaluations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.final_radius = j.at("final_radius").get<double>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
}

std::filesystem::path record_filename(const std::string& fixture, double geometry) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", geometry);
  return "run_" + fixture + "_" + buf + ".json";
}

void write_record(const RunRecord& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / record_filename(r.fixture, r.geometry);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << json(r).dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

std::vector<RunRecord> read_records(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.starts_with("run_") && e.path().extension() == ".json")
      files.push_back(e.path());
  }
  std::vector<RunRecord> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      out.push_back(json::parse(in).get<RunRecord>());
    } catch (const json::exception& e) {
      throw ParseError(f.string(), 0, e.what());
    }
  }
  std::sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.fixture, a.geometry) < std::tie(b.fixture, b.geometry);
  });
  return out;
}

void write_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  char buf[512];
  for (const auto& r : records) {
    if (!r.ok() || r.iterations.empty()) {
      std::snprintf(buf, sizeof buf, "%.4f,,,,,,,,\n", r.geometry);
      out << buf;
      continue;
    }
    const auto& m = r.last5_mean;
    const auto& ref = r.references;
    std::snprintf(buf, sizeof buf, "%.4f,%.10f,%.10f,%.10f,%.10f,%.10f,%.10f,%.10f,%.10f\n", r.geometry,
                  m.raw, m.pure, m.pt2_frozen, m.pt2_full, m.pure - ref.e_fci_frozen,
                  m.pt2_full - ref.e_fci_full, ref.e_fci_frozen, ref.e_fci_full);
    out << buf;
  }
}

}  // namespace rdmpt::vqe
