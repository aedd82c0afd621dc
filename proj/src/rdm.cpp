// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/rdm.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "rdmpt/errors.hpp"

namespace rdmpt::rdm {

using qsim::PauliKey;
using qsim::PauliString;
using qsim::PauliSum;

namespace {

PauliSum scaled(const PauliSum& s, qsim::Complex c) {
  PauliSum out(s);
  for (auto& t : out) t.coeff *= c;
  return out;
}

PauliSum add(const PauliSum& a, const PauliSum& b) {
  PauliSum out(a);
  out.insert(out.end(), b.begin(), b.end());
  return qsim::simplify(out, 1e-14);
}

// Hermitian and anti-hermitian halves of O: O = R + i I with R, I hermitian.
std::pair<PauliSum, PauliSum> split(const PauliSum& op) {
  const PauliSum dag = qsim::adjoint(op);
  PauliSum re = scaled(add(op, dag), 0.5);
  PauliSum im = scaled(add(op, scaled(dag, -1.0)), qsim::Complex(0.0, -0.5));
  // Hermitian Pauli sums have real coefficients; drop round-off imaginary parts.
  for (auto* s : {&re, &im})
    for (auto& t : *s) t.coeff = t.coeff.real();
  return {qsim::simplify(re), qsim::simplify(im)};
}

bool sz_conserving1(int p, int q) { return spin_of(p) == spin_of(q); }
bool sz_conserving2(int p, int q, int r, int s) {
  return spin_of(p) + spin_of(q) == spin_of(r) + spin_of(s);
}

// Canonical form of a two-body element: p<q, r<s, (p,q) <= (r,s). Returns the
// sign relating the original element to the canonical one, 0 if it vanishes.
int canonical2(std::array<int, 4>& e) {
  int sign = 1;
  if (e[0] == e[1] || e[2] == e[3]) return 0;
  if (e[0] > e[1]) { std::swap(e[0], e[1]); sign = -sign; }
  if (e[2] > e[3]) { std::swap(e[2], e[3]); sign = -sign; }
  if (std::tie(e[0], e[1]) > std::tie(e[2], e[3])) {
    std::swap(e[0], e[2]);
    std::swap(e[1], e[3]);
  }
  return sign;
}

std::array<int, 4> reflected(const ScheduledElement& e) {
  std::array<int, 4> r = e.idx;
  for (int k = 0; k < (e.rank == 1 ? 2 : 4); ++k) r[k] = flip_spin(r[k]);
  return r;
}

void set2(Tensor4& t, int p, int q, int r, int s, double v) {
  for (auto [a, b, c, d] : {std::tuple{p, q, r, s}, std::tuple{r, s, p, q}}) {
    t(a, b, c, d) = v;
    t(b, a, c, d) = -v;
    t(a, b, d, c) = -v;
    t(b, a, d, c) = v;
  }
}

struct ScheduleKey {
  int n, ne, mode;
  bool imag;
  friend auto operator<=>(const ScheduleKey&, const ScheduleKey&) = default;
};

}  // namespace

std::shared_ptr<const MeasurementSchedule> MeasurementSchedule::build(int n, int n_electrons,
                                                                      ReflectionMode mode,
                                                                      bool imag) {
  static std::mutex mu;
  static std::map<ScheduleKey, std::shared_ptr<const MeasurementSchedule>> cache;
  const ScheduleKey key{n, n_electrons, static_cast<int>(mode), imag};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  if (n <= 0 || n > 16) throw ValidationError("measurement schedule: unsupported qubit count");

  auto sch = std::make_shared<MeasurementSchedule>();
  sch->n_qubits = n;
  sch->n_electrons = n_electrons;
  sch->mode = mode;
  sch->measure_imaginary = imag;

  std::vector<ScheduledElement> all;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q)
      if (sz_conserving1(p, q)) all.push_back({1, {p, q, -1, -1}, {}, {}});
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s)
          if (std::tie(p, q) <= std::tie(r, s) && sz_conserving2(p, q, r, s))
            all.push_back({2, {p, q, r, s}, {}, {}});

  for (auto& e : all) {
    if (mode == ReflectionMode::kMeasureOne) {
      auto r = reflected(e);
      if (e.rank == 1) {
        if (r[0] > r[1]) std::swap(r[0], r[1]);
      } else {
        canonical2(r);
      }
      if (r < e.idx) continue;  // partner is the representative
    }
    qsim::FermionProduct op;
    if (e.rank == 1)
      op = {qsim::cre(e.idx[0]), qsim::ann(e.idx[1])};
    else
      op = {qsim::cre(e.idx[0]), qsim::cre(e.idx[1]), qsim::ann(e.idx[3]), qsim::ann(e.idx[2])};
    auto [re, im] = split(qsim::jw_operator(op, n));
    e.real_part = std::move(re);
    if (imag) e.imag_part = std::move(im);
    sch->elements.push_back(std::move(e));
  }

  std::map<PauliKey, PauliString> unique;
  for (const auto& e : sch->elements)
    for (const auto* part : {&e.real_part, &e.imag_part})
      for (const auto& t : *part) {
        if (t.is_identity()) continue;
        PauliString bare(n);
        bare.x = t.x;
        bare.z = t.z;
        unique.emplace(qsim::key_of(t), bare);
      }
  for (auto& [k, p] : unique) sch->paulis.push_back(p);
  sch->bases = qsim::group_qubitwise(sch->paulis);

  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(sch)).first->second;
}

PauliExpectations expectations_from_state(const qsim::StateVector& state,
                                          const MeasurementSchedule& schedule) {
  if (state.n_qubits() != schedule.n_qubits)
    throw ValidationError("expectations_from_state: register size mismatch");
  PauliExpectations out;
  for (const auto& p : schedule.paulis) out[qsim::key_of(p)] = state.expectation(p).real();
  return out;
}

PauliExpectations expectations_from_shots(const qsim::ShotTable& tables,
                                          const MeasurementSchedule& schedule) {
  if (tables.n_qubits != schedule.n_qubits)
    throw ValidationError("expectations_from_shots: register size mismatch");
  PauliExpectations out;
  std::vector<std::string> missing;
  for (const auto& p : schedule.paulis) {
    auto k = tables.find_cover(p);
    if (!k) {
      missing.push_back(p.sparse_label());
      continue;
    }
    out[qsim::key_of(p)] = tables.circuits[*k].expectation(p);
  }
  if (!missing.empty()) throw CoverageError(std::move(missing));
  return out;
}

namespace {

double evaluate(const PauliSum& s, const PauliExpectations& values) {
  double v = 0.0;
  for (const auto& t : s) {
    if (t.is_identity()) {
      v += t.coeff.real();
      continue;
    }
    auto it = values.find(qsim::key_of(t));
    if (it == values.end())
      throw CoverageError({t.sparse_label()});
    v += t.coeff.real() * it->second;
  }
  return v;
}

}  // namespace

RdmPair rdm_from_expectations(const PauliExpectations& values, const MeasurementSchedule& sch) {
  const int n = sch.n_qubits;
  RdmPair rdm(n, sch.n_electrons);
  rdm.meta.provenance = Provenance::kRaw;
  double max_imag = 0.0;
  for (const auto& e : sch.elements) {
    const double v = evaluate(e.real_part, values);
    if (sch.measure_imaginary) max_imag = std::max(max_imag, std::abs(evaluate(e.imag_part, values)));
    std::vector<std::pair<std::array<int, 4>, double>> targets{{e.idx, v}};
    if (sch.mode == ReflectionMode::kMeasureOne) targets.push_back({reflected(e), v});
    for (auto [idx, val] : targets) {
      if (e.rank == 1) {
        rdm.rho1(idx[0], idx[1]) = val;
        rdm.rho1(idx[1], idx[0]) = val;
      } else {
        const int sign = canonical2(idx);
        if (sign == 0) continue;
        set2(rdm.rho2, idx[0], idx[1], idx[2], idx[3], sign * val);
      }
    }
  }
  rdm.meta.max_imag = max_imag;
  return rdm;
}

RdmPair rdm_from_shots(const qsim::ShotTable& tables, const MeasurementSchedule& schedule) {
  RdmPair r = rdm_from_expectations(expectations_from_shots(tables, schedule), schedule);
  for (const auto& c : tables.circuits) r.meta.shots += c.shots;
  if (!tables.circuits.empty()) r.meta.seed = tables.circuits.front().seed;
  return r;
}

RdmPair enforce_sz(const RdmPair& in) {
  RdmPair out = in;
  const int n = in.n_orbitals();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (!sz_conserving1(p, q)) out.rho1(p, q) = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          if (!sz_conserving2(p, q, r, s)) out.rho2(p, q, r, s) = 0.0;
  return out;
}

RdmPair spin_reflection_average(const RdmPair& in) {
  const int n = in.n_orbitals();
  if (n % 2 != 0) throw ValidationError("spin_reflection_average: odd number of spin orbitals");
  RdmPair out = in;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      out.rho1(p, q) = 0.5 * (in.rho1(p, q) + in.rho1(flip_spin(p), flip_spin(q)));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          out.rho2(p, q, r, s) =
              0.5 * (in.rho2(p, q, r, s) +
                     in.rho2(flip_spin(p), flip_spin(q), flip_spin(r), flip_spin(s)));
  return out;
}

RdmPair symmetrize(const RdmPair& rdm) {
  RdmPair out = spin_reflection_average(enforce_sz(rdm));
  out.meta.provenance = Provenance::kSymmetrized;
  return out;
}

// ---------------------------------------------------------------------------
// Bootstrap

qsim::ShotTable resample(const qsim::ShotTable& tables, std::mt19937_64& rng) {
  qsim::ShotTable out = tables;
  for (auto& c : out.circuits) {
    double total = 0.0;
    for (double v : c.counts) total += v;
    if (c.shots <= 0 || total <= 0.0) throw ValidationError("bootstrap: empty shot table");
    // Sequential binomial draws realize one multinomial sample.
    std::int64_t remaining = c.shots;
    double mass = total;
    for (auto& v : c.counts) {
      const double w = v;
      if (remaining == 0 || w <= 0.0) {
        v = 0.0;
        mass -= w;
        continue;
      }
      const double p = std::clamp(w / mass, 0.0, 1.0);
      std::binomial_distribution<std::int64_t> draw(remaining, p);
      const std::int64_t k = p >= 1.0 ? remaining : draw(rng);
      v = static_cast<double>(k);
      remaining -= k;
      mass -= w;
    }
  }
  return out;
}

void BootstrapEnsemble::summarize() {
  n_resamples = values.size();
  if (values.empty()) {
    mean = std = 0.0;
    return;
  }
  CompensatedSum s;
  for (double v : values) s.add(v);
  mean = s.value() / static_cast<double>(values.size());
  if (values.size() < 2) {
    std = 0.0;
    return;
  }
  CompensatedSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  std = std::sqrt(sq.value() / static_cast<double>(values.size() - 1));
}

namespace {

void validate_tables(const qsim::ShotTable& tables, std::size_t n) {
  if (n < 1) throw ValidationError("bootstrap: need at least one resample");
  if (tables.circuits.empty()) throw ValidationError("bootstrap: empty shot table");
  for (const auto& c : tables.circuits) {
    double total = 0.0;
    for (double v : c.counts) total += v;
    if (c.shots < 1 || total <= 0.0) throw ValidationError("bootstrap: empty shot table");
  }
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex mu;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t k = t; k < n; k += threads) fn(k);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

BootstrapEnsemble bootstrap(const qsim::ShotTable& tables, std::size_t n, const ShotPipeline& pipeline,
                            std::uint64_t seed, unsigned threads) {
  validate_tables(tables, n);
  BootstrapEnsemble ens;
  ens.values.assign(n, 0.0);
  parallel_for(n, threads, [&](std::size_t k) {
    auto rng = qsim::make_stream(seed, {k});
    ens.values[k] = pipeline(resample(tables, rng));
  });
  ens.summarize();
  return ens;
}

BootstrapVector bootstrap_vector(const qsim::ShotTable& tables, std::size_t n,
                                 const ShotPipelineVector& pipeline, std::uint64_t seed,
                                 unsigned threads) {
  validate_tables(tables, n);
  BootstrapVector out;
  out.n_resamples = n;
  out.values.assign(n, {});
  parallel_for(n, threads, [&](std::size_t k) {
    auto rng = qsim::make_stream(seed, {k});
    out.values[k] = pipeline(resample(tables, rng));
  });
  const std::size_t m = out.values.front().size();
  for (std::size_t c = 0; c < m; ++c) {
    BootstrapEnsemble e;
    for (const auto& v : out.values) e.values.push_back(v.at(c));
    e.summarize();
    out.mean.push_back(e.mean);
    out.std.push_back(e.std);
  }
  return out;
}

}  // namespace rdmpt::rdm

namespace rdmpt {

void to_json(nlohmann::json& j, const RdmPair& r) {
  const int n = r.n_orbitals();
  std::vector<std::vector<double>> rho1(n, std::vector<double>(n));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) rho1[p][q] = r.rho1(p, q);
  const auto d = diagnose(r);
  j = nlohmann::json{
      {"n_orbitals", n},
      {"n_electrons", r.n_electrons},
      {"provenance", to_string(r.meta.provenance)},
      {"shots", r.meta.shots},
      {"seed", r.meta.seed},
      {"max_imag", r.meta.max_imag},
      {"warnings", r.meta.warnings},
      {"rho1", rho1},
      {"rho2_dims", {n, n, n, n}},
      {"rho2", std::vector<double>(r.rho2.data().begin(), r.rho2.data().end())},
      {"diagnostics",
       {{"trace1", r.trace1()},
        {"trace2", r.trace2()},
        {"hermiticity", std::max(d.hermiticity1, d.hermiticity2)},
        {"antisymmetry", d.antisymmetry}}}};
}

void from_json(const nlohmann::json& j, RdmPair& r) {
  const int n = j.at("n_orbitals").get<int>();
  r = RdmPair(n, j.at("n_electrons").get<int>());
  r.meta.provenance = provenance_from_string(j.at("provenance").get<std::string>());
  r.meta.shots = j.value("shots", std::int64_t{0});
  r.meta.seed = j.value("seed", std::uint64_t{0});
  r.meta.max_imag = j.value("max_imag", 0.0);
  r.meta.warnings = j.value("warnings", std::vector<std::string>{});
  const auto rho1 = j.at("rho1").get<std::vector<std::vector<double>>>();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) r.rho1(p, q) = rho1.at(p).at(q);
  const auto rho2 = j.at("rho2").get<std::vector<double>>();
  if (rho2.size() != r.rho2.size()) throw ValidationError("RdmPair JSON: rho2 has the wrong size");
  std::copy(rho2.begin(), rho2.end(), r.rho2.data().begin());
}

CoverageError::CoverageError(std::vector<std::string> missing)
    : std::runtime_error([&] {
        std::string msg = "shot tables do not cover Pauli strings:";
        for (const auto& m : missing) msg += " [" + m + "]";
        return msg;
      }()),
      missing_(std::move(missing)) {}

}  // namespace rdmpt
