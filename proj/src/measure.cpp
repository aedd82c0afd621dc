// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/measure.hpp"

#include <bit>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rdmpt/errors.hpp"

namespace rdmpt::qsim {

bool CircuitShots::covers(const PauliString& p) const {
  for (int q = 0; q < p.n_qubits; ++q) {
    const char o = p.op(q);
    if (o != 'I' && (q >= static_cast<int>(basis.size()) || basis[q] != o)) return false;
  }
  return true;
}

double CircuitShots::expectation(const PauliString& p) const {
  const std::uint64_t mask = p.support();
  double total = 0.0, acc = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (counts[b] == 0.0) continue;
    total += counts[b];
    acc += (std::popcount(b & mask) % 2 ? -1.0 : 1.0) * counts[b];
  }
  return total > 0.0 ? acc / total : 0.0;
}

std::optional<std::size_t> ShotTable::find_cover(const PauliString& p) const {
  for (std::size_t k = 0; k < circuits.size(); ++k)
    if (circuits[k].covers(p)) return k;
  return std::nullopt;
}

std::vector<std::string> group_qubitwise(const std::vector<PauliString>& observables) {
  std::vector<PauliString> reps;  // merged operator per group
  for (const auto& o : observables) {
    if (o.is_identity()) continue;
    bool placed = false;
    for (auto& r : reps) {
      if (r.qubitwise_commutes(o)) {
        r.x |= o.x;
        r.z |= o.z;
        placed = true;
        break;
      }
    }
    if (!placed) {
      PauliString r(o.n_qubits);
      r.x = o.x;
      r.z = o.z;
      reps.push_back(r);
    }
  }
  std::vector<std::string> bases;
  for (const auto& r : reps) {
    std::string b(r.n_qubits, 'Z');
    for (int q = 0; q < r.n_qubits; ++q)
      if (r.op(q) != 'I') b[q] = r.op(q);
    bases.push_back(b);
  }
  return bases;
}

Circuit with_basis_change(const Circuit& circuit, const std::string& basis) {
  if (static_cast<int>(basis.size()) != circuit.n_qubits)
    throw ValidationError("measurement basis length does not match the circuit");
  Circuit c = circuit;
  for (int q = 0; q < c.n_qubits; ++q) {
    switch (basis[q]) {
      case 'Z':
      case 'I': break;
      case 'X': c.add(gates::h(q)); break;
      case 'Y':
        c.add(gates::sdg(q));
        c.add(gates::h(q));
        break;
      default: throw ValidationError("bad measurement basis character");
    }
  }
  return c;
}

ShotTable measure_bases(const Circuit& circuit, const std::vector<std::string>& bases,
                        std::int64_t shots, const NoiseModel& model, std::uint64_t seed) {
  if (shots <= 0) throw ValidationError("measure: shots must be positive");
  ShotTable t{circuit.n_qubits, {}};
  for (std::size_t k = 0; k < bases.size(); ++k) {
    auto rng = make_stream(seed, {k});
    const auto counts = sample_counts(with_basis_change(circuit, bases[k]), model, shots, rng);
    CircuitShots cs;
    cs.basis = bases[k];
    cs.counts.assign(counts.begin(), counts.end());
    cs.shots = shots;
    cs.seed = seed;
    t.circuits.push_back(std::move(cs));
  }
  return t;
}

ShotTable measure_pauli_sets(const Circuit& circuit, const std::vector<PauliString>& observables,
                             std::int64_t shots, const NoiseModel& model, std::uint64_t seed) {
  if (shots <= 0) throw ValidationError("measure_pauli_sets: shots must be positive");
  for (const auto& o : observables)
    if (o.n_qubits != circuit.n_qubits)
      throw ValidationError("measure_pauli_sets: observable acts on a different register");
  return measure_bases(circuit, group_qubitwise(observables), shots, model, seed);
}

ShotTable mitigate_readout(const ShotTable& table, const NoiseModel& model) {
  if (static_cast<int>(model.readout.size()) != table.n_qubits)
    throw ValidationError("mitigate_readout: confusion matrices do not match the register");
  std::vector<Eigen::Matrix2d> inverse;
  for (const auto& m : model.readout) {
    if (std::abs(m.determinant()) < 1e-12)
      throw ValidationError("mitigate_readout: singular confusion matrix");
    inverse.push_back(m.inverse());
  }
  ShotTable out = table;
  for (auto& c : out.circuits) {
    std::vector<double> p = c.counts;
    double total = 0.0;
    for (double v : p) total += v;
    if (total <= 0.0) continue;
    for (double& v : p) v /= total;
    // Tensor-product inverse, one qubit axis at a time.
    for (int q = 0; q < table.n_qubits; ++q) {
      const std::size_t bit = std::size_t{1} << q;
      const auto& inv = inverse[q];
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (i & bit) continue;
        const double a0 = p[i], a1 = p[i | bit];
        p[i] = inv(0, 0) * a0 + inv(0, 1) * a1;
        p[i | bit] = inv(1, 0) * a0 + inv(1, 1) * a1;
      }
    }
    double kept = 0.0;
    for (double& v : p) {
      if (v < 0.0) v = 0.0;
      kept += v;
    }
    for (std::size_t i = 0; i < p.size(); ++i)
      c.counts[i] = kept > 0.0 ? p[i] / kept * static_cast<double>(c.shots) : 0.0;
  }
  return out;
}

std::string bitstring(std::uint64_t outcome, int n) {
  std::string s(n, '0');
  for (int q = 0; q < n; ++q)
    if ((outcome >> q) & 1u) s[n - 1 - q] = '1';
  return s;
}

void to_json(nlohmann::json& j, const CircuitShots& c) {
  const int n = static_cast<int>(c.basis.size());
  nlohmann::json counts = nlohmann::json::object();
  for (std::size_t b = 0; b < c.counts.size(); ++b)
    if (c.counts[b] != 0.0) counts[bitstring(b, n)] = c.counts[b];
  // Basis label written qubit n-1 first to match the bitstrings.
  j = nlohmann::json{{"basis", std::string(c.basis.rbegin(), c.basis.rend())},
                     {"counts", counts},
                     {"shots", c.shots},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, CircuitShots& c) {
  const auto label = j.at("basis").get<std::string>();
  c.basis.assign(label.rbegin(), label.rend());
  const int n = static_cast<int>(c.basis.size());
  c.counts.assign(std::size_t{1} << n, 0.0);
  for (const auto& [key, value] : j.at("counts").items()) {
    if (static_cast<int>(key.size()) != n)
      throw ValidationError("shot table: bitstring '" + key + "' has the wrong length");
    std::uint64_t b = 0;
    for (int q = 0; q < n; ++q) {
      const char ch = key[n - 1 - q];
      if (ch != '0' && ch != '1') throw ValidationError("shot table: bad bitstring '" + key + "'");
      if (ch == '1') b |= std::uint64_t{1} << q;
    }
    c.counts[b] = value.get<double>();
  }
  c.shots = j.at("shots").get<std::int64_t>();
  c.seed = j.value("seed", std::uint64_t{0});
}

void to_json(nlohmann::json& j, const ShotTable& t) {
  j = nlohmann::json{{"n_qubits", t.n_qubits}, {"circuits", t.circuits}};
}

void from_json(const nlohmann::json& j, ShotTable& t) {
  t.n_qubits = j.at("n_qubits").get<int>();
  t.circuits = j.at("circuits").get<std::vector<CircuitShots>>();
}

}  // namespace rdmpt::qsim
