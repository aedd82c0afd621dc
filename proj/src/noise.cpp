// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "rdmpt/errors.hpp"

namespace rdmpt::qsim {

NoiseModel NoiseModel::noiseless(int n) {
  return {0.0, 0.0, std::vector<Eigen::Matrix2d>(n, Eigen::Matrix2d::Identity())};
}

NoiseModel NoiseModel::defaults(int n) {
  return {1e-3, 1e-2, std::vector<Eigen::Matrix2d>(n, symmetric_flip(0.02))};
}

Eigen::Matrix2d NoiseModel::symmetric_flip(double eps) {
  Eigen::Matrix2d m;
  m << 1.0 - eps, eps, eps, 1.0 - eps;
  return m;
}

bool NoiseModel::has_readout_error() const {
  for (const auto& m : readout)
    if (!m.isIdentity(0.0)) return true;
  return false;
}

void NoiseModel::validate(int n) const {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0))
    throw ValidationError("noise model: probabilities must lie in [0,1]");
  if (static_cast<int>(readout.size()) != n)
    throw ValidationError("noise model: expected " + std::to_string(n) +
                          " readout confusion matrices, got " + std::to_string(readout.size()));
  for (const auto& m : readout) {
    if ((m.array() < 0.0).any() || (m.array() > 1.0).any())
      throw ValidationError("noise model: confusion entries must lie in [0,1]");
    for (int c = 0; c < 2; ++c)
      if (std::abs(m.col(c).sum() - 1.0) > 1e-12)
        throw ValidationError("noise model: confusion matrix columns must sum to 1");
  }
}

void to_json(nlohmann::json& j, const NoiseModel& m) {
  j = nlohmann::json{{"p1", m.p1}, {"p2", m.p2}};
  auto& ro = j["readout"] = nlohmann::json::array();
  for (const auto& c : m.readout)
    ro.push_back({{c(0, 0), c(0, 1)}, {c(1, 0), c(1, 1)}});
}

void from_json(const nlohmann::json& j, NoiseModel& m) {
  m.p1 = j.value("p1", 0.0);
  m.p2 = j.value("p2", 0.0);
  m.readout.clear();
  if (j.contains("readout")) {
    for (const auto& c : j.at("readout")) {
      Eigen::Matrix2d mat;
      mat << c.at(0).at(0).get<double>(), c.at(0).at(1).get<double>(),
          c.at(1).at(0).get<double>(), c.at(1).at(1).get<double>();
      m.readout.push_back(mat);
    }
  }
}

NoiseModel load_noise_model(const std::filesystem::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open noise model " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  NoiseModel m = j.get<NoiseModel>();
  // Shorthand: a single symmetric flip probability for every qubit.
  if (m.readout.empty()) m.readout.assign(n, NoiseModel::symmetric_flip(j.value("readout_flip", 0.0)));
  m.validate(n);
  return m;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  for (auto p : path) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

namespace {

constexpr char kOps[4] = {'I', 'X', 'Y', 'Z'};

void insert_error(StateVector& s, const Gate& g, int code) {
  PauliString p(s.n_qubits());
  p.set(g.qubits[0], kOps[code % 4]);
  if (g.arity() == 2) p.set(g.qubits[1], kOps[code / 4]);
  s.apply_pauli(p);
}

}  // namespace

std::vector<int> sample_error_pattern(const Circuit& c, const NoiseModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> pattern(c.gates.size(), 0);
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    const bool two = c.gates[k].arity() == 2;
    const double p = two ? m.p2 : m.p1;
    if (p <= 0.0 || u(rng) >= p) continue;
    std::uniform_int_distribution<int> pick(1, two ? 15 : 3);
    pattern[k] = pick(rng);
  }
  return pattern;
}

StateVector run_trajectory(const Circuit& c, const std::vector<int>& pattern) {
  StateVector s(c.n_qubits);
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    s.apply(c.gates[k]);
    if (pattern[k] != 0) insert_error(s, c.gates[k], pattern[k]);
  }
  return s;
}

std::vector<std::int64_t> sample_counts(const Circuit& c, const NoiseModel& m, std::int64_t shots,
                                        std::mt19937_64& rng) {
  if (shots <= 0) throw ValidationError("sample_counts: shots must be positive");
  m.validate(c.n_qubits);
  const std::size_t dim = std::size_t{1} << c.n_qubits;

  auto cdf_of = [](const StateVector& s) {
    std::vector<double> p = s.probabilities();
    std::partial_sum(p.begin(), p.end(), p.begin());
    return p;
  };
  const std::vector<double> clean_cdf = cdf_of(simulate(c));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&](const std::vector<double>& cdf) {
    const double r = u(rng) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
  };

  std::vector<std::int64_t> counts(dim, 0);
  const bool gate_noise = m.p1 > 0.0 || m.p2 > 0.0;
  const bool readout = m.has_readout_error();
  for (std::int64_t shot = 0; shot < shots; ++shot) {
    std::size_t outcome;
    if (gate_noise) {
      const auto pattern = sample_error_pattern(c, m, rng);
      const bool clean = std::all_of(pattern.begin(), pattern.end(), [](int e) { return e == 0; });
      outcome = clean ? draw(clean_cdf) : draw(cdf_of(run_trajectory(c, pattern)));
    } else {
      outcome = draw(clean_cdf);
    }
    if (readout) {
      for (int q = 0; q < c.n_qubits; ++q) {
        const int truth = (outcome >> q) & 1u;
        // P(measured != truth | truth)
        const double flip = m.readout[q](1 - truth, truth);
        if (flip > 0.0 && u(rng) < flip) outcome ^= std::size_t{1} << q;
      }
    }
    ++counts[outcome];
  }
  return counts;
}

}  // namespace rdmpt::qsim
