// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/pt2.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "rdmpt/errors.hpp"

namespace rdmpt::pt2 {

namespace {

void check_same_basis(const RdmPair& rdm, const IntegralTable& h) {
  if (rdm.n_orbitals() != h.n_spin())
    throw ValidationError("pt2: RDM and integral table cover different orbital sets");
}

void check_roles(const ReferenceDeterminant& ref, std::initializer_list<int> occ,
                 std::initializer_list<int> vir) {
  for (int i : occ)
    if (!ref.is_occupied(i)) throw ValidationError("pt2: index " + std::to_string(i) + " is not occupied");
  for (int a : vir)
    if (ref.is_occupied(a)) throw ValidationError("pt2: index " + std::to_string(a) + " is not virtual");
}

// One antisymmetrizer term (1 - P_xz - P_yz) applied to a triple.
constexpr std::array<std::array<int, 3>, 3> kPerm{{{0, 1, 2}, {2, 1, 0}, {0, 2, 1}}};
constexpr std::array<double, 3> kSign{1.0, -1.0, -1.0};

inline double r3(const RdmPair& rdm, int p, int q, int r, int s, int t, int u) {
  const std::array<int, 3> bra{p, q, r};
  const std::array<int, 3> ket{s, t, u};
  double v = 0.0;
  for (int l = 0; l < 3; ++l) {
    const int a = bra[kPerm[l][0]], b = bra[kPerm[l][1]], c = bra[kPerm[l][2]];
    for (int k = 0; k < 3; ++k) {
      const int d = ket[kPerm[k][0]], e = ket[kPerm[k][1]], f = ket[kPerm[k][2]];
      v += kSign[l] * kSign[k] * rdm.rho2(a, b, d, e) * rdm.rho1(c, f);
    }
  }
  return v / 3.0;
}

double gammabar_unchecked(const RdmPair& rdm, const IntegralTable& h, int i, int j, int a, int b) {
  const int n = rdm.n_orbitals();
  const auto& g = h.g;
  const auto& r2 = rdm.rho2;
  double t = 0.0;
  for (int m = 0; m < n; ++m) {
    t += h.h(i, m) * r2(m, j, a, b) - h.h(j, m) * r2(m, i, a, b);
    t -= h.h(a, m) * r2(i, j, m, b) - h.h(b, m) * r2(i, j, m, a);
  }
  // The three-body RDM of a state with fewer than three electrons vanishes
  // identically, so the factorized estimate is only used for N >= 3.
  const bool three_body = rdm.n_electrons >= 3;
  double two = 0.0, three = 0.0;
  for (int m = 0; m < n; ++m)
    for (int nn = 0; nn < n; ++nn) {
      two += g(i, j, m, nn) * r2(m, nn, a, b) - g(m, nn, a, b) * r2(i, j, m, nn);
      if (!three_body) continue;
      for (int v = 0; v < n; ++v) {
        if (const double x = g(i, v, m, nn); x != 0.0) three -= x * r3(rdm, m, nn, j, a, b, v);
        if (const double x = g(j, v, m, nn); x != 0.0) three += x * r3(rdm, m, nn, i, a, b, v);
        if (const double x = g(m, nn, a, v); x != 0.0) three += x * r3(rdm, i, j, v, b, m, nn);
        if (const double x = g(m, nn, b, v); x != 0.0) three -= x * r3(rdm, i, j, v, a, m, nn);
      }
    }
  return t + 0.5 * (two + three);
}

double fbar_unchecked(const RdmPair& rdm, const IntegralTable& h, int i, int a) {
  const int n = rdm.n_orbitals();
  double t = 0.0;
  for (int m = 0; m < n; ++m) t += h.h(i, m) * rdm.rho1(m, a) - h.h(a, m) * rdm.rho1(m, i);
  double two = 0.0;
  for (int m = 0; m < n; ++m)
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w)
        two += h.g(i, m, v, w) * rdm.rho2(v, w, a, m) - h.g(a, m, v, w) * rdm.rho2(v, w, i, m);
  return t + 0.5 * two;
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

std::string tuple_label(std::initializer_list<int> idx) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (int k : idx) {
    if (!first) os << ',';
    os << k;
    first = false;
  }
  os << ')';
  return os.str();
}

struct Excitations {
  std::vector<int> occ, vir;
};

Excitations excitation_space(const ReferenceDeterminant& ref, const ActiveSpaceSpec& space,
                             Pt2Mode mode, int n) {
  Excitations ex;
  std::vector<char> allowed(n, mode == Pt2Mode::kFull ? 1 : 0);
  if (mode == Pt2Mode::kFrozen)
    for (int p : space.active) allowed.at(p) = 1;
  for (int p = 0; p < n; ++p) {
    if (!allowed[p]) continue;
    (ref.is_occupied(p) ? ex.occ : ex.vir).push_back(p);
  }
  return ex;
}

// Shared second-order sum over a given numerator source.
template <class Single, class Double>
Pt2Result second_order(const Excitations& ex, const std::vector<double>& eps, const Pt2Options& opt,
                       Single&& single, Double&& dbl) {
  Pt2Result res;
  const double guard = opt.denominator_guard;

  std::vector<double> s_terms(ex.occ.size() * ex.vir.size(), 0.0);
  std::vector<double> s_max(s_terms.size(), 0.0);
  parallel_for(ex.occ.size(), opt.threads, [&](std::size_t oi) {
    for (std::size_t vi = 0; vi < ex.vir.size(); ++vi) {
      const int i = ex.occ[oi], a = ex.vir[vi];
      const double num = single(i, a);
      const double den = eps[i] - eps[a];
      if (std::abs(den) < guard) throw DegenerateDenominatorError(tuple_label({i, a}), den);
      s_terms[oi * ex.vir.size() + vi] = num * num / den;
      s_max[oi * ex.vir.size() + vi] = std::abs(num);
    }
  });

  std::vector<std::pair<int, int>> occ_pairs, vir_pairs;
  for (std::size_t x = 0; x < ex.occ.size(); ++x)
    for (std::size_t y = x + 1; y < ex.occ.size(); ++y) occ_pairs.emplace_back(ex.occ[x], ex.occ[y]);
  for (std::size_t x = 0; x < ex.vir.size(); ++x)
    for (std::size_t y = x + 1; y < ex.vir.size(); ++y) vir_pairs.emplace_back(ex.vir[x], ex.vir[y]);

  // Restricting to i<j, a<b absorbs the factor 1/4.
  std::vector<double> d_terms(occ_pairs.size(), 0.0);
  std::vector<double> d_max(occ_pairs.size(), 0.0);
  parallel_for(occ_pairs.size(), opt.threads, [&](std::size_t k) {
    const auto [i, j] = occ_pairs[k];
    CompensatedSum acc;
    double mx = 0.0;
    for (const auto& [a, b] : vir_pairs) {
      const double num = dbl(i, j, a, b);
      const double den = eps[i] + eps[j] - eps[a] - eps[b];
      if (std::abs(den) < guard) throw DegenerateDenominatorError(tuple_label({i, j, a, b}), den);
      acc.add(num * num / den);
      mx = std::max(mx, std::abs(num));
    }
    d_terms[k] = acc.value();
    d_max[k] = mx;
  });

  CompensatedSum s, d;
  for (double v : s_terms) s.add(v);
  for (double v : d_terms) d.add(v);
  res.singles = s.value();
  res.doubles = d.value();
  res.energy = res.singles + res.doubles;
  for (double v : s_max) res.max_fbar = std::max(res.max_fbar, v);
  for (double v : d_max) res.max_gammabar = std::max(res.max_gammabar, v);
  if (res.energy > 0.0) {
    std::ostringstream msg;
    msg << "second-order correction is positive (" << res.energy << " Ha)";
    res.warnings.push_back(msg.str());
  }
  return res;
}

}  // namespace

double reducible_3rdm(const RdmPair& rdm, int p, int q, int r, int s, int t, int u) {
  return r3(rdm, p, q, r, s, t, u);
}

double fbar(const RdmPair& rdm, const IntegralTable& h, const ReferenceDeterminant& ref, int i,
            int a) {
  check_same_basis(rdm, h);
  check_roles(ref, {i}, {a});
  return fbar_unchecked(rdm, h, i, a);
}

double gammabar(const RdmPair& rdm, const IntegralTable& h, const ReferenceDeterminant& ref, int i,
                int j, int a, int b) {
  check_same_basis(rdm, h);
  check_roles(ref, {i, j}, {a, b});
  return gammabar_unchecked(rdm, h, i, j, a, b);
}

std::vector<double> fock_diagonal(const IntegralTable& h, const ReferenceDeterminant& ref) {
  const int n = h.n_spin();
  std::vector<double> f(n);
  for (int p = 0; p < n; ++p) {
    double v = h.h(p, p);
    for (int j : ref.occupied) v += h.g(p, j, p, j);
    f[p] = v;
  }
  return f;
}

std::vector<double> transformed_energies(const RdmPair& rdm, const IntegralTable& h,
                                         const ReferenceDeterminant& ref) {
  check_same_basis(rdm, h);
  std::vector<double> eps = fock_diagonal(h, ref);
  const auto& occ = ref.occupied;
  const auto& vir = ref.virtual_;
  for (int i : occ) {
    // Correlation dressing enters with the sign that lowers occupied levels
    // and raises virtual ones for a correlated ground state.
    double v = 0.0;
    for (int a : vir) v += h.h(i, a) * rdm.rho1(a, i);
    for (int j : occ)
      for (int a : vir)
        for (int b : vir) v += 0.5 * h.g(i, j, a, b) * rdm.rho2(a, b, i, j);
    eps[i] += v;
  }
  for (int a : vir) {
    double v = 0.0;
    for (int i : occ) v -= h.h(a, i) * rdm.rho1(i, a);
    for (int i : occ)
      for (int j : occ)
        for (int b : vir) v -= 0.5 * h.g(a, b, i, j) * rdm.rho2(i, j, a, b);
    eps[a] += v;
  }
  return eps;
}

Pt2Result rdm_pt2(const RdmPair& rdm, const IntegralTable& h, const ReferenceDeterminant& ref,
                  const ActiveSpaceSpec& space, Pt2Mode mode, const Pt2Options& options) {
  check_same_basis(rdm, h);
  ref.validate(h);
  if (options.check_provenance && rdm.meta.provenance != Provenance::kPurified &&
      rdm.meta.provenance != Provenance::kExact)
    throw ValidationError("rdm_pt2: RDM must be purified, got provenance '" +
                          to_string(rdm.meta.provenance) + "'");
  if (mode == Pt2Mode::kFrozen) space.validate(h.n_spin());
  const auto ex = excitation_space(ref, space, mode, h.n_spin());
  const auto eps = transformed_energies(rdm, h, ref);
  return second_order(
      ex, eps, options, [&](int i, int a) { return fbar_unchecked(rdm, h, i, a); },
      [&](int i, int j, int a, int b) { return gammabar_unchecked(rdm, h, i, j, a, b); });
}

RdmPair embed_active_rdm(const RdmPair& active_rdm, const ActiveSpaceSpec& spec) {
  const int n = spec.n_spin();
  spec.validate(n);
  if (static_cast<int>(spec.active.size()) != active_rdm.n_orbitals())
    throw ValidationError("embed_active_rdm: active RDM size does not match the active space");
  const auto& core = spec.frozen_occupied;
  const auto& act = spec.active;
  const int na = static_cast<int>(act.size());

  RdmPair out(n, active_rdm.n_electrons + static_cast<int>(core.size()));
  out.meta = active_rdm.meta;
  for (int c : core) out.rho1(c, c) = 1.0;
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < na; ++y) out.rho1(act[x], act[y]) = active_rdm.rho1(x, y);

  for (int c : core)
    for (int d : core)
      if (c != d) {
        out.rho2(c, d, c, d) = 1.0;
        out.rho2(c, d, d, c) = -1.0;
      }
  for (int c : core)
    for (int x = 0; x < na; ++x)
      for (int y = 0; y < na; ++y) {
        const int p = act[x], q = act[y];
        const double v = active_rdm.rho1(x, y);
        out.rho2(c, p, c, q) = v;
        out.rho2(p, c, q, c) = v;
        out.rho2(c, p, q, c) = -v;
        out.rho2(p, c, c, q) = -v;
      }
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < na; ++y)
      for (int z = 0; z < na; ++z)
        for (int w = 0; w < na; ++w)
          out.rho2(act[x], act[y], act[z], act[w]) = active_rdm.rho2(x, y, z, w);
  return out;
}

double hf_mp2(const IntegralTable& h, const ReferenceDeterminant& ref, const Pt2Options& options) {
  ref.validate(h);
  const auto eps = fock_diagonal(h, ref);
  Excitations ex;
  ex.occ = ref.occupied;
  ex.vir = ref.virtual_;
  auto fock = [&](int p, int q) {
    double v = h.h(p, q);
    for (int j : ref.occupied) v += h.g(p, j, q, j);
    return v;
  };
  return second_order(
             ex, eps, options, [&](int i, int a) { return fock(i, a); },
             [&](int i, int j, int a, int b) { return h.g(i, j, a, b); })
      .energy;
}

}  // namespace rdmpt::pt2
