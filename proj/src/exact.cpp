// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "rdmpt/errors.hpp"

namespace rdmpt::exact {

using hamio::IntegralTable;

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

bool split_counts(int n_orbitals, int n_electrons, int ms2, int& na, int& nb) {
  if (n_orbitals % 2 != 0 || (n_electrons + ms2) % 2 != 0) return false;
  na = (n_electrons + ms2) / 2;
  nb = (n_electrons - ms2) / 2;
  return na >= 0 && nb >= 0 && na <= n_orbitals / 2 && nb <= n_orbitals / 2;
}

std::vector<std::uint64_t> strings(int n, int k) {
  std::vector<std::uint64_t> out;
  if (k == 0) return {0};
  std::uint64_t s = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (s < limit) {
    out.push_back(s);
    // Next bit permutation with the same popcount.
    const std::uint64_t t = s | (s - 1);
    s = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(s) + 1));
  }
  return out;
}

std::uint64_t interleave(std::uint64_t alpha, std::uint64_t beta, int n_spatial) {
  std::uint64_t d = 0;
  for (int k = 0; k < n_spatial; ++k) {
    if (alpha >> k & 1) d |= std::uint64_t{1} << (2 * k);
    if (beta >> k & 1) d |= std::uint64_t{1} << (2 * k + 1);
  }
  return d;
}

inline int parity_below(std::uint64_t state, int p) {
  return std::popcount(state & ((std::uint64_t{1} << p) - 1)) & 1;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n / 64, 1)));
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

// Calls fn(D', <D'|H|D>) for D itself and every determinant connected to it.
template <class Fn>
void connections(const IntegralTable& h, std::uint64_t d, Fn&& fn) {
  const int n = h.n_spin();
  std::vector<int> occ, vir;
  for (int p = 0; p < n; ++p) (d >> p & 1 ? occ : vir).push_back(p);

  double diag = 0.0;
  for (std::size_t x = 0; x < occ.size(); ++x) {
    diag += h.h(occ[x], occ[x]);
    for (std::size_t y = x + 1; y < occ.size(); ++y) diag += h.g(occ[x], occ[y], occ[x], occ[y]);
  }
  fn(d, diag);

  for (int i : occ)
    for (int a : vir) {
      if (spin_of(i) != spin_of(a)) continue;
      double v = h.h(a, i);
      for (int k : occ) v += h.g(a, k, i, k);
      if (v == 0.0) continue;
      auto s1 = apply_ladder(d, i, false);
      auto s2 = apply_ladder(s1->first, a, true);
      fn(s2->first, s1->second * s2->second * v);
    }

  for (std::size_t x = 0; x < occ.size(); ++x)
    for (std::size_t y = x + 1; y < occ.size(); ++y) {
      const int i = occ[x], j = occ[y];
      for (std::size_t u = 0; u < vir.size(); ++u)
        for (std::size_t w = u + 1; w < vir.size(); ++w) {
          const int a = vir[u], b = vir[w];
          const double v = h.g(a, b, i, j);
          if (v == 0.0) continue;
          // D' = a+_a a+_b a_j a_i D
          auto s = apply_ladder(d, i, false);
          int sign = s->second;
          s = apply_ladder(s->first, j, false);
          sign *= s->second;
          s = apply_ladder(s->first, b, true);
          sign *= s->second;
          s = apply_ladder(s->first, a, true);
          sign *= s->second;
          fn(s->first, sign * v);
        }
    }
}

void check_table(const IntegralTable& h) {
  if (h.n_spin() > 64) throw ValidationError("exact: more than 64 spin orbitals");
}

}  // namespace

std::optional<std::pair<std::uint64_t, int>> apply_ladder(std::uint64_t state, int p, bool create) {
  const std::uint64_t bit = std::uint64_t{1} << p;
  if (create == static_cast<bool>(state & bit)) return std::nullopt;
  const int sign = parity_below(state, p) ? -1 : 1;
  return std::pair{state ^ bit, sign};
}

double SectorBasis::dimension(int n_orbitals, int n_electrons, int ms2) {
  int na = 0, nb = 0;
  if (!split_counts(n_orbitals, n_electrons, ms2, na, nb)) return 0.0;
  return binomial(n_orbitals / 2, na) * binomial(n_orbitals / 2, nb);
}

SectorBasis::SectorBasis(int n, int ne, int m) : n_orbitals(n), n_electrons(ne), ms2(m) {
  int na = 0, nb = 0;
  if (n > 64 || !split_counts(n, ne, m, na, nb))
    throw ValidationError("SectorBasis: inconsistent orbital count, electron count and spin");
  if (dimension(n, ne, m) > kMaxSectorDimension) {
    std::ostringstream msg;
    msg << "sector dimension " << dimension(n, ne, m) << " exceeds the exact-diagonalization cap of "
        << kMaxSectorDimension << "; freeze core orbitals (freeze_core) to reduce it";
    throw ValidationError(msg.str());
  }
  const auto as = strings(n / 2, na);
  const auto bs = strings(n / 2, nb);
  states.reserve(as.size() * bs.size());
  for (auto a : as)
    for (auto b : bs) states.push_back(interleave(a, b, n / 2));
  std::sort(states.begin(), states.end());
}

std::optional<std::size_t> SectorBasis::index(std::uint64_t state) const {
  auto it = std::lower_bound(states.begin(), states.end(), state);
  if (it == states.end() || *it != state) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

bool SectorBasis::in_sector(std::uint64_t state) const {
  int na = 0, nb = 0;
  for (int p = 0; p < n_orbitals; ++p)
    if (state >> p & 1) ++(spin_of(p) == 0 ? na : nb);
  return na + nb == n_electrons && na - nb == ms2 && (state >> n_orbitals) == 0;
}

Eigen::MatrixXd sector_hamiltonian(const IntegralTable& h, const SectorBasis& basis) {
  check_table(h);
  if (basis.n_orbitals != h.n_spin()) throw ValidationError("sector_hamiltonian: size mismatch");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    connections(h, basis.states[col], [&](std::uint64_t d, double v) {
      if (auto row = basis.index(d)) m(static_cast<Eigen::Index>(*row), col) += v;
    });
  return m;
}

Eigen::VectorXd apply_hamiltonian(const IntegralTable& h, const SectorBasis& basis,
                                  const Eigen::VectorXd& c, unsigned threads) {
  check_table(h);
  Eigen::VectorXd sigma(c.size());
  // Gather form: row I collects <D_J|H|D_I> c_J, using symmetry of H.
  parallel_for(basis.size(), threads, [&](std::size_t row) {
    double acc = 0.0;
    connections(h, basis.states[row], [&](std::uint64_t d, double v) {
      if (auto col = basis.index(d)) acc += v * c[static_cast<Eigen::Index>(*col)];
    });
    sigma[static_cast<Eigen::Index>(row)] = acc;
  });
  return sigma;
}

namespace {

FciResult davidson(const IntegralTable& h, SectorBasis basis, const FciOptions& opt) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::VectorXd diag(dim);
  parallel_for(basis.size(), opt.threads, [&](std::size_t k) {
    double v = 0.0;
    connections(h, basis.states[k], [&](std::uint64_t d, double x) {
      if (d == basis.states[k]) v += x;
    });
    diag[static_cast<Eigen::Index>(k)] = v;
  });

  Eigen::Index start = 0;
  diag.minCoeff(&start);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim, 1);
  v(start, 0) = 1.0;
  Eigen::MatrixXd hv(dim, 1);
  hv.col(0) = apply_hamiltonian(h, basis, v.col(0), opt.threads);

  double theta = 0.0, residual = 0.0;
  Eigen::VectorXd x;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const Eigen::MatrixXd t = v.transpose() * hv;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (t + t.transpose()));
    theta = es.eigenvalues()(0);
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    x = v * y;
    Eigen::VectorXd r = hv * y - theta * x;
    residual = r.norm();
    if (residual < opt.residual_tol) {
      FciResult res;
      res.energy = theta + h.e_nuclear;
      res.amplitudes = x / x.norm();
      res.basis = std::move(basis);
      res.iterations = it;
      return res;
    }
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double den = theta - diag[k];
      r[k] /= std::abs(den) > 1e-8 ? den : 1e-8;
    }
    if (v.cols() >= opt.max_subspace) {
      const Eigen::VectorXd hx = hv * y;
      v = x.normalized();
      hv = hx / x.norm();
    }
    for (int pass = 0; pass < 2; ++pass) r -= v * (v.transpose() * r);
    const double nr = r.norm();
    if (nr < 1e-14) break;
    r /= nr;
    v.conservativeResize(Eigen::NoChange, v.cols() + 1);
    v.col(v.cols() - 1) = r;
    hv.conservativeResize(Eigen::NoChange, hv.cols() + 1);
    hv.col(hv.cols() - 1) = apply_hamiltonian(h, basis, r, opt.threads);
  }
  throw ConvergenceError("Davidson diagonalization did not converge", residual, opt.max_iter);
}

}  // namespace

FciResult fci_ground_state(const IntegralTable& h, int n_electrons, int ms2, const FciOptions& options) {
  check_table(h);
  SectorBasis basis(h.n_spin(), n_electrons, ms2);
  if (basis.size() == 0) throw ValidationError("fci_ground_state: empty sector");
  if (basis.size() < kDenseThreshold) {
    const Eigen::MatrixXd m = sector_hamiltonian(h, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
    FciResult res;
    res.energy = es.eigenvalues()(0) + h.e_nuclear;
    res.amplitudes = es.eigenvectors().col(0);
    res.basis = std::move(basis);
    return res;
  }
  return davidson(h, std::move(basis), options);
}

RdmPair rdms_from_amplitudes(const Eigen::VectorXd& c, const SectorBasis& basis) {
  if (static_cast<std::size_t>(c.size()) != basis.size())
    throw ValidationError("rdms_from_amplitudes: amplitude vector does not match the basis");
  const int n = basis.n_orbitals;
  RdmPair rdm(n, basis.n_electrons);
  rdm.meta.provenance = Provenance::kExact;
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const double cj = c[static_cast<Eigen::Index>(col)];
    if (cj == 0.0) continue;
    const std::uint64_t d = basis.states[col];
    for (int q = 0; q < n; ++q) {
      auto s1 = apply_ladder(d, q, false);
      if (!s1) continue;
      for (int p = 0; p < n; ++p) {
        if (spin_of(p) != spin_of(q)) continue;
        auto s2 = apply_ladder(s1->first, p, true);
        if (!s2) continue;
        if (auto row = basis.index(s2->first))
          rdm.rho1(p, q) += c[static_cast<Eigen::Index>(*row)] * cj * s1->second * s2->second;
      }
    }
    // rho2(p,q,r,s) = <a+_p a+_q a_s a_r>, accumulated for p<q, r<s.
    for (int r = 0; r < n; ++r)
      for (int s = r + 1; s < n; ++s) {
        auto t1 = apply_ladder(d, r, false);
        if (!t1) continue;
        auto t2 = apply_ladder(t1->first, s, false);
        if (!t2) continue;
        const int sign_rs = t1->second * t2->second;
        for (int p = 0; p < n; ++p)
          for (int q = p + 1; q < n; ++q) {
            if (spin_of(p) + spin_of(q) != spin_of(r) + spin_of(s)) continue;
            auto t3 = apply_ladder(t2->first, q, true);
            if (!t3) continue;
            auto t4 = apply_ladder(t3->first, p, true);
            if (!t4) continue;
            auto row = basis.index(t4->first);
            if (!row) continue;
            const double v = c[static_cast<Eigen::Index>(*row)] * cj * sign_rs * t3->second * t4->second;
            rdm.rho2(p, q, r, s) += v;
            rdm.rho2(q, p, r, s) -= v;
            rdm.rho2(p, q, s, r) -= v;
            rdm.rho2(q, p, s, r) += v;
          }
      }
  }
  return rdm;
}

}  // namespace rdmpt::exact
