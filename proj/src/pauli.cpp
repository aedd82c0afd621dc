// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/pauli.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "rdmpt/errors.hpp"

namespace rdmpt::qsim {

namespace {

constexpr Complex kI{0.0, 1.0};

// Single-qubit Pauli as (x,z) bits: I=(0,0) X=(1,0) Z=(0,1) Y=(1,1).
int code(bool x, bool z) { return (x ? 1 : 0) | (z ? 2 : 0); }

// Phase of P_a * P_b for single-qubit Paulis indexed by code().
Complex product_phase(int a, int b) {
  // codes: 0=I 1=X 2=Z 3=Y
  static const Complex table[4][4] = {
      {1, 1, 1, 1},          // I*
      {1, 1, -kI, kI},       // X*I X*X X*Z=-iY X*Y=iZ
      {1, kI, 1, -kI},       // Z*I Z*X=iY Z*Z Z*Y=-iX
      {1, -kI, kI, 1},       // Y*I Y*X=-iZ Y*Z=iX Y*Y
  };
  return table[a][b];
}

}  // namespace

PauliString PauliString::from_label(const std::string& label, Complex c) {
  PauliString p(static_cast<int>(label.size()));
  p.coeff = c;
  for (std::size_t k = 0; k < label.size(); ++k)
    p.set(static_cast<int>(label.size() - 1 - k), label[k]);
  return p;
}

char PauliString::op(int q) const noexcept {
  const bool bx = (x >> q) & 1u, bz = (z >> q) & 1u;
  if (bx && bz) return 'Y';
  if (bx) return 'X';
  if (bz) return 'Z';
  return 'I';
}

void PauliString::set(int q, char o) {
  if (q < 0 || q >= n_qubits) throw ValidationError("PauliString: qubit out of range");
  const std::uint64_t m = std::uint64_t{1} << q;
  x &= ~m;
  z &= ~m;
  switch (o) {
    case 'I': break;
    case 'X': x |= m; break;
    case 'Y': x |= m; z |= m; break;
    case 'Z': z |= m; break;
    default: throw ValidationError(std::string("PauliString: bad label '") + o + "'");
  }
}

std::string PauliString::label() const {
  std::string s;
  for (int q = n_qubits - 1; q >= 0; --q) s += op(q);
  return s;
}

std::string PauliString::sparse_label() const {
  std::string s;
  for (int q = n_qubits - 1; q >= 0; --q) {
    const char o = op(q);
    if (o == 'I') continue;
    if (!s.empty()) s += ' ';
    s += o;
    s += std::to_string(q);
  }
  return s.empty() ? "I" : s;
}

bool PauliString::qubitwise_commutes(const PauliString& o) const noexcept {
  const std::uint64_t both = support() & o.support();
  return ((x ^ o.x) & both) == 0 && ((z ^ o.z) & both) == 0;
}

bool PauliString::commutes(const PauliString& o) const noexcept {
  return (std::popcount(x & o.z) + std::popcount(z & o.x)) % 2 == 0;
}

PauliString operator*(const PauliString& a, const PauliString& b) {
  if (a.n_qubits != b.n_qubits) throw ValidationError("PauliString product: qubit count mismatch");
  PauliString out(a.n_qubits);
  out.x = a.x ^ b.x;
  out.z = a.z ^ b.z;
  Complex phase = a.coeff * b.coeff;
  const std::uint64_t active = a.support() & b.support();
  for (int q = 0; q < a.n_qubits; ++q) {
    if (!((active >> q) & 1u)) continue;
    phase *= product_phase(code((a.x >> q) & 1u, (a.z >> q) & 1u),
                           code((b.x >> q) & 1u, (b.z >> q) & 1u));
  }
  out.coeff = phase;
  return out;
}

PauliSum simplify(const PauliSum& terms, double tol) {
  std::map<PauliKey, PauliString> acc;
  for (const auto& t : terms) {
    auto [it, inserted] = acc.try_emplace(key_of(t), t);
    if (!inserted) it->second.coeff += t.coeff;
  }
  PauliSum out;
  for (auto& [k, t] : acc)
    if (std::abs(t.coeff) > tol) out.push_back(t);
  return out;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  PauliSum out;
  out.reserve(a.size() * b.size());
  for (const auto& p : a)
    for (const auto& q : b) out.push_back(p * q);
  return simplify(out);
}

PauliSum adjoint(const PauliSum& a) {
  PauliSum out(a);
  for (auto& t : out) t.coeff = std::conj(t.coeff);
  return out;
}

Eigen::MatrixXcd to_matrix(const PauliString& p) {
  const std::size_t dim = std::size_t{1} << p.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  // P|b> = coeff * i^{#Y} * (-1)^{popcount(b & z)} |b ^ x>, with Y = i X Z.
  const int ny = std::popcount(p.x & p.z);
  Complex iy = 1.0;
  for (int k = 0; k < ny; ++k) iy *= kI;
  for (std::size_t b = 0; b < dim; ++b) {
    const double sign = (std::popcount(b & p.z) % 2) ? -1.0 : 1.0;
    m(b ^ p.x, b) += p.coeff * iy * sign;
  }
  return m;
}

Eigen::MatrixXcd to_matrix(const PauliSum& s, int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : s) m += to_matrix(t);
  return m;
}

PauliSum jw_operator(const FermionProduct& product, int n_qubits) {
  if (n_qubits <= 0 || n_qubits > 64) throw ValidationError("jw_operator: bad qubit count");
  PauliString id(n_qubits);
  PauliSum acc{id};
  for (const auto& op : product) {
    if (op.mode < 0 || op.mode >= n_qubits)
      throw ValidationError("jw_operator: mode " + std::to_string(op.mode) + " outside 0.." +
                            std::to_string(n_qubits - 1));
    PauliString zs(n_qubits);
    zs.z = (std::uint64_t{1} << op.mode) - 1;
    PauliString xp = zs, yp = zs;
    xp.set(op.mode, 'X');
    yp.set(op.mode, 'Y');
    xp.coeff = 0.5;
    yp.coeff = op.creation ? Complex{0.0, -0.5} : Complex{0.0, 0.5};
    acc = multiply(acc, PauliSum{xp, yp});
  }
  return acc;
}

}  // namespace rdmpt::qsim
