// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/statevector.hpp"

#include <bit>
#include <cmath>

#include "rdmpt/errors.hpp"

namespace rdmpt::qsim {

namespace gates {

namespace {
Gate one(std::string name, int q, Eigen::Matrix2cd m) { return {std::move(name), {q}, m}; }
Gate two(std::string name, int a, int b, Eigen::Matrix4cd m) {
  if (a == b) throw ValidationError("two-qubit gate on a single qubit");
  return {std::move(name), {a, b}, m};
}
}  // namespace

Gate x(int q) {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return one("x", q, m);
}

Gate h(int q) {
  Eigen::Matrix2cd m;
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return one("h", q, m);
}

Gate sdg(int q) {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, Complex(0, -1);
  return one("sdg", q, m);
}

Gate ry(int q, double theta) {
  Eigen::Matrix2cd m;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m << c, -s, s, c;
  return one("ry", q, m);
}

Gate pauli(int q, char op) {
  Eigen::Matrix2cd m;
  switch (op) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw ValidationError("unknown Pauli gate");
  }
  return one(std::string(1, static_cast<char>(op + 32)), q, m);
}

Gate cnot(int control, int target) {
  // index = bit(control) + 2*bit(target)
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 1;  // c=0,t=0
  m(2, 2) = 1;  // c=0,t=1
  m(3, 1) = 1;  // c=1,t=0 -> c=1,t=1
  m(1, 3) = 1;
  return two("cx", control, target, m);
}

Gate cz(int a, int b) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m(3, 3) = -1;
  return two("cz", a, b, m);
}

Gate givens(int a, int b, double theta) {
  // index = bit(a) + 2*bit(b); |1_a 0_b> = 1, |0_a 1_b> = 2
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m(1, 1) = c;
  m(2, 1) = s;
  m(1, 2) = -s;
  m(2, 2) = c;
  return two("givens", a, b, m);
}

}  // namespace gates

StateVector::StateVector(int n) : n_(n), amps_(std::size_t{1} << n, Complex{0.0}) {
  if (n <= 0 || n > 24) throw ValidationError("StateVector: unsupported qubit count");
  amps_[0] = 1.0;
}

StateVector StateVector::basis_state(int n, std::uint64_t bits) {
  StateVector s(n);
  s.amps_[0] = 0.0;
  s.amps_.at(bits) = 1.0;
  return s;
}

void StateVector::apply_1q(int q, const Eigen::MatrixXcd& m) {
  const std::size_t bit = std::size_t{1} << q;
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amps_[i], a1 = amps_[i | bit];
    amps_[i] = m00 * a0 + m01 * a1;
    amps_[i | bit] = m10 * a0 + m11 * a1;
  }
}

void StateVector::apply_2q(int q0, int q1, const Eigen::MatrixXcd& m) {
  const std::size_t b0 = std::size_t{1} << q0, b1 = std::size_t{1} << q1;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & b0) || (i & b1)) continue;
    const std::size_t idx[4] = {i, i | b0, i | b1, i | b0 | b1};
    Complex in[4], out[4];
    for (int k = 0; k < 4; ++k) in[k] = amps_[idx[k]];
    for (int r = 0; r < 4; ++r) {
      out[r] = 0.0;
      for (int c = 0; c < 4; ++c) out[r] += m(r, c) * in[c];
    }
    for (int k = 0; k < 4; ++k) amps_[idx[k]] = out[k];
  }
}

void StateVector::apply(const Gate& g) {
  for (int q : g.qubits)
    if (q < 0 || q >= n_) throw ValidationError("gate '" + g.name + "' addresses a missing qubit");
  if (g.arity() == 1)
    apply_1q(g.qubits[0], g.matrix);
  else if (g.arity() == 2)
    apply_2q(g.qubits[0], g.qubits[1], g.matrix);
  else
    throw ValidationError("only one- and two-qubit gates are supported");
}

void StateVector::apply(const Circuit& c) {
  if (c.n_qubits != n_) throw ValidationError("circuit/state qubit count mismatch");
  for (const auto& g : c.gates) apply(g);
}

void StateVector::apply_pauli(const PauliString& p) {
  // P|b> = coeff * i^{#Y} (-1)^{popcount(b & z)} |b ^ x>
  Complex phase = p.coeff;
  for (int k = 0; k < std::popcount(p.x & p.z); ++k) phase *= Complex(0, 1);
  std::vector<Complex> out(amps_.size());
  for (std::size_t b = 0; b < amps_.size(); ++b) {
    const double sign = (std::popcount(b & p.z) % 2) ? -1.0 : 1.0;
    out[b ^ p.x] = phase * sign * amps_[b];
  }
  amps_.swap(out);
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

Complex StateVector::expectation(const PauliString& p) const {
  Complex phase = p.coeff;
  for (int k = 0; k < std::popcount(p.x & p.z); ++k) phase *= Complex(0, 1);
  Complex acc = 0.0;
  for (std::size_t b = 0; b < amps_.size(); ++b) {
    const double sign = (std::popcount(b & p.z) % 2) ? -1.0 : 1.0;
    acc += std::conj(amps_[b ^ p.x]) * sign * amps_[b];
  }
  return phase * acc;
}

Complex StateVector::expectation(const PauliSum& s) const {
  Complex acc = 0.0;
  for (const auto& t : s) acc += expectation(t);
  return acc;
}

Circuit build_ansatz(const AnsatzParameters& p) {
  Circuit c{4, {}};
  // Hartree-Fock: both electrons in spatial orbital 0.
  c.add(gates::x(0));
  c.add(gates::x(1));
  // Paired double excitation 0a0b -> 1a1b, exact on the HF input.
  c.add(gates::cnot(0, 1));
  c.add(gates::givens(0, 2, p.theta0));
  c.add(gates::cnot(0, 1));
  c.add(gates::cnot(2, 3));
  // Fermionic single excitations; the CZ pair supplies the Jordan-Wigner
  // parity of the spin orbital that sits between the two modes.
  c.add(gates::cz(1, 2));
  c.add(gates::givens(0, 2, p.theta1));
  c.add(gates::cz(1, 2));
  c.add(gates::cz(2, 3));
  c.add(gates::givens(1, 3, p.theta2));
  c.add(gates::cz(2, 3));
  return c;
}

StateVector simulate(const Circuit& c) {
  StateVector s(c.n_qubits);
  s.apply(c);
  return s;
}

}  // namespace rdmpt::qsim
