// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdmpt/pauli.hpp"

namespace rdmpt::qsim {

/// A one- or two-qubit gate. For two-qubit gates the matrix acts on the basis
/// index bit(qubits[0]) + 2*bit(qubits[1]).
struct Gate {
  std::string name;
  std::vector<int> qubits;
  Eigen::MatrixXcd matrix;

  int arity() const noexcept { return static_cast<int>(qubits.size()); }
};

namespace gates {
Gate x(int q);
Gate h(int q);
Gate sdg(int q);
Gate ry(int q, double theta);
Gate cnot(int control, int target);
Gate cz(int a, int b);
/// Real rotation mixing |1_a 0_b> and |0_a 1_b>:
/// |1_a> -> cos(theta/2)|1_a> + sin(theta/2)|1_b>.
Gate givens(int a, int b, double theta);
Gate pauli(int q, char op);
}  // namespace gates

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  void add(Gate g) { gates.push_back(std::move(g)); }
};

class StateVector {
 public:
  explicit StateVector(int n_qubits);
  /// Computational basis state |bits>, qubit k = bit k.
  static StateVector basis_state(int n_qubits, std::uint64_t bits);

  int n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
  std::vector<Complex>& amplitudes() noexcept { return amps_; }
  Eigen::Map<const Eigen::VectorXcd> as_vector() const {
    return {amps_.data(), static_cast<Eigen::Index>(amps_.size())};
  }

  void apply(const Gate& g);
  void apply(const Circuit& c);
  void apply_pauli(const PauliString& p);

  double norm_squared() const;
  std::vector<double> probabilities() const;
  Complex expectation(const PauliString& p) const;
  Complex expectation(const PauliSum& s) const;

 private:
  void apply_1q(int q, const Eigen::MatrixXcd& m);
  void apply_2q(int q0, int q1, const Eigen::MatrixXcd& m);

  int n_;
  std::vector<Complex> amps_;
};

/// Parameters of the three-angle UCC-style ansatz on four qubits.
struct AnsatzParameters {
  double theta0 = 0.0;  // paired double excitation
  double theta1 = 0.0;  // alpha single excitation
  double theta2 = 0.0;  // beta single excitation
};

/// HF preparation (qubits 0,1 occupied) followed by the entangler
///   double:  |0011> -> cos(t0/2)|0011> + sin(t0/2)|1100>
///   alpha:   fermionic Givens rotation between spin orbitals 0 and 2
///   beta:    fermionic Givens rotation between spin orbitals 1 and 3.
/// Qubit k holds spin orbital k (alpha/beta interleaved).
Circuit build_ansatz(const AnsatzParameters& params);

/// Noiseless state produced by a circuit acting on |0...0>.
StateVector simulate(const Circuit& c);

}  // namespace rdmpt::qsim
