// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rdmpt::qsim {

using Complex = std::complex<double>;

/// Tensor product of single-qubit Paulis times a complex coefficient.
///
/// Qubit k is X when bit k of x is set and Z when bit k of z is set; both bits
/// set means Y. Up to 64 qubits.
struct PauliString {
  int n_qubits = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  Complex coeff{1.0, 0.0};

  PauliString() = default;
  explicit PauliString(int n) : n_qubits(n) {}
  /// From a dense label written qubit n-1 first, e.g. "IXYZ" has Z on qubit 0.
  static PauliString from_label(const std::string& label, Complex coeff = 1.0);

  char op(int qubit) const noexcept;
  void set(int qubit, char op);
  std::uint64_t support() const noexcept { return x | z; }
  bool is_identity() const noexcept { return support() == 0; }

  /// Dense label, qubit n-1 first; coefficient not included.
  std::string label() const;
  /// Compact label listing only non-identity factors, highest qubit first ("X1 Y0").
  std::string sparse_label() const;

  /// Operator part equal (ignores coefficients).
  bool same_operator(const PauliString& o) const noexcept {
    return n_qubits == o.n_qubits && x == o.x && z == o.z;
  }
  bool qubitwise_commutes(const PauliString& o) const noexcept;
  bool commutes(const PauliString& o) const noexcept;
};

/// Exact product including phase.
PauliString operator*(const PauliString& a, const PauliString& b);

/// Key usable for maps: operator part only.
struct PauliKey {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  friend auto operator<=>(const PauliKey&, const PauliKey&) = default;
};
inline PauliKey key_of(const PauliString& p) { return {p.x, p.z}; }

using PauliSum = std::vector<PauliString>;

/// Merges equal operators and drops terms with |coeff| below tol; sorted by key.
PauliSum simplify(const PauliSum& terms, double tol = 1e-14);
PauliSum multiply(const PauliSum& a, const PauliSum& b);
PauliSum adjoint(const PauliSum& a);

Eigen::MatrixXcd to_matrix(const PauliString& p);
Eigen::MatrixXcd to_matrix(const PauliSum& s, int n_qubits);

/// Fermionic ladder operator a_mode (creation = false) or a+_mode.
struct LadderOp {
  int mode = 0;
  bool creation = false;
};
inline LadderOp cre(int p) { return {p, true}; }
inline LadderOp ann(int p) { return {p, false}; }

/// Ordered product of ladder operators, leftmost first.
using FermionProduct = std::vector<LadderOp>;

/// Jordan-Wigner image of a product of ladder operators on n_qubits qubits,
/// using a+_p = 1/2 (X_p - i Y_p) Z_{p-1} ... Z_0. Nilpotent products give an
/// empty sum.
PauliSum jw_operator(const FermionProduct& product, int n_qubits);

}  // namespace rdmpt::qsim
