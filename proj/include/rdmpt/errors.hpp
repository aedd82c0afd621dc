// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rdmpt {

/// Malformed input text (FCIDUMP header, config files).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Input that parses but violates a contract (index range, dimensions, roles).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method stopped without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what + " (residual " + std::to_string(residual) +
                           " after " + std::to_string(iterations) +
                           " iterations)"),
        residual_(residual),
        iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Shot tables do not cover every Pauli string needed for an RDM.
class CoverageError : public std::runtime_error {
 public:
  explicit CoverageError(std::vector<std::string> missing);
  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

/// An energy denominator fell below the guard threshold.
class DegenerateDenominatorError : public std::runtime_error {
 public:
  DegenerateDenominatorError(const std::string& tuple, double value)
      : std::runtime_error("degenerate denominator " + std::to_string(value) +
                           " Ha for orbitals " + tuple),
        tuple_(tuple),
        value_(value) {}
  const std::string& tuple() const noexcept { return tuple_; }
  double value() const noexcept { return value_; }

 private:
  std::string tuple_;
  double value_;
};

class FixtureNotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rdmpt
