// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdmpt::vqe {

using Objective = std::function<double(const std::vector<double>&)>;

enum class OptimizerKind { kLinearTrustRegion, kNelderMead };

OptimizerKind optimizer_from_string(const std::string& s);
std::string to_string(OptimizerKind k);

struct OptimizerSettings {
  OptimizerKind kind = OptimizerKind::kLinearTrustRegion;
  double rhobeg = 0.5;
  double rhoend = 1e-4;
  int max_evaluations = 200;
};

struct Evaluation {
  std::vector<double> x;
  double value = 0.0;
};

struct OptimizerResult {
  std::vector<Evaluation> evaluations;  // in call order
  std::vector<double> best_x;
  double best_value = 0.0;
  double final_radius = 0.0;
  bool converged = false;  // radius reached rhoend before the evaluation cap
};

/// Raised when the objective throws; carries the parameters of the failing call.
class ObjectiveError : public std::runtime_error {
 public:
  ObjectiveError(const std::string& what, std::vector<double> x);
  const std::vector<double>& parameters() const noexcept { return x_; }

 private:
  std::vector<double> x_;
};

/// Derivative-free local minimization. The default method keeps a simplex of
/// n+1 points, fits a linear model through it, and steps a distance rho
/// downhill; rho halves when a step fails, and the search stops when rho falls
/// below rhoend or the evaluation budget is spent.
OptimizerResult minimize(const Objective& f, std::vector<double> start, const OptimizerSettings& settings);

}  // namespace rdmpt::vqe
