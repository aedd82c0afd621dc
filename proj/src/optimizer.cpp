// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "rdmpt/errors.hpp"

namespace rdmpt::vqe {

namespace {

std::string format_x(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
  os << ')';
  return os.str();
}

class Budget {
 public:
  Budget(const Objective& f, int cap, OptimizerResult& res) : f_(f), cap_(cap), res_(res) {}

  bool exhausted() const { return static_cast<int>(res_.evaluations.size()) >= cap_; }

  double operator()(const std::vector<double>& x) {
    double v = 0.0;
    try {
      v = f_(x);
    } catch (const std::exception& e) {
      throw ObjectiveError(std::string("objective failed at ") + format_x(x) + ": " + e.what(), x);
    }
    res_.evaluations.push_back({x, v});
    if (res_.evaluations.size() == 1 || v < res_.best_value) {
      res_.best_value = v;
      res_.best_x = x;
    }
    return v;
  }

 private:
  const Objective& f_;
  int cap_;
  OptimizerResult& res_;
};

struct Vertex {
  Eigen::VectorXd x;
  double f;
};

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void linear_trust_region(Budget& eval, const std::vector<double>& start, const OptimizerSettings& s,
                         OptimizerResult& res) {
  const auto n = static_cast<Eigen::Index>(start.size());
  double rho = s.rhobeg;
  std::vector<Vertex> simplex;

  auto rebuild = [&](Vertex centre) {
    simplex.assign(1, centre);
    for (Eigen::Index k = 0; k < n && !eval.exhausted(); ++k) {
      Eigen::VectorXd x = centre.x;
      x[k] += rho;
      simplex.push_back({x, eval(to_std(x))});
    }
  };
  auto best_index = [&] {
    std::size_t b = 0;
    for (std::size_t k = 1; k < simplex.size(); ++k)
      if (simplex[k].f < simplex[b].f) b = k;
    return b;
  };

  Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(start.data(), n);
  if (eval.exhausted()) return;
  rebuild({x0, eval(start)});

  while (!eval.exhausted()) {
    if (simplex.size() < static_cast<std::size_t>(n + 1)) break;
    const std::size_t b = best_index();
    const Vertex best = simplex[b];

    // Linear model through the simplex: (x_k - x_b) . g = f_k - f_b.
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index r = 0, k = 0; k < static_cast<Eigen::Index>(simplex.size()); ++k) {
      if (static_cast<std::size_t>(k) == b) continue;
      a.row(r) = (simplex[k].x - best.x).transpose();
      rhs[r] = simplex[k].f - best.f;
      ++r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    const bool degenerate = lu.rank() < n || lu.rcond() < 1e-8;
    Eigen::VectorXd g = degenerate ? Eigen::VectorXd::Zero(n) : Eigen::VectorXd(lu.solve(rhs));

    if (!degenerate && g.norm() > 0.0) {
      const Eigen::VectorXd trial = best.x - rho * g / g.norm();
      const double ft = eval(to_std(trial));
      if (ft < best.f) {
        // Drop the vertex farthest from the new best point.
        std::size_t far = 0;
        double dmax = -1.0;
        for (std::size_t k = 0; k < simplex.size(); ++k) {
          const double d = (simplex[k].x - trial).norm();
          if (d > dmax) {
            dmax = d;
            far = k;
          }
        }
        simplex[far] = {trial, ft};
        // Keep the simplex within a few radii of the incumbent.
        bool spread = false;
        for (const auto& v : simplex) spread |= (v.x - trial).norm() > 2.5 * rho;
        if (spread && !eval.exhausted()) rebuild({trial, ft});
        continue;
      }
    }
    rho *= 0.5;
    if (rho < s.rhoend) break;
    rebuild(simplex[best_index()]);
  }
  res.final_radius = rho;
  res.converged = rho < s.rhoend;
}

void nelder_mead(Budget& eval, const std::vector<double>& start, const OptimizerSettings& s,
                 OptimizerResult& res) {
  const auto n = static_cast<Eigen::Index>(start.size());
  std::vector<Vertex> simplex;
  Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(start.data(), n);
  if (eval.exhausted()) return;
  simplex.push_back({x0, eval(start)});
  for (Eigen::Index k = 0; k < n && !eval.exhausted(); ++k) {
    Eigen::VectorXd x = x0;
    x[k] += s.rhobeg;
    simplex.push_back({x, eval(to_std(x))});
  }
  double size = s.rhobeg;
  while (!eval.exhausted() && simplex.size() == static_cast<std::size_t>(n + 1)) {
    std::sort(simplex.begin(), simplex.end(), [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
    size = 0.0;
    for (const auto& v : simplex) size = std::max(size, (v.x - simplex.front().x).norm());
    if (size < s.rhoend) break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) centroid += simplex[k].x;
    centroid /= static_cast<double>(n);
    Vertex& worst = simplex.back();
    const Eigen::VectorXd xr = centroid + (centroid - worst.x);
    const double fr = eval(to_std(xr));
    if (fr < simplex.front().f) {
      if (eval.exhausted()) { worst = {xr, fr}; break; }
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst.x);
      const double fe = eval(to_std(xe));
      worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[n - 1].f) {
      worst = {xr, fr};
    } else {
      if (eval.exhausted()) break;
      const Eigen::VectorXd xc = centroid + 0.5 * (worst.x - centroid);
      const double fc = eval(to_std(xc));
      if (fc < worst.f) {
        worst = {xc, fc};
      } else {
        for (std::size_t k = 1; k < simplex.size() && !eval.exhausted(); ++k) {
          simplex[k].x = simplex.front().x + 0.5 * (simplex[k].x - simplex.front().x);
          simplex[k].f = eval(to_std(simplex[k].x));
        }
      }
    }
  }
  res.final_radius = size;
  res.converged = size < s.rhoend;
}

}  // namespace

ObjectiveError::ObjectiveError(const std::string& what, std::vector<double> x)
    : std::runtime_error(what), x_(std::move(x)) {}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "cobyla" || s == "linear_trust_region") return OptimizerKind::kLinearTrustRegion;
  if (s == "nelder_mead") return OptimizerKind::kNelderMead;
  throw ValidationError("unknown optimizer '" + s + "'");
}

std::string to_string(OptimizerKind k) {
  return k == OptimizerKind::kNelderMead ? "nelder_mead" : "cobyla";
}

OptimizerResult minimize(const Objective& f, std::vector<double> start, const OptimizerSettings& settings) {
  if (start.empty()) throw ValidationError("minimize: empty parameter vector");
  if (!(settings.rhobeg > 0.0) || !(settings.rhoend > 0.0) || settings.rhoend > settings.rhobeg)
    throw ValidationError("minimize: need 0 < rhoend <= rhobeg");
  if (settings.max_evaluations < 1) throw ValidationError("minimize: max_evaluations must be positive");
  OptimizerResult res;
  Budget eval(f, settings.max_evaluations, res);
  if (settings.kind == OptimizerKind::kNelderMead)
    nelder_mead(eval, start, settings, res);
  else
    linear_trust_region(eval, start, settings, res);
  return res;
}

}  // namespace rdmpt::vqe
