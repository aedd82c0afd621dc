// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rdmpt {

/// Dense rank-4 tensor with equal extents, row-major (last index fastest).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(int p, int q, int r, int s) noexcept {
    return data_[offset(p, q, r, s)];
  }
  double operator()(int p, int q, int r, int s) const noexcept {
    return data_[offset(p, q, r, s)];
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  void set_zero();
  double max_abs() const;
  /// max |a - b| over all entries; dimensions must agree.
  static double max_abs_diff(const Tensor4& a, const Tensor4& b);

  Tensor4& operator+=(const Tensor4& o);
  Tensor4& operator*=(double s);

 private:
  std::size_t offset(int p, int q, int r, int s) const noexcept {
    const auto n = static_cast<std::size_t>(n_);
    return ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
  }

  int n_ = 0;
  std::vector<double> data_;
};

// Spin orbitals are indexed 2*spatial + spin with alpha = 0, beta = 1.
constexpr int spin_of(int p) noexcept { return p & 1; }
constexpr int spatial_of(int p) noexcept { return p >> 1; }
constexpr int spin_orbital(int spatial, int spin) noexcept { return 2 * spatial + spin; }
constexpr int flip_spin(int p) noexcept { return p ^ 1; }

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace rdmpt
