// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "rdmpt/errors.hpp"

namespace rdmpt {

void Tensor4::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor4::max_abs_diff(const Tensor4& a, const Tensor4& b) {
  if (a.n_ != b.n_) throw ValidationError("Tensor4 dimension mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data_.size(); ++k)
    m = std::max(m, std::abs(a.data_[k] - b.data_[k]));
  return m;
}

Tensor4& Tensor4::operator+=(const Tensor4& o) {
  if (n_ != o.n_) throw ValidationError("Tensor4 dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Tensor4& Tensor4::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

}  // namespace rdmpt
