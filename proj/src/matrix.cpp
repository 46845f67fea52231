// Copyright 2026 The signjoint Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "signjoint/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace signjoint {

Matd matmul(const Matd& x, const Matd& y) {
  if (x.cols != y.rows) throw std::runtime_error("matmul: shape mismatch");
  Matd out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t k = 0; k < x.cols; ++k) {
      const double v = x(i, k);
      if (v == 0.0) continue;
      const double* yrow = y.row(k);
      double* orow = out.row(i);
      for (std::size_t j = 0; j < y.cols; ++j) orow[j] += v * yrow[j];
    }
  }
  return out;
}

Matd matmul_nt(const Matd& x, const Matd& y) {
  if (x.cols != y.cols) throw std::runtime_error("matmul_nt: shape mismatch");
  Matd out(x.rows, y.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* xrow = x.row(i);
    for (std::size_t j = 0; j < y.rows; ++j) {
      const double* yrow = y.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < x.cols; ++k) s += xrow[k] * yrow[k];
      out(i, j) = s;
    }
  }
  return out;
}

Matd matmul_tn(const Matd& x, const Matd& y) {
  if (x.rows != y.rows) throw std::runtime_error("matmul_tn: shape mismatch");
  Matd out(x.cols, y.cols);
  for (std::size_t k = 0; k < x.rows; ++k) {
    const double* xrow = x.row(k);
    const double* yrow = y.row(k);
    for (std::size_t i = 0; i < x.cols; ++i) {
      const double v = xrow[i];
      if (v == 0.0) continue;
      double* orow = out.row(i);
      for (std::size_t j = 0; j < y.cols; ++j) orow[j] += v * yrow[j];
    }
  }
  return out;
}

Matd transpose(const Matd& m) {
  Matd out(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
  return out;
}

void add_inplace(Matd& dst, const Matd& src, double scale) {
  if (!dst.same_shape(src)) throw std::runtime_error("add_inplace: shape mismatch");
  for (std::size_t i = 0; i < dst.a.size(); ++i) dst.a[i] += scale * src.a[i];
}

bool all_finite(const Matd& m) {
  for (double v : m.a)
    if (!std::isfinite(v)) return false;
  return true;
}

double max_abs_diff(const Matd& x, const Matd& y) {
  if (!x.same_shape(y)) throw std::runtime_error("max_abs_diff: shape mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::fabs(x.a[i] - y.a[i]));
  return d;
}

double Rng::gaussian() {
  // u1 in (0, 1) so the log is finite.
  const double u1 = (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace signjoint
