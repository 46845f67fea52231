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

#include "signjoint/hn_nce.hpp"

#include <cmath>
#include <stdexcept>

namespace signjoint::joint {

void validate_hn_nce_params(const HnNceParams& p) {
  if (!(p.tau > 0.0)) throw std::runtime_error("hn_nce: tau must be positive");
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw std::runtime_error("hn_nce: alpha outside (0, 1]");
  if (!(p.beta >= 0.0)) throw std::runtime_error("hn_nce: beta must be >= 0");
}

namespace {

void check_square_finite(const Matd& s, const char* what) {
  if (s.rows != s.cols || s.rows == 0)
    throw std::runtime_error(std::string(what) + ": similarity matrix must be square");
  if (!all_finite(s)) throw std::runtime_error(std::string(what) + ": non-finite similarity");
}

}  // namespace

Matd hn_nce_weights(const Matd& s, double beta, double tau) {
  check_square_finite(s, "hn_nce_weights");
  const std::size_t b = s.rows;
  if (b < 2) throw std::runtime_error("hn_nce_weights: batch must have at least 2 rows");
  Matd w(b, b);
  for (std::size_t i = 0; i < b; ++i) {
    double m = -1e300;
    for (std::size_t j = 0; j < b; ++j)
      if (j != i) m = std::max(m, beta * s(i, j) / tau);
    double z = 0.0;
    for (std::size_t j = 0; j < b; ++j)
      if (j != i) z += std::exp(beta * s(i, j) / tau - m);
    for (std::size_t j = 0; j < b; ++j)
      if (j != i)
        w(i, j) = static_cast<double>(b - 1) * std::exp(beta * s(i, j) / tau - m) / z;
  }
  return w;
}

double hn_nce_loss_with_weights(const Matd& s, const Matd& weights, const HnNceParams& params) {
  validate_hn_nce_params(params);
  check_square_finite(s, "hn_nce_loss");
  const std::size_t b = s.rows;
  if (!weights.same_shape(s)) throw std::runtime_error("hn_nce_loss: weight shape mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    double m = s(i, i) / params.tau;
    for (std::size_t j = 0; j < b; ++j) m = std::max(m, s(i, j) / params.tau);
    double denom = params.alpha * std::exp(s(i, i) / params.tau - m);
    for (std::size_t j = 0; j < b; ++j)
      if (j != i) denom += weights(i, j) * std::exp(s(i, j) / params.tau - m);
    loss += -(s(i, i) / params.tau - m - std::log(denom));
  }
  return loss / static_cast<double>(b);
}

double hn_nce_loss(const Matd& s, const HnNceParams& params) {
  validate_hn_nce_params(params);
  check_square_finite(s, "hn_nce_loss");
  if (s.rows == 1) return std::log(params.alpha);
  return hn_nce_loss_with_weights(s, hn_nce_weights(s, params.beta, params.tau), params);
}

Matd hn_nce_grad_with_weights(const Matd& s, const Matd& weights, const HnNceParams& params) {
  validate_hn_nce_params(params);
  check_square_finite(s, "hn_nce_grad");
  const std::size_t b = s.rows;
  Matd grad(b, b);
  if (b == 1) return grad;
  if (!weights.same_shape(s)) throw std::runtime_error("hn_nce_grad: weight shape mismatch");
  const double inv_b = 1.0 / static_cast<double>(b);
  for (std::size_t i = 0; i < b; ++i) {
    double m = s(i, i) / params.tau;
    for (std::size_t j = 0; j < b; ++j) m = std::max(m, s(i, j) / params.tau);
    const double e_ii = std::exp(s(i, i) / params.tau - m);
    double denom = params.alpha * e_ii;
    for (std::size_t j = 0; j < b; ++j)
      if (j != i) denom += weights(i, j) * std::exp(s(i, j) / params.tau - m);
    grad(i, i) = inv_b / params.tau * (params.alpha * e_ii / denom - 1.0);
    for (std::size_t j = 0; j < b; ++j)
      if (j != i)
        grad(i, j) =
            inv_b / params.tau * weights(i, j) * std::exp(s(i, j) / params.tau - m) / denom;
  }
  return grad;
}

Matd hn_nce_grad(const Matd& s, const HnNceParams& params) {
  validate_hn_nce_params(params);
  check_square_finite(s, "hn_nce_grad");
  if (s.rows == 1) return Matd(1, 1);
  return hn_nce_grad_with_weights(s, hn_nce_weights(s, params.beta, params.tau), params);
}

}  // namespace signjoint::joint
