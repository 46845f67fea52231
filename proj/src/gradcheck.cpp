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

#include "signjoint/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

#include "signjoint/hn_nce.hpp"
#include "signjoint/nn.hpp"

namespace signjoint::joint {

Matd finite_difference(const std::function<double()>& f, Matd& x, double h) {
  Matd grad(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    const double saved = x.a[i];
    x.a[i] = saved + h;
    const double up = f();
    x.a[i] = saved - h;
    const double down = f();
    x.a[i] = saved;
    grad.a[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double relative_gradient_error(const Matd& analytic, const Matd& fd) {
  double scale = 0.0;
  for (double v : fd.a) scale = std::max(scale, std::fabs(v));
  return max_abs_diff(analytic, fd) / std::max(1e-12, scale);
}

namespace {

Matd random_matrix(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  Matd m(r, c);
  for (double& v : m.a) v = scale * rng.gaussian();
  return m;
}

double check_hnnce(Rng& rng) {
  const std::size_t b = 3 + rng.uniform_int(4);
  Matd s = random_matrix(rng, b, b);
  HnNceParams params;
  params.tau = rng.uniform(0.05, 1.0);
  params.alpha = rng.uniform(0.2, 1.0);
  params.beta = rng.uniform(0.0, 2.0);
  // The gradient treats the hard-negative weights as constants, so the
  // finite-difference reference evaluates the loss with the weights
  // frozen at the base point.
  const Matd weights = hn_nce_weights(s, params.beta, params.tau);
  const Matd analytic = hn_nce_grad_with_weights(s, weights, params);
  const Matd fd = finite_difference(
      [&]() { return hn_nce_loss_with_weights(s, weights, params); }, s);
  return relative_gradient_error(analytic, fd);
}

double check_affine(Rng& rng) {
  const std::size_t n = 2 + rng.uniform_int(4);
  const std::size_t in = 2 + rng.uniform_int(5);
  const std::size_t out = 2 + rng.uniform_int(5);
  AffineHead head(in, out);
  head.w = random_matrix(rng, in, out);
  head.b = random_matrix(rng, 1, out);
  Matd x = random_matrix(rng, n, in);
  const Matd c = random_matrix(rng, n, out);  // random linear functional

  auto loss = [&]() {
    const Matd y = affine_forward(head, x);
    double v = 0.0;
    for (std::size_t i = 0; i < y.a.size(); ++i) v += c.a[i] * y.a[i];
    return v;
  };

  AffineGrads grads;
  const Matd dx = affine_backward(head, x, c, grads);

  double worst = relative_gradient_error(dx, finite_difference(loss, x));
  worst = std::max(worst, relative_gradient_error(grads.dw, finite_difference(loss, head.w)));
  worst = std::max(worst, relative_gradient_error(grads.db, finite_difference(loss, head.b)));
  return worst;
}

double check_attention(Rng& rng) {
  const std::size_t d = 3 + rng.uniform_int(4);
  const std::size_t n = 2 + rng.uniform_int(4);
  const std::size_t valid = 1 + rng.uniform_int(n);
  AttentionLayer layer(d);
  layer.wq = random_matrix(rng, d, d, 0.5);
  layer.wk = random_matrix(rng, d, d, 0.5);
  layer.wv = random_matrix(rng, d, d, 0.5);
  layer.wo = random_matrix(rng, d, d, 0.5);
  Matd x = random_matrix(rng, n, d);
  const Matd c = random_matrix(rng, n, d);

  auto loss = [&]() {
    const Matd y = self_attention_forward(layer, x, valid, nullptr);
    double v = 0.0;
    for (std::size_t i = 0; i < y.a.size(); ++i) v += c.a[i] * y.a[i];
    return v;
  };

  AttentionCache cache;
  self_attention_forward(layer, x, valid, &cache);
  AttentionGrads grads(d);
  const Matd dx = self_attention_backward(layer, cache, c, grads);

  double worst = relative_gradient_error(dx, finite_difference(loss, x));
  worst = std::max(worst, relative_gradient_error(grads.dwq, finite_difference(loss, layer.wq)));
  worst = std::max(worst, relative_gradient_error(grads.dwk, finite_difference(loss, layer.wk)));
  worst = std::max(worst, relative_gradient_error(grads.dwv, finite_difference(loss, layer.wv)));
  worst = std::max(worst, relative_gradient_error(grads.dwo, finite_difference(loss, layer.wo)));
  return worst;
}

double check_pool(Rng& rng) {
  const std::size_t n = 2 + rng.uniform_int(6);
  const std::size_t d = 2 + rng.uniform_int(6);
  const std::size_t valid = 1 + rng.uniform_int(n);
  // Spread values out so the finite-difference step cannot flip an
  // argmax.
  Matd x = random_matrix(rng, n, d, 10.0);
  const Matd c = random_matrix(rng, 1, d);

  auto loss = [&]() {
    const Matd y = max_pool_temporal(x, valid, nullptr);
    double v = 0.0;
    for (std::size_t j = 0; j < y.cols; ++j) v += c(0, j) * y(0, j);
    return v;
  };

  std::vector<std::size_t> argmax;
  max_pool_temporal(x, valid, &argmax);
  const Matd dx = max_pool_backward(x, valid, argmax, c);
  return relative_gradient_error(dx, finite_difference(loss, x));
}

double check_ce(Rng& rng) {
  const std::size_t n = 2 + rng.uniform_int(8);
  Matd logits = random_matrix(rng, 1, n);
  const std::size_t label = rng.uniform_int(n);

  auto loss = [&]() {
    std::vector<double> v(logits.a.begin(), logits.a.end());
    return cross_entropy_loss(v, label).loss;
  };

  const CrossEntropyResult res =
      cross_entropy_loss(std::vector<double>(logits.a.begin(), logits.a.end()), label);
  Matd analytic(1, n);
  analytic.a = res.grad;
  return relative_gradient_error(analytic, finite_difference(loss, logits));
}

}  // namespace

double run_gradient_check(const std::string& op, int seeds, std::uint64_t base_seed) {
  double worst = 0.0;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(base_seed + 1000003ULL * static_cast<std::uint64_t>(s) + 17ULL);
    double err = 0.0;
    if (op == "hnnce")
      err = check_hnnce(rng);
    else if (op == "affine")
      err = check_affine(rng);
    else if (op == "attention")
      err = check_attention(rng);
    else if (op == "pool")
      err = check_pool(rng);
    else if (op == "ce")
      err = check_ce(rng);
    else
      throw std::runtime_error("run_gradient_check: unknown op \"" + op + "\"");
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace signjoint::joint
