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

#include "signjoint/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace signjoint::joint {

Matd affine_forward(const AffineHead& head, const Matd& x) {
  if (x.cols != head.in_dim()) throw std::runtime_error("affine_forward: dimension mismatch");
  Matd y = matmul(x, head.w);
  for (std::size_t i = 0; i < y.rows; ++i)
    for (std::size_t j = 0; j < y.cols; ++j) y(i, j) += head.b(0, j);
  return y;
}

Matd affine_backward(const AffineHead& head, const Matd& x, const Matd& dy, AffineGrads& grads) {
  if (dy.rows != x.rows || dy.cols != head.out_dim())
    throw std::runtime_error("affine_backward: dimension mismatch");
  if (grads.dw.a.empty()) grads.dw = Matd(head.w.rows, head.w.cols);
  if (grads.db.a.empty()) grads.db = Matd(1, head.b.cols);
  add_inplace(grads.dw, matmul_tn(x, dy));
  for (std::size_t i = 0; i < dy.rows; ++i)
    for (std::size_t j = 0; j < dy.cols; ++j) grads.db(0, j) += dy(i, j);
  return matmul_nt(dy, head.w);
}

Matd max_pool_temporal(const Matd& x, std::size_t valid_length,
                       std::vector<std::size_t>* argmax) {
  if (valid_length == 0) throw std::runtime_error("max_pool_temporal: no valid frames");
  if (valid_length > x.rows) throw std::runtime_error("max_pool_temporal: valid_length > rows");
  Matd out(1, x.cols);
  if (argmax) argmax->assign(x.cols, 0);
  for (std::size_t j = 0; j < x.cols; ++j) {
    double best = x(0, j);
    std::size_t best_i = 0;
    for (std::size_t i = 1; i < valid_length; ++i) {
      if (x(i, j) > best) {
        best = x(i, j);
        best_i = i;
      }
    }
    out(0, j) = best;
    if (argmax) (*argmax)[j] = best_i;
  }
  return out;
}

Matd max_pool_backward(const Matd& x, std::size_t valid_length,
                       const std::vector<std::size_t>& argmax, const Matd& dy) {
  if (dy.rows != 1 || dy.cols != x.cols || argmax.size() != x.cols)
    throw std::runtime_error("max_pool_backward: shape mismatch");
  (void)valid_length;
  Matd dx(x.rows, x.cols);
  for (std::size_t j = 0; j < x.cols; ++j) dx(argmax[j], j) = dy(0, j);
  return dx;
}

Matd self_attention_forward(const AttentionLayer& layer, const Matd& x, std::size_t valid_length,
                            AttentionCache* cache) {
  const std::size_t d = layer.dim();
  if (x.cols != d) throw std::runtime_error("self_attention_forward: dimension mismatch");
  if (valid_length > x.rows)
    throw std::runtime_error("self_attention_forward: valid_length > rows");
  const std::size_t n = valid_length;

  // Work on the valid prefix only; padded rows pass through via the
  // residual and never act as keys.
  Matd xv(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) xv(i, j) = x(i, j);

  Matd q = matmul(xv, layer.wq);
  Matd k = matmul(xv, layer.wk);
  Matd v = matmul(xv, layer.wv);

  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Matd attn = matmul_nt(q, k);
  for (double& val : attn.a) val *= scale;
  for (std::size_t i = 0; i < n; ++i) {
    double m = attn(i, 0);
    for (std::size_t j = 1; j < n; ++j) m = std::max(m, attn(i, j));
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      attn(i, j) = std::exp(attn(i, j) - m);
      z += attn(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) attn(i, j) /= z;
  }

  Matd h = matmul(attn, v);
  Matd out = x;
  Matd proj = matmul(h, layer.wo);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) += proj(i, j);

  if (cache) {
    cache->x = x;
    cache->valid_length = n;
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
    cache->attn = std::move(attn);
    cache->h = std::move(h);
  }
  return out;
}

Matd self_attention_backward(const AttentionLayer& layer, const AttentionCache& cache,
                             const Matd& dy, AttentionGrads& grads) {
  const std::size_t d = layer.dim();
  const std::size_t n = cache.valid_length;
  if (!dy.same_shape(cache.x)) throw std::runtime_error("self_attention_backward: shape mismatch");

  Matd dx = dy;  // residual path, including pass-through rows

  Matd dyv(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) dyv(i, j) = dy(i, j);

  Matd dh = matmul_nt(dyv, layer.wo);
  add_inplace(grads.dwo, matmul_tn(cache.h, dyv));

  Matd dattn = matmul_nt(dh, cache.v);
  Matd dv = matmul_tn(cache.attn, dh);

  // Softmax backward per row: dz = a .* (da - sum(da .* a)).
  Matd dz(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += dattn(i, j) * cache.attn(i, j);
    for (std::size_t j = 0; j < n; ++j)
      dz(i, j) = cache.attn(i, j) * (dattn(i, j) - dot);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (double& val : dz.a) val *= scale;

  Matd dq = matmul(dz, cache.k);
  Matd dk = matmul_tn(dz, cache.q);

  Matd xv(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) xv(i, j) = cache.x(i, j);

  add_inplace(grads.dwq, matmul_tn(xv, dq));
  add_inplace(grads.dwk, matmul_tn(xv, dk));
  add_inplace(grads.dwv, matmul_tn(xv, dv));

  Matd dxv = matmul_nt(dq, layer.wq);
  add_inplace(dxv, matmul_nt(dk, layer.wk));
  add_inplace(dxv, matmul_nt(dv, layer.wv));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) dx(i, j) += dxv(i, j);
  return dx;
}

CrossEntropyResult cross_entropy_loss(const std::vector<double>& logits, std::size_t label) {
  if (logits.empty()) throw std::runtime_error("cross_entropy_loss: no classes");
  if (label >= logits.size()) throw std::runtime_error("cross_entropy_loss: label out of range");
  double m = logits[0];
  for (double v : logits) m = std::max(m, v);
  double z = 0.0;
  for (double v : logits) z += std::exp(v - m);
  CrossEntropyResult res;
  res.loss = -(logits[label] - m - std::log(z));
  res.grad.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    res.grad[i] = std::exp(logits[i] - m) / z;
    if (i == label) res.grad[i] -= 1.0;
  }
  return res;
}

}  // namespace signjoint::joint
