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

#ifndef SIGNJOINT_NN_HPP
#define SIGNJOINT_NN_HPP

#include <vector>

#include "signjoint/matrix.hpp"

namespace signjoint::joint {

// Row-vector convention throughout: y = x W + b with X of shape
// (n, in), W (in, out), b (1, out).
struct AffineHead {
  Matd w;
  Matd b;

  AffineHead() = default;
  AffineHead(std::size_t in, std::size_t out) : w(in, out), b(1, out) {}
  std::size_t in_dim() const { return w.rows; }
  std::size_t out_dim() const { return w.cols; }
};

Matd affine_forward(const AffineHead& head, const Matd& x);

struct AffineGrads {
  Matd dw;
  Matd db;
};

// Returns dX; accumulates into grads.
Matd affine_backward(const AffineHead& head, const Matd& x, const Matd& dy, AffineGrads& grads);

// Per-dimension max over the first valid_length rows. Ties route the
// gradient to the first index.
Matd max_pool_temporal(const Matd& x, std::size_t valid_length, std::vector<std::size_t>* argmax);
Matd max_pool_backward(const Matd& x, std::size_t valid_length,
                       const std::vector<std::size_t>& argmax, const Matd& dy);

// One single-head self-attention layer with a residual connection:
//   Y = X + softmax(Q K^T / sqrt(d)) (X Wv) Wo,  Q = X Wq, K = X Wk.
// Rows at or beyond valid_length pass through unchanged and are masked
// out as keys.
struct AttentionLayer {
  Matd wq, wk, wv, wo;

  AttentionLayer() = default;
  explicit AttentionLayer(std::size_t dim) : wq(dim, dim), wk(dim, dim), wv(dim, dim), wo(dim, dim) {}
  std::size_t dim() const { return wq.rows; }
};

struct AttentionCache {
  Matd x;
  std::size_t valid_length = 0;
  Matd q, k, v;
  Matd attn;  // softmax weights, valid_length x valid_length
  Matd h;     // attn * v
};

struct AttentionGrads {
  Matd dwq, dwk, dwv, dwo;

  explicit AttentionGrads(std::size_t dim)
      : dwq(dim, dim), dwk(dim, dim), dwv(dim, dim), dwo(dim, dim) {}
};

Matd self_attention_forward(const AttentionLayer& layer, const Matd& x, std::size_t valid_length,
                            AttentionCache* cache);
Matd self_attention_backward(const AttentionLayer& layer, const AttentionCache& cache,
                             const Matd& dy, AttentionGrads& grads);

struct CrossEntropyResult {
  double loss = 0.0;
  std::vector<double> grad;  // softmax(logits) - one_hot(label)
};

CrossEntropyResult cross_entropy_loss(const std::vector<double>& logits, std::size_t label);

}  // namespace signjoint::joint

#endif  // SIGNJOINT_NN_HPP
