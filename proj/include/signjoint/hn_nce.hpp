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

#ifndef SIGNJOINT_HN_NCE_HPP
#define SIGNJOINT_HN_NCE_HPP

#include "signjoint/matrix.hpp"

namespace signjoint::joint {

// Hard-negative-weighted contrastive loss over a square batch similarity
// matrix S (aligned pairs on the diagonal):
//
//   L = -(1/B) sum_i log( e^{S_ii/tau} /
//         (alpha e^{S_ii/tau} + sum_{j != i} w_ij e^{S_ij/tau}) )
//   w_ij = (B-1) e^{beta S_ij/tau} / sum_{k != i} e^{beta S_ik/tau}
//
// beta = 0 collapses the weights to 1 and the loss to plain InfoNCE.
struct HnNceParams {
  double tau = 0.07;
  double alpha = 1.0;
  double beta = 1.0;
};

void validate_hn_nce_params(const HnNceParams& p);

// Off-diagonal weights; diagonal entries are set to 0 and unused. Each
// row of off-diagonal weights sums to B-1. Requires B >= 2.
Matd hn_nce_weights(const Matd& s, double beta, double tau);

// Weights are recomputed from S. B = 1 gives exactly log(alpha).
double hn_nce_loss(const Matd& s, const HnNceParams& params);

// Same loss with a caller-supplied (frozen) weight matrix; this is the
// function the gradient is consistent with, since weights are treated as
// constants per step.
double hn_nce_loss_with_weights(const Matd& s, const Matd& weights, const HnNceParams& params);

// dLoss/dS under the frozen-weights convention. Rows sum to zero when
// alpha = 1.
Matd hn_nce_grad(const Matd& s, const HnNceParams& params);
Matd hn_nce_grad_with_weights(const Matd& s, const Matd& weights, const HnNceParams& params);

}  // namespace signjoint::joint

#endif  // SIGNJOINT_HN_NCE_HPP
