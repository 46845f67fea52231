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

#ifndef SIGNJOINT_GRADCHECK_HPP
#define SIGNJOINT_GRADCHECK_HPP

#include <functional>
#include <string>
#include <vector>

#include "signjoint/matrix.hpp"

namespace signjoint::joint {

// Central finite differences of `f` with respect to every element of
// `x`, evaluated in place (x is restored afterwards).
Matd finite_difference(const std::function<double()>& f, Matd& x, double h = 1e-5);

// max |analytic - fd| / max(1e-12, max |fd|).
double relative_gradient_error(const Matd& analytic, const Matd& fd);

// Named gradient checks over `seeds` random instances each; returns the
// worst relative error seen. Ops: hnnce, affine, attention, pool, ce.
double run_gradient_check(const std::string& op, int seeds, std::uint64_t base_seed = 0);

inline const std::vector<std::string>& gradient_check_ops() {
  static const std::vector<std::string> ops{"hnnce", "affine", "attention", "pool", "ce"};
  return ops;
}

}  // namespace signjoint::joint

#endif  // SIGNJOINT_GRADCHECK_HPP
