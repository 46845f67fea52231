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

#ifndef SIGNJOINT_MATRIX_HPP
#define SIGNJOINT_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace signjoint {

// Dense row-major double matrix. All loss/gradient math runs in f64;
// embeddings are stored as f32 on disk and widened on load.
struct Matd {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matd() = default;
  Matd(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  const double* row(std::size_t i) const { return a.data() + i * cols; }
  double* row(std::size_t i) { return a.data() + i * cols; }

  bool same_shape(const Matd& o) const { return rows == o.rows && cols == o.cols; }
};

Matd matmul(const Matd& x, const Matd& y);
// x * transpose(y); cheaper than forming the transpose.
Matd matmul_nt(const Matd& x, const Matd& y);
// transpose(x) * y.
Matd matmul_tn(const Matd& x, const Matd& y);
Matd transpose(const Matd& m);
void add_inplace(Matd& dst, const Matd& src, double scale = 1.0);
bool all_finite(const Matd& m);
double max_abs_diff(const Matd& x, const Matd& y);

// Deterministic random source. The engine is the standard-specified
// mt19937_64 stream; value derivations are written out here because
// <random> distributions are implementation-defined and would break the
// byte-identical reproducibility contract across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t n) { return eng_() % n; }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; consumes two draws per call, second branch discarded.
  double gaussian();

 private:
  std::mt19937_64 eng_;
};

}  // namespace signjoint

#endif  // SIGNJOINT_MATRIX_HPP
