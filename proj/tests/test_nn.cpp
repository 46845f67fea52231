#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "signjoint/gradcheck.hpp"
#include "signjoint/hn_nce.hpp"
#include "signjoint/matrix.hpp"
#include "signjoint/nn.hpp"
#include "oracles.hpp"

using namespace signjoint;
using namespace signjoint::joint;

namespace {

Matd random_matrix(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  Matd m(r, c);
  for (double& v : m.a) v = scale * rng.gaussian();
  return m;
}

}  // namespace

TEST_CASE("hn_nce_weights: beta 0 gives unit weights") {
  Rng rng(1);
  const Matd s = random_matrix(rng, 5, 5);
  const Matd w = hn_nce_weights(s, 0.0, 0.07);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if (i != j) CHECK(w(i, j) == doctest::Approx(1.0));
}

TEST_CASE("hn_nce_weights: B=2 weights are 1 for any beta") {
  Rng rng(2);
  const Matd s = random_matrix(rng, 2, 2);
  for (double beta : {0.0, 0.5, 1.0, 3.0}) {
    const Matd w = hn_nce_weights(s, beta, 0.07);
    CHECK(w(0, 1) == doctest::Approx(1.0));
    CHECK(w(1, 0) == doctest::Approx(1.0));
  }
}

TEST_CASE("hn_nce_weights: closed-form 3x3 case") {
  // Row 0 off-diagonal similarities 0 and ln 2 with tau = beta = 1:
  // weights 2 * (1, 2) / 3 = (2/3, 4/3).
  Matd s(3, 3);
  s(0, 1) = 0.0;
  s(0, 2) = std::log(2.0);
  const Matd w = hn_nce_weights(s, 1.0, 1.0);
  CHECK(w(0, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(w(0, 2) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("hn_nce_weights rows of off-diagonal weights sum to B-1") {
  Rng rng(3);
  for (int it = 0; it < 20; ++it) {
    const std::size_t b = 2 + rng.uniform_int(7);
    const Matd s = random_matrix(rng, b, b);
    const Matd w = hn_nce_weights(s, rng.uniform(0.0, 2.0), rng.uniform(0.05, 1.0));
    for (std::size_t i = 0; i < b; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < b; ++j)
        if (j != i) sum += w(i, j);
      CHECK(sum == doctest::Approx(static_cast<double>(b - 1)));
    }
  }
  CHECK_THROWS_AS(hn_nce_weights(Matd(1, 1), 1.0, 0.07), std::runtime_error);
}

TEST_CASE("hn_nce_loss: B=1 with alpha=1 is exactly zero") {
  Matd s(1, 1);
  s(0, 0) = 0.37;
  HnNceParams params;
  params.alpha = 1.0;
  CHECK(hn_nce_loss(s, params) == 0.0);
  CHECK(hn_nce_grad(s, params).a[0] == 0.0);
}

TEST_CASE("hn_nce_loss: closed-form 2x2 identity case") {
  Matd s(2, 2);
  s(0, 0) = s(1, 1) = 1.0;
  HnNceParams params{1.0, 1.0, 0.0};
  const double e = std::exp(1.0);
  CHECK(hn_nce_loss(s, params) == doctest::Approx(-std::log(e / (e + 1.0))).epsilon(1e-9));
  CHECK(hn_nce_loss(s, params) == doctest::Approx(0.313262).epsilon(1e-5));
}

TEST_CASE("hn_nce_loss reduces to InfoNCE at beta=0, alpha=1") {
  Rng rng(4);
  for (int it = 0; it < 100; ++it) {
    const Matd s = random_matrix(rng, 8, 8);
    HnNceParams params;
    params.tau = rng.uniform(0.05, 1.0);
    params.alpha = 1.0;
    params.beta = 0.0;
    CHECK(std::fabs(hn_nce_loss(s, params) - test_oracles::info_nce(s, params.tau)) < 1e-10);
  }
}

TEST_CASE("hn_nce_loss is invariant to shifting a full row of S") {
  Rng rng(5);
  for (int it = 0; it < 30; ++it) {
    const std::size_t b = 3 + rng.uniform_int(5);
    const Matd s = random_matrix(rng, b, b);
    HnNceParams params;
    params.tau = rng.uniform(0.05, 0.8);
    params.beta = rng.uniform(0.0, 1.5);
    Matd shifted = s;
    const std::size_t row = rng.uniform_int(b);
    const double c = rng.uniform(-2.0, 2.0);
    for (std::size_t j = 0; j < b; ++j) shifted(row, j) += c;
    CHECK(std::fabs(hn_nce_loss(s, params) - hn_nce_loss(shifted, params)) < 1e-10);
  }
}

TEST_CASE("hn_nce_loss rejects non-finite and non-square input") {
  Matd s(2, 2);
  s(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(hn_nce_loss(s, HnNceParams{}), std::runtime_error);
  CHECK_THROWS_AS(hn_nce_loss(Matd(2, 3), HnNceParams{}), std::runtime_error);
  CHECK_THROWS_AS(hn_nce_loss(Matd(2, 2), HnNceParams{0.0, 1.0, 1.0}), std::runtime_error);
}

TEST_CASE("hn_nce_grad matches finite differences under frozen weights") {
  CHECK(run_gradient_check("hnnce", 10, 42) < 1e-6);
}

TEST_CASE("hn_nce_grad rows sum to zero when alpha is 1") {
  Rng rng(6);
  for (int it = 0; it < 20; ++it) {
    const std::size_t b = 2 + rng.uniform_int(6);
    const Matd s = random_matrix(rng, b, b);
    HnNceParams params;
    params.alpha = 1.0;
    params.beta = rng.uniform(0.0, 1.5);
    params.tau = rng.uniform(0.05, 1.0);
    const Matd g = hn_nce_grad(s, params);
    for (std::size_t i = 0; i < b; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < b; ++j) sum += g(i, j);
      CHECK(std::fabs(sum) < 1e-12);
    }
  }
}

TEST_CASE("affine layer: identity and broadcast special cases") {
  AffineHead head(3, 3);
  for (std::size_t i = 0; i < 3; ++i) head.w(i, i) = 1.0;
  Rng rng(7);
  const Matd x = random_matrix(rng, 4, 3);
  CHECK(max_abs_diff(affine_forward(head, x), x) == 0.0);

  AffineHead zero(3, 2);
  zero.b(0, 0) = 1.5;
  zero.b(0, 1) = -0.5;
  const Matd y = affine_forward(zero, x);
  for (std::size_t i = 0; i < y.rows; ++i) {
    CHECK(y(i, 0) == 1.5);
    CHECK(y(i, 1) == -0.5);
  }
  CHECK_THROWS_AS(affine_forward(zero, Matd(2, 5)), std::runtime_error);
}

TEST_CASE("affine gradients match finite differences") {
  CHECK(run_gradient_check("affine", 10, 43) < 1e-6);
}

TEST_CASE("max_pool_temporal picks per-dimension maxima over valid rows") {
  Matd x(2, 2);
  x(0, 0) = 1.0;
  x(0, 1) = 0.0;
  x(1, 0) = 0.0;
  x(1, 1) = 2.0;
  std::vector<std::size_t> argmax;
  const Matd pooled = max_pool_temporal(x, 2, &argmax);
  CHECK(pooled(0, 0) == 1.0);
  CHECK(pooled(0, 1) == 2.0);
  CHECK(argmax == std::vector<std::size_t>{0, 1});

  // single frame is the identity
  const Matd one = max_pool_temporal(x, 1, nullptr);
  CHECK(one(0, 0) == 1.0);
  CHECK(one(0, 1) == 0.0);

  CHECK_THROWS_AS(max_pool_temporal(x, 0, nullptr), std::runtime_error);
}

TEST_CASE("max pool backward matches finite differences and routes ties first") {
  CHECK(run_gradient_check("pool", 10, 44) < 1e-6);

  Matd x(2, 1);
  x(0, 0) = 1.0;
  x(1, 0) = 1.0;  // tie: gradient goes to row 0
  std::vector<std::size_t> argmax;
  max_pool_temporal(x, 2, &argmax);
  CHECK(argmax[0] == 0);
}

TEST_CASE("self-attention: length-1 sequence and zero weights") {
  Rng rng(8);
  const std::size_t d = 4;
  AttentionLayer layer(d);
  layer.wq = random_matrix(rng, d, d);
  layer.wk = random_matrix(rng, d, d);
  layer.wv = random_matrix(rng, d, d);
  layer.wo = random_matrix(rng, d, d);
  const Matd x = random_matrix(rng, 1, d);
  const Matd y = self_attention_forward(layer, x, 1, nullptr);
  // Y = X + (X Wv) Wo since the softmax over one key is 1.
  const Matd expect = matmul(matmul(x, layer.wv), layer.wo);
  for (std::size_t j = 0; j < d; ++j)
    CHECK(y(0, j) == doctest::Approx(x(0, j) + expect(0, j)));

  AttentionLayer zeros(d);
  const Matd x2 = random_matrix(rng, 5, d);
  CHECK(max_abs_diff(self_attention_forward(zeros, x2, 5, nullptr), x2) == 0.0);
}

TEST_CASE("self-attention passes masked rows through unchanged") {
  Rng rng(9);
  const std::size_t d = 5;
  AttentionLayer layer(d);
  layer.wq = random_matrix(rng, d, d);
  layer.wk = random_matrix(rng, d, d);
  layer.wv = random_matrix(rng, d, d);
  layer.wo = random_matrix(rng, d, d);
  const Matd x = random_matrix(rng, 6, d);
  const Matd y = self_attention_forward(layer, x, 4, nullptr);
  for (std::size_t i = 4; i < 6; ++i)
    for (std::size_t j = 0; j < d; ++j) CHECK(y(i, j) == x(i, j));

  // Masked keys must not influence valid rows: changing them is a no-op.
  Matd x2 = x;
  x2(5, 2) += 100.0;
  const Matd y2 = self_attention_forward(layer, x2, 4, nullptr);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < d; ++j) CHECK(y(i, j) == y2(i, j));
}

TEST_CASE("self-attention gradients match finite differences") {
  CHECK(run_gradient_check("attention", 10, 45) < 1e-5);
}

TEST_CASE("cross entropy: uniform logits, closed form, and gradcheck") {
  const std::size_t n = 7;
  CHECK(cross_entropy_loss(std::vector<double>(n, 0.4), 3).loss ==
        doctest::Approx(std::log(static_cast<double>(n))));

  const CrossEntropyResult r = cross_entropy_loss({1.0, 0.0}, 0);
  const double e = std::exp(1.0);
  CHECK(r.loss == doctest::Approx(-std::log(e / (e + 1.0))));
  CHECK(r.grad[0] == doctest::Approx(e / (e + 1.0) - 1.0));
  CHECK(r.grad[1] == doctest::Approx(1.0 / (e + 1.0)));

  CHECK_THROWS_AS(cross_entropy_loss({1.0, 2.0}, 2), std::runtime_error);
  CHECK_THROWS_AS(cross_entropy_loss({}, 0), std::runtime_error);

  CHECK(run_gradient_check("ce", 10, 46) < 1e-6);
}
