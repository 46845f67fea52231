#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "signjoint/matrix.hpp"
#include "signjoint/retrieval.hpp"
#include "oracles.hpp"

using namespace signjoint;
using namespace signjoint::retrieval;

namespace {

Matd rows(std::initializer_list<std::initializer_list<double>> values) {
  Matd m(values.size(), values.begin()->size());
  std::size_t i = 0;
  for (const auto& row : values) {
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matd random_rows(Rng& rng, std::size_t r, std::size_t c) {
  Matd m(r, c);
  for (double& v : m.a) v = rng.gaussian();
  return m;
}

}  // namespace

TEST_CASE("cosine_similarity basics") {
  const Matd a = rows({{1.0, 0.0}, {0.0, 1.0}});
  const SimilarityMatrix s = cosine_similarity(a, a);
  CHECK(s.at(0, 0) == doctest::Approx(1.0));
  CHECK(s.at(0, 1) == doctest::Approx(0.0));

  const Matd q = rows({{1.0, 1.0}});
  const Matd g = rows({{1.0, 0.0}});
  CHECK(cosine_similarity(q, g).at(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("cosine_similarity rejects zero-norm rows naming the row") {
  const Matd a = rows({{1.0, 0.0}, {0.0, 0.0}});
  const Matd b = rows({{1.0, 0.0}});
  CHECK_THROWS_WITH_AS(cosine_similarity(a, b), doctest::Contains("row 1"), std::runtime_error);
  CHECK_THROWS_AS(cosine_similarity(b, a), std::runtime_error);
  CHECK_THROWS_AS(cosine_similarity(rows({{1.0}}), rows({{1.0, 2.0}})), std::runtime_error);
}

TEST_CASE("cosine_similarity(A, A) has unit diagonal within 1e-6") {
  Rng rng(5);
  const Matd a = random_rows(rng, 12, 7);
  const SimilarityMatrix s = cosine_similarity(a, a);
  for (std::size_t i = 0; i < s.n_queries; ++i)
    CHECK(std::fabs(s.at(i, i) - 1.0) < 1e-6);
}

TEST_CASE("recall and median rank on constructed matrices") {
  SimilarityMatrix s;
  s.n_queries = s.n_gallery = 4;
  s.values.assign(16, 0.0);
  for (std::size_t i = 0; i < 4; ++i) s.at(i, i) = 1.0;
  s.correct_index = {0, 1, 2, 3};
  CHECK(recall_at_k(s, 1) == doctest::Approx(100.0));
  CHECK(med_rank(s) == 1);

  // Correct item always ranked 3rd of 10.
  SimilarityMatrix t;
  t.n_queries = 5;
  t.n_gallery = 10;
  t.values.assign(50, 0.0);
  t.correct_index.assign(5, 4);
  for (std::size_t q = 0; q < 5; ++q) {
    t.at(q, 0) = 0.9;
    t.at(q, 1) = 0.8;
    t.at(q, 4) = 0.5;
  }
  CHECK(recall_at_k(t, 1) == doctest::Approx(0.0));
  CHECK(recall_at_k(t, 5) == doctest::Approx(100.0));
  CHECK(med_rank(t) == 3);
}

TEST_CASE("ranks match a brute-force sort oracle on random matrices") {
  Rng rng(7);
  for (int it = 0; it < 50; ++it) {
    SimilarityMatrix s;
    s.n_queries = s.n_gallery = 20;
    s.values.resize(400);
    for (double& v : s.values) v = rng.uniform(-1.0, 1.0);
    s.correct_index.resize(20);
    for (auto& c : s.correct_index) c = rng.uniform_int(20);
    const auto got = ranks(s);
    for (std::size_t q = 0; q < 20; ++q) {
      const std::vector<double> row(s.values.begin() + q * 20, s.values.begin() + (q + 1) * 20);
      CHECK(got[q] == test_oracles::brute_force_rank(row, s.correct_index[q]));
    }
  }
}

TEST_CASE("recall is invariant under strictly increasing transforms of S") {
  Rng rng(9);
  SimilarityMatrix s;
  s.n_queries = s.n_gallery = 15;
  s.values.resize(225);
  for (double& v : s.values) v = rng.uniform(-1.0, 1.0);
  s.correct_index.resize(15);
  for (auto& c : s.correct_index) c = rng.uniform_int(15);

  SimilarityMatrix warped = s;
  for (double& v : warped.values) v = std::exp(3.0 * v) + 0.5 * v;
  for (std::size_t k = 1; k <= 15; ++k)
    CHECK(recall_at_k(s, k) == doctest::Approx(recall_at_k(warped, k)));
  CHECK(med_rank(s) == med_rank(warped));
}

TEST_CASE("recall_at_k is non-decreasing in k and reaches 100 at the gallery size") {
  Rng rng(11);
  SimilarityMatrix s;
  s.n_queries = 9;
  s.n_gallery = 13;
  s.values.resize(9 * 13);
  for (double& v : s.values) v = rng.gaussian();
  s.correct_index.resize(9);
  for (auto& c : s.correct_index) c = rng.uniform_int(13);
  double prev = 0.0;
  for (std::size_t k = 1; k <= 13; ++k) {
    const double r = recall_at_k(s, k);
    CHECK(r >= prev);
    prev = r;
  }
  CHECK(prev == doctest::Approx(100.0));
}

TEST_CASE("nn_classify matches an exact gallery row") {
  const Matd gallery = rows({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
  const Matd frames = rows({{0.0, 2.0, 0.0}});
  const std::vector<corpus::Gloss> labels{{{"a"}, std::nullopt}, {{"b"}, std::nullopt},
                                          {{"c"}, std::nullopt}};
  const corpus::FrameTopK out =
      nn_classify(frames, gallery, labels, GalleryClassifierParams{}, corpus::TimingParams{});
  REQUIRE(out.frames.size() == 1);
  CHECK(out.frames[0][0].label_id == 1);
  CHECK(out.label_vocab[1].primary() == "b");
}

TEST_CASE("nn_classify scores are the gallery softmax at the given temperature") {
  // Two gallery items at cosine 1 and 0 with temperature 1.
  const Matd gallery = rows({{1.0, 0.0}, {0.0, 1.0}});
  const Matd frames = rows({{1.0, 0.0}});
  const std::vector<corpus::Gloss> labels{{{"a"}, std::nullopt}, {{"b"}, std::nullopt}};
  GalleryClassifierParams params;
  params.k = 2;
  params.score_temperature = 1.0;
  const corpus::FrameTopK out =
      nn_classify(frames, gallery, labels, params, corpus::TimingParams{});
  const double e = std::exp(1.0);
  CHECK(out.frames[0][0].score == doctest::Approx(e / (e + 1.0)));  // ~0.7311
  CHECK(out.frames[0][1].score == doctest::Approx(1.0 / (e + 1.0)));  // ~0.2689

  // Temperature -> infinity gives the uniform distribution.
  params.score_temperature = 1e9;
  const corpus::FrameTopK flat =
      nn_classify(frames, gallery, labels, params, corpus::TimingParams{});
  CHECK(flat.frames[0][0].score == doctest::Approx(0.5));
  CHECK(flat.frames[0][1].score == doctest::Approx(0.5));
}

TEST_CASE("nn_classify per-frame scores are sorted and sum to at most 1") {
  Rng rng(13);
  const Matd gallery = random_rows(rng, 12, 6);
  const Matd frames = random_rows(rng, 30, 6);
  std::vector<corpus::Gloss> labels;
  for (int i = 0; i < 12; ++i) labels.push_back({{"w" + std::to_string(i)}, std::nullopt});
  const corpus::FrameTopK out =
      nn_classify(frames, gallery, labels, GalleryClassifierParams{}, corpus::TimingParams{});
  corpus::validate_frame_topk(out);
  for (const auto& entries : out.frames) {
    CHECK(entries.size() == 5);
    double sum = 0.0;
    for (const auto& e : entries) sum += e.score;
    CHECK(sum <= 1.0 + 1e-12);
  }
}

TEST_CASE("nn_classify label order is invariant under positive scaling") {
  Rng rng(15);
  const Matd gallery = random_rows(rng, 10, 5);
  const Matd frames = random_rows(rng, 20, 5);
  std::vector<corpus::Gloss> labels;
  for (int i = 0; i < 10; ++i) labels.push_back({{"w" + std::to_string(i)}, std::nullopt});

  Matd scaled_frames = frames;
  for (double& v : scaled_frames.a) v *= 37.5;
  Matd scaled_gallery = gallery;
  for (double& v : scaled_gallery.a) v *= 0.004;

  const auto a =
      nn_classify(frames, gallery, labels, GalleryClassifierParams{}, corpus::TimingParams{});
  const auto b = nn_classify(scaled_frames, scaled_gallery, labels, GalleryClassifierParams{},
                             corpus::TimingParams{});
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t f = 0; f < a.frames.size(); ++f)
    for (std::size_t e = 0; e < a.frames[f].size(); ++e)
      CHECK(a.frames[f][e].label_id == b.frames[f][e].label_id);
}

TEST_CASE("retrieve: single pair gives perfect recall in both directions") {
  const Matd q = rows({{0.3, 0.4}});
  const Matd g = rows({{-0.5, 0.1}});
  const RetrievalReport rep = retrieve(q, g, {1});
  CHECK(rep.query_to_gallery.recall.at(1) == doctest::Approx(100.0));
  CHECK(rep.gallery_to_query.recall.at(1) == doctest::Approx(100.0));
  CHECK(rep.query_to_gallery.med_rank == 1);
}

TEST_CASE("retrieve: anti-diagonal 2x2 case") {
  // Each query prefers the other's gallery item.
  const Matd q = rows({{1.0, 0.0}, {0.0, 1.0}});
  const Matd g = rows({{0.0, 1.0}, {1.0, 0.0}});
  const RetrievalReport rep = retrieve(q, g, {1, 2});
  CHECK(rep.query_to_gallery.recall.at(1) == doctest::Approx(0.0));
  CHECK(rep.query_to_gallery.recall.at(2) == doctest::Approx(100.0));
  CHECK(rep.gallery_to_query.recall.at(1) == doctest::Approx(0.0));
  CHECK(rep.query_to_gallery.med_rank == 2);
}

TEST_CASE("retrieve matches a brute-force oracle on random aligned embeddings") {
  Rng rng(17);
  const std::size_t n = 64, d = 8;
  Matd q = random_rows(rng, n, d);
  Matd g = q;
  for (double& v : g.a) v += 0.3 * rng.gaussian();  // noisy pairing

  const RetrievalReport rep = retrieve(q, g, {1, 5, 10});
  const SimilarityMatrix s = cosine_similarity(q, g);

  std::size_t hits1 = 0, hits5 = 0, hits10 = 0;
  std::vector<std::size_t> oracle_ranks;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> row(s.values.begin() + i * n, s.values.begin() + (i + 1) * n);
    const std::size_t rank = test_oracles::brute_force_rank(row, i);
    oracle_ranks.push_back(rank);
    hits1 += rank <= 1;
    hits5 += rank <= 5;
    hits10 += rank <= 10;
  }
  CHECK(rep.query_to_gallery.recall.at(1) == doctest::Approx(100.0 * hits1 / n));
  CHECK(rep.query_to_gallery.recall.at(5) == doctest::Approx(100.0 * hits5 / n));
  CHECK(rep.query_to_gallery.recall.at(10) == doctest::Approx(100.0 * hits10 / n));
  std::sort(oracle_ranks.begin(), oracle_ranks.end());
  CHECK(rep.query_to_gallery.med_rank == oracle_ranks[(n - 1) / 2]);
}

TEST_CASE("retrieve rejects mismatched row counts") {
  Rng rng(19);
  CHECK_THROWS_AS(retrieve(random_rows(rng, 3, 4), random_rows(rng, 4, 4), {1}),
                  std::runtime_error);
}

TEST_CASE("med_rank uses the lower median for even counts") {
  SimilarityMatrix s;
  s.n_queries = 4;
  s.n_gallery = 4;
  s.values.assign(16, 0.0);
  s.correct_index = {0, 1, 2, 3};
  // ranks: 1, 1, 3, 4 -> lower median is the 2nd of 4 = 1
  s.at(0, 0) = 1.0;
  s.at(1, 1) = 1.0;
  s.at(2, 0) = 0.9;
  s.at(2, 1) = 0.8;
  s.at(2, 2) = 0.5;
  s.at(3, 0) = 0.9;
  s.at(3, 1) = 0.8;
  s.at(3, 2) = 0.7;
  s.at(3, 3) = 0.5;
  CHECK(med_rank(s) == 1);
}
