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

#include "signjoint/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace signjoint::retrieval {

namespace {

std::vector<double> row_norms(const Matd& m, const char* what) {
  std::vector<double> norms(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    const double* row = m.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * row[j];
    norms[i] = std::sqrt(s);
    if (norms[i] == 0.0)
      throw std::runtime_error(std::string(what) + ": zero-norm row " + std::to_string(i));
  }
  return norms;
}

}  // namespace

SimilarityMatrix cosine_similarity(const Matd& a, const Matd& b) {
  if (a.cols != b.cols) throw std::runtime_error("cosine_similarity: dimension mismatch");
  const std::vector<double> an = row_norms(a, "cosine_similarity: queries");
  const std::vector<double> bn = row_norms(b, "cosine_similarity: gallery");
  SimilarityMatrix s;
  s.n_queries = a.rows;
  s.n_gallery = b.rows;
  s.values.resize(a.rows * b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.row(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* brow = b.row(j);
      double dot = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) dot += arow[k] * brow[k];
      s.values[i * b.rows + j] = dot / (an[i] * bn[j]);
    }
  }
  return s;
}

std::vector<std::size_t> ranks(const SimilarityMatrix& s) {
  if (s.correct_index.size() != s.n_queries)
    throw std::runtime_error("ranks: correct_index size mismatch");
  std::vector<std::size_t> out(s.n_queries);
  for (std::size_t q = 0; q < s.n_queries; ++q) {
    const std::size_t c = s.correct_index[q];
    if (c >= s.n_gallery) throw std::runtime_error("ranks: correct_index out of range");
    const double ref = s.at(q, c);
    std::size_t greater = 0;
    for (std::size_t g = 0; g < s.n_gallery; ++g)
      if (s.at(q, g) > ref) ++greater;
    out[q] = 1 + greater;
  }
  return out;
}

double recall_at_k(const SimilarityMatrix& s, std::size_t k) {
  const std::vector<std::size_t> r = ranks(s);
  if (r.empty()) throw std::runtime_error("recall_at_k: no queries");
  std::size_t hits = 0;
  for (std::size_t rank : r)
    if (rank <= k) ++hits;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(r.size());
}

std::size_t med_rank(const SimilarityMatrix& s) {
  std::vector<std::size_t> r = ranks(s);
  if (r.empty()) throw std::runtime_error("med_rank: no queries");
  std::sort(r.begin(), r.end());
  return r[(r.size() - 1) / 2];
}

FrameTopK nn_classify(const Matd& frame_embeddings, const Matd& text_gallery,
                      const std::vector<Gloss>& gallery_labels,
                      const GalleryClassifierParams& params, const TimingParams& timing) {
  if (gallery_labels.size() != text_gallery.rows)
    throw std::runtime_error("nn_classify: gallery/label count mismatch");
  if (params.k < 1) throw std::runtime_error("nn_classify: k must be >= 1");
  if (!(params.score_temperature > 0.0))
    throw std::runtime_error("nn_classify: temperature must be positive");

  const SimilarityMatrix sims = cosine_similarity(frame_embeddings, text_gallery);
  const std::size_t n = sims.n_gallery;
  const std::size_t k = std::min<std::size_t>(params.k, n);

  FrameTopK out;
  out.timing = timing;
  out.k = params.k;
  out.label_vocab = gallery_labels;
  out.frames.resize(sims.n_queries);
  std::vector<std::size_t> order(n);
  for (std::size_t f = 0; f < sims.n_queries; ++f) {
    const double* row = sims.values.data() + f * n;
    // Softmax over the whole gallery, then keep the k best.
    double m = row[0];
    for (std::size_t j = 1; j < n; ++j) m = std::max(m, row[j]);
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) z += std::exp((row[j] - m) / params.score_temperature);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    auto& entries = out.frames[f];
    entries.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t g = order[j];
      const double score = std::exp((row[g] - m) / params.score_temperature) / z;
      entries.push_back({static_cast<int>(g), score});
    }
  }
  return out;
}

RetrievalReport retrieve(const Matd& queries, const Matd& gallery,
                         const std::vector<std::size_t>& ks) {
  if (queries.rows != gallery.rows)
    throw std::runtime_error("retrieve: query/gallery row counts differ (aligned pairs required)");
  if (queries.rows == 0) throw std::runtime_error("retrieve: empty inputs");

  SimilarityMatrix s = cosine_similarity(queries, gallery);
  s.correct_index.resize(s.n_queries);
  std::iota(s.correct_index.begin(), s.correct_index.end(), 0);

  SimilarityMatrix st;
  st.n_queries = s.n_gallery;
  st.n_gallery = s.n_queries;
  st.values.resize(s.values.size());
  for (std::size_t i = 0; i < s.n_queries; ++i)
    for (std::size_t j = 0; j < s.n_gallery; ++j) st.at(j, i) = s.at(i, j);
  st.correct_index.resize(st.n_queries);
  std::iota(st.correct_index.begin(), st.correct_index.end(), 0);

  RetrievalReport report;
  for (std::size_t k : ks) {
    report.query_to_gallery.recall[k] = recall_at_k(s, k);
    report.gallery_to_query.recall[k] = recall_at_k(st, k);
  }
  report.query_to_gallery.med_rank = med_rank(s);
  report.gallery_to_query.med_rank = med_rank(st);
  return report;
}

}  // namespace signjoint::retrieval
