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

#ifndef SIGNJOINT_RETRIEVAL_HPP
#define SIGNJOINT_RETRIEVAL_HPP

#include <map>
#include <vector>

#include "signjoint/frame_topk.hpp"
#include "signjoint/matrix.hpp"
#include "signjoint/types.hpp"

namespace signjoint::retrieval {

using corpus::FrameTopK;
using corpus::Gloss;
using corpus::TimingParams;

struct SimilarityMatrix {
  std::size_t n_queries = 0;
  std::size_t n_gallery = 0;
  std::vector<double> values;  // row-major [query][gallery]
  // Ground-truth gallery index per query; empty when not applicable.
  std::vector<std::size_t> correct_index;

  double at(std::size_t q, std::size_t g) const { return values[q * n_gallery + g]; }
  double& at(std::size_t q, std::size_t g) { return values[q * n_gallery + g]; }
};

// S_ij = <a_i, b_j> / (|a_i| |b_j|). Summation order within a row is
// fixed, so results do not depend on threading. Throws naming the first
// zero-norm row.
SimilarityMatrix cosine_similarity(const Matd& a, const Matd& b);

// Rank of the correct item: 1 + number of strictly greater similarities
// (ties resolve optimistically). R@k = 100 * fraction with rank <= k.
std::vector<std::size_t> ranks(const SimilarityMatrix& s);
double recall_at_k(const SimilarityMatrix& s, std::size_t k);
// Lower median for even query counts.
std::size_t med_rank(const SimilarityMatrix& s);

struct GalleryClassifierParams {
  int k = 5;
  double score_temperature = 0.07;
};

// Per-frame nearest-neighbour classification against a text gallery.
// Scores are the softmax over all gallery similarities divided by the
// temperature, restricted to the k best entries, so the output plugs
// straight into the post-processing pipeline.
FrameTopK nn_classify(const Matd& frame_embeddings, const Matd& text_gallery,
                      const std::vector<Gloss>& gallery_labels,
                      const GalleryClassifierParams& params, const TimingParams& timing);

struct DirectionReport {
  std::map<std::size_t, double> recall;  // k -> R@k percentage
  std::size_t med_rank = 0;
};

struct RetrievalReport {
  DirectionReport query_to_gallery;  // t2v when queries are the text side
  DirectionReport gallery_to_query;  // v2t
};

// Queries and gallery are aligned i <-> i; both directions are computed
// by transposing the similarity matrix.
RetrievalReport retrieve(const Matd& queries, const Matd& gallery,
                         const std::vector<std::size_t>& ks);

}  // namespace signjoint::retrieval

#endif  // SIGNJOINT_RETRIEVAL_HPP
