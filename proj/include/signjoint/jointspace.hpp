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

#ifndef SIGNJOINT_JOINTSPACE_HPP
#define SIGNJOINT_JOINTSPACE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "signjoint/hn_nce.hpp"
#include "signjoint/matrix.hpp"
#include "signjoint/nn.hpp"
#include "signjoint/types.hpp"

namespace signjoint::joint {

struct JointLossWeights {
  double lambda_sent = 0.90;
  double lambda_sign = 0.0075;
};

void validate_loss_weights(const JointLossWeights& w);  // not both zero

// Four projection heads into the shared space: separate video/text maps
// for the sign-level and sentence-level tasks.
struct ProjectionHeads {
  AffineHead video_sign;
  AffineHead video_sent;
  AffineHead text_sign;
  AffineHead text_sent;
};

// The trainable model: projection heads plus an optional single
// self-attention layer that contextualizes frame features before the
// sign head and the temporal max-pool.
struct JointModel {
  ProjectionHeads heads;
  std::optional<AttentionLayer> attention;

  std::size_t video_dim() const { return heads.video_sign.in_dim(); }
  std::size_t text_dim() const { return heads.text_sign.in_dim(); }
  std::size_t joint_dim() const { return heads.video_sign.out_dim(); }

  std::vector<Matd*> parameters();
  std::vector<const Matd*> parameters() const;
};

JointModel make_joint_model(std::size_t video_dim, std::size_t text_dim, std::size_t joint_dim,
                            bool with_attention, Rng& rng);

// One training sentence as produced by the synthetic generator (or an
// equivalent loader): frame features on a per-split feature-frame
// timeline, pseudo-label segments inside the span, subtitle word ids
// into the corpus vocabulary.
struct TrainSentence {
  std::string id;
  std::pair<double, double> span{0.0, 0.0};
  std::vector<corpus::GlossSegment> segments;
  std::vector<int> segment_word;   // per segment: vocabulary word id
  std::vector<int> subtitle_words; // ordered word ids of the sentence
  std::int64_t first_frame = 0;    // split-stream index of frames.row(0)
  Matd frames;                     // F x video_dim
  Matd sentence_text;              // 1 x text_dim
};

struct AugmentParams {
  double p_sub_drop = 0.8;
  double p_word_drop = 0.4;
  double p_seq_drop = 0.8;
  double p_frame_drop = 0.5;
  double shift_range_s = 0.5;
};

void validate_augment_params(const AugmentParams& p);

// A sentence ready for the loss: surviving frames plus the pseudo-label
// word id per frame (-1 when unlabeled).
struct BatchSentence {
  Matd frames;
  Matd sentence_text;
  std::vector<int> frame_word;
};

// Word drop re-derives the sentence text embedding as the mean of the
// surviving words' text embeddings; frame drop removes feature rows but
// keeps the survivors' original timestamps; the span is shifted before
// pseudo-labels are assigned. At least one word and one frame always
// survive. Deterministic given the rng state.
BatchSentence augment(const TrainSentence& sentence, const Matd& word_text,
                      const corpus::TimingParams& timing, const AugmentParams& params, Rng& rng);

// Pass-through without augmentation (evaluation path).
BatchSentence to_batch_sentence(const TrainSentence& sentence,
                                const corpus::TimingParams& timing);

struct JointLossParams {
  JointLossWeights weights;
  HnNceParams sent{0.07, 1.0, 1.0};
  HnNceParams sign{0.07, 1.0, 0.5};
};

// Hard-negative weight matrices captured at the current point. The
// gradient treats them as constants, so finite-difference checks must
// re-evaluate the loss against the same frozen weights.
struct FrozenHnWeights {
  std::optional<Matd> sent_fwd, sent_bwd, sign_fwd, sign_bwd;
};

struct ModelGrads {
  AffineGrads video_sign, video_sent, text_sign, text_sent;
  std::optional<AttentionGrads> attention;

  std::vector<Matd*> tensors(JointModel& model);
};

struct JointLossResult {
  double total = 0.0;
  double sent_loss = 0.0;
  double sign_loss = 0.0;
  std::size_t sign_pairs = 0;
  bool sign_term_skipped = false;  // no pseudo-labeled frame in the batch
  ModelGrads grads;
};

// Sentence loss: mean of the two retrieval directions of HN-NCE over
// pooled sentence-video vs sentence-text embeddings. Sign loss: the
// same, over all pseudo-labeled (frame, word) pairs in the batch, which
// serve as mutual negatives. Similarities are cosine. Gradients flow to
// the heads and the attention layer.
JointLossResult joint_loss(const JointModel& model, const std::vector<BatchSentence>& batch,
                           const Matd& word_text, const JointLossParams& params,
                           FrozenHnWeights* frozen = nullptr, bool compute_grads = true);

double joint_loss_value(const JointModel& model, const std::vector<BatchSentence>& batch,
                        const Matd& word_text, const JointLossParams& params,
                        FrozenHnWeights* frozen = nullptr);

}  // namespace signjoint::joint

#endif  // SIGNJOINT_JOINTSPACE_HPP
