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

#ifndef SIGNJOINT_TRAIN_HPP
#define SIGNJOINT_TRAIN_HPP

#include <string>
#include <vector>

#include "signjoint/jointspace.hpp"
#include "signjoint/metrics.hpp"
#include "signjoint/postprocess.hpp"
#include "signjoint/retrieval.hpp"
#include "signjoint/synth.hpp"

namespace signjoint::joint {

struct TrainConfig {
  std::size_t batch_size = 32;   // >= 2 for the contrastive terms
  double learning_rate = 5e-5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t steps = 2000;
  std::size_t joint_dim = 24;
  bool attention = true;
  bool augment = true;
  // Upper bound on pseudo-labeled (frame, word) pairs per batch; extra
  // labeled frames are subsampled to keep the pair matrix tractable.
  std::size_t sign_pair_cap = 256;
  // Validation T2V R@1 checkpoint selection every this many steps
  // (0 keeps the final parameters).
  std::size_t eval_every = 50;
  JointLossParams loss;
  AugmentParams augment_params;
  std::uint64_t seed = 0;
};

void validate_train_config(const TrainConfig& c);

struct TrainLogEntry {
  std::size_t step = 0;
  double total = 0.0;
  double sent_loss = 0.0;
  double sign_loss = 0.0;
  std::size_t sign_pairs = 0;
};

struct TrainResult {
  JointModel model;
  std::vector<TrainLogEntry> log;
  std::size_t batches_without_sign_pairs = 0;
  double best_val_t2v_r1 = -1.0;  // -1 when checkpoint selection is off
  std::size_t best_step = 0;
};

// Deterministic given config.seed. Throws on divergence (non-finite
// loss), naming the step.
TrainResult train(const TrainConfig& config, const SynthCorpus& corpus);

// ---- evaluation of a trained model on a corpus split --------------------

struct SplitEmbeddings {
  Matd sentence_video;  // per sentence, pooled + sentence head
  Matd sentence_text;   // per sentence, text head
  Matd frames_joint;    // split stream through attention + sign head
  Matd gallery_joint;   // vocabulary words through the sign text head
};

SplitEmbeddings project_split(const JointModel& model, const SynthCorpus& corpus,
                              const std::vector<TrainSentence>& split);

struct SplitEval {
  double t2v_r1 = 0.0;
  double v2t_r1 = 0.0;
  metrics::EvalNumbers cslr;
};

// Retrieval over the split gallery plus end-to-end CSLR via
// nearest-neighbour classification and post-processing.
SplitEval evaluate_split(const JointModel& model, const SynthCorpus& corpus,
                         const std::vector<TrainSentence>& split,
                         const retrieval::GalleryClassifierParams& cls,
                         const postproc::PostprocessParams& post);

// key=value text configuration (one pair per line, '#' comments).
TrainConfig parse_train_config(const std::string& text, SynthConfig* synth);
std::string dump_train_config(const TrainConfig& train_config, const SynthConfig& synth_config);

}  // namespace signjoint::joint

#endif  // SIGNJOINT_TRAIN_HPP
