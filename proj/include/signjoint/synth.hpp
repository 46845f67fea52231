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

#ifndef SIGNJOINT_SYNTH_HPP
#define SIGNJOINT_SYNTH_HPP

#include <string>
#include <vector>

#include "signjoint/jointspace.hpp"
#include "signjoint/types.hpp"

namespace signjoint::joint {

// Synthetic paired corpus standing in for frozen-backbone embeddings:
// unit word latents, sentences as latent sequences, frame features as
// noisy per-sign latents pushed through a fixed random lift, text
// embeddings as lifted word/sentence latents.
struct SynthConfig {
  std::size_t vocab_size = 20;
  std::size_t latent_dim = 16;
  std::size_t video_dim = 32;
  std::size_t text_dim = 48;
  std::size_t train_sentences = 256;
  std::size_t val_sentences = 64;
  int signs_min = 4;
  int signs_max = 8;
  double sign_duration_min_s = 0.6;
  double sign_duration_max_s = 0.96;
  double noise = 0.1;
  bool identity_lifts = false;  // requires video_dim == text_dim == latent_dim
  corpus::TimingParams timing;
  std::uint64_t seed = 0;
};

void validate_synth_config(const SynthConfig& c);

struct SynthCorpus {
  SynthConfig config;
  std::vector<corpus::Gloss> vocab;
  Matd word_text;  // vocab x text_dim
  // Each split lives on its own feature-frame timeline starting at
  // frame 0; sentence spans tile it without gaps, so the concatenated
  // per-sentence frames form the split's stream.
  std::vector<TrainSentence> train;
  std::vector<TrainSentence> val;
};

// Deterministic in the config seed. Generated sentences avoid repeated
// adjacent words (also across sentence boundaries) and duplicate word
// multisets, so pseudo-label runs and retrieval targets stay
// well-defined at desk scale.
SynthCorpus synth_corpus(const SynthConfig& config);

// Ground-truth annotation records for a split.
std::vector<corpus::SentenceRecord> synth_records(const SynthCorpus& corpus,
                                                  const std::vector<TrainSentence>& split);

// Concatenated frame features of a split (the split's stream).
Matd split_stream(const std::vector<TrainSentence>& split);

}  // namespace signjoint::joint

#endif  // SIGNJOINT_SYNTH_HPP
