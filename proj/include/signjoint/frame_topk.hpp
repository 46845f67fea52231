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

#ifndef SIGNJOINT_FRAME_TOPK_HPP
#define SIGNJOINT_FRAME_TOPK_HPP

#include <string>
#include <vector>

#include "signjoint/types.hpp"

namespace signjoint::corpus {

struct TopKEntry {
  int label_id = 0;
  double score = 0.0;
  bool operator==(const TopKEntry&) const = default;
};

// Per-feature-frame top-k classifier outputs over a fixed label
// vocabulary. Scores are confidences in [0, 1], non-increasing within a
// frame; after synonym merging a frame may hold fewer than k entries.
struct FrameTopK {
  TimingParams timing;
  int k = 5;
  std::vector<Gloss> label_vocab;
  std::vector<std::vector<TopKEntry>> frames;

  std::size_t num_frames() const { return frames.size(); }
  bool operator==(const FrameTopK&) const = default;
};

void validate_frame_topk(const FrameTopK& t);

// JSON with keys fps, stride, window, k, label_vocab and "frames":
// per-frame arrays of [label_id, score] pairs.
std::string write_frame_topk(const FrameTopK& t);
FrameTopK load_frame_topk(const std::string& bytes);

}  // namespace signjoint::corpus

#endif  // SIGNJOINT_FRAME_TOPK_HPP
