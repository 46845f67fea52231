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

#ifndef SIGNJOINT_POSTPROCESS_HPP
#define SIGNJOINT_POSTPROCESS_HPP

#include <optional>
#include <vector>

#include "signjoint/frame_topk.hpp"
#include "signjoint/synonyms.hpp"
#include "signjoint/types.hpp"

namespace signjoint::postproc {

using corpus::FrameTopK;
using corpus::Gloss;
using corpus::GlossSegment;
using corpus::SynonymTable;
using corpus::TimingParams;
using corpus::TopKEntry;

struct PostprocessParams {
  double theta = 0.6;    // confidence threshold, inclusive
  int min_repeats = 6;   // minimum run length in feature frames
  TimingParams timing;
};

void validate_params(const PostprocessParams& p);

struct LabeledFrame {
  int label_id = 0;
  double score = 0.0;
  bool operator==(const LabeledFrame&) const = default;
};

// One optional (label, score) per feature frame.
using FrameLabels = std::vector<std::optional<LabeledFrame>>;

// Step (i): within each frame's top-k, entries whose primary words are
// synonym-equivalent are folded into the highest-scored member; its score
// becomes the clamped sum. Entries are processed in descending score
// order and absorbed entries do not chain further (the relation is not
// transitive). Result is re-sorted descending; a frame may end up with
// fewer than k entries.
FrameTopK merge_synonym_scores(const FrameTopK& topk, const SynonymTable& synonyms);

// Step (ii): keep a frame's top-1 entry iff its score >= theta.
FrameLabels threshold_filter(const FrameTopK& topk, double theta);

// Step (iii): maximal runs of >= min_repeats consecutive identical labels
// become segments. Gaps and label changes break runs. Segment confidence
// is the mean member score; times follow the feature-center convention:
// start = center(first), end = center(last) + stride/fps, so adjacent
// runs tile the timeline.
std::vector<GlossSegment> collapse_repetitions(const FrameLabels& frames,
                                               const std::vector<Gloss>& label_vocab,
                                               int min_repeats, const TimingParams& timing);

// The full pipeline: merge, threshold, collapse.
std::vector<GlossSegment> postprocess(const FrameTopK& topk, const SynonymTable& synonyms,
                                      const PostprocessParams& params);

struct PseudoLabel {
  std::size_t segment_index = 0;  // into PseudoLabelTrack::segments
  double score = 0.0;             // the covering segment's confidence
  bool operator==(const PseudoLabel&) const = default;
};

// Frame-sign correspondences for one sentence: global feature frames
// [first_frame, first_frame + frames.size()) are the frames whose center
// lies in [span.start, span.end); each is labeled iff its center also
// falls inside a segment (segments are half-open in time).
struct PseudoLabelTrack {
  std::int64_t first_frame = 0;
  std::vector<std::optional<PseudoLabel>> frames;
  std::vector<GlossSegment> segments;
};

// Segments must not overlap (postprocess output never does; this guards
// external input). Segments entirely outside the span label nothing.
PseudoLabelTrack assign_pseudo_labels(const std::vector<GlossSegment>& segments,
                                      std::pair<double, double> sentence_span,
                                      const TimingParams& timing);

}  // namespace signjoint::postproc

#endif  // SIGNJOINT_POSTPROCESS_HPP
