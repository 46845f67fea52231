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

#include "signjoint/postprocess.hpp"

#include <algorithm>
#include <stdexcept>

namespace signjoint::postproc {

void validate_params(const PostprocessParams& p) {
  if (!(p.theta >= 0.0 && p.theta <= 1.0))
    throw std::runtime_error("postprocess: theta outside [0, 1]");
  if (p.min_repeats < 1) throw std::runtime_error("postprocess: min_repeats must be >= 1");
  corpus::validate_timing(p.timing);
}

FrameTopK merge_synonym_scores(const FrameTopK& topk, const SynonymTable& synonyms) {
  FrameTopK out = topk;
  if (synonyms.empty()) return out;
  for (auto& entries : out.frames) {
    std::vector<TopKEntry> merged;
    std::vector<bool> absorbed(entries.size(), false);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (absorbed[i]) continue;
      TopKEntry e = entries[i];
      const std::string& word = out.label_vocab[e.label_id].primary();
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        if (absorbed[j]) continue;
        const std::string& other = out.label_vocab[entries[j].label_id].primary();
        if (synonyms.equivalent(word, other)) {
          e.score += entries[j].score;
          absorbed[j] = true;
        }
      }
      e.score = std::min(e.score, 1.0);
      merged.push_back(e);
    }
    std::stable_sort(merged.begin(), merged.end(),
                     [](const TopKEntry& a, const TopKEntry& b) { return a.score > b.score; });
    entries = std::move(merged);
  }
  return out;
}

FrameLabels threshold_filter(const FrameTopK& topk, double theta) {
  FrameLabels out(topk.frames.size());
  for (std::size_t f = 0; f < topk.frames.size(); ++f) {
    const auto& entries = topk.frames[f];
    if (!entries.empty() && entries.front().score >= theta)
      out[f] = LabeledFrame{entries.front().label_id, entries.front().score};
  }
  return out;
}

std::vector<GlossSegment> collapse_repetitions(const FrameLabels& frames,
                                               const std::vector<Gloss>& label_vocab,
                                               int min_repeats, const TimingParams& timing) {
  std::vector<GlossSegment> segments;
  std::size_t f = 0;
  while (f < frames.size()) {
    if (!frames[f]) {
      ++f;
      continue;
    }
    const int label = frames[f]->label_id;
    std::size_t end = f;
    double score_sum = 0.0;
    while (end < frames.size() && frames[end] && frames[end]->label_id == label) {
      score_sum += frames[end]->score;
      ++end;
    }
    const std::size_t run = end - f;
    if (run >= static_cast<std::size_t>(min_repeats)) {
      GlossSegment seg;
      seg.start_s = timing.frame_center_s(static_cast<std::int64_t>(f));
      seg.end_s = timing.frame_center_s(static_cast<std::int64_t>(end - 1)) + timing.frame_step_s();
      seg.gloss = label_vocab.at(static_cast<std::size_t>(label));
      seg.confidence = score_sum / static_cast<double>(run);
      segments.push_back(std::move(seg));
    }
    f = end;
  }
  return segments;
}

std::vector<GlossSegment> postprocess(const FrameTopK& topk, const SynonymTable& synonyms,
                                      const PostprocessParams& params) {
  validate_params(params);
  const FrameTopK merged = merge_synonym_scores(topk, synonyms);
  const FrameLabels labeled = threshold_filter(merged, params.theta);
  return collapse_repetitions(labeled, merged.label_vocab, params.min_repeats, params.timing);
}

PseudoLabelTrack assign_pseudo_labels(const std::vector<GlossSegment>& segments,
                                      std::pair<double, double> sentence_span,
                                      const TimingParams& timing) {
  corpus::validate_timing(timing);
  std::vector<GlossSegment> sorted = segments;
  std::sort(sorted.begin(), sorted.end(),
            [](const GlossSegment& a, const GlossSegment& b) { return a.start_s < b.start_s; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].start_s < sorted[i - 1].end_s)
      throw std::runtime_error("assign_pseudo_labels: overlapping segments");

  PseudoLabelTrack track;
  track.segments = sorted;
  track.first_frame = timing.first_frame_at_or_after(sentence_span.first);
  for (std::int64_t f = track.first_frame;; ++f) {
    const double center = timing.frame_center_s(f);
    if (center >= sentence_span.second) break;
    std::optional<PseudoLabel> label;
    for (std::size_t s = 0; s < sorted.size(); ++s) {
      if (center >= sorted[s].start_s && center < sorted[s].end_s) {
        label = PseudoLabel{s, sorted[s].confidence.value_or(1.0)};
        break;
      }
    }
    track.frames.push_back(label);
  }
  return track;
}

}  // namespace signjoint::postproc
