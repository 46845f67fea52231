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

#ifndef SIGNJOINT_TYPES_HPP
#define SIGNJOINT_TYPES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace signjoint::corpus {

// Partially- and non-lexical sign categories. Purely lexical signs carry
// no tag (std::nullopt wherever an optional SignType appears).
enum class SignType : std::uint8_t {
  kPointing,          // P
  kFingerspelling,    // FS
  kDepicting,         // D
  kGesture,           // G
  kTimeline,          // T
  kSlang,             // S
  kName,              // N
  kFacialExpression,  // FE
  kUnknown,           // U
};

// Short-form tag ("P", "FS", ...). Throws on an unknown tag string.
SignType sign_type_from_tag(const std::string& tag);
const char* sign_type_tag(SignType t);

// One sign label: ordered word alternatives (first is primary) plus an
// optional sign-type tag. Words are normalized lowercase tokens; a word
// may contain spaces ("long time" is one sign).
struct Gloss {
  std::vector<std::string> words;
  std::optional<SignType> sign_type;

  const std::string& primary() const { return words.front(); }
  bool operator==(const Gloss&) const = default;
};

// Validates the word-list invariants (lowercase, trimmed, non-empty, no
// tab/newline; empty list only for unknown signs). Throws naming the
// offending field.
void validate_gloss(const Gloss& g);

struct GlossSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  Gloss gloss;
  std::optional<double> confidence;

  double mid_s() const { return 0.5 * (start_s + end_s); }
  bool operator==(const GlossSegment&) const = default;
};

void validate_segment(const GlossSegment& s);

struct SentenceRecord {
  std::string id;
  std::string episode_id;
  std::string subtitle;
  std::pair<double, double> span{0.0, 0.0};
  std::vector<GlossSegment> segments;  // sorted by start_s, inside span

  bool operator==(const SentenceRecord&) const = default;
};

void validate_record(const SentenceRecord& r);

// Sliding-window geometry of the frozen video backbone: feature frame f
// covers raw frames [f*stride, f*stride + window) and is anchored at its
// center time.
struct TimingParams {
  int window = 16;
  int stride = 2;
  double fps = 25.0;

  double frame_center_s(std::int64_t f) const {
    return (static_cast<double>(f) * stride + window * 0.5) / fps;
  }
  double frame_step_s() const { return stride / fps; }

  // First feature frame whose center is >= t (never negative).
  std::int64_t first_frame_at_or_after(double t) const;

  bool operator==(const TimingParams&) const = default;
};

void validate_timing(const TimingParams& t);

}  // namespace signjoint::corpus

#endif  // SIGNJOINT_TYPES_HPP
