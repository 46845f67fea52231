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

#include "signjoint/types.hpp"

#include <cmath>
#include <stdexcept>

namespace signjoint::corpus {

SignType sign_type_from_tag(const std::string& tag) {
  if (tag == "P") return SignType::kPointing;
  if (tag == "FS") return SignType::kFingerspelling;
  if (tag == "D") return SignType::kDepicting;
  if (tag == "G") return SignType::kGesture;
  if (tag == "T") return SignType::kTimeline;
  if (tag == "S") return SignType::kSlang;
  if (tag == "N") return SignType::kName;
  if (tag == "FE") return SignType::kFacialExpression;
  if (tag == "U") return SignType::kUnknown;
  throw std::runtime_error("unknown sign_type tag: \"" + tag + "\"");
}

const char* sign_type_tag(SignType t) {
  switch (t) {
    case SignType::kPointing: return "P";
    case SignType::kFingerspelling: return "FS";
    case SignType::kDepicting: return "D";
    case SignType::kGesture: return "G";
    case SignType::kTimeline: return "T";
    case SignType::kSlang: return "S";
    case SignType::kName: return "N";
    case SignType::kFacialExpression: return "FE";
    case SignType::kUnknown: return "U";
  }
  throw std::runtime_error("invalid SignType value");
}

void validate_gloss(const Gloss& g) {
  if (g.words.empty()) {
    if (g.sign_type != SignType::kUnknown)
      throw std::runtime_error("words: empty word list is only valid for sign_type U");
    return;
  }
  for (const std::string& w : g.words) {
    if (w.empty()) throw std::runtime_error("words: empty word");
    if (w.front() == ' ' || w.back() == ' ')
      throw std::runtime_error("words: word not trimmed: \"" + w + "\"");
    for (char c : w) {
      if (c == '\t' || c == '\n' || c == '\r')
        throw std::runtime_error("words: tab/newline inside word: \"" + w + "\"");
      if (c >= 'A' && c <= 'Z')
        throw std::runtime_error("words: word not lowercase: \"" + w + "\"");
    }
  }
}

void validate_segment(const GlossSegment& s) {
  if (!std::isfinite(s.start_s) || !std::isfinite(s.end_s))
    throw std::runtime_error("start_s/end_s: non-finite time");
  if (s.start_s < 0.0) throw std::runtime_error("start_s: negative time");
  if (!(s.start_s < s.end_s)) throw std::runtime_error("start_s < end_s violated");
  validate_gloss(s.gloss);
  if (s.confidence) {
    const double c = *s.confidence;
    if (!std::isfinite(c) || c < 0.0 || c > 1.0)
      throw std::runtime_error("confidence: outside [0, 1]");
  }
}

void validate_record(const SentenceRecord& r) {
  if (r.id.empty()) throw std::runtime_error("id: empty");
  if (!std::isfinite(r.span.first) || !std::isfinite(r.span.second))
    throw std::runtime_error("span: non-finite");
  if (r.span.first > r.span.second) throw std::runtime_error("span: start > end");
  double prev_start = -1.0;
  for (const GlossSegment& s : r.segments) {
    validate_segment(s);
    if (s.start_s < prev_start)
      throw std::runtime_error("segments: not sorted by start_s (record \"" + r.id + "\")");
    prev_start = s.start_s;
    if (s.start_s < r.span.first || s.end_s > r.span.second)
      throw std::runtime_error("segments: segment outside span (record \"" + r.id + "\")");
  }
}

std::int64_t TimingParams::first_frame_at_or_after(double t) const {
  const double f = (t * fps - window * 0.5) / stride;
  const auto fi = static_cast<std::int64_t>(std::ceil(f - 1e-9));
  return fi < 0 ? 0 : fi;
}

void validate_timing(const TimingParams& t) {
  if (t.stride < 1 || t.window < t.stride)
    throw std::runtime_error("timing: window >= stride >= 1 violated");
  if (!(t.fps > 0.0)) throw std::runtime_error("timing: fps must be positive");
}

}  // namespace signjoint::corpus
