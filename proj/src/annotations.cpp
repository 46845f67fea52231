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

#include "signjoint/annotations.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace signjoint::corpus {

using nlohmann::ordered_json;

namespace {

void require_keys(const ordered_json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const char* what) {
  for (const char* k : required)
    if (!j.contains(k))
      throw std::runtime_error(std::string(what) + ": missing key \"" + k + "\"");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : required)
      if (it.key() == k) known = true;
    for (const char* k : optional)
      if (it.key() == k) known = true;
    if (!known)
      throw std::runtime_error(std::string(what) + ": unexpected key \"" + it.key() + "\"");
  }
}

GlossSegment segment_from_json(const ordered_json& j) {
  if (!j.is_object()) throw std::runtime_error("segment: expected object");
  require_keys(j, {"start_s", "end_s", "words", "sign_type"}, {"confidence"}, "segment");
  GlossSegment s;
  s.start_s = j.at("start_s").get<double>();
  s.end_s = j.at("end_s").get<double>();
  if (!j.at("words").is_array()) throw std::runtime_error("words: expected array");
  for (const auto& w : j.at("words")) s.gloss.words.push_back(w.get<std::string>());
  const auto& st = j.at("sign_type");
  if (!st.is_null()) s.gloss.sign_type = sign_type_from_tag(st.get<std::string>());
  if (j.contains("confidence")) s.confidence = j.at("confidence").get<double>();
  validate_segment(s);
  return s;
}

SentenceRecord record_from_json(const ordered_json& j) {
  if (!j.is_object()) throw std::runtime_error("record: expected object");
  require_keys(j, {"id", "episode_id", "subtitle", "span", "segments"}, {}, "record");
  SentenceRecord r;
  r.id = j.at("id").get<std::string>();
  r.episode_id = j.at("episode_id").get<std::string>();
  r.subtitle = j.at("subtitle").get<std::string>();
  const auto& span = j.at("span");
  if (!span.is_array() || span.size() != 2)
    throw std::runtime_error("span: expected [start_s, end_s]");
  r.span = {span[0].get<double>(), span[1].get<double>()};
  for (const auto& seg : j.at("segments")) r.segments.push_back(segment_from_json(seg));
  validate_record(r);
  return r;
}

}  // namespace

std::vector<SentenceRecord> parse_annotations(const std::string& bytes) {
  std::vector<SentenceRecord> records;
  std::istringstream in(bytes);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = true;
    for (char c : line)
      if (c != ' ' && c != '\t') blank = false;
    if (blank) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": malformed JSON: " + e.what());
    }
    try {
      records.push_back(record_from_json(j));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::string write_annotations(const std::vector<SentenceRecord>& records) {
  std::string out;
  for (const SentenceRecord& r : records) {
    validate_record(r);
    ordered_json j;
    j["id"] = r.id;
    j["episode_id"] = r.episode_id;
    j["subtitle"] = r.subtitle;
    j["span"] = {r.span.first, r.span.second};
    j["segments"] = ordered_json::array();
    for (const GlossSegment& s : r.segments) {
      ordered_json seg;
      seg["start_s"] = s.start_s;
      seg["end_s"] = s.end_s;
      seg["words"] = s.gloss.words;
      seg["sign_type"] =
          s.gloss.sign_type ? ordered_json(sign_type_tag(*s.gloss.sign_type)) : ordered_json(nullptr);
      if (s.confidence) seg["confidence"] = *s.confidence;
      j["segments"].push_back(std::move(seg));
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace signjoint::corpus
