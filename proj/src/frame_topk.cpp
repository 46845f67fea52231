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

#include "signjoint/frame_topk.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace signjoint::corpus {

using nlohmann::ordered_json;

void validate_frame_topk(const FrameTopK& t) {
  validate_timing(t.timing);
  if (t.k < 1) throw std::runtime_error("frame_topk: k must be >= 1");
  for (const Gloss& g : t.label_vocab) validate_gloss(g);
  for (std::size_t f = 0; f < t.frames.size(); ++f) {
    const auto& entries = t.frames[f];
    if (entries.size() > static_cast<std::size_t>(t.k))
      throw std::runtime_error("frame_topk: more than k entries at frame " + std::to_string(f));
    double prev = 1.0;
    for (const TopKEntry& e : entries) {
      if (e.label_id < 0 || static_cast<std::size_t>(e.label_id) >= t.label_vocab.size())
        throw std::runtime_error("frame_topk: label_id out of range at frame " + std::to_string(f));
      if (!std::isfinite(e.score) || e.score < 0.0 || e.score > 1.0)
        throw std::runtime_error("frame_topk: score outside [0, 1] at frame " + std::to_string(f));
      if (e.score > prev + 1e-12)
        throw std::runtime_error("frame_topk: scores not non-increasing at frame " +
                                 std::to_string(f));
      prev = e.score;
    }
  }
}

namespace {

ordered_json gloss_to_json(const Gloss& g) {
  ordered_json j;
  j["words"] = g.words;
  j["sign_type"] = g.sign_type ? ordered_json(sign_type_tag(*g.sign_type)) : ordered_json(nullptr);
  return j;
}

Gloss gloss_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("words") || !j.contains("sign_type"))
    throw std::runtime_error("gloss: expected object with words and sign_type");
  Gloss g;
  for (const auto& w : j.at("words")) g.words.push_back(w.get<std::string>());
  const auto& st = j.at("sign_type");
  if (!st.is_null()) g.sign_type = sign_type_from_tag(st.get<std::string>());
  validate_gloss(g);
  return g;
}

}  // namespace

std::string write_frame_topk(const FrameTopK& t) {
  validate_frame_topk(t);
  ordered_json j;
  j["fps"] = t.timing.fps;
  j["stride"] = t.timing.stride;
  j["window"] = t.timing.window;
  j["k"] = t.k;
  j["label_vocab"] = ordered_json::array();
  for (const Gloss& g : t.label_vocab) j["label_vocab"].push_back(gloss_to_json(g));
  j["frames"] = ordered_json::array();
  for (const auto& entries : t.frames) {
    ordered_json frame = ordered_json::array();
    for (const TopKEntry& e : entries) frame.push_back({e.label_id, e.score});
    j["frames"].push_back(std::move(frame));
  }
  return j.dump();
}

FrameTopK load_frame_topk(const std::string& bytes) {
  ordered_json j;
  try {
    j = ordered_json::parse(bytes);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("frame_topk: invalid JSON: ") + e.what());
  }
  FrameTopK t;
  try {
    t.timing.fps = j.at("fps").get<double>();
    t.timing.stride = j.at("stride").get<int>();
    t.timing.window = j.at("window").get<int>();
    t.k = j.at("k").get<int>();
    for (const auto& g : j.at("label_vocab")) t.label_vocab.push_back(gloss_from_json(g));
    for (const auto& frame : j.at("frames")) {
      std::vector<TopKEntry> entries;
      for (const auto& pair : frame) {
        if (!pair.is_array() || pair.size() != 2)
          throw std::runtime_error("frame entry is not a [label_id, score] pair");
        entries.push_back({pair[0].get<int>(), pair[1].get<double>()});
      }
      t.frames.push_back(std::move(entries));
    }
  } catch (const ordered_json::exception& e) {
    throw std::runtime_error(std::string("frame_topk: ") + e.what());
  }
  validate_frame_topk(t);
  return t;
}

}  // namespace signjoint::corpus
