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

#include "signjoint/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace signjoint::joint {

void validate_synth_config(const SynthConfig& c) {
  if (c.vocab_size < 2) throw std::runtime_error("synth: vocab_size must be >= 2");
  if (c.latent_dim == 0 || c.video_dim == 0 || c.text_dim == 0)
    throw std::runtime_error("synth: zero dimension");
  if (c.signs_min < 1 || c.signs_max < c.signs_min)
    throw std::runtime_error("synth: invalid signs-per-sentence range");
  if (!(c.sign_duration_min_s > 0.0) || c.sign_duration_max_s < c.sign_duration_min_s)
    throw std::runtime_error("synth: invalid sign duration range");
  if (c.noise < 0.0) throw std::runtime_error("synth: negative noise");
  if (c.identity_lifts && (c.video_dim != c.latent_dim || c.text_dim != c.latent_dim))
    throw std::runtime_error("synth: identity lifts require matching dimensions");
  corpus::validate_timing(c.timing);
}

namespace {

Matd random_unit_rows(Rng& rng, std::size_t rows, std::size_t cols) {
  Matd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double norm = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = rng.gaussian();
      norm += m(i, j) * m(i, j);
    }
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < cols; ++j) m(i, j) /= norm;
  }
  return m;
}

Matd make_lift(Rng& rng, std::size_t in, std::size_t out, bool identity) {
  Matd m(in, out);
  if (identity) {
    for (std::size_t i = 0; i < in; ++i) m(i, i) = 1.0;
    return m;
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  for (double& v : m.a) v = scale * rng.gaussian();
  return m;
}

std::string word_name(std::size_t i) {
  std::string s = "w";
  if (i < 10) s += '0';
  s += std::to_string(i);
  return s;
}

}  // namespace

SynthCorpus synth_corpus(const SynthConfig& config) {
  validate_synth_config(config);
  SynthCorpus out;
  out.config = config;
  Rng rng(config.seed ^ 0x53594e5448ULL);  // distinct stream from training

  for (std::size_t i = 0; i < config.vocab_size; ++i)
    out.vocab.push_back(corpus::Gloss{{word_name(i)}, std::nullopt});

  const Matd latents = random_unit_rows(rng, config.vocab_size, config.latent_dim);
  const Matd lift_video =
      make_lift(rng, config.latent_dim, config.video_dim, config.identity_lifts);
  const Matd lift_text = make_lift(rng, config.latent_dim, config.text_dim, config.identity_lifts);
  out.word_text = matmul(latents, lift_text);

  std::set<std::vector<int>> seen_multisets;

  const auto generate_split = [&](std::vector<TrainSentence>& split, std::size_t count,
                                  const std::string& prefix) {
    double cursor = config.timing.window * 0.5 / config.timing.fps;
    std::int64_t next_frame = 0;
    int previous_last_word = -1;
    for (std::size_t s = 0; s < count; ++s) {
      // Word sequence: no adjacent repeats (also across the sentence
      // boundary) and a fresh word multiset per sentence.
      std::vector<int> words;
      for (int attempt = 0; attempt < 1000; ++attempt) {
        words.clear();
        const int n =
            config.signs_min + static_cast<int>(rng.uniform_int(
                                   static_cast<std::uint64_t>(config.signs_max - config.signs_min + 1)));
        int prev = previous_last_word;
        for (int k = 0; k < n; ++k) {
          int w;
          do {
            w = static_cast<int>(rng.uniform_int(config.vocab_size));
          } while (w == prev);
          words.push_back(w);
          prev = w;
        }
        std::vector<int> key = words;
        std::sort(key.begin(), key.end());
        if (seen_multisets.insert(key).second) break;
        words.clear();
      }
      if (words.empty())
        throw std::runtime_error("synth: could not draw a fresh sentence (vocab too small?)");

      TrainSentence sent;
      sent.id = prefix + std::to_string(s);
      sent.subtitle_words = words;
      sent.span.first = cursor;
      for (std::size_t k = 0; k < words.size(); ++k) {
        const double dur = rng.uniform(config.sign_duration_min_s, config.sign_duration_max_s);
        corpus::GlossSegment seg;
        seg.start_s = cursor;
        seg.end_s = cursor + dur;
        seg.gloss = out.vocab[static_cast<std::size_t>(words[k])];
        sent.segments.push_back(seg);
        sent.segment_word.push_back(words[k]);
        cursor += dur;
      }
      sent.span.second = cursor;
      previous_last_word = words.back();

      // Frames whose center falls inside the span; spans tile the
      // timeline so the split stream has no holes.
      sent.first_frame = next_frame;
      std::vector<std::size_t> frame_sign;
      for (std::int64_t f = next_frame;; ++f) {
        const double center = config.timing.frame_center_s(f);
        if (center >= sent.span.second) break;
        std::size_t k = 0;
        while (k + 1 < sent.segments.size() && center >= sent.segments[k].end_s) ++k;
        frame_sign.push_back(k);
      }
      next_frame += static_cast<std::int64_t>(frame_sign.size());

      // Noise is calibrated against the unit-norm word latents: a noise
      // level of x adds a perturbation of expected norm x.
      const double noise_scale =
          config.noise / std::sqrt(static_cast<double>(config.latent_dim));
      sent.frames = Matd(frame_sign.size(), config.video_dim);
      Matd latent_row(1, config.latent_dim);
      for (std::size_t f = 0; f < frame_sign.size(); ++f) {
        const std::size_t wid = static_cast<std::size_t>(words[frame_sign[f]]);
        for (std::size_t j = 0; j < config.latent_dim; ++j)
          latent_row(0, j) = latents(wid, j) + noise_scale * rng.gaussian();
        const Matd lifted = matmul(latent_row, lift_video);
        for (std::size_t j = 0; j < config.video_dim; ++j) sent.frames(f, j) = lifted(0, j);
      }

      // Sentence text embedding: mean of the word text embeddings, the
      // same convention the augmenter re-derives after word drops.
      sent.sentence_text = Matd(1, config.text_dim);
      for (int w : words)
        for (std::size_t j = 0; j < config.text_dim; ++j)
          sent.sentence_text(0, j) += out.word_text(static_cast<std::size_t>(w), j);
      for (std::size_t j = 0; j < config.text_dim; ++j)
        sent.sentence_text(0, j) /= static_cast<double>(words.size());

      split.push_back(std::move(sent));
    }
  };

  generate_split(out.train, config.train_sentences, "train");
  generate_split(out.val, config.val_sentences, "val");
  return out;
}

std::vector<corpus::SentenceRecord> synth_records(const SynthCorpus& corpus_data,
                                                  const std::vector<TrainSentence>& split) {
  std::vector<corpus::SentenceRecord> records;
  for (const TrainSentence& s : split) {
    corpus::SentenceRecord r;
    r.id = s.id;
    r.episode_id = "synth";
    for (std::size_t k = 0; k < s.subtitle_words.size(); ++k) {
      if (k) r.subtitle += ' ';
      r.subtitle += corpus_data.vocab[static_cast<std::size_t>(s.subtitle_words[k])].primary();
    }
    r.span = s.span;
    r.segments = s.segments;
    corpus::validate_record(r);
    records.push_back(std::move(r));
  }
  return records;
}

Matd split_stream(const std::vector<TrainSentence>& split) {
  std::size_t total = 0;
  std::size_t cols = 0;
  for (const TrainSentence& s : split) {
    total += s.frames.rows;
    cols = s.frames.cols;
  }
  Matd out(total, cols);
  std::size_t row = 0;
  for (const TrainSentence& s : split) {
    for (std::size_t f = 0; f < s.frames.rows; ++f, ++row)
      for (std::size_t j = 0; j < cols; ++j) out(row, j) = s.frames(f, j);
  }
  return out;
}

}  // namespace signjoint::joint
