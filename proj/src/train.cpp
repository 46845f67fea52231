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

#include "signjoint/train.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace signjoint::joint {

void validate_train_config(const TrainConfig& c) {
  if (c.batch_size < 2) throw std::runtime_error("train: batch_size must be >= 2");
  if (!(c.learning_rate >= 0.0)) throw std::runtime_error("train: negative learning rate");
  if (c.joint_dim == 0) throw std::runtime_error("train: joint_dim must be positive");
  validate_loss_weights(c.loss.weights);
  validate_hn_nce_params(c.loss.sent);
  validate_hn_nce_params(c.loss.sign);
  validate_augment_params(c.augment_params);
}

namespace {

struct AdamState {
  std::vector<Matd> m;
  std::vector<Matd> v;
  std::size_t t = 0;
};

void adam_step(std::vector<Matd*> params, const std::vector<Matd*>& grads, AdamState& state,
               const TrainConfig& cfg) {
  if (state.m.empty()) {
    for (Matd* p : params) {
      state.m.emplace_back(p->rows, p->cols);
      state.v.emplace_back(p->rows, p->cols);
    }
  }
  ++state.t;
  const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matd& p = *params[k];
    const Matd& g = *grads[k];
    Matd& m = state.m[k];
    Matd& v = state.v[k];
    for (std::size_t i = 0; i < p.a.size(); ++i) {
      m.a[i] = cfg.adam_beta1 * m.a[i] + (1.0 - cfg.adam_beta1) * g.a[i];
      v.a[i] = cfg.adam_beta2 * v.a[i] + (1.0 - cfg.adam_beta2) * g.a[i] * g.a[i];
      const double mhat = m.a[i] / bc1;
      const double vhat = v.a[i] / bc2;
      p.a[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_epsilon);
    }
  }
}

// Enforce the per-batch cap on sign pairs by unlabeling a random subset
// of labeled frames. Selection order is deterministic.
void cap_sign_pairs(std::vector<BatchSentence>& batch, std::size_t cap, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> labeled;
  for (std::size_t i = 0; i < batch.size(); ++i)
    for (std::size_t f = 0; f < batch[i].frame_word.size(); ++f)
      if (batch[i].frame_word[f] >= 0) labeled.emplace_back(i, f);
  if (cap == 0 || labeled.size() <= cap) return;
  // Partial Fisher-Yates: the first `cap` entries are the keepers.
  for (std::size_t k = 0; k < cap; ++k) {
    const std::size_t j = k + rng.uniform_int(labeled.size() - k);
    std::swap(labeled[k], labeled[j]);
  }
  for (std::size_t k = cap; k < labeled.size(); ++k)
    batch[labeled[k].first].frame_word[labeled[k].second] = -1;
}

}  // namespace

TrainResult train(const TrainConfig& config, const SynthCorpus& corpus) {
  validate_train_config(config);
  if (corpus.train.empty()) throw std::runtime_error("train: empty training split");

  Rng init_rng(config.seed);
  TrainResult result;
  result.model = make_joint_model(corpus.config.video_dim, corpus.config.text_dim,
                                  config.joint_dim, config.attention, init_rng);

  Rng data_rng(config.seed ^ 0x545241494eULL);
  std::vector<std::size_t> order(corpus.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::size_t cursor = order.size();  // trigger a shuffle on first use

  AdamState adam;
  JointModel best = result.model;

  for (std::size_t step = 1; step <= config.steps; ++step) {
    std::vector<BatchSentence> batch;
    batch.reserve(config.batch_size);
    while (batch.size() < config.batch_size) {
      if (cursor == order.size()) {
        for (std::size_t i = order.size(); i > 1; --i)
          std::swap(order[i - 1], order[data_rng.uniform_int(i)]);
        cursor = 0;
      }
      const TrainSentence& sent = corpus.train[order[cursor++]];
      batch.push_back(config.augment
                          ? augment(sent, corpus.word_text, corpus.config.timing,
                                    config.augment_params, data_rng)
                          : to_batch_sentence(sent, corpus.config.timing));
    }
    cap_sign_pairs(batch, config.sign_pair_cap, data_rng);

    JointLossResult loss;
    try {
      loss = joint_loss(result.model, batch, corpus.word_text, config.loss);
    } catch (const std::exception& e) {
      throw std::runtime_error("train: aborted at step " + std::to_string(step) + ": " + e.what());
    }
    if (!std::isfinite(loss.total))
      throw std::runtime_error("train: divergence (non-finite loss) at step " +
                               std::to_string(step));
    if (loss.sign_term_skipped) ++result.batches_without_sign_pairs;

    adam_step(result.model.parameters(), loss.grads.tensors(result.model), adam, config);
    result.log.push_back({step, loss.total, loss.sent_loss, loss.sign_loss, loss.sign_pairs});

    if (config.eval_every > 0 && !corpus.val.empty() &&
        (step % config.eval_every == 0 || step == config.steps)) {
      const SplitEmbeddings emb = project_split(result.model, corpus, corpus.val);
      const retrieval::RetrievalReport rep =
          retrieval::retrieve(emb.sentence_text, emb.sentence_video, {1});
      // Ties keep the latest checkpoint: the selection metric has
      // saturated and the other direction keeps improving.
      const double r1 = rep.query_to_gallery.recall.at(1);
      if (r1 >= result.best_val_t2v_r1) {
        result.best_val_t2v_r1 = r1;
        result.best_step = step;
        best = result.model;
      }
    }
  }

  if (config.eval_every > 0 && !corpus.val.empty()) result.model = best;
  return result;
}

SplitEmbeddings project_split(const JointModel& model, const SynthCorpus& corpus,
                              const std::vector<TrainSentence>& split) {
  SplitEmbeddings out;
  const std::size_t dv = model.video_dim();
  std::size_t total_frames = 0;
  for (const TrainSentence& s : split) total_frames += s.frames.rows;

  Matd pooled(split.size(), dv);
  Matd text_in(split.size(), model.text_dim());
  Matd frames_ctx(total_frames, dv);
  std::size_t row = 0;
  for (std::size_t i = 0; i < split.size(); ++i) {
    const TrainSentence& s = split[i];
    const Matd ctx = model.attention
                         ? self_attention_forward(*model.attention, s.frames, s.frames.rows, nullptr)
                         : s.frames;
    std::vector<std::size_t> argmax;
    const Matd p = max_pool_temporal(ctx, ctx.rows, &argmax);
    for (std::size_t j = 0; j < dv; ++j) pooled(i, j) = p(0, j);
    for (std::size_t j = 0; j < text_in.cols; ++j) text_in(i, j) = s.sentence_text(0, j);
    for (std::size_t f = 0; f < ctx.rows; ++f, ++row)
      for (std::size_t j = 0; j < dv; ++j) frames_ctx(row, j) = ctx(f, j);
  }

  out.sentence_video = affine_forward(model.heads.video_sent, pooled);
  out.sentence_text = affine_forward(model.heads.text_sent, text_in);
  out.frames_joint = affine_forward(model.heads.video_sign, frames_ctx);
  out.gallery_joint = affine_forward(model.heads.text_sign, corpus.word_text);
  return out;
}

SplitEval evaluate_split(const JointModel& model, const SynthCorpus& corpus,
                         const std::vector<TrainSentence>& split,
                         const retrieval::GalleryClassifierParams& cls,
                         const postproc::PostprocessParams& post) {
  SplitEval out;
  const SplitEmbeddings emb = project_split(model, corpus, split);

  const retrieval::RetrievalReport rep =
      retrieval::retrieve(emb.sentence_text, emb.sentence_video, {1});
  out.t2v_r1 = rep.query_to_gallery.recall.at(1);
  out.v2t_r1 = rep.gallery_to_query.recall.at(1);

  const corpus::FrameTopK topk = retrieval::nn_classify(
      emb.frames_joint, emb.gallery_joint, corpus.vocab, cls, corpus.config.timing);
  const corpus::SynonymTable no_synonyms;
  const std::vector<corpus::GlossSegment> segments =
      postproc::postprocess(topk, no_synonyms, post);

  // Slice stream-level segments to sentences by midpoint.
  metrics::EvalOptions options;
  std::vector<metrics::SentenceEval> sentence_reports;
  for (const TrainSentence& s : split) {
    std::vector<corpus::GlossSegment> pred;
    for (const corpus::GlossSegment& seg : segments)
      if (seg.mid_s() >= s.span.first && seg.mid_s() < s.span.second) pred.push_back(seg);
    sentence_reports.push_back(metrics::evaluate_sentence(pred, s.segments, options));
  }
  out.cslr = metrics::aggregate(sentence_reports);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return s.substr(a, b - a);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::runtime_error("config: invalid boolean for " + key + ": " + v);
}

}  // namespace

TrainConfig parse_train_config(const std::string& text, SynthConfig* synth) {
  TrainConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      if (key == "batch_size") cfg.batch_size = std::stoul(value);
      else if (key == "learning_rate") cfg.learning_rate = std::stod(value);
      else if (key == "adam_beta1") cfg.adam_beta1 = std::stod(value);
      else if (key == "adam_beta2") cfg.adam_beta2 = std::stod(value);
      else if (key == "adam_epsilon") cfg.adam_epsilon = std::stod(value);
      else if (key == "steps") cfg.steps = std::stoul(value);
      else if (key == "joint_dim") cfg.joint_dim = std::stoul(value);
      else if (key == "attention") cfg.attention = parse_bool(value, key);
      else if (key == "augment") cfg.augment = parse_bool(value, key);
      else if (key == "sign_pair_cap") cfg.sign_pair_cap = std::stoul(value);
      else if (key == "eval_every") cfg.eval_every = std::stoul(value);
      else if (key == "lambda_sent") cfg.loss.weights.lambda_sent = std::stod(value);
      else if (key == "lambda_sign") cfg.loss.weights.lambda_sign = std::stod(value);
      else if (key == "tau") { cfg.loss.sent.tau = std::stod(value); cfg.loss.sign.tau = cfg.loss.sent.tau; }
      else if (key == "alpha") { cfg.loss.sent.alpha = std::stod(value); cfg.loss.sign.alpha = cfg.loss.sent.alpha; }
      else if (key == "beta_sent") cfg.loss.sent.beta = std::stod(value);
      else if (key == "beta_sign") cfg.loss.sign.beta = std::stod(value);
      else if (key == "p_sub_drop") cfg.augment_params.p_sub_drop = std::stod(value);
      else if (key == "p_word_drop") cfg.augment_params.p_word_drop = std::stod(value);
      else if (key == "p_seq_drop") cfg.augment_params.p_seq_drop = std::stod(value);
      else if (key == "p_frame_drop") cfg.augment_params.p_frame_drop = std::stod(value);
      else if (key == "shift_range_s") cfg.augment_params.shift_range_s = std::stod(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (synth && key == "synth.vocab_size") synth->vocab_size = std::stoul(value);
      else if (synth && key == "synth.latent_dim") synth->latent_dim = std::stoul(value);
      else if (synth && key == "synth.video_dim") synth->video_dim = std::stoul(value);
      else if (synth && key == "synth.text_dim") synth->text_dim = std::stoul(value);
      else if (synth && key == "synth.train_sentences") synth->train_sentences = std::stoul(value);
      else if (synth && key == "synth.val_sentences") synth->val_sentences = std::stoul(value);
      else if (synth && key == "synth.signs_min") synth->signs_min = std::stoi(value);
      else if (synth && key == "synth.signs_max") synth->signs_max = std::stoi(value);
      else if (synth && key == "synth.sign_duration_min_s") synth->sign_duration_min_s = std::stod(value);
      else if (synth && key == "synth.sign_duration_max_s") synth->sign_duration_max_s = std::stod(value);
      else if (synth && key == "synth.noise") synth->noise = std::stod(value);
      else if (synth && key == "synth.identity_lifts") synth->identity_lifts = parse_bool(value, key);
      else if (synth && key == "synth.seed") synth->seed = std::stoull(value);
      else
        throw std::runtime_error("unknown key \"" + key + "\"");
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception&) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": bad value for " + key);
    }
  }
  validate_train_config(cfg);
  return cfg;
}

std::string dump_train_config(const TrainConfig& c, const SynthConfig& s) {
  std::ostringstream out;
  out.precision(17);
  out << "batch_size=" << c.batch_size << "\n"
      << "learning_rate=" << c.learning_rate << "\n"
      << "adam_beta1=" << c.adam_beta1 << "\n"
      << "adam_beta2=" << c.adam_beta2 << "\n"
      << "adam_epsilon=" << c.adam_epsilon << "\n"
      << "steps=" << c.steps << "\n"
      << "joint_dim=" << c.joint_dim << "\n"
      << "attention=" << (c.attention ? "true" : "false") << "\n"
      << "augment=" << (c.augment ? "true" : "false") << "\n"
      << "sign_pair_cap=" << c.sign_pair_cap << "\n"
      << "eval_every=" << c.eval_every << "\n"
      << "lambda_sent=" << c.loss.weights.lambda_sent << "\n"
      << "lambda_sign=" << c.loss.weights.lambda_sign << "\n"
      << "tau=" << c.loss.sent.tau << "\n"
      << "alpha=" << c.loss.sent.alpha << "\n"
      << "beta_sent=" << c.loss.sent.beta << "\n"
      << "beta_sign=" << c.loss.sign.beta << "\n"
      << "p_sub_drop=" << c.augment_params.p_sub_drop << "\n"
      << "p_word_drop=" << c.augment_params.p_word_drop << "\n"
      << "p_seq_drop=" << c.augment_params.p_seq_drop << "\n"
      << "p_frame_drop=" << c.augment_params.p_frame_drop << "\n"
      << "shift_range_s=" << c.augment_params.shift_range_s << "\n"
      << "seed=" << c.seed << "\n"
      << "synth.vocab_size=" << s.vocab_size << "\n"
      << "synth.latent_dim=" << s.latent_dim << "\n"
      << "synth.video_dim=" << s.video_dim << "\n"
      << "synth.text_dim=" << s.text_dim << "\n"
      << "synth.train_sentences=" << s.train_sentences << "\n"
      << "synth.val_sentences=" << s.val_sentences << "\n"
      << "synth.signs_min=" << s.signs_min << "\n"
      << "synth.signs_max=" << s.signs_max << "\n"
      << "synth.sign_duration_min_s=" << s.sign_duration_min_s << "\n"
      << "synth.sign_duration_max_s=" << s.sign_duration_max_s << "\n"
      << "synth.noise=" << s.noise << "\n"
      << "synth.identity_lifts=" << (s.identity_lifts ? "true" : "false") << "\n"
      << "synth.seed=" << s.seed << "\n";
  return out.str();
}

}  // namespace signjoint::joint
