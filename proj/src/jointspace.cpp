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

#include "signjoint/jointspace.hpp"

#include <cmath>
#include <stdexcept>

namespace signjoint::joint {

void validate_loss_weights(const JointLossWeights& w) {
  if (w.lambda_sent < 0.0 || w.lambda_sign < 0.0)
    throw std::runtime_error("loss weights must be non-negative");
  if (w.lambda_sent == 0.0 && w.lambda_sign == 0.0)
    throw std::runtime_error("loss weights must not both be zero");
}

std::vector<Matd*> JointModel::parameters() {
  std::vector<Matd*> out{&heads.video_sign.w, &heads.video_sign.b, &heads.video_sent.w,
                         &heads.video_sent.b, &heads.text_sign.w,  &heads.text_sign.b,
                         &heads.text_sent.w,  &heads.text_sent.b};
  if (attention) {
    out.push_back(&attention->wq);
    out.push_back(&attention->wk);
    out.push_back(&attention->wv);
    out.push_back(&attention->wo);
  }
  return out;
}

std::vector<const Matd*> JointModel::parameters() const {
  auto mut = const_cast<JointModel*>(this)->parameters();
  return {mut.begin(), mut.end()};
}

std::vector<Matd*> ModelGrads::tensors(JointModel& model) {
  std::vector<Matd*> out{&video_sign.dw, &video_sign.db, &video_sent.dw, &video_sent.db,
                         &text_sign.dw,  &text_sign.db,  &text_sent.dw,  &text_sent.db};
  if (model.attention) {
    if (!attention) throw std::runtime_error("ModelGrads: missing attention grads");
    out.push_back(&attention->dwq);
    out.push_back(&attention->dwk);
    out.push_back(&attention->dwv);
    out.push_back(&attention->dwo);
  }
  return out;
}

namespace {

Matd gaussian_matrix(Rng& rng, std::size_t r, std::size_t c, double scale) {
  Matd m(r, c);
  for (double& v : m.a) v = scale * rng.gaussian();
  return m;
}

// Initialization is deliberately small relative to the Adam step budget
// (steps * learning_rate) so that desk-scale runs at the default
// learning rate can move the heads decisively; cosine similarities are
// scale-free, so only the direction of the weights matters.
constexpr double kHeadInitScale = 0.01;
constexpr double kAttentionInitScale = 0.005;

AffineHead make_head(Rng& rng, std::size_t in, std::size_t out) {
  AffineHead head(in, out);
  head.w = gaussian_matrix(rng, in, out, kHeadInitScale);
  // bias stays zero
  return head;
}

}  // namespace

JointModel make_joint_model(std::size_t video_dim, std::size_t text_dim, std::size_t joint_dim,
                            bool with_attention, Rng& rng) {
  JointModel model;
  model.heads.video_sign = make_head(rng, video_dim, joint_dim);
  model.heads.video_sent = make_head(rng, video_dim, joint_dim);
  model.heads.text_sign = make_head(rng, text_dim, joint_dim);
  model.heads.text_sent = make_head(rng, text_dim, joint_dim);
  if (with_attention) {
    AttentionLayer layer(video_dim);
    // Keeps the residual path dominant at the start.
    layer.wq = gaussian_matrix(rng, video_dim, video_dim, kAttentionInitScale);
    layer.wk = gaussian_matrix(rng, video_dim, video_dim, kAttentionInitScale);
    layer.wv = gaussian_matrix(rng, video_dim, video_dim, kAttentionInitScale);
    layer.wo = gaussian_matrix(rng, video_dim, video_dim, kAttentionInitScale);
    model.attention = std::move(layer);
  }
  return model;
}

void validate_augment_params(const AugmentParams& p) {
  for (double prob : {p.p_sub_drop, p.p_word_drop, p.p_seq_drop, p.p_frame_drop})
    if (!(prob >= 0.0 && prob <= 1.0))
      throw std::runtime_error("augment: probability outside [0, 1]");
  if (p.shift_range_s < 0.0) throw std::runtime_error("augment: negative shift range");
}

namespace {

Matd mean_of_rows(const Matd& m, const std::vector<int>& rows) {
  Matd out(1, m.cols);
  for (int r : rows)
    for (std::size_t j = 0; j < m.cols; ++j) out(0, j) += m(static_cast<std::size_t>(r), j);
  for (std::size_t j = 0; j < m.cols; ++j) out(0, j) /= static_cast<double>(rows.size());
  return out;
}

// Pseudo-label word id for the frame center (or -1): the frame must sit
// inside the shifted span and inside a segment, both half-open.
int label_for_center(const TrainSentence& s, double center, std::pair<double, double> span) {
  if (center < span.first || center >= span.second) return -1;
  for (std::size_t k = 0; k < s.segments.size(); ++k)
    if (center >= s.segments[k].start_s && center < s.segments[k].end_s)
      return s.segment_word[k];
  return -1;
}

}  // namespace

BatchSentence augment(const TrainSentence& sentence, const Matd& word_text,
                      const corpus::TimingParams& timing, const AugmentParams& params, Rng& rng) {
  validate_augment_params(params);
  BatchSentence out;

  // Text side: drop words, re-derive the sentence embedding from the
  // survivors. Untouched sentences keep the stored embedding bit-exactly.
  bool words_dropped = false;
  std::vector<int> surviving_words = sentence.subtitle_words;
  if (rng.bernoulli(params.p_sub_drop)) {
    std::vector<int> kept;
    for (int w : sentence.subtitle_words)
      if (!rng.bernoulli(params.p_word_drop)) kept.push_back(w);
    if (kept.size() != sentence.subtitle_words.size()) words_dropped = true;
    if (kept.empty() && !sentence.subtitle_words.empty()) {
      kept.push_back(sentence.subtitle_words[rng.uniform_int(sentence.subtitle_words.size())]);
      words_dropped = true;
    }
    surviving_words = std::move(kept);
  }
  out.sentence_text =
      words_dropped ? mean_of_rows(word_text, surviving_words) : sentence.sentence_text;

  // Video side: drop feature frames; survivors keep their timeline slot.
  std::vector<std::size_t> kept_frames;
  if (rng.bernoulli(params.p_seq_drop)) {
    for (std::size_t f = 0; f < sentence.frames.rows; ++f)
      if (!rng.bernoulli(params.p_frame_drop)) kept_frames.push_back(f);
    if (kept_frames.empty() && sentence.frames.rows > 0)
      kept_frames.push_back(rng.uniform_int(sentence.frames.rows));
  } else {
    for (std::size_t f = 0; f < sentence.frames.rows; ++f) kept_frames.push_back(f);
  }

  const double shift = rng.uniform(-params.shift_range_s, params.shift_range_s);
  const std::pair<double, double> shifted{sentence.span.first + shift,
                                          sentence.span.second + shift};

  out.frames = Matd(kept_frames.size(), sentence.frames.cols);
  out.frame_word.resize(kept_frames.size());
  for (std::size_t i = 0; i < kept_frames.size(); ++i) {
    const std::size_t f = kept_frames[i];
    for (std::size_t j = 0; j < sentence.frames.cols; ++j)
      out.frames(i, j) = sentence.frames(f, j);
    const double center =
        timing.frame_center_s(sentence.first_frame + static_cast<std::int64_t>(f));
    out.frame_word[i] = label_for_center(sentence, center, shifted);
  }
  return out;
}

BatchSentence to_batch_sentence(const TrainSentence& sentence,
                                const corpus::TimingParams& timing) {
  BatchSentence out;
  out.frames = sentence.frames;
  out.sentence_text = sentence.sentence_text;
  out.frame_word.resize(sentence.frames.rows);
  for (std::size_t f = 0; f < sentence.frames.rows; ++f) {
    const double center =
        timing.frame_center_s(sentence.first_frame + static_cast<std::int64_t>(f));
    out.frame_word[f] = label_for_center(sentence, center, sentence.span);
  }
  return out;
}

namespace {

// Row-normalized copy plus the original norms.
Matd normalize_rows(const Matd& m, std::vector<double>& norms) {
  Matd out = m;
  norms.resize(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * m(i, j);
    const double n = std::sqrt(s);
    if (n == 0.0) throw std::runtime_error("joint_loss: zero-norm embedding row");
    norms[i] = n;
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) /= n;
  }
  return out;
}

// d(raw) from d(normalized): dx = (dy - (dy . y_hat) y_hat) / |x|.
Matd normalize_rows_backward(const Matd& normalized, const std::vector<double>& norms,
                             const Matd& dy) {
  Matd dx(dy.rows, dy.cols);
  for (std::size_t i = 0; i < dy.rows; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < dy.cols; ++j) dot += dy(i, j) * normalized(i, j);
    for (std::size_t j = 0; j < dy.cols; ++j)
      dx(i, j) = (dy(i, j) - dot * normalized(i, j)) / norms[i];
  }
  return dx;
}

// Mean of the two retrieval directions, with per-direction frozen
// weights. Returns d/dS as well when grad != nullptr.
double symmetric_hn_nce(const Matd& s, const HnNceParams& params, std::optional<Matd>& frozen_fwd,
                        std::optional<Matd>& frozen_bwd, Matd* grad) {
  const Matd st = transpose(s);
  if (s.rows >= 2) {
    if (!frozen_fwd) frozen_fwd = hn_nce_weights(s, params.beta, params.tau);
    if (!frozen_bwd) frozen_bwd = hn_nce_weights(st, params.beta, params.tau);
  }
  double loss;
  if (s.rows == 1) {
    loss = std::log(params.alpha);
    if (grad) *grad = Matd(1, 1);
    return loss;
  }
  loss = 0.5 * (hn_nce_loss_with_weights(s, *frozen_fwd, params) +
                hn_nce_loss_with_weights(st, *frozen_bwd, params));
  if (grad) {
    const Matd gf = hn_nce_grad_with_weights(s, *frozen_fwd, params);
    const Matd gb = hn_nce_grad_with_weights(st, *frozen_bwd, params);
    *grad = Matd(s.rows, s.cols);
    for (std::size_t i = 0; i < s.rows; ++i)
      for (std::size_t j = 0; j < s.cols; ++j)
        (*grad)(i, j) = 0.5 * (gf(i, j) + gb(j, i));
  }
  return loss;
}

struct ForwardState {
  // Per sentence
  std::vector<Matd> contextual;               // attention output (or input)
  std::vector<AttentionCache> caches;
  std::vector<std::vector<std::size_t>> pool_argmax;
  Matd pooled;       // B x dv
  Matd text_in;      // B x dt
  // Sign pairs
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (sentence, frame row)
  Matd sign_video_in;  // P x dv
  Matd sign_text_in;   // P x dt
};

}  // namespace

JointLossResult joint_loss(const JointModel& model, const std::vector<BatchSentence>& batch,
                           const Matd& word_text, const JointLossParams& params,
                           FrozenHnWeights* frozen, bool compute_grads) {
  validate_loss_weights(params.weights);
  validate_hn_nce_params(params.sent);
  validate_hn_nce_params(params.sign);
  if (batch.empty()) throw std::runtime_error("joint_loss: empty batch");

  const std::size_t b = batch.size();
  const std::size_t dv = model.video_dim();
  const std::size_t dt = model.text_dim();

  FrozenHnWeights local_frozen;
  FrozenHnWeights& fw = frozen ? *frozen : local_frozen;

  ForwardState st;
  st.contextual.resize(b);
  st.caches.resize(b);
  st.pool_argmax.resize(b);
  st.pooled = Matd(b, dv);
  st.text_in = Matd(b, dt);

  for (std::size_t i = 0; i < b; ++i) {
    const BatchSentence& sent = batch[i];
    if (sent.frames.rows == 0) throw std::runtime_error("joint_loss: sentence without frames");
    if (sent.frames.cols != dv || sent.sentence_text.cols != dt)
      throw std::runtime_error("joint_loss: dimension mismatch");
    st.contextual[i] =
        model.attention
            ? self_attention_forward(*model.attention, sent.frames, sent.frames.rows,
                                     compute_grads ? &st.caches[i] : nullptr)
            : sent.frames;
    const Matd pooled =
        max_pool_temporal(st.contextual[i], st.contextual[i].rows, &st.pool_argmax[i]);
    for (std::size_t j = 0; j < dv; ++j) st.pooled(i, j) = pooled(0, j);
    for (std::size_t j = 0; j < dt; ++j) st.text_in(i, j) = sent.sentence_text(0, j);
    for (std::size_t f = 0; f < sent.frame_word.size(); ++f)
      if (sent.frame_word[f] >= 0) st.pairs.emplace_back(i, f);
  }

  const std::size_t p = st.pairs.size();
  st.sign_video_in = Matd(p, dv);
  st.sign_text_in = Matd(p, dt);
  for (std::size_t k = 0; k < p; ++k) {
    const auto [i, f] = st.pairs[k];
    for (std::size_t j = 0; j < dv; ++j) st.sign_video_in(k, j) = st.contextual[i](f, j);
    const int w = batch[i].frame_word[f];
    for (std::size_t j = 0; j < dt; ++j)
      st.sign_text_in(k, j) = word_text(static_cast<std::size_t>(w), j);
  }

  // Heads + cosine similarities.
  const Matd v_raw = affine_forward(model.heads.video_sent, st.pooled);
  const Matd t_raw = affine_forward(model.heads.text_sent, st.text_in);
  std::vector<double> v_norms, t_norms;
  const Matd v_hat = normalize_rows(v_raw, v_norms);
  const Matd t_hat = normalize_rows(t_raw, t_norms);
  const Matd s_sent = matmul_nt(v_hat, t_hat);

  JointLossResult result;
  result.sign_pairs = p;
  if (model.attention) result.grads.attention.emplace(dv);

  Matd g_sent;
  result.sent_loss = symmetric_hn_nce(s_sent, params.sent, fw.sent_fwd, fw.sent_bwd,
                                      compute_grads ? &g_sent : nullptr);

  Matd u_hat, w_hat, g_sign;
  std::vector<double> u_norms, w_norms;
  if (p == 0) {
    result.sign_term_skipped = true;
    result.sign_loss = 0.0;
  } else {
    const Matd u_raw = affine_forward(model.heads.video_sign, st.sign_video_in);
    const Matd w_raw = affine_forward(model.heads.text_sign, st.sign_text_in);
    u_hat = normalize_rows(u_raw, u_norms);
    w_hat = normalize_rows(w_raw, w_norms);
    const Matd s_sign = matmul_nt(u_hat, w_hat);
    result.sign_loss = symmetric_hn_nce(s_sign, params.sign, fw.sign_fwd, fw.sign_bwd,
                                        compute_grads ? &g_sign : nullptr);
  }

  result.total =
      params.weights.lambda_sent * result.sent_loss + params.weights.lambda_sign * result.sign_loss;
  if (!std::isfinite(result.total)) throw std::runtime_error("joint_loss: non-finite loss");
  if (!compute_grads) return result;

  // ---- backward ----------------------------------------------------------
  // dL/dS scaled by the task weights.
  for (double& v : g_sent.a) v *= params.weights.lambda_sent;

  // Sentence branch.
  Matd d_v_hat = matmul(g_sent, t_hat);
  Matd d_t_hat = matmul_tn(g_sent, v_hat);
  Matd d_v_raw = normalize_rows_backward(v_hat, v_norms, d_v_hat);
  Matd d_t_raw = normalize_rows_backward(t_hat, t_norms, d_t_hat);
  Matd d_pooled = affine_backward(model.heads.video_sent, st.pooled, d_v_raw, result.grads.video_sent);
  affine_backward(model.heads.text_sent, st.text_in, d_t_raw, result.grads.text_sent);

  // Sign branch.
  Matd d_sign_video_in;
  if (p > 0) {
    for (double& v : g_sign.a) v *= params.weights.lambda_sign;
    Matd d_u_hat = matmul(g_sign, w_hat);
    Matd d_w_hat = matmul_tn(g_sign, u_hat);
    Matd d_u_raw = normalize_rows_backward(u_hat, u_norms, d_u_hat);
    Matd d_w_raw = normalize_rows_backward(w_hat, w_norms, d_w_hat);
    d_sign_video_in =
        affine_backward(model.heads.video_sign, st.sign_video_in, d_u_raw, result.grads.video_sign);
    affine_backward(model.heads.text_sign, st.sign_text_in, d_w_raw, result.grads.text_sign);
  } else {
    // Keep gradient tensors allocated for the optimizer.
    result.grads.video_sign.dw = Matd(dv, model.joint_dim());
    result.grads.video_sign.db = Matd(1, model.joint_dim());
    result.grads.text_sign.dw = Matd(dt, model.joint_dim());
    result.grads.text_sign.db = Matd(1, model.joint_dim());
  }

  // Route into each sentence's contextual features, then through the
  // attention layer.
  std::size_t pair_cursor = 0;
  for (std::size_t i = 0; i < b; ++i) {
    Matd d_context(st.contextual[i].rows, dv);
    for (std::size_t j = 0; j < dv; ++j)
      d_context(st.pool_argmax[i][j], j) += d_pooled(i, j);
    while (pair_cursor < p && st.pairs[pair_cursor].first == i) {
      const std::size_t f = st.pairs[pair_cursor].second;
      for (std::size_t j = 0; j < dv; ++j) d_context(f, j) += d_sign_video_in(pair_cursor, j);
      ++pair_cursor;
    }
    if (model.attention)
      self_attention_backward(*model.attention, st.caches[i], d_context, *result.grads.attention);
  }
  return result;
}

double joint_loss_value(const JointModel& model, const std::vector<BatchSentence>& batch,
                        const Matd& word_text, const JointLossParams& params,
                        FrozenHnWeights* frozen) {
  return joint_loss(model, batch, word_text, params, frozen, /*compute_grads=*/false).total;
}

}  // namespace signjoint::joint
