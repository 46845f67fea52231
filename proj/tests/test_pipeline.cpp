#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "signjoint/matrix.hpp"
#include "signjoint/pipeline.hpp"

using namespace signjoint;
using namespace signjoint::cli;

namespace {

corpus::SentenceRecord record(const std::string& id, double start, double end) {
  corpus::SentenceRecord r;
  r.id = id;
  r.episode_id = "e";
  r.span = {start, end};
  return r;
}

}  // namespace

TEST_CASE("pair_records matches by id and treats absent predictions as empty") {
  corpus::SentenceRecord gt1 = record("a", 0, 1);
  corpus::GlossSegment seg;
  seg.start_s = 0.1;
  seg.end_s = 0.6;
  seg.gloss = corpus::Gloss{{"hello"}, std::nullopt};
  gt1.segments = {seg};
  const corpus::SentenceRecord gt2 = record("b", 1, 2);

  corpus::SentenceRecord pred1 = gt1;
  const PairedSentences paired = pair_records({pred1}, {gt1, gt2});
  CHECK(paired.ids == std::vector<std::string>{"a", "b"});
  CHECK(paired.pred[0].size() == 1);
  CHECK(paired.pred[1].empty());
  CHECK(paired.missing_pred_records == 1);

  // prediction id unknown to gt is a data error
  const corpus::SentenceRecord stray = record("zz", 0, 1);
  CHECK_THROWS_WITH_AS(pair_records({stray}, {gt1}), doctest::Contains("zz"),
                       std::runtime_error);
  // duplicate ids are data errors
  CHECK_THROWS_AS(pair_records({pred1, pred1}, {gt1}), std::runtime_error);
  CHECK_THROWS_AS(pair_records({}, {gt1, gt1}), std::runtime_error);
}

TEST_CASE("evaluate_paired is independent of the thread count") {
  Rng rng(41);
  std::vector<corpus::SentenceRecord> gt;
  for (int i = 0; i < 24; ++i) {
    corpus::SentenceRecord r = record("s" + std::to_string(i), i, i + 1.0);
    double cursor = i + 0.05;
    for (int k = 0; k < 3; ++k) {
      corpus::GlossSegment s;
      s.start_s = cursor;
      s.end_s = cursor + 0.25;
      s.gloss = corpus::Gloss{{"w" + std::to_string(rng.uniform_int(6))}, std::nullopt};
      r.segments.push_back(s);
      cursor += 0.3;
    }
    gt.push_back(r);
  }
  const PairedSentences paired = pair_records(gt, gt);
  const metrics::EvalOptions options;
  const metrics::EvalNumbers one = evaluate_paired(paired, options, 1);
  const metrics::EvalNumbers four = evaluate_paired(paired, options, 4);
  CHECK(one.wer == four.wer);
  CHECK(one.miou == four.miou);
  CHECK(one.counts == four.counts);
}

TEST_CASE("end_to_end_pipeline equals composing the stages manually") {
  // Synthetic stream: noisy one-hot frame embeddings over a 4-word
  // gallery, two sentence records tiling the stream.
  Rng rng(43);
  const std::size_t vocab = 4, dim = 6, frames = 80;
  Matd gallery(vocab, dim);
  for (std::size_t i = 0; i < vocab; ++i)
    for (std::size_t j = 0; j < dim; ++j) gallery(i, j) = rng.gaussian();
  std::vector<corpus::Gloss> labels;
  for (std::size_t i = 0; i < vocab; ++i)
    labels.push_back({{"w" + std::to_string(i)}, std::nullopt});

  Matd stream(frames, dim);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t w = (f / 10) % vocab;  // runs of 10 frames
    for (std::size_t j = 0; j < dim; ++j)
      stream(f, j) = gallery(w, j) + 0.05 * rng.gaussian();
  }

  corpus::TimingParams timing;
  const double t_end = timing.frame_center_s(frames);
  std::vector<corpus::SentenceRecord> gt;
  gt.push_back(record("first", 0.0, t_end / 2));
  gt.push_back(record("second", t_end / 2, t_end));
  for (auto& r : gt) {
    corpus::GlossSegment s;
    s.start_s = r.span.first + 0.05;
    s.end_s = r.span.first + 0.6;
    s.gloss = corpus::Gloss{{"w0"}, std::nullopt};
    r.segments = {s};
  }

  EndToEndParams params;
  params.post.timing = timing;
  const corpus::SynonymTable synonyms = corpus::load_synonyms("w0\tw1\n");

  const metrics::EvalNumbers fused =
      end_to_end_pipeline(stream, gallery, labels, gt, synonyms, params, 1);

  // Staged: classify, post-process, slice by midpoint, evaluate.
  const corpus::FrameTopK topk =
      retrieval::nn_classify(stream, gallery, labels, params.classifier, timing);
  const auto segments = postproc::postprocess(topk, synonyms, params.post);
  metrics::EvalOptions options;
  options.synonyms = synonyms;
  std::vector<metrics::SentenceEval> evals;
  for (const auto& r : gt) {
    std::vector<corpus::GlossSegment> pred;
    for (const auto& s : segments)
      if (s.mid_s() >= r.span.first && s.mid_s() < r.span.second) pred.push_back(s);
    evals.push_back(metrics::evaluate_sentence(pred, r.segments, options));
  }
  const metrics::EvalNumbers staged = metrics::aggregate(evals);

  CHECK(fused.wer == staged.wer);
  CHECK(fused.miou == staged.miou);
  CHECK(fused.counts == staged.counts);
  for (const auto& [t, v] : staged.f1) CHECK(fused.f1.at(t) == v);
}

TEST_CASE("a threshold above every score leaves only deletions") {
  Rng rng(47);
  const std::size_t vocab = 3, dim = 4;
  Matd gallery(vocab, dim);
  for (double& v : gallery.a) v = rng.gaussian();
  std::vector<corpus::Gloss> labels;
  for (std::size_t i = 0; i < vocab; ++i)
    labels.push_back({{"w" + std::to_string(i)}, std::nullopt});
  Matd stream(40, dim);
  for (double& v : stream.a) v = rng.gaussian();

  corpus::TimingParams timing;
  corpus::SentenceRecord r = record("only", 0.0, timing.frame_center_s(40));
  corpus::GlossSegment s;
  s.start_s = 0.4;
  s.end_s = 1.0;
  s.gloss = corpus::Gloss{{"w0"}, std::nullopt};
  r.segments = {s};

  EndToEndParams params;
  params.post.timing = timing;
  params.post.theta = 1.0;  // softmax over 3 items never reaches 1
  const metrics::EvalNumbers numbers =
      end_to_end_pipeline(stream, gallery, labels, {r}, corpus::SynonymTable{}, params, 1);
  CHECK(numbers.wer == doctest::Approx(1.0));
  CHECK(numbers.counts.deletions == 1);
  CHECK(numbers.counts.insertions == 0);
}
