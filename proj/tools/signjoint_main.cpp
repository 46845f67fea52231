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

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "signjoint/annotations.hpp"
#include "signjoint/embedding.hpp"
#include "signjoint/frame_topk.hpp"
#include "signjoint/gradcheck.hpp"
#include "signjoint/manifest.hpp"
#include "signjoint/metrics.hpp"
#include "signjoint/pipeline.hpp"
#include "signjoint/postprocess.hpp"
#include "signjoint/retrieval.hpp"
#include "signjoint/synonyms.hpp"
#include "signjoint/synth.hpp"
#include "signjoint/train.hpp"

namespace {

namespace sj = signjoint;
using nlohmann::ordered_json;
using sj::cli::read_file;
using sj::cli::RunManifest;
using sj::cli::write_file;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Emits the report JSON to --out (manifest alongside) or stdout.
void emit_report(const std::string& json_text, const std::string& out_path,
                 const RunManifest& manifest) {
  if (out_path.empty()) {
    std::cout << json_text;
    if (!json_text.empty() && json_text.back() != '\n') std::cout << '\n';
  } else {
    write_file(out_path, json_text + "\n");
    manifest.write(out_path);
  }
}

std::vector<std::size_t> parse_ks(const std::string& csv) {
  std::vector<std::size_t> ks;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string field =
        csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!field.empty()) ks.push_back(std::stoul(field));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (ks.empty()) throw std::runtime_error("--ks: no ranks given");
  return ks;
}

sj::corpus::EmbeddingFile load_embedding_file(const std::string& path, RunManifest& manifest) {
  const std::string bytes = read_file(path);
  manifest.record_input(path, bytes);
  try {
    return sj::corpus::load_embeddings(bytes);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::vector<sj::corpus::SentenceRecord> load_annotation_file(const std::string& path,
                                                             RunManifest& manifest) {
  const std::string bytes = read_file(path);
  manifest.record_input(path, bytes);
  try {
    return sj::corpus::parse_annotations(bytes);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

sj::corpus::SynonymTable load_synonym_file(const std::string& path, RunManifest& manifest) {
  const std::string bytes = read_file(path);
  manifest.record_input(path, bytes);
  try {
    return sj::corpus::load_synonyms(bytes);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// ---- subcommand state ----------------------------------------------------

struct PostprocessArgs {
  std::string predictions, synonyms, out;
  double theta = 0.6;
  int min_repeats = 6;
};

struct PseudoLabelArgs {
  std::string segments, out;
  int window = 16, stride = 2;
  double fps = 25.0;
};

struct EvalCslrArgs {
  std::string pred, gt, synonyms, out;
  std::string frame_embeddings, gallery, gallery_vocab;
  bool no_synonyms = false;
  bool oracle_fp = false;
  std::string breakdown;  // "", "filter", "oracle"
  std::string types;
  int threads = 1;
  double theta = 0.6;
  int min_repeats = 6;
  int k = 5;
  double score_temperature = 0.07;
  int window = 16, stride = 2;
  double fps = 25.0;
};

struct EvalRetrievalArgs {
  std::string queries, gallery, out;
  std::string ks = "1,5,10,50";
};

struct TrainArgs {
  std::string config, out;
  long long seed = -1;
};

struct GradCheckArgs {
  std::string op = "all";
  int seeds = 10;
  unsigned long long seed = 0;
};

struct SweepArgs {
  std::string config, grid, out;
  long long seed = -1;
};

struct SynthArgs {
  std::string config, out;
  long long seed = -1;
};

int run_postprocess(const PostprocessArgs& args, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.command = "postprocess";
  manifest.argv = argv;
  manifest.config = {{"theta", std::to_string(args.theta)},
                     {"min_repeats", std::to_string(args.min_repeats)}};

  const std::string pred_bytes = read_file(args.predictions);
  manifest.record_input(args.predictions, pred_bytes);
  const sj::corpus::FrameTopK topk = sj::corpus::load_frame_topk(pred_bytes);

  sj::corpus::SynonymTable synonyms;
  if (!args.synonyms.empty()) synonyms = load_synonym_file(args.synonyms, manifest);

  sj::postproc::PostprocessParams params;
  params.theta = args.theta;
  params.min_repeats = args.min_repeats;
  params.timing = topk.timing;
  const std::vector<sj::corpus::GlossSegment> segments =
      sj::postproc::postprocess(topk, synonyms, params);

  sj::corpus::SentenceRecord record;
  record.id = std::filesystem::path(args.predictions).stem().string();
  record.episode_id = record.id;
  record.span = {0.0, topk.timing.frame_center_s(static_cast<std::int64_t>(topk.num_frames())) +
                          topk.timing.frame_step_s()};
  record.segments = segments;

  const std::string out_bytes = sj::corpus::write_annotations({record});
  if (args.out.empty()) {
    std::cout << out_bytes;
  } else {
    write_file(args.out, out_bytes);
    manifest.write(args.out);
  }
  return kExitOk;
}

int run_pseudo_label(const PseudoLabelArgs& args, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.command = "pseudo-label";
  manifest.argv = argv;
  sj::corpus::TimingParams timing{args.window, args.stride, args.fps};

  const auto records = load_annotation_file(args.segments, manifest);
  ordered_json out;
  out["fps"] = timing.fps;
  out["stride"] = timing.stride;
  out["window"] = timing.window;
  out["records"] = ordered_json::array();
  for (const auto& record : records) {
    const sj::postproc::PseudoLabelTrack track =
        sj::postproc::assign_pseudo_labels(record.segments, record.span, timing);
    ordered_json rec;
    rec["id"] = record.id;
    rec["first_frame"] = track.first_frame;
    rec["labels"] = ordered_json::array();
    for (std::size_t f = 0; f < track.frames.size(); ++f) {
      if (!track.frames[f]) continue;
      const auto& label = *track.frames[f];
      rec["labels"].push_back(
          {track.first_frame + static_cast<std::int64_t>(f),
           track.segments[label.segment_index].gloss.primary(), label.score});
    }
    out["records"].push_back(std::move(rec));
  }
  emit_report(out.dump(2), args.out, manifest);
  return kExitOk;
}

int run_eval_cslr(const EvalCslrArgs& args, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.command = "eval-cslr";
  manifest.argv = argv;

  const auto gt = load_annotation_file(args.gt, manifest);
  sj::corpus::SynonymTable synonyms;
  if (!args.synonyms.empty() && !args.no_synonyms)
    synonyms = load_synonym_file(args.synonyms, manifest);

  sj::metrics::EvalOptions options;
  options.synonyms = synonyms;
  options.oracle_remove_false_positives = args.oracle_fp;

  sj::cli::PairedSentences paired;
  std::size_t outside_spans = 0;
  if (!args.pred.empty()) {
    const auto pred = load_annotation_file(args.pred, manifest);
    paired = sj::cli::pair_records(pred, gt);
  } else {
    const auto frames = load_embedding_file(args.frame_embeddings, manifest);
    const auto gallery = load_embedding_file(args.gallery, manifest);
    const std::string vocab_bytes = read_file(args.gallery_vocab);
    manifest.record_input(args.gallery_vocab, vocab_bytes);
    const auto vocab = sj::cli::parse_vocab(vocab_bytes);

    sj::cli::EndToEndParams params;
    params.classifier.k = args.k;
    params.classifier.score_temperature = args.score_temperature;
    params.post.theta = args.theta;
    params.post.min_repeats = args.min_repeats;
    params.post.timing = sj::corpus::TimingParams{args.window, args.stride, args.fps};
    const sj::cli::EndToEndPrediction prediction =
        sj::cli::end_to_end_predict(sj::corpus::to_matd(frames.matrix),
                                    sj::corpus::to_matd(gallery.matrix), vocab, gt, synonyms,
                                    params);
    paired = prediction.paired;
    outside_spans = prediction.segments_outside_spans;
  }

  ordered_json report;
  if (args.breakdown.empty()) {
    const sj::metrics::EvalNumbers numbers =
        sj::cli::evaluate_paired(paired, options, args.threads);
    report = sj::cli::eval_numbers_to_json(numbers);
    std::ostream& table_out = args.out.empty() ? std::cerr : std::cout;
    table_out << sj::cli::eval_numbers_table(numbers);
  } else {
    const sj::metrics::BreakdownMode mode = args.breakdown == "filter"
                                                ? sj::metrics::BreakdownMode::kFilter
                                                : sj::metrics::BreakdownMode::kOracle;
    const sj::metrics::TypeSelection selection = sj::metrics::parse_type_selection(args.types);
    const sj::metrics::EvalNumbers numbers =
        sj::metrics::breakdown_by_type(paired.pred, paired.gt, mode, selection, options);
    report = sj::cli::eval_numbers_to_json(numbers);
    report["breakdown"] = args.breakdown;
    report["types"] = args.types;
    ordered_json per_type;
    for (const auto tag : selection.tags) {
      sj::metrics::TypeSelection single;
      single.tags = {tag};
      per_type[sj::corpus::sign_type_tag(tag)] = sj::cli::eval_numbers_to_json(
          sj::metrics::breakdown_by_type(paired.pred, paired.gt, mode, single, options));
    }
    if (selection.include_untyped) {
      sj::metrics::TypeSelection single;
      single.include_untyped = true;
      per_type["L"] = sj::cli::eval_numbers_to_json(
          sj::metrics::breakdown_by_type(paired.pred, paired.gt, mode, single, options));
    }
    report["per_type"] = std::move(per_type);
    std::ostream& table_out = args.out.empty() ? std::cerr : std::cout;
    table_out << sj::cli::eval_numbers_table(numbers);
  }
  report["synonyms_enabled"] = !synonyms.empty();
  report["oracle_remove_fp"] = args.oracle_fp;
  report["missing_pred_records"] = paired.missing_pred_records;
  if (args.pred.empty()) report["segments_outside_gt_spans"] = outside_spans;

  manifest.config = {{"threads", std::to_string(args.threads)},
                     {"oracle_fp", args.oracle_fp ? "true" : "false"},
                     {"breakdown", args.breakdown},
                     {"types", args.types}};
  emit_report(report.dump(2), args.out, manifest);
  return kExitOk;
}

int run_eval_retrieval(const EvalRetrievalArgs& args, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.command = "eval-retrieval";
  manifest.argv = argv;
  manifest.config = {{"ks", args.ks}};

  const auto queries = load_embedding_file(args.queries, manifest);
  const auto gallery = load_embedding_file(args.gallery, manifest);
  const std::vector<std::size_t> ks = parse_ks(args.ks);
  const sj::retrieval::RetrievalReport report = sj::retrieval::retrieve(
      sj::corpus::to_matd(queries.matrix), sj::corpus::to_matd(gallery.matrix), ks);
  emit_report(sj::cli::retrieval_report_to_json(report).dump(2), args.out, manifest);
  return kExitOk;
}

void write_head_checkpoint(const std::string& dir, const std::string& name,
                           const sj::joint::AffineHead& head) {
  sj::corpus::EmbeddingFile w;
  w.matrix = sj::corpus::from_matd(head.w);
  w.role = sj::corpus::EmbeddingRole::kHeadWeights;
  write_file(dir + "/" + name + ".w.emb", sj::corpus::write_embeddings(w));
  sj::corpus::EmbeddingFile b;
  b.matrix = sj::corpus::from_matd(head.b);
  b.role = sj::corpus::EmbeddingRole::kHeadBias;
  write_file(dir + "/" + name + ".b.emb", sj::corpus::write_embeddings(b));
}

void write_embedding(const std::string& path, const sj::Matd& m, sj::corpus::EmbeddingRole role) {
  sj::corpus::EmbeddingFile f;
  f.matrix = sj::corpus::from_matd(m);
  f.role = role;
  write_file(path, sj::corpus::write_embeddings(f));
}

int run_train(const TrainArgs& args, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.command = "train";
  manifest.argv = argv;

  const std::string config_bytes = read_file(args.config);
  manifest.record_input(args.config, config_bytes);

  sj::joint::SynthConfig synth_config;
  sj::joint::TrainConfig train_config = sj::joint::parse_train_config(config_bytes, &synth_config);
  if (args.seed >= 0) {
    train_config.seed = static_cast<std::uint64_t>(args.seed);
    synth_config.seed = static_cast<std::uint64_t>(args.seed);
  }
  manifest.seed = train_config.seed;

  const sj::joint::SynthCorpus corpus = sj::joint::synth_corpus(synth_config);
  const sj::joint::TrainResult result = sj::joint::train(train_config, corpus);

  const sj::retrieval::GalleryClassifierParams cls;
  sj::postproc::PostprocessParams post;
  post.timing = synth_config.timing;
  const sj::joint::SplitEval eval =
      sj::joint::evaluate_split(result.model, corpus, corpus.val, cls, post);

  std::filesystem::create_directories(args.out);
  write_file(args.out + "/config.txt", sj::joint::dump_train_config(train_config, synth_config));

  std::string log_bytes;
  for (const auto& entry : result.log) {
    ordered_json j;
    j["step"] = entry.step;
    j["total"] = entry.total;
    j["sent"] = entry.sent_loss;
    j["sign"] = entry.sign_loss;
    j["sign_pairs"] = entry.sign_pairs;
    log_bytes += j.dump();
    log_bytes += '\n';
  }
  write_file(args.out + "/train_log.jsonl", log_bytes);

  write_head_checkpoint(args.out, "head_video_sign", result.model.heads.video_sign);
  write_head_checkpoint(args.out, "head_video_sent", result.model.heads.video_sent);
  write_head_checkpoint(args.out, "head_text_sign", result.model.heads.text_sign);
  write_head_checkpoint(args.out, "head_text_sent", result.model.heads.text_sent);
  if (result.model.attention) {
    write_embedding(args.out + "/attention.wq.emb", result.model.attention->wq,
                    sj::corpus::EmbeddingRole::kHeadWeights);
    write_embedding(args.out + "/attention.wk.emb", result.model.attention->wk,
                    sj::corpus::EmbeddingRole::kHeadWeights);
    write_embedding(args.out + "/attention.wv.emb", result.model.attention->wv,
                    sj::corpus::EmbeddingRole::kHeadWeights);
    write_embedding(args.out + "/attention.wo.emb", result.model.attention->wo,
                    sj::corpus::EmbeddingRole::kHeadWeights);
  }

  // Joint-space embeddings of the validation split for the eval tools.
  const sj::joint::SplitEmbeddings emb =
      sj::joint::project_split(result.model, corpus, corpus.val);
  write_embedding(args.out + "/val_sentence_video.emb", emb.sentence_video,
                  sj::corpus::EmbeddingRole::kSentenceVideo);
  write_embedding(args.out + "/val_sentence_text.emb", emb.sentence_text,
                  sj::corpus::EmbeddingRole::kSentenceText);
  write_embedding(args.out + "/val_frames_joint.emb", emb.frames_joint,
                  sj::corpus::EmbeddingRole::kFrameVideo);
  write_embedding(args.out + "/gallery_joint.emb", emb.gallery_joint,
                  sj::corpus::EmbeddingRole::kWordText);
  write_file(args.out + "/val.jsonl",
             sj::corpus::write_annotations(sj::joint::synth_records(corpus, corpus.val)));
  write_file(args.out + "/vocab.txt", sj::cli::write_vocab(corpus.vocab));

  ordered_json eval_json;
  eval_json["t2v_r1"] = eval.t2v_r1;
  eval_json["v2t_r1"] = eval.v2t_r1;
  eval_json["cslr"] = sj::cli::eval_numbers_to_json(eval.cslr);
  eval_json["best_step"] = result.best_step;
  eval_json["best_val_t2v_r1"] = result.best_val_t2v_r1;
  eval_json["batches_without_sign_pairs"] = result.batches_without_sign_pairs;
  write_file(args.out + "/eval.json", eval_json.dump(2) + "\n");
  manifest.write(args.out + "/run");

  std::cerr << "train: final loss " << (result.log.empty() ? 0.0 : result.log.back().total)
            << ", val T2V R@1 " << eval.t2v_r1 << ", val WER " << eval.cslr.wer << "\n";
  return kExitOk;
}

int run_grad_check(const GradCheckArgs& args, const std::vector<std::string>& argv) {
  (void)argv;
  std::vector<std::string> ops;
  if (args.op == "all")
    ops = sj::joint::gradient_check_ops();
  else
    ops.push_back(args.op);
  bool ok = true;
  for (const std::string& op : ops) {
    const double err = sj::joint::run_gradient_check(op, args.seeds, args.seed);
    const bool pass = err < 1e-5;
    ok = ok && pass;
    std::printf("%-10s max relative error %.3e over %d seeds  [%s]\n", op.c_str(), err,
                args.seeds, pass ? "ok" : "FAIL");
  }
  return ok ? kExitOk : kExitData;
}

int run_sweep(const SweepArgs& args, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.command = "sweep-lambda";
  manifest.argv = argv;
  manifest.config = {{"grid", args.grid}};

  const std::string config_bytes = read_file(args.config);
  manifest.record_input(args.config, config_bytes);
  sj::joint::SynthConfig synth_config;
  sj::joint::TrainConfig base = sj::joint::parse_train_config(config_bytes, &synth_config);
  if (args.seed >= 0) {
    base.seed = static_cast<std::uint64_t>(args.seed);
    synth_config.seed = static_cast<std::uint64_t>(args.seed);
  }
  manifest.seed = base.seed;

  std::vector<double> grid;
  std::size_t pos = 0;
  while (pos <= args.grid.size()) {
    const std::size_t comma = args.grid.find(',', pos);
    const std::string field = args.grid.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!field.empty()) grid.push_back(std::stod(field));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (grid.empty()) throw std::runtime_error("--grid: empty");

  const sj::joint::SynthCorpus corpus = sj::joint::synth_corpus(synth_config);
  const sj::retrieval::GalleryClassifierParams cls;
  sj::postproc::PostprocessParams post;
  post.timing = synth_config.timing;

  ordered_json out = ordered_json::array();
  for (double lambda : grid) {
    sj::joint::TrainConfig cfg = base;
    cfg.loss.weights.lambda_sign = lambda;
    const sj::joint::TrainResult result = sj::joint::train(cfg, corpus);
    const sj::joint::SplitEval eval =
        sj::joint::evaluate_split(result.model, corpus, corpus.val, cls, post);
    ordered_json entry;
    entry["lambda_sign"] = lambda;
    entry["lambda_sent"] = cfg.loss.weights.lambda_sent;
    entry["wer"] = eval.cslr.wer;
    entry["miou"] = eval.cslr.miou;
    entry["t2v_r1"] = eval.t2v_r1;
    entry["v2t_r1"] = eval.v2t_r1;
    entry["report"] = sj::cli::eval_numbers_to_json(eval.cslr);
    out.push_back(std::move(entry));
    std::cerr << "sweep: lambda_sign " << lambda << " -> WER " << eval.cslr.wer << "\n";
  }
  emit_report(out.dump(2), args.out, manifest);
  return kExitOk;
}

int run_synth(const SynthArgs& args, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.command = "synth";
  manifest.argv = argv;

  sj::joint::SynthConfig config;
  if (!args.config.empty()) {
    const std::string bytes = read_file(args.config);
    manifest.record_input(args.config, bytes);
    sj::joint::parse_train_config(bytes, &config);
  }
  if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
  manifest.seed = config.seed;

  const sj::joint::SynthCorpus corpus = sj::joint::synth_corpus(config);
  std::filesystem::create_directories(args.out);

  write_file(args.out + "/train.jsonl",
             sj::corpus::write_annotations(sj::joint::synth_records(corpus, corpus.train)));
  write_file(args.out + "/val.jsonl",
             sj::corpus::write_annotations(sj::joint::synth_records(corpus, corpus.val)));
  write_embedding(args.out + "/frames_train.emb", sj::joint::split_stream(corpus.train),
                  sj::corpus::EmbeddingRole::kFrameVideo);
  write_embedding(args.out + "/frames_val.emb", sj::joint::split_stream(corpus.val),
                  sj::corpus::EmbeddingRole::kFrameVideo);
  write_embedding(args.out + "/word_text.emb", corpus.word_text,
                  sj::corpus::EmbeddingRole::kWordText);

  const auto sentence_text = [&](const std::vector<sj::joint::TrainSentence>& split) {
    sj::Matd m(split.size(), corpus.config.text_dim);
    for (std::size_t i = 0; i < split.size(); ++i)
      for (std::size_t j = 0; j < corpus.config.text_dim; ++j)
        m(i, j) = split[i].sentence_text(0, j);
    return m;
  };
  write_embedding(args.out + "/sentence_text_train.emb", sentence_text(corpus.train),
                  sj::corpus::EmbeddingRole::kSentenceText);
  write_embedding(args.out + "/sentence_text_val.emb", sentence_text(corpus.val),
                  sj::corpus::EmbeddingRole::kSentenceText);
  write_file(args.out + "/vocab.txt", sj::cli::write_vocab(corpus.vocab));

  ordered_json meta;
  meta["seed"] = config.seed;
  meta["vocab_size"] = config.vocab_size;
  meta["latent_dim"] = config.latent_dim;
  meta["video_dim"] = config.video_dim;
  meta["text_dim"] = config.text_dim;
  meta["noise"] = config.noise;
  meta["fps"] = config.timing.fps;
  meta["stride"] = config.timing.stride;
  meta["window"] = config.timing.window;
  write_file(args.out + "/meta.json", meta.dump(2) + "\n");
  manifest.write(args.out + "/run");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signjoint: CSLR and sign-language retrieval tooling over frozen embeddings"};
  app.require_subcommand(1);

  PostprocessArgs post_args;
  auto* post_cmd = app.add_subcommand(
      "postprocess", "Turn frame-level top-k predictions into timed gloss segments");
  post_cmd->add_option("--predictions", post_args.predictions, "FrameTopK JSON file")->required();
  post_cmd->add_option("--synonyms", post_args.synonyms, "synonym table file");
  post_cmd->add_option("--theta", post_args.theta, "confidence threshold (inclusive)");
  post_cmd->add_option("--min-repeats", post_args.min_repeats, "minimum run length");
  post_cmd->add_option("--out", post_args.out, "output annotation file");

  PseudoLabelArgs pseudo_args;
  auto* pseudo_cmd = app.add_subcommand(
      "pseudo-label", "Assign frame-sign correspondences from segment annotations");
  pseudo_cmd->add_option("--segments", pseudo_args.segments, "annotation file")->required();
  pseudo_cmd->add_option("--fps", pseudo_args.fps, "frames per second");
  pseudo_cmd->add_option("--stride", pseudo_args.stride, "feature stride in frames");
  pseudo_cmd->add_option("--window", pseudo_args.window, "feature window in frames");
  pseudo_cmd->add_option("--out", pseudo_args.out, "output JSON file");

  EvalCslrArgs cslr_args;
  auto* cslr_cmd = app.add_subcommand("eval-cslr", "Evaluate CSLR predictions (WER, mIoU, F1)");
  cslr_cmd->add_option("--pred", cslr_args.pred, "prediction annotation file");
  cslr_cmd->add_option("--frame-embeddings", cslr_args.frame_embeddings,
                       "joint-space frame embeddings (alternative to --pred)");
  cslr_cmd->add_option("--gallery", cslr_args.gallery, "joint-space gallery embeddings");
  cslr_cmd->add_option("--gallery-vocab", cslr_args.gallery_vocab, "gallery label file");
  cslr_cmd->add_option("--gt", cslr_args.gt, "ground-truth annotation file")->required();
  cslr_cmd->add_option("--synonyms", cslr_args.synonyms, "synonym table file");
  cslr_cmd->add_flag("--no-synonyms", cslr_args.no_synonyms, "evaluate without synonyms");
  cslr_cmd->add_flag("--oracle-fp", cslr_args.oracle_fp, "remove false-positive predictions");
  cslr_cmd->add_option("--breakdown", cslr_args.breakdown, "filter|oracle sign-type analysis")
      ->check(CLI::IsMember({"filter", "oracle"}));
  cslr_cmd->add_option("--types", cslr_args.types, "sign types, e.g. P,FS or all");
  cslr_cmd->add_option("--threads", cslr_args.threads, "evaluation threads");
  cslr_cmd->add_option("--theta", cslr_args.theta, "post-processing threshold");
  cslr_cmd->add_option("--min-repeats", cslr_args.min_repeats, "post-processing run length");
  cslr_cmd->add_option("--k", cslr_args.k, "classifier top-k");
  cslr_cmd->add_option("--score-temperature", cslr_args.score_temperature,
                       "classifier softmax temperature");
  cslr_cmd->add_option("--fps", cslr_args.fps, "frames per second");
  cslr_cmd->add_option("--stride", cslr_args.stride, "feature stride in frames");
  cslr_cmd->add_option("--window", cslr_args.window, "feature window in frames");
  cslr_cmd->add_option("--out", cslr_args.out, "output report file");

  EvalRetrievalArgs retr_args;
  auto* retr_cmd = app.add_subcommand("eval-retrieval", "R@k / MedR for paired embeddings");
  retr_cmd->add_option("--queries", retr_args.queries, "query embeddings (text side)")->required();
  retr_cmd->add_option("--gallery", retr_args.gallery, "gallery embeddings (video side)")
      ->required();
  retr_cmd->add_option("--ks", retr_args.ks, "comma-separated ranks");
  retr_cmd->add_option("--out", retr_args.out, "output report file");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train projection heads on a synthetic corpus");
  train_cmd->add_option("--config", train_args.config, "key=value config file")->required();
  train_cmd->add_option("--out", train_args.out, "output directory")->required();
  train_cmd->add_option("--seed", train_args.seed, "override config seeds");

  GradCheckArgs grad_args;
  auto* grad_cmd = app.add_subcommand("grad-check", "Finite-difference gradient verification");
  grad_cmd->add_option("--op", grad_args.op, "all|hnnce|affine|attention|pool|ce")
      ->check(CLI::IsMember({"all", "hnnce", "affine", "attention", "pool", "ce"}));
  grad_cmd->add_option("--seeds", grad_args.seeds, "random instances per op");
  grad_cmd->add_option("--seed", grad_args.seed, "base seed");

  SweepArgs sweep_args;
  auto* sweep_cmd =
      app.add_subcommand("sweep-lambda", "Train and evaluate across sign-loss weights");
  sweep_cmd->add_option("--config", sweep_args.config, "key=value config file")->required();
  sweep_cmd->add_option("--grid", sweep_args.grid, "comma-separated lambda_sign values")
      ->required();
  sweep_cmd->add_option("--seed", sweep_args.seed, "override config seeds");
  sweep_cmd->add_option("--out", sweep_args.out, "output report file");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic paired corpus");
  synth_cmd->add_option("--config", synth_args.config, "key=value config file");
  synth_cmd->add_option("--out", synth_args.out, "output directory")->required();
  synth_cmd->add_option("--seed", synth_args.seed, "override config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  const std::vector<std::string> plain_argv(argv, argv + argc);
  try {
    if (post_cmd->parsed()) return run_postprocess(post_args, plain_argv);
    if (pseudo_cmd->parsed()) return run_pseudo_label(pseudo_args, plain_argv);
    if (cslr_cmd->parsed()) {
      const bool have_embeddings = !cslr_args.frame_embeddings.empty() &&
                                   !cslr_args.gallery.empty() &&
                                   !cslr_args.gallery_vocab.empty();
      if (cslr_args.pred.empty() == !have_embeddings) {
        std::cerr << "eval-cslr: give either --pred or all of --frame-embeddings/--gallery/"
                     "--gallery-vocab\n";
        return kExitUsage;
      }
      if (!cslr_args.breakdown.empty() && cslr_args.types.empty()) {
        std::cerr << "eval-cslr: --breakdown requires --types\n";
        return kExitUsage;
      }
      return run_eval_cslr(cslr_args, plain_argv);
    }
    if (retr_cmd->parsed()) return run_eval_retrieval(retr_args, plain_argv);
    if (train_cmd->parsed()) return run_train(train_args, plain_argv);
    if (grad_cmd->parsed()) return run_grad_check(grad_args, plain_argv);
    if (sweep_cmd->parsed()) return run_sweep(sweep_args, plain_argv);
    if (synth_cmd->parsed()) return run_synth(synth_args, plain_argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
