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

#include "signjoint/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "signjoint/normalize.hpp"

namespace signjoint::cli {

PairedSentences pair_records(const std::vector<corpus::SentenceRecord>& pred,
                             const std::vector<corpus::SentenceRecord>& gt) {
  std::map<std::string, const corpus::SentenceRecord*> pred_by_id;
  for (const corpus::SentenceRecord& r : pred) {
    if (!pred_by_id.emplace(r.id, &r).second)
      throw std::runtime_error("duplicate prediction record id \"" + r.id + "\"");
  }
  std::map<std::string, bool> gt_ids;
  PairedSentences out;
  for (const corpus::SentenceRecord& r : gt) {
    if (!gt_ids.emplace(r.id, true).second)
      throw std::runtime_error("duplicate ground-truth record id \"" + r.id + "\"");
    out.ids.push_back(r.id);
    out.gt.push_back(r.segments);
    auto it = pred_by_id.find(r.id);
    if (it == pred_by_id.end()) {
      out.pred.emplace_back();
      ++out.missing_pred_records;
    } else {
      out.pred.push_back(it->second->segments);
    }
  }
  for (const auto& [id, rec] : pred_by_id)
    if (!gt_ids.count(id))
      throw std::runtime_error("prediction record id \"" + id + "\" not present in ground truth");
  return out;
}

metrics::EvalNumbers evaluate_paired(const PairedSentences& paired,
                                     const metrics::EvalOptions& options, int threads) {
  const std::size_t n = paired.gt.size();
  std::vector<metrics::SentenceEval> evals(n);
  if (threads < 1) threads = 1;
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i)
      evals[i] = metrics::evaluate_sentence(paired.pred[i], paired.gt[i], options);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          try {
            evals[i] = metrics::evaluate_sentence(paired.pred[i], paired.gt[i], options);
          } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(t)] = e.what();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const std::string& e : errors)
      if (!e.empty()) throw std::runtime_error(e);
  }
  return metrics::aggregate(evals);
}

EndToEndPrediction end_to_end_predict(const Matd& frame_embeddings, const Matd& gallery,
                                      const std::vector<corpus::Gloss>& gallery_vocab,
                                      const std::vector<corpus::SentenceRecord>& gt,
                                      const corpus::SynonymTable& synonyms,
                                      const EndToEndParams& params) {
  const corpus::FrameTopK topk =
      retrieval::nn_classify(frame_embeddings, gallery, gallery_vocab, params.classifier,
                             params.post.timing);
  EndToEndPrediction out;
  out.segments = postproc::postprocess(topk, synonyms, params.post);

  std::vector<bool> claimed(out.segments.size(), false);
  for (const corpus::SentenceRecord& r : gt) {
    out.paired.ids.push_back(r.id);
    out.paired.gt.push_back(r.segments);
    std::vector<corpus::GlossSegment> pred;
    for (std::size_t s = 0; s < out.segments.size(); ++s) {
      const double mid = out.segments[s].mid_s();
      if (mid >= r.span.first && mid < r.span.second) {
        pred.push_back(out.segments[s]);
        claimed[s] = true;
      }
    }
    out.paired.pred.push_back(std::move(pred));
  }
  for (bool c : claimed)
    if (!c) ++out.segments_outside_spans;
  return out;
}

metrics::EvalNumbers end_to_end_pipeline(const Matd& frame_embeddings, const Matd& gallery,
                                         const std::vector<corpus::Gloss>& gallery_vocab,
                                         const std::vector<corpus::SentenceRecord>& gt,
                                         const corpus::SynonymTable& synonyms,
                                         const EndToEndParams& params, int threads) {
  const EndToEndPrediction pred =
      end_to_end_predict(frame_embeddings, gallery, gallery_vocab, gt, synonyms, params);
  metrics::EvalOptions options;
  options.synonyms = synonyms;
  return evaluate_paired(pred.paired, options, threads);
}

namespace {

std::string threshold_key(double t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", t);
  return buf;
}

}  // namespace

nlohmann::ordered_json eval_numbers_to_json(const metrics::EvalNumbers& numbers) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["wer"] = numbers.wer;
  j["wer_mean_sentence"] = numbers.wer_mean_sentence;
  j["miou"] = numbers.miou;
  nlohmann::ordered_json f1;
  for (const auto& [t, v] : numbers.f1) f1[threshold_key(t)] = v;
  j["f1"] = f1;
  j["counts"] = {{"substitutions", numbers.counts.substitutions},
                 {"deletions", numbers.counts.deletions},
                 {"insertions", numbers.counts.insertions},
                 {"gt_length", numbers.counts.gt_length}};
  j["sentences"] = {{"evaluated", numbers.sentences_evaluated},
                    {"skipped_empty_gt", numbers.sentences_skipped}};
  return j;
}

std::string eval_numbers_table(const metrics::EvalNumbers& numbers) {
  std::ostringstream out;
  char line[160];
  std::string header = "        ";
  header += "   WER  mIoU";
  for (const auto& [t, v] : numbers.f1) {
    (void)v;
    std::snprintf(line, sizeof(line), "  F1@%.2f", t);
    header += line;
  }
  out << header << "\n";
  std::snprintf(line, sizeof(line), "corpus  %6.1f %5.1f", 100.0 * numbers.wer,
                100.0 * numbers.miou);
  out << line;
  for (const auto& [t, v] : numbers.f1) {
    (void)t;
    std::snprintf(line, sizeof(line), "  %7.1f", 100.0 * v);
    out << line;
  }
  out << "\n";
  return out.str();
}

nlohmann::ordered_json retrieval_report_to_json(const retrieval::RetrievalReport& report) {
  nlohmann::ordered_json j;
  const auto direction = [](const retrieval::DirectionReport& d) {
    nlohmann::ordered_json out;
    for (const auto& [k, v] : d.recall) out["r" + std::to_string(k)] = v;
    out["medr"] = d.med_rank;
    return out;
  };
  j["t2v"] = direction(report.query_to_gallery);
  j["v2t"] = direction(report.gallery_to_query);
  return j;
}

std::vector<corpus::Gloss> parse_vocab(const std::string& bytes) {
  std::vector<corpus::Gloss> vocab;
  std::istringstream in(bytes);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    corpus::Gloss g;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t tab = line.find('\t', pos);
      const std::string field =
          line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos);
      if (!field.empty()) g.words.push_back(corpus::normalize_word(field));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (g.words.empty()) throw std::runtime_error("vocab: line without words");
    corpus::validate_gloss(g);
    vocab.push_back(std::move(g));
  }
  return vocab;
}

std::string write_vocab(const std::vector<corpus::Gloss>& vocab) {
  std::string out;
  for (const corpus::Gloss& g : vocab) {
    for (std::size_t i = 0; i < g.words.size(); ++i) {
      if (i) out += '\t';
      out += g.words[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace signjoint::cli
