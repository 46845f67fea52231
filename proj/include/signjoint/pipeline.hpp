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

#ifndef SIGNJOINT_PIPELINE_HPP
#define SIGNJOINT_PIPELINE_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "signjoint/annotations.hpp"
#include "signjoint/metrics.hpp"
#include "signjoint/postprocess.hpp"
#include "signjoint/retrieval.hpp"

namespace signjoint::cli {

// Predictions paired to ground truth by record id, in gt file order.
// Ids present only in gt evaluate against an empty prediction; ids
// present only in the prediction file are a data error.
struct PairedSentences {
  std::vector<std::string> ids;
  std::vector<std::vector<corpus::GlossSegment>> pred;
  std::vector<std::vector<corpus::GlossSegment>> gt;
  std::size_t missing_pred_records = 0;
};

PairedSentences pair_records(const std::vector<corpus::SentenceRecord>& pred,
                             const std::vector<corpus::SentenceRecord>& gt);

// Sentence-parallel evaluation; the fold order is fixed by gt order, so
// results do not depend on the thread count.
metrics::EvalNumbers evaluate_paired(const PairedSentences& paired,
                                     const metrics::EvalOptions& options, int threads = 1);

struct EndToEndParams {
  retrieval::GalleryClassifierParams classifier;
  postproc::PostprocessParams post;
};

// Frame embeddings -> nn_classify -> postprocess -> per-record slices
// (a segment belongs to the record whose span contains its midpoint).
struct EndToEndPrediction {
  std::vector<corpus::GlossSegment> segments;  // whole stream
  PairedSentences paired;
  std::size_t segments_outside_spans = 0;
};

EndToEndPrediction end_to_end_predict(const Matd& frame_embeddings, const Matd& gallery,
                                      const std::vector<corpus::Gloss>& gallery_vocab,
                                      const std::vector<corpus::SentenceRecord>& gt,
                                      const corpus::SynonymTable& synonyms,
                                      const EndToEndParams& params);

// The full inference path, identical to invoking the stages manually.
metrics::EvalNumbers end_to_end_pipeline(const Matd& frame_embeddings, const Matd& gallery,
                                         const std::vector<corpus::Gloss>& gallery_vocab,
                                         const std::vector<corpus::SentenceRecord>& gt,
                                         const corpus::SynonymTable& synonyms,
                                         const EndToEndParams& params, int threads = 1);

// ---- report serialization (schema_version 1) -----------------------------

nlohmann::ordered_json eval_numbers_to_json(const metrics::EvalNumbers& numbers);
// Aligned plain-text table with WER / mIoU / F1 columns in percent.
std::string eval_numbers_table(const metrics::EvalNumbers& numbers);
nlohmann::ordered_json retrieval_report_to_json(const retrieval::RetrievalReport& report);

// Gallery vocabulary file: one label per line, word alternatives
// tab-separated (first is primary).
std::vector<corpus::Gloss> parse_vocab(const std::string& bytes);
std::string write_vocab(const std::vector<corpus::Gloss>& vocab);

}  // namespace signjoint::cli

#endif  // SIGNJOINT_PIPELINE_HPP
