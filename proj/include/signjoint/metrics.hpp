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

#ifndef SIGNJOINT_METRICS_HPP
#define SIGNJOINT_METRICS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "signjoint/synonyms.hpp"
#include "signjoint/types.hpp"

namespace signjoint::metrics {

using corpus::Gloss;
using corpus::GlossSegment;
using corpus::SignType;
using corpus::SynonymTable;

// Prediction tokens carry a single word; ground-truth tokens may list
// alternatives.
using TokenSeq = std::vector<Gloss>;

struct ErrorCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t gt_length = 0;

  std::size_t total_errors() const { return substitutions + deletions + insertions; }
  bool operator==(const ErrorCounts&) const = default;
};

// True iff the predicted (primary) word equals, or is a synonym of, any
// of the ground-truth token's alternative words.
bool token_match(const Gloss& pred, const Gloss& gt, const SynonymTable& synonyms);

// Ground-truth preparation: drops segments without words and all
// unknown-sign (*U) segments; typed segments that carry words stay.
std::vector<GlossSegment> filter_lexical(const std::vector<GlossSegment>& gt);

// Minimum-cost alignment (sub/del/ins cost 1, synonym-aware match cost
// 0). WER = (S+D+I) / |gt|. The (S, D, I) split is unique at optimal
// cost. Throws on empty gt.
std::pair<ErrorCounts, double> wer(const TokenSeq& pred, const TokenSeq& gt,
                                   const SynonymTable& synonyms);

// Multiset intersection as a maximum one-to-one matching under
// token_match; IoU = inter / (|pred| + |gt| - inter).
std::size_t matched_token_count(const TokenSeq& pred, const TokenSeq& gt,
                                const SynonymTable& synonyms);
double sentence_iou(const TokenSeq& pred, const TokenSeq& gt, const SynonymTable& synonyms);

double temporal_iou(const GlossSegment& a, const GlossSegment& b);

struct F1Counts {
  std::size_t matched = 0;
  std::size_t n_pred = 0;
  std::size_t n_gt = 0;
  bool operator==(const F1Counts&) const = default;
};

double f1_from_counts(const F1Counts& c);

// Candidate pairs require a token match AND temporal IoU strictly above
// the threshold; the one-to-one assignment is built greedily by
// descending IoU (ties by earlier gt start, then earlier pred start).
F1Counts f1_match_segments(const std::vector<GlossSegment>& pred,
                           const std::vector<GlossSegment>& gt, const SynonymTable& synonyms,
                           double threshold);
double f1_at_iou(const std::vector<GlossSegment>& pred, const std::vector<GlossSegment>& gt,
                 const SynonymTable& synonyms, double threshold);

// Indices of predicted tokens that survive false-positive removal: a
// maximum matching against gt decides which predictions count as true
// positives (multiplicity respected); everything unmatched is dropped,
// order preserved.
std::vector<std::size_t> oracle_keep_indices(const TokenSeq& pred, const TokenSeq& gt,
                                             const SynonymTable& synonyms);
TokenSeq oracle_remove_fp(const TokenSeq& pred, const TokenSeq& gt,
                          const SynonymTable& synonyms);

// ---- corpus-level evaluation -------------------------------------------

inline const std::vector<double>& default_f1_thresholds() {
  static const std::vector<double> t{0.1, 0.25, 0.5};
  return t;
}

struct SentenceEval {
  bool skipped = false;  // lexically filtered gt came out empty
  ErrorCounts counts;
  double iou = 0.0;
  std::map<double, F1Counts> f1;
};

struct EvalNumbers {
  double wer = 0.0;                // corpus level: sum errors / sum gt length
  double wer_mean_sentence = 0.0;  // unweighted mean of per-sentence WERs
  double miou = 0.0;
  std::map<double, double> f1;     // from corpus-summed counts
  ErrorCounts counts;
  std::map<double, F1Counts> f1_counts;
  std::size_t sentences_evaluated = 0;
  std::size_t sentences_skipped = 0;
};

struct EvalOptions {
  SynonymTable synonyms;
  std::vector<double> f1_thresholds = default_f1_thresholds();
  bool oracle_remove_false_positives = false;
};

// Segment order within a sentence does not matter; sorting is internal.
// Prediction segments must carry words.
SentenceEval evaluate_sentence(const std::vector<GlossSegment>& pred,
                               const std::vector<GlossSegment>& gt, const EvalOptions& options);

// Fold in sentence order. Throws if no sentence was evaluated.
EvalNumbers aggregate(const std::vector<SentenceEval>& sentences);

// ---- sign-type breakdown (filter / oracle analyses) ---------------------

enum class BreakdownMode { kFilter, kOracle };

struct TypeSelection {
  std::set<SignType> tags;
  bool include_untyped = false;  // select purely lexical segments too

  bool selects(const std::optional<SignType>& t) const {
    return t ? tags.count(*t) > 0 : include_untyped;
  }
  bool empty() const { return tags.empty() && !include_untyped; }
};

// "P,FS" style list; "all" selects every segment, "L" the untyped ones.
TypeSelection parse_type_selection(const std::string& csv);

// Filter mode drops selected gt segments plus predictions overlapping a
// dropped segment with temporal IoU > 0.5. Oracle mode, per selected gt
// segment, deletes predictions that overlap it at all and substitutes
// the segment itself as a prediction (unknown/wordless segments are not
// inserted; they cannot form tokens).
struct BreakdownResult {
  std::vector<GlossSegment> pred;
  std::vector<GlossSegment> gt;
};
BreakdownResult apply_breakdown(const std::vector<GlossSegment>& pred,
                                const std::vector<GlossSegment>& gt, BreakdownMode mode,
                                const TypeSelection& selection);

EvalNumbers breakdown_by_type(const std::vector<std::vector<GlossSegment>>& pred,
                              const std::vector<std::vector<GlossSegment>>& gt,
                              BreakdownMode mode, const TypeSelection& selection,
                              const EvalOptions& options);

}  // namespace signjoint::metrics

#endif  // SIGNJOINT_METRICS_HPP
