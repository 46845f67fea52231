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

#include "signjoint/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "signjoint/matching.hpp"

namespace signjoint::metrics {

bool token_match(const Gloss& pred, const Gloss& gt, const SynonymTable& synonyms) {
  if (pred.words.empty() || gt.words.empty()) return false;
  const std::string& word = pred.primary();
  for (const std::string& alt : gt.words)
    if (synonyms.equivalent(word, alt)) return true;
  return false;
}

std::vector<GlossSegment> filter_lexical(const std::vector<GlossSegment>& gt) {
  std::vector<GlossSegment> out;
  for (const GlossSegment& s : gt) {
    if (s.gloss.words.empty()) continue;
    if (s.gloss.sign_type == SignType::kUnknown) continue;
    out.push_back(s);
  }
  return out;
}

std::pair<ErrorCounts, double> wer(const TokenSeq& pred, const TokenSeq& gt,
                                   const SynonymTable& synonyms) {
  if (gt.empty()) throw std::runtime_error("wer: empty ground-truth sequence");
  const std::size_t n = gt.size(), m = pred.size();

  // cost[i][j]: min edits aligning gt[0..i) with pred[0..j).
  std::vector<std::vector<std::size_t>> cost(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i) cost[i][0] = i;
  for (std::size_t j = 1; j <= m; ++j) cost[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag =
          cost[i - 1][j - 1] + (token_match(pred[j - 1], gt[i - 1], synonyms) ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }
  }

  // The (S, D, I) decomposition is unique at the optimal cost: D - I is
  // fixed by the lengths and trading a substitution for del+ins always
  // raises the total. Any optimal backtrace yields the same counts.
  ErrorCounts counts;
  counts.gt_length = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool match = token_match(pred[j - 1], gt[i - 1], synonyms);
      if (cost[i][j] == cost[i - 1][j - 1] + (match ? 0 : 1)) {
        if (!match) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      ++counts.deletions;
      --i;
      continue;
    }
    ++counts.insertions;
    --j;
  }
  return {counts, static_cast<double>(counts.total_errors()) / static_cast<double>(n)};
}

std::size_t matched_token_count(const TokenSeq& pred, const TokenSeq& gt,
                                const SynonymTable& synonyms) {
  BipartiteMatcher matcher(pred.size(), gt.size());
  for (std::size_t p = 0; p < pred.size(); ++p)
    for (std::size_t g = 0; g < gt.size(); ++g)
      if (token_match(pred[p], gt[g], synonyms)) matcher.add_edge(p, g);
  return matcher.solve();
}

double sentence_iou(const TokenSeq& pred, const TokenSeq& gt, const SynonymTable& synonyms) {
  const std::size_t inter = matched_token_count(pred, gt, synonyms);
  const std::size_t uni = pred.size() + gt.size() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double temporal_iou(const GlossSegment& a, const GlossSegment& b) {
  const double inter = std::max(0.0, std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s));
  const double uni = (a.end_s - a.start_s) + (b.end_s - b.start_s) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double f1_from_counts(const F1Counts& c) {
  const double precision = c.n_pred == 0 ? 0.0 : static_cast<double>(c.matched) / c.n_pred;
  const double recall = c.n_gt == 0 ? 0.0 : static_cast<double>(c.matched) / c.n_gt;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

F1Counts f1_match_segments(const std::vector<GlossSegment>& pred,
                           const std::vector<GlossSegment>& gt, const SynonymTable& synonyms,
                           double threshold) {
  struct Candidate {
    double iou;
    std::size_t g, p;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < pred.size(); ++p) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (!token_match(pred[p].gloss, gt[g].gloss, synonyms)) continue;
      const double iou = temporal_iou(pred[p], gt[g]);
      if (iou > threshold) candidates.push_back({iou, g, p});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (gt[a.g].start_s != gt[b.g].start_s) return gt[a.g].start_s < gt[b.g].start_s;
    if (pred[a.p].start_s != pred[b.p].start_s) return pred[a.p].start_s < pred[b.p].start_s;
    if (a.g != b.g) return a.g < b.g;
    return a.p < b.p;
  });
  std::vector<bool> gt_used(gt.size(), false), pred_used(pred.size(), false);
  F1Counts counts;
  counts.n_pred = pred.size();
  counts.n_gt = gt.size();
  for (const Candidate& c : candidates) {
    if (gt_used[c.g] || pred_used[c.p]) continue;
    gt_used[c.g] = true;
    pred_used[c.p] = true;
    ++counts.matched;
  }
  return counts;
}

double f1_at_iou(const std::vector<GlossSegment>& pred, const std::vector<GlossSegment>& gt,
                 const SynonymTable& synonyms, double threshold) {
  return f1_from_counts(f1_match_segments(pred, gt, synonyms, threshold));
}

std::vector<std::size_t> oracle_keep_indices(const TokenSeq& pred, const TokenSeq& gt,
                                             const SynonymTable& synonyms) {
  // Maximum order-preserving matching (a longest common subsequence
  // under token_match). Order matters: an unordered maximum matching can
  // keep the wrong one of two duplicate predictions and push the WER
  // alignment sideways, whereas keeping an LCS leaves gt - |LCS| pure
  // deletions, which never exceeds the original edit cost.
  const std::size_t np = pred.size(), ng = gt.size();
  std::vector<std::vector<std::size_t>> lcs(np + 1, std::vector<std::size_t>(ng + 1, 0));
  for (std::size_t p = 1; p <= np; ++p) {
    for (std::size_t g = 1; g <= ng; ++g) {
      lcs[p][g] = std::max(lcs[p - 1][g], lcs[p][g - 1]);
      if (token_match(pred[p - 1], gt[g - 1], synonyms))
        lcs[p][g] = std::max(lcs[p][g], lcs[p - 1][g - 1] + 1);
    }
  }
  std::vector<std::size_t> keep;
  std::size_t p = np, g = ng;
  while (p > 0 && g > 0) {
    if (token_match(pred[p - 1], gt[g - 1], synonyms) && lcs[p][g] == lcs[p - 1][g - 1] + 1) {
      keep.push_back(p - 1);
      --p;
      --g;
    } else if (lcs[p - 1][g] >= lcs[p][g - 1]) {
      --p;
    } else {
      --g;
    }
  }
  std::reverse(keep.begin(), keep.end());
  return keep;
}

TokenSeq oracle_remove_fp(const TokenSeq& pred, const TokenSeq& gt,
                          const SynonymTable& synonyms) {
  TokenSeq out;
  for (std::size_t p : oracle_keep_indices(pred, gt, synonyms)) out.push_back(pred[p]);
  return out;
}

namespace {

std::vector<GlossSegment> sorted_by_time(std::vector<GlossSegment> segments) {
  std::sort(segments.begin(), segments.end(), [](const GlossSegment& a, const GlossSegment& b) {
    if (a.start_s != b.start_s) return a.start_s < b.start_s;
    if (a.end_s != b.end_s) return a.end_s < b.end_s;
    return a.gloss.words < b.gloss.words;
  });
  return segments;
}

TokenSeq tokens_of(const std::vector<GlossSegment>& segments) {
  TokenSeq out;
  out.reserve(segments.size());
  for (const GlossSegment& s : segments) out.push_back(s.gloss);
  return out;
}

}  // namespace

SentenceEval evaluate_sentence(const std::vector<GlossSegment>& pred,
                               const std::vector<GlossSegment>& gt, const EvalOptions& options) {
  SentenceEval eval;
  std::vector<GlossSegment> gt_sorted = sorted_by_time(filter_lexical(gt));
  std::vector<GlossSegment> pred_sorted = sorted_by_time(pred);
  for (const GlossSegment& s : pred_sorted)
    if (s.gloss.words.empty())
      throw std::runtime_error("evaluate_sentence: prediction segment without words");

  if (gt_sorted.empty()) {
    eval.skipped = true;
    return eval;
  }

  if (options.oracle_remove_false_positives) {
    const std::vector<std::size_t> keep =
        oracle_keep_indices(tokens_of(pred_sorted), tokens_of(gt_sorted), options.synonyms);
    std::vector<GlossSegment> kept;
    for (std::size_t p : keep) kept.push_back(pred_sorted[p]);
    pred_sorted = std::move(kept);
  }

  const TokenSeq pred_tokens = tokens_of(pred_sorted);
  const TokenSeq gt_tokens = tokens_of(gt_sorted);

  eval.counts = wer(pred_tokens, gt_tokens, options.synonyms).first;
  eval.iou = sentence_iou(pred_tokens, gt_tokens, options.synonyms);
  for (double t : options.f1_thresholds)
    eval.f1[t] = f1_match_segments(pred_sorted, gt_sorted, options.synonyms, t);
  return eval;
}

EvalNumbers aggregate(const std::vector<SentenceEval>& sentences) {
  if (sentences.empty()) throw std::runtime_error("aggregate: no sentence reports");
  EvalNumbers out;
  double wer_sum = 0.0;
  double iou_sum = 0.0;
  for (const SentenceEval& s : sentences) {
    if (s.skipped) {
      ++out.sentences_skipped;
      continue;
    }
    ++out.sentences_evaluated;
    out.counts.substitutions += s.counts.substitutions;
    out.counts.deletions += s.counts.deletions;
    out.counts.insertions += s.counts.insertions;
    out.counts.gt_length += s.counts.gt_length;
    wer_sum += static_cast<double>(s.counts.total_errors()) / s.counts.gt_length;
    iou_sum += s.iou;
    for (const auto& [t, c] : s.f1) {
      F1Counts& agg = out.f1_counts[t];
      agg.matched += c.matched;
      agg.n_pred += c.n_pred;
      agg.n_gt += c.n_gt;
    }
  }
  if (out.sentences_evaluated == 0)
    throw std::runtime_error("aggregate: every sentence had empty ground truth");
  out.wer = static_cast<double>(out.counts.total_errors()) / out.counts.gt_length;
  out.wer_mean_sentence = wer_sum / out.sentences_evaluated;
  out.miou = iou_sum / out.sentences_evaluated;
  for (const auto& [t, c] : out.f1_counts) out.f1[t] = f1_from_counts(c);
  return out;
}

TypeSelection parse_type_selection(const std::string& csv) {
  TypeSelection sel;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    std::string tag = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    while (!tag.empty() && tag.front() == ' ') tag.erase(tag.begin());
    while (!tag.empty() && tag.back() == ' ') tag.pop_back();
    if (!tag.empty()) {
      if (tag == "all") {
        for (const char* t : {"P", "FS", "D", "G", "T", "S", "N", "FE", "U"})
          sel.tags.insert(corpus::sign_type_from_tag(t));
        sel.include_untyped = true;
      } else if (tag == "L") {
        sel.include_untyped = true;
      } else {
        sel.tags.insert(corpus::sign_type_from_tag(tag));
      }
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return sel;
}

BreakdownResult apply_breakdown(const std::vector<GlossSegment>& pred,
                                const std::vector<GlossSegment>& gt, BreakdownMode mode,
                                const TypeSelection& selection) {
  BreakdownResult out;
  if (selection.empty()) {
    out.pred = pred;
    out.gt = gt;
    return out;
  }
  std::vector<GlossSegment> selected;
  for (const GlossSegment& g : gt) {
    if (selection.selects(g.gloss.sign_type))
      selected.push_back(g);
    else
      out.gt.push_back(g);
  }

  if (mode == BreakdownMode::kFilter) {
    // Selected gt segments vanish, along with predictions that sat on
    // them (temporal IoU above 0.5).
    for (const GlossSegment& p : pred) {
      bool drop = false;
      for (const GlossSegment& g : selected)
        if (temporal_iou(p, g) > 0.5) drop = true;
      if (!drop) out.pred.push_back(p);
    }
    return out;
  }

  // Oracle: selected segments are recognised perfectly. Whatever the
  // model said during them (midpoint inside the segment, the same
  // assignment rule used to slice stream predictions) is deleted and
  // the gt segment takes its place; wordless/unknown segments only
  // delete (they are outside the lexical evaluation anyway).
  out.gt = gt;
  for (const GlossSegment& p : pred) {
    bool covered = false;
    for (const GlossSegment& g : selected)
      if (p.mid_s() >= g.start_s && p.mid_s() < g.end_s) covered = true;
    if (!covered) out.pred.push_back(p);
  }
  for (const GlossSegment& g : selected) {
    if (g.gloss.words.empty() || g.gloss.sign_type == SignType::kUnknown) continue;
    GlossSegment as_pred = g;
    as_pred.confidence.reset();
    out.pred.push_back(as_pred);
  }
  out.pred = sorted_by_time(std::move(out.pred));
  return out;
}

EvalNumbers breakdown_by_type(const std::vector<std::vector<GlossSegment>>& pred,
                              const std::vector<std::vector<GlossSegment>>& gt,
                              BreakdownMode mode, const TypeSelection& selection,
                              const EvalOptions& options) {
  if (pred.size() != gt.size())
    throw std::runtime_error("breakdown_by_type: prediction/gt sentence count mismatch");
  std::vector<SentenceEval> sentences;
  sentences.reserve(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const BreakdownResult b = apply_breakdown(pred[i], gt[i], mode, selection);
    sentences.push_back(evaluate_sentence(b.pred, b.gt, options));
  }
  return aggregate(sentences);
}

}  // namespace signjoint::metrics
