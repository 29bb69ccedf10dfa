// Copyright 2026 The lisa Authors.
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
#include "lisa/interpret.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

#include "lisa/error.hpp"

namespace lisa {
namespace {

int require_relation(const TrainedModel& m, const std::string& relation) {
  const int r = m.label_index(relation);
  if (r < 0) throw Error(ErrorKind::kUnknownRelation, "relation '" + relation + "' not in model");
  return r;
}

std::string format_g(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

Eigen::VectorXd prefix_probabilities(const TrainedModel& m, const std::vector<std::string>& tokens,
                                     std::size_t k, bool lookahead) {
  if (k == 0 || k > tokens.size()) {
    throw Error(ErrorKind::kPrecondition, "prefix length " + std::to_string(k) + " out of range");
  }
  const auto ids = encode_tokens(tokens, m.vocabulary);
  const int window = m.params.window;
  if (lookahead) {
    const auto full = compose_ngram_inputs(ids, m.params.embeddings, window);
    return forward_pass(m.params, take_prefix(full, k)).probs;
  }
  const std::vector<std::int32_t> prefix(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k));
  return forward_pass(m.params, compose_ngram_inputs(prefix, m.params.embeddings, window)).probs;
}

double ModelPrefixScorer::target_probability(const std::vector<std::string>& tokens,
                                             std::size_t k, int relation) const {
  return prefix_probabilities(model_, tokens, k, lookahead_)(relation);
}

PrefixScoreCurve prefix_curve(const TrainedModel& m, const LabeledSentence& s,
                              const std::string& relation, bool lookahead) {
  const int r = require_relation(m, relation);
  validate_markers(s.tokens);
  PrefixScoreCurve curve;
  curve.sentence_id = s.id;
  curve.relation = relation;
  curve.points.reserve(s.tokens.size());
  for (std::size_t k = 1; k <= s.tokens.size(); ++k) {
    const auto probs = prefix_probabilities(m, s.tokens, k, lookahead);
    const int best = argmax_lowest(probs);
    curve.points.push_back(PrefixPoint{k, s.tokens[k - 1], probs(r),
                                       m.labels[static_cast<std::size_t>(best)], probs(best)});
  }
  return curve;
}

void write_curve_csv(std::ostream& out, const PrefixScoreCurve& curve) {
  out << "k,token,prob_target,predicted_label,prob_predicted\n";
  for (const auto& p : curve.points) {
    out << p.k << ',' << csv_field(p.last_token) << ',' << format_g(p.prob_target, 17) << ','
        << csv_field(p.predicted_label) << ',' << format_g(p.prob_predicted, 17) << '\n';
  }
}

std::optional<SaliencyPattern> extract_pattern(const PrefixScorer& scorer,
                                               const LabeledSentence& s, int relation,
                                               const std::string& relation_name, double tau,
                                               int window) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorKind::kPrecondition, "tau must lie in (0, 1)");
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorKind::kEvenWindow, "window must be odd and >= 1, got " + std::to_string(window));
  }
  const std::size_t n = s.tokens.size();
  for (std::size_t k = 1; k <= n; ++k) {
    const double score = scorer.target_probability(s.tokens, k, relation);
    if (score >= tau) {
      SaliencyPattern p;
      p.relation = relation_name;
      p.sentence_id = s.id;
      p.crossing_index = k;
      p.score = score;
      p.lookahead_ngram = ngram_tokens(s.tokens, k, window, n);
      p.truncated_ngram = ngram_tokens(s.tokens, k, window, k);
      return p;
    }
  }
  return std::nullopt;
}

std::optional<SaliencyPattern> extract_pattern(const TrainedModel& m, const LabeledSentence& s,
                                               const std::string& relation,
                                               const PatternOptions& options) {
  const int r = require_relation(m, relation);
  validate_markers(s.tokens);
  const ModelPrefixScorer scorer(m, options.scoring_lookahead);
  return extract_pattern(scorer, s, r, relation, options.tau,
                         options.window == 0 ? m.params.window : options.window);
}

std::vector<SentencePattern> extract_patterns(const TrainedModel& m,
                                              const std::vector<LabeledSentence>& sentences,
                                              const MineOptions& options) {
  std::vector<SentencePattern> out;
  for (const auto& s : sentences) {
    const int gold = require_relation(m, s.label);
    if (options.only_correct && predict(m, s).label != gold) continue;
    out.push_back(SentencePattern{s.id, extract_pattern(m, s, s.label, options.pattern)});
  }
  return out;
}

PatternTable aggregate_patterns(const std::vector<SentencePattern>& patterns,
                                const std::vector<std::string>& label_order,
                                const PatternOptions& options) {
  std::map<std::string, std::map<std::vector<std::string>, std::vector<double>>> grouped;
  for (const auto& sp : patterns) {
    if (!sp.pattern) continue;
    grouped[sp.pattern->relation][sp.pattern->ngram(options.report_lookahead)].push_back(
        sp.pattern->score);
  }

  std::vector<std::string> relations;
  for (const auto& l : label_order) {
    if (grouped.count(l)) relations.push_back(l);
  }
  for (const auto& [name, entries] : grouped) {
    if (std::find(relations.begin(), relations.end(), name) == relations.end()) {
      relations.push_back(name);
    }
  }

  PatternTable table;
  table.tau = options.tau;
  table.window = options.window;
  table.lookahead = options.report_lookahead;
  for (const auto& name : relations) {
    RelationPatterns rp;
    rp.relation = name;
    for (auto& [ngram, scores] : grouped[name]) {
      // Summing in sorted order keeps the mean independent of input order.
      std::sort(scores.begin(), scores.end());
      double sum = 0.0;
      for (double v : scores) sum += v;
      rp.entries.push_back(PatternEntry{ngram, scores.size(), sum / static_cast<double>(scores.size())});
    }
    std::sort(rp.entries.begin(), rp.entries.end(), [](const PatternEntry& a, const PatternEntry& b) {
      if (a.support != b.support) return a.support > b.support;
      if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
      return a.ngram < b.ngram;
    });
    table.relations.push_back(std::move(rp));
  }
  return table;
}

PatternTable mine_patterns(const TrainedModel& m, const std::vector<LabeledSentence>& sentences,
                           const MineOptions& options) {
  PatternOptions resolved = options.pattern;
  if (resolved.window == 0) resolved.window = m.params.window;
  MineOptions effective = options;
  effective.pattern = resolved;
  return aggregate_patterns(extract_patterns(m, sentences, effective), m.labels, resolved);
}

void write_pattern_tsv(std::ostream& out, const PatternTable& table) {
  char buf[32];
  for (const auto& rp : table.relations) {
    for (const auto& e : rp.entries) {
      std::snprintf(buf, sizeof buf, "%.6f", e.mean_score);
      out << rp.relation << '\t' << join(e.ngram) << '\t' << e.support << '\t' << buf << '\n';
    }
  }
}

std::vector<HiddenStateRow> export_hidden_states(const TrainedModel& m,
                                                 const std::vector<LabeledSentence>& sentences) {
  std::vector<HiddenStateRow> rows;
  rows.reserve(sentences.size());
  for (const auto& s : sentences) {
    validate_markers(s.tokens);
    const auto seq = compose_ngram_inputs(encode_sentence(s, m.vocabulary), m.params.embeddings,
                                          m.params.window);
    const auto cache = forward_pass(m.params, seq);
    rows.push_back(HiddenStateRow{s.label, cache.h_bi.col(cache.h_bi.cols() - 1)});
  }
  return rows;
}

void write_hidden_tsv(std::ostream& out, const std::vector<HiddenStateRow>& rows) {
  for (const auto& row : rows) {
    out << row.label;
    for (Eigen::Index i = 0; i < row.state.size(); ++i) out << '\t' << format_g(row.state(i), 9);
    out << '\n';
  }
}

}  // namespace lisa
