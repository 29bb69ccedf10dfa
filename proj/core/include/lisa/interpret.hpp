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
#ifndef LISA_INTERPRET_HPP_
#define LISA_INTERPRET_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lisa/train.hpp"

namespace lisa {

// Probability of `relation` given the first k tokens of a sentence.
class PrefixScorer {
 public:
  virtual ~PrefixScorer() = default;
  virtual double target_probability(const std::vector<std::string>& tokens, std::size_t k,
                                    int relation) const = 0;
};

// Prefix probabilities from a trained model. Without lookahead every prefix
// is recomposed on its own, so its last window ends in padding; with
// lookahead the prefix reuses the first k windows of the full sentence.
Eigen::VectorXd prefix_probabilities(const TrainedModel& m,
                                     const std::vector<std::string>& tokens, std::size_t k,
                                     bool lookahead = false);

class ModelPrefixScorer final : public PrefixScorer {
 public:
  explicit ModelPrefixScorer(const TrainedModel& model, bool lookahead = false)
      : model_(model), lookahead_(lookahead) {}

  double target_probability(const std::vector<std::string>& tokens, std::size_t k,
                            int relation) const override;

 private:
  const TrainedModel& model_;
  bool lookahead_;
};

struct PrefixPoint {
  std::size_t k = 0;
  std::string last_token;
  double prob_target = 0.0;
  std::string predicted_label;
  double prob_predicted = 0.0;
};

struct PrefixScoreCurve {
  std::string sentence_id;
  std::string relation;
  std::vector<PrefixPoint> points;
};

// One independent forward run per prefix k = 1..n. Throws UnknownRelation and
// marker validation errors.
PrefixScoreCurve prefix_curve(const TrainedModel& m, const LabeledSentence& s,
                              const std::string& relation, bool lookahead = false);

// CSV with header k,token,prob_target,predicted_label,prob_predicted.
void write_curve_csv(std::ostream& out, const PrefixScoreCurve& curve);

struct SaliencyPattern {
  std::string relation;
  std::string sentence_id;
  std::size_t crossing_index = 0;  // 1-based k
  double score = 0.0;              // P(relation | first k tokens)
  // Window centred on token k taken from the whole sentence.
  std::vector<std::string> lookahead_ngram;
  // Window centred on token k of the truncated prefix (padding on the right).
  std::vector<std::string> truncated_ngram;

  const std::vector<std::string>& ngram(bool lookahead) const {
    return lookahead ? lookahead_ngram : truncated_ngram;
  }
};

struct PatternOptions {
  double tau = 0.5;
  // Reported window size; 0 means the model's window.
  int window = 0;
  bool scoring_lookahead = false;
  bool report_lookahead = true;
};

// Scans k = 1..n and returns the window ending the first prefix whose target
// probability reaches tau; nullopt when no prefix does. Throws Precondition
// unless 0 < tau < 1, EvenWindow for even windows.
std::optional<SaliencyPattern> extract_pattern(const PrefixScorer& scorer,
                                               const LabeledSentence& s, int relation,
                                               const std::string& relation_name,
                                               double tau, int window);

// Model-backed version. Throws UnknownRelation.
std::optional<SaliencyPattern> extract_pattern(const TrainedModel& m, const LabeledSentence& s,
                                               const std::string& relation,
                                               const PatternOptions& options = {});

struct PatternEntry {
  std::vector<std::string> ngram;
  std::size_t support = 0;
  double mean_score = 0.0;
};

struct RelationPatterns {
  std::string relation;
  std::vector<PatternEntry> entries;  // support desc, mean_score desc, ngram asc
};

struct PatternTable {
  double tau = 0.5;
  int window = 0;
  bool lookahead = true;
  std::vector<RelationPatterns> relations;  // model label order, non-empty only
};

struct MineOptions {
  PatternOptions pattern;
  bool only_correct = true;
};

struct SentencePattern {
  std::string sentence_id;
  std::optional<SaliencyPattern> pattern;
};

// extract_pattern with R = gold label over every (optionally correctly
// classified) sentence, in input order.
std::vector<SentencePattern> extract_patterns(const TrainedModel& m,
                                              const std::vector<LabeledSentence>& sentences,
                                              const MineOptions& options = {});

// Groups identical reported ngrams per relation. Supports and means do not
// depend on sentence order.
PatternTable aggregate_patterns(const std::vector<SentencePattern>& patterns,
                                const std::vector<std::string>& label_order,
                                const PatternOptions& options);

PatternTable mine_patterns(const TrainedModel& m,
                           const std::vector<LabeledSentence>& sentences,
                           const MineOptions& options = {});

// relation<TAB>ngram<TAB>support<TAB>mean_score
void write_pattern_tsv(std::ostream& out, const PatternTable& table);

struct HiddenStateRow {
  std::string label;
  Eigen::VectorXd state;  // h_bi at the last step of the full sentence
};

std::vector<HiddenStateRow> export_hidden_states(const TrainedModel& m,
                                                 const std::vector<LabeledSentence>& sentences);

// label<TAB>v1<TAB>...<TAB>vD with 9 significant digits.
void write_hidden_tsv(std::ostream& out, const std::vector<HiddenStateRow>& rows);

}  // namespace lisa

#endif  // LISA_INTERPRET_HPP_
