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
#ifndef LISA_CORPUS_HPP_
#define LISA_CORPUS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lisa {

inline constexpr std::string_view kE1Open = "<e1>";
inline constexpr std::string_view kE1Close = "</e1>";
inline constexpr std::string_view kE2Open = "<e2>";
inline constexpr std::string_view kE2Close = "</e2>";
inline constexpr std::array<std::string_view, 4> kMarkers = {kE1Open, kE1Close,
                                                             kE2Open, kE2Close};
inline constexpr std::string_view kPaddingToken = "__PAD__";
inline constexpr std::string_view kUnknownToken = "__UNK__";

bool is_marker(std::string_view token);

// A relation-classification example. Entity markers are ordinary tokens.
struct LabeledSentence {
  std::vector<std::string> tokens;
  std::string label;
  std::string id;

  friend bool operator==(const LabeledSentence&, const LabeledSentence&) = default;
};

// Throws lisa::Error (MissingMarker, DuplicateMarker, MarkerOrder, EmptyTokens)
// unless the four markers occur exactly once, in order, each pair enclosing at
// least one ordinary token.
void validate_markers(const std::vector<std::string>& tokens);

// Parses one normalized record: `label<TAB>tok tok ...`.
LabeledSentence parse_marked_sentence(std::string_view line, std::string id = {});

// Inverse of parse_marked_sentence (the id is not part of the record).
std::string serialize_sentence(const LabeledSentence& s);

// Reads a normalized corpus. Ids are "<prefix><line number>" (1-based).
std::vector<LabeledSentence> read_corpus(std::istream& in, std::string_view id_prefix = {});
std::vector<LabeledSentence> read_corpus_file(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const std::vector<LabeledSentence>& sentences);
void write_corpus_file(const std::filesystem::path& path,
                       const std::vector<LabeledSentence>& sentences);

// Converts SemEval-2010 Task 8 records (numbered quoted sentence line, relation
// line, optional Comment line, blank separator) to normalized sentences.
// Punctuation is split off, text is lowercased, and XML entity tags become the
// four marker tokens. The relation direction suffix is kept in the label.
std::vector<LabeledSentence> import_semeval(std::string_view raw);

// Keeps only the span from <e1> through </e2>.
LabeledSentence truncate_to_arguments(const LabeledSentence& s);

class Vocabulary {
 public:
  static constexpr std::int32_t kPaddingId = 0;
  static constexpr std::int32_t kUnknownId = 1;

  // Specials and the four markers only.
  Vocabulary();

  // Returns the id of `token`, adding it when absent.
  std::int32_t add(std::string_view token);

  // Unknown tokens map to kUnknownId.
  std::int32_t id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(std::int32_t id) const;
  std::size_t size() const { return id_to_token_.size(); }
  const std::vector<std::string>& tokens() const { return id_to_token_; }

 private:
  std::unordered_map<std::string, std::int32_t> token_to_id_;
  std::vector<std::string> id_to_token_;
};

// Tokens with corpus frequency >= min_count receive ids in first-occurrence
// order after the specials and markers. Throws EmptyCorpus, ConfigInvalid.
Vocabulary build_vocabulary(const std::vector<LabeledSentence>& sentences,
                            std::size_t min_count = 1);

std::vector<std::int32_t> encode_sentence(const LabeledSentence& s, const Vocabulary& v);
std::vector<std::int32_t> encode_tokens(const std::vector<std::string>& tokens,
                                        const Vocabulary& v);
std::vector<std::string> decode_ids(const std::vector<std::int32_t>& ids, const Vocabulary& v);

struct CorpusSplit {
  std::vector<LabeledSentence> train;
  std::vector<LabeledSentence> dev;
  std::vector<LabeledSentence> test;
  std::vector<std::string> label_set;
  // Planted trigger phrase per label (synthetic corpora only; empty otherwise).
  std::vector<std::vector<std::string>> triggers;

  // Index of `label` in label_set, or -1.
  int label_index(std::string_view label) const;
};

// Label set in first-occurrence order across the given sentence lists.
std::vector<std::string> collect_labels(
    std::initializer_list<const std::vector<LabeledSentence>*> lists);

struct SyntheticConfig {
  int n_relations = 4;
  int sentences_per_relation = 50;
  std::uint64_t seed = 7;
};

// Upper bound on n_relations (disjoint triggers are drawn from a fixed pool).
int max_synthetic_relations();

// Desk-scale relation corpus: every relation owns a unique 2-3 token trigger
// placed between the argument pairs; fillers and arguments are shared.
// Stratified 70/10/20 split. Deterministic in the seed. Throws ConfigInvalid.
CorpusSplit generate_synthetic(const SyntheticConfig& config);

}  // namespace lisa

#endif  // LISA_CORPUS_HPP_
