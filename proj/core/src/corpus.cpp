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
#include "lisa/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "lisa/error.hpp"

namespace lisa {
namespace {

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

constexpr std::string_view kSplitPunctuation = ".,;:!?\"'()";

bool is_split_punct(char c) { return kSplitPunctuation.find(c) != std::string_view::npos; }

// Peels leading and trailing punctuation characters into their own tokens.
void append_with_punctuation(std::string_view token, std::vector<std::string>& out) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end && is_split_punct(token[begin])) {
    out.emplace_back(1, token[begin]);
    ++begin;
  }
  std::vector<std::string> trailing;
  while (end > begin && is_split_punct(token[end - 1])) {
    trailing.emplace_back(1, token[end - 1]);
    --end;
  }
  if (end > begin) out.push_back(lowercase(std::string(token.substr(begin, end - begin))));
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

bool looks_like_semeval_sentence(std::string_view line) {
  line = trim(line);
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == 0 || i == line.size()) return false;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  return i < line.size() && line[i] == '"';
}

bool starts_with_comment(std::string_view line) {
  line = trim(line);
  return line.rfind("Comment", 0) == 0;
}

}  // namespace

bool is_marker(std::string_view token) {
  return std::find(kMarkers.begin(), kMarkers.end(), token) != kMarkers.end();
}

void validate_markers(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw Error(ErrorKind::kEmptyTokens, "sentence has no tokens");
  std::array<std::ptrdiff_t, 4> position{-1, -1, -1, -1};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t m = 0; m < kMarkers.size(); ++m) {
      if (tokens[i] != kMarkers[m]) continue;
      if (position[m] >= 0) {
        throw Error(ErrorKind::kDuplicateMarker,
                    "marker " + std::string(kMarkers[m]) + " occurs more than once");
      }
      position[m] = static_cast<std::ptrdiff_t>(i);
    }
  }
  for (std::size_t m = 0; m < kMarkers.size(); ++m) {
    if (position[m] < 0) {
      throw Error(ErrorKind::kMissingMarker, "marker " + std::string(kMarkers[m]) + " missing");
    }
  }
  for (std::size_t m = 1; m < kMarkers.size(); ++m) {
    if (position[m] < position[m - 1]) {
      throw Error(ErrorKind::kMarkerOrder,
                  "markers must appear in the order <e1> </e1> <e2> </e2>");
    }
  }
  if (position[1] - position[0] < 2 || position[3] - position[2] < 2) {
    throw Error(ErrorKind::kMarkerOrder, "empty argument between markers");
  }
}

LabeledSentence parse_marked_sentence(std::string_view line, std::string id) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto tab = line.find('\t');
  const std::string_view label = tab == std::string_view::npos ? line : line.substr(0, tab);
  if (trim(label).empty()) throw Error(ErrorKind::kEmptyLabel, "record has an empty label");
  LabeledSentence s;
  s.label = std::string(label);
  s.id = std::move(id);
  if (tab != std::string_view::npos) s.tokens = split_whitespace(line.substr(tab + 1));
  if (s.tokens.empty()) throw Error(ErrorKind::kEmptyTokens, "record has no tokens");
  validate_markers(s.tokens);
  return s;
}

std::string serialize_sentence(const LabeledSentence& s) {
  std::string out = s.label;
  out += '\t';
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += s.tokens[i];
  }
  return out;
}

std::vector<LabeledSentence> read_corpus(std::istream& in, std::string_view id_prefix) {
  std::vector<LabeledSentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(parse_marked_sentence(line, std::string(id_prefix) + std::to_string(line_no)));
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LabeledSentence> read_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<LabeledSentence>& sentences) {
  for (const auto& s : sentences) out << serialize_sentence(s) << '\n';
}

void write_corpus_file(const std::filesystem::path& path,
                       const std::vector<LabeledSentence>& sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_corpus(out, sentences);
}

std::vector<LabeledSentence> import_semeval(std::string_view raw) {
  // Blocks of consecutive non-blank lines.
  std::vector<std::vector<std::string_view>> blocks;
  std::vector<std::string_view> current;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    auto nl = raw.find('\n', pos);
    if (nl == std::string_view::npos) nl = raw.size();
    std::string_view line = raw.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(line);
    }
    pos = nl + 1;
  }
  if (!current.empty()) blocks.push_back(std::move(current));

  std::vector<LabeledSentence> out;
  out.reserve(blocks.size());
  for (std::size_t index = 0; index < blocks.size(); ++index) {
    const auto& block = blocks[index];
    const auto malformed = [index](const std::string& why) {
      return Error(ErrorKind::kMalformedRecord,
                   "record " + std::to_string(index) + ": " + why);
    };
    if (!looks_like_semeval_sentence(block[0])) throw malformed("missing sentence line");
    std::string_view relation;
    for (std::size_t i = 1; i < block.size(); ++i) {
      if (starts_with_comment(block[i])) continue;
      if (looks_like_semeval_sentence(block[i])) break;
      relation = trim(block[i]);
      break;
    }
    if (relation.empty()) throw malformed("missing relation line");

    std::string_view text = trim(block[0]);
    std::size_t digits = 0;
    while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits]))) {
      ++digits;
    }
    const std::string id(text.substr(0, digits));
    text = trim(text.substr(digits));
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
      text = text.substr(1, text.size() - 2);
    } else {
      throw malformed("sentence is not quoted");
    }

    std::string spaced;
    spaced.reserve(text.size() + 16);
    for (std::size_t i = 0; i < text.size();) {
      bool matched = false;
      for (auto marker : kMarkers) {
        if (text.compare(i, marker.size(), marker) == 0) {
          spaced += ' ';
          spaced += marker;
          spaced += ' ';
          i += marker.size();
          matched = true;
          break;
        }
      }
      if (!matched) spaced += text[i++];
    }

    LabeledSentence s;
    s.id = id;
    s.label = std::string(relation);
    for (const auto& raw_token : split_whitespace(spaced)) {
      if (is_marker(raw_token)) {
        s.tokens.push_back(raw_token);
      } else {
        append_with_punctuation(raw_token, s.tokens);
      }
    }
    try {
      validate_markers(s.tokens);
    } catch (const Error& e) {
      throw malformed(e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

LabeledSentence truncate_to_arguments(const LabeledSentence& s) {
  validate_markers(s.tokens);
  const auto first = std::find(s.tokens.begin(), s.tokens.end(), kE1Open);
  const auto last = std::find(s.tokens.begin(), s.tokens.end(), kE2Close);
  LabeledSentence out{{first, last + 1}, s.label, s.id};
  return out;
}

Vocabulary::Vocabulary() {
  add(kPaddingToken);
  add(kUnknownToken);
  for (auto marker : kMarkers) add(marker);
}

std::int32_t Vocabulary::add(std::string_view token) {
  std::string key(token);
  auto it = token_to_id_.find(key);
  if (it != token_to_id_.end()) return it->second;
  const auto id = static_cast<std::int32_t>(id_to_token_.size());
  token_to_id_.emplace(key, id);
  id_to_token_.push_back(std::move(key));
  return id;
}

std::int32_t Vocabulary::id(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnknownId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.count(std::string(token)) > 0;
}

const std::string& Vocabulary::token(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw Error(ErrorKind::kPrecondition, "token id " + std::to_string(id) + " out of range");
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

Vocabulary build_vocabulary(const std::vector<LabeledSentence>& sentences,
                            std::size_t min_count) {
  if (sentences.empty()) throw Error(ErrorKind::kEmptyCorpus, "no sentences");
  if (min_count < 1) throw Error(ErrorKind::kConfigInvalid, "min_count must be >= 1");
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      if (counts[t]++ == 0) order.push_back(t);
    }
  }
  Vocabulary v;
  for (const auto& t : order) {
    if (counts[t] >= min_count) v.add(t);
  }
  return v;
}

std::vector<std::int32_t> encode_tokens(const std::vector<std::string>& tokens,
                                        const Vocabulary& v) {
  std::vector<std::int32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(v.id(t));
  return ids;
}

std::vector<std::int32_t> encode_sentence(const LabeledSentence& s, const Vocabulary& v) {
  return encode_tokens(s.tokens, v);
}

std::vector<std::string> decode_ids(const std::vector<std::int32_t>& ids, const Vocabulary& v) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(v.token(id));
  return out;
}

int CorpusSplit::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < label_set.size(); ++i) {
    if (label_set[i] == label) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> collect_labels(
    std::initializer_list<const std::vector<LabeledSentence>*> lists) {
  std::vector<std::string> labels;
  for (const auto* list : lists) {
    if (list == nullptr) continue;
    for (const auto& s : *list) {
      if (std::find(labels.begin(), labels.end(), s.label) == labels.end()) {
        labels.push_back(s.label);
      }
    }
  }
  return labels;
}

namespace {

constexpr std::array<std::string_view, 9> kRelationNames = {
    "cause-effect(e1,e2)",     "component-whole(e1,e2)", "content-container(e1,e2)",
    "entity-destination(e1,e2)", "entity-origin(e1,e2)", "instrument-agency(e1,e2)",
    "member-collection(e1,e2)", "message-topic(e1,e2)",  "product-producer(e1,e2)",
};

constexpr std::array<std::string_view, 36> kTriggerWords = {
    "caused",   "triggers", "produced", "inside",   "contains", "moved",
    "into",     "emerged",  "from",     "operated", "by",       "member",
    "among",    "about",    "discusses", "made",    "built",    "yields",
    "results",  "leads",    "toward",   "derived",  "housed",   "within",
    "assembled", "crafted", "carried",  "part",     "consists", "describes",
    "generated", "sparked", "launched", "packed",   "sent",     "holds",
};

constexpr std::array<std::string_view, 24> kFillerWords = {
    "the",     "a",      "this",     "that",   "was",    "is",
    "it",      "report", "said",     "today",  "we",     "noted",
    "and",     "then",   "also",     "very",   "quite",  "recent",
    "some",    "many",   "old",      "new",    "there",  "here",
};

constexpr std::array<std::string_view, 24> kEntityWords = {
    "demolition", "terror",  "storm",   "flood",   "engine",  "car",
    "box",        "apples",  "letter",  "office",  "kitchen", "knife",
    "chef",       "team",    "player",  "book",    "topic",   "factory",
    "shoes",      "village", "river",   "bottle",  "wine",    "garden",
};

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

}  // namespace

int max_synthetic_relations() { return static_cast<int>(kTriggerWords.size() / 3); }

CorpusSplit generate_synthetic(const SyntheticConfig& config) {
  if (config.n_relations < 2 || config.n_relations > max_synthetic_relations()) {
    throw Error(ErrorKind::kConfigInvalid,
                "n_relations must be in [2, " + std::to_string(max_synthetic_relations()) + "]");
  }
  if (config.sentences_per_relation < 20) {
    throw Error(ErrorKind::kConfigInvalid, "sentences_per_relation must be >= 20");
  }
  std::mt19937_64 rng(config.seed);

  CorpusSplit split;
  std::vector<std::string_view> pool(kTriggerWords.begin(), kTriggerWords.end());
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[pick(rng, i)]);
  std::size_t next_word = 0;
  for (int r = 0; r < config.n_relations; ++r) {
    split.label_set.push_back(static_cast<std::size_t>(r) < kRelationNames.size()
                                  ? std::string(kRelationNames[static_cast<std::size_t>(r)])
                                  : "relation-" + std::to_string(r) + "(e1,e2)");
    const std::size_t len = 2 + pick(rng, 2);
    std::vector<std::string> trigger;
    for (std::size_t j = 0; j < len; ++j) trigger.emplace_back(pool[next_word++]);
    split.triggers.push_back(std::move(trigger));
  }

  const auto filler = [&rng] { return std::string(kFillerWords[pick(rng, kFillerWords.size())]); };
  const auto entity = [&rng] { return std::string(kEntityWords[pick(rng, kEntityWords.size())]); };

  const auto per = static_cast<std::size_t>(config.sentences_per_relation);
  const std::size_t n_train = per * 7 / 10;
  const std::size_t n_dev = per / 10;
  for (int r = 0; r < config.n_relations; ++r) {
    const auto& trigger = split.triggers[static_cast<std::size_t>(r)];
    for (std::size_t i = 0; i < per; ++i) {
      LabeledSentence s;
      s.label = split.label_set[static_cast<std::size_t>(r)];
      s.id = "syn-" + std::to_string(r) + "-" + std::to_string(i);
      for (std::size_t j = pick(rng, 4); j > 0; --j) s.tokens.push_back(filler());
      s.tokens.emplace_back(kE1Open);
      s.tokens.push_back(entity());
      s.tokens.emplace_back(kE1Close);
      if (pick(rng, 2) == 0) s.tokens.push_back(filler());
      s.tokens.insert(s.tokens.end(), trigger.begin(), trigger.end());
      if (pick(rng, 2) == 0) s.tokens.push_back(filler());
      s.tokens.emplace_back(kE2Open);
      s.tokens.push_back(entity());
      s.tokens.emplace_back(kE2Close);
      for (std::size_t j = pick(rng, 4); j > 0; --j) s.tokens.push_back(filler());
      auto& dest = i < n_train ? split.train : (i < n_train + n_dev ? split.dev : split.test);
      dest.push_back(std::move(s));
    }
  }
  for (auto* part : {&split.train, &split.dev, &split.test}) {
    for (std::size_t i = part->size(); i > 1; --i) std::swap((*part)[i - 1], (*part)[pick(rng, i)]);
  }
  return split;
}

}  // namespace lisa
