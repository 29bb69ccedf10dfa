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
#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "lisa/corpus.hpp"
#include "lisa/error.hpp"
#include "test_support.hpp"

namespace lisa {
namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no lisa::Error thrown";
  return ErrorKind::kIo;
}

TEST(ParseMarkedSentence, CauseEffectExample) {
  const auto s = parse_marked_sentence(
      "cause-effect(e1,e2)\t<e1> demolition </e1> was the cause of <e2> terror </e2>");
  EXPECT_EQ(s.label, "cause-effect(e1,e2)");
  ASSERT_EQ(s.tokens.size(), 10u);
  EXPECT_EQ(s.tokens[5], "cause");
  EXPECT_EQ(s.tokens[6], "of");
}

TEST(ParseMarkedSentence, MinimalSentence) {
  const auto s = parse_marked_sentence("X\t<e1> a </e1> <e2> b </e2>");
  EXPECT_EQ(s.tokens.size(), 6u);
  EXPECT_EQ(s.label, "X");
}

TEST(ParseMarkedSentence, MarkerErrors) {
  EXPECT_EQ(kind_of([] { parse_marked_sentence("X\t<e1> a <e2> b </e2> </e1>"); }),
            ErrorKind::kMarkerOrder);
  EXPECT_EQ(kind_of([] { parse_marked_sentence("X\t<e1> a </e1> b </e2>"); }),
            ErrorKind::kMissingMarker);
  EXPECT_EQ(kind_of([] { parse_marked_sentence("X\t<e1> a </e1> <e1> c </e1> <e2> b </e2>"); }),
            ErrorKind::kDuplicateMarker);
  EXPECT_EQ(kind_of([] { parse_marked_sentence("X\t<e1> </e1> <e2> b </e2>"); }),
            ErrorKind::kMarkerOrder);
  EXPECT_EQ(kind_of([] { parse_marked_sentence("\t<e1> a </e1> <e2> b </e2>"); }),
            ErrorKind::kEmptyLabel);
  EXPECT_EQ(kind_of([] { parse_marked_sentence("X\t   "); }), ErrorKind::kEmptyTokens);
  EXPECT_EQ(kind_of([] { parse_marked_sentence("X"); }), ErrorKind::kEmptyTokens);
}

TEST(ParseMarkedSentence, RoundTripProperty) {
  // parse(serialize(s)) == s over generated sentences.
  const auto split = generate_synthetic({5, 30, 11});
  for (const auto* part : {&split.train, &split.dev, &split.test}) {
    for (const auto& s : *part) {
      EXPECT_EQ(parse_marked_sentence(serialize_sentence(s), s.id), s);
    }
  }
}

TEST(ReadCorpus, ReportsLineNumber) {
  std::istringstream in("X\t<e1> a </e1> <e2> b </e2>\nY\t<e1> a </e1> b\n");
  try {
    read_corpus(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingMarker);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ReadCorpus, WriteReadIsIdentity) {
  const auto split = generate_synthetic({3, 20, 5});
  std::ostringstream out;
  write_corpus(out, split.train);
  std::istringstream in(out.str());
  const auto back = read_corpus(in);
  ASSERT_EQ(back.size(), split.train.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].tokens, split.train[i].tokens);
    EXPECT_EQ(back[i].label, split.train[i].label);
    EXPECT_EQ(back[i].id, std::to_string(i + 1));
  }
  EXPECT_EQ(out.str().find('\r'), std::string::npos);
  EXPECT_EQ(out.str().find(" \n"), std::string::npos);
}

constexpr const char* kSemEval =
    "8\t\"The <e1>demolition</e1> was the cause of <e2>terror</e2> and communal divide.\"\n"
    "Cause-Effect(e1,e2)\n"
    "Comment:\n"
    "\n"
    "9\t\"The <e1>Shoes</e1>, made in (old) <e2>factories</e2>!\"\n"
    "Product-Producer(e1,e2)\n"
    "Comment: plural\n"
    "\n"
    "10\t\"A <e1>letter</e1> about the <e2>war</e2>.\"\n"
    "Other\n";

TEST(ImportSemEval, ConvertsRecords) {
  const auto out = import_semeval(kSemEval);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].label, "Cause-Effect(e1,e2)");
  EXPECT_EQ(out[0].id, "8");
  EXPECT_EQ(serialize_sentence(out[0]),
            "Cause-Effect(e1,e2)\tthe <e1> demolition </e1> was the cause of <e2> terror </e2> "
            "and communal divide .");
  EXPECT_EQ(serialize_sentence(out[1]),
            "Product-Producer(e1,e2)\tthe <e1> shoes </e1> , made in ( old ) <e2> factories </e2> !");
  EXPECT_EQ(out[2].label, "Other");
  for (const auto& s : out) EXPECT_NO_THROW(validate_markers(s.tokens));
}

TEST(ImportSemEval, EmptyInput) {
  EXPECT_TRUE(import_semeval("").empty());
  EXPECT_TRUE(import_semeval("\n\n").empty());
}

TEST(ImportSemEval, MissingRelationLine) {
  try {
    import_semeval("1\t\"The <e1>a</e1> of <e2>b</e2>.\"\n\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedRecord);
    EXPECT_NE(std::string(e.what()).find("record 0"), std::string::npos);
  }
  try {
    import_semeval("1\t\"The <e1>a</e1> of <e2>b</e2>.\"\nComment: x\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedRecord);
  }
}

TEST(ImportSemEval, MissingSentenceLineNamesRecord) {
  const std::string raw = std::string(kSemEval) + "\nOther\n";
  try {
    import_semeval(raw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedRecord);
    EXPECT_NE(std::string(e.what()).find("record 3"), std::string::npos);
  }
}

TEST(Vocabulary, SpecialsAreFixed) {
  const Vocabulary v = build_vocabulary({testing::cause_effect_sentence()}, 1);
  EXPECT_EQ(v.id(kPaddingToken), 0);
  EXPECT_EQ(v.id(kUnknownToken), 1);
  for (auto m : kMarkers) EXPECT_TRUE(v.contains(m));
  EXPECT_EQ(v.size(), 6u + 6u);  // specials + markers + demolition was the cause of terror
}

TEST(Vocabulary, MinCount) {
  const auto a = parse_marked_sentence("X\t<e1> a </e1> cause <e2> b </e2>");
  const auto b = parse_marked_sentence("X\t<e1> c </e1> cause <e2> d </e2>");
  const Vocabulary v = build_vocabulary({a, b}, 2);
  EXPECT_TRUE(v.contains("cause"));
  EXPECT_FALSE(v.contains("a"));
  const auto ids = encode_sentence(a, v);
  EXPECT_EQ(ids[1], Vocabulary::kUnknownId);
  EXPECT_EQ(ids[0], v.id("<e1>"));
}

TEST(Vocabulary, Errors) {
  EXPECT_EQ(kind_of([] { build_vocabulary({}, 1); }), ErrorKind::kEmptyCorpus);
  EXPECT_EQ(kind_of([] { build_vocabulary({testing::cause_effect_sentence()}, 0); }),
            ErrorKind::kConfigInvalid);
}

TEST(Vocabulary, InverseMapsAndDeterminism) {
  const auto split = generate_synthetic({4, 25, 3});
  const Vocabulary v = build_vocabulary(split.train, 1);
  const Vocabulary again = build_vocabulary(split.train, 1);
  EXPECT_EQ(v.tokens(), again.tokens());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(v.id(v.token(static_cast<std::int32_t>(i))), static_cast<std::int32_t>(i));
  }
}

TEST(EncodeSentence, KnownTokensDecodeBack) {
  const auto s = testing::cause_effect_sentence();
  const Vocabulary v = build_vocabulary({s}, 1);
  const auto ids = encode_sentence(s, v);
  EXPECT_EQ(ids.size(), s.tokens.size());
  for (auto id : ids) EXPECT_NE(id, Vocabulary::kUnknownId);
  EXPECT_EQ(decode_ids(ids, v), s.tokens);
}

TEST(EncodeSentence, IdsBelowVocabularySize) {
  const auto split = generate_synthetic({4, 30, 9});
  const Vocabulary v = build_vocabulary(split.train, 2);
  for (const auto* part : {&split.train, &split.dev, &split.test}) {
    for (const auto& s : *part) {
      for (auto id : encode_sentence(s, v)) {
        EXPECT_GE(id, 0);
        EXPECT_LT(static_cast<std::size_t>(id), v.size());
      }
    }
  }
}

TEST(GenerateSynthetic, Counts) {
  const auto split = generate_synthetic({4, 50, 7});
  EXPECT_EQ(split.train.size(), 140u);
  EXPECT_EQ(split.dev.size(), 20u);
  EXPECT_EQ(split.test.size(), 40u);
  EXPECT_EQ(split.label_set.size(), 4u);

  // Counting oracle: 50 per relation, 4 distinct triggers, each occurring
  // contiguously between </e1> and <e2> in every sentence of its relation.
  std::map<std::string, int> per_label;
  std::set<std::string> ids;
  std::set<std::vector<std::string>> triggers(split.triggers.begin(), split.triggers.end());
  EXPECT_EQ(triggers.size(), 4u);
  for (const auto* part : {&split.train, &split.dev, &split.test}) {
    for (const auto& s : *part) {
      ++per_label[s.label];
      EXPECT_TRUE(ids.insert(s.id).second) << "duplicate id " << s.id;
      EXPECT_NO_THROW(validate_markers(s.tokens));
      const auto& trig = split.triggers[static_cast<std::size_t>(split.label_index(s.label))];
      EXPECT_GE(trig.size(), 2u);
      EXPECT_LE(trig.size(), 3u);
      const auto close1 = std::find(s.tokens.begin(), s.tokens.end(), "</e1>");
      const auto open2 = std::find(s.tokens.begin(), s.tokens.end(), "<e2>");
      EXPECT_NE(std::search(close1, open2, trig.begin(), trig.end()), open2);
    }
  }
  for (const auto& [label, count] : per_label) EXPECT_EQ(count, 50) << label;
}

TEST(GenerateSynthetic, Deterministic) {
  const auto a = generate_synthetic({4, 50, 7});
  const auto b = generate_synthetic({4, 50, 7});
  std::ostringstream sa, sb;
  write_corpus(sa, a.train);
  write_corpus(sa, a.dev);
  write_corpus(sa, a.test);
  write_corpus(sb, b.train);
  write_corpus(sb, b.dev);
  write_corpus(sb, b.test);
  EXPECT_EQ(sa.str(), sb.str());
  const auto c = generate_synthetic({4, 50, 8});
  std::ostringstream sc;
  write_corpus(sc, c.train);
  EXPECT_NE(sc.str().substr(0, 200), sa.str().substr(0, 200));
}

TEST(GenerateSynthetic, InvalidConfig) {
  EXPECT_EQ(kind_of([] { generate_synthetic({1, 50, 7}); }), ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind_of([] { generate_synthetic({4, 19, 7}); }), ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind_of([] { generate_synthetic({max_synthetic_relations() + 1, 50, 7}); }),
            ErrorKind::kConfigInvalid);
}

TEST(TruncateToArguments, KeepsArgumentSpan) {
  const auto s = parse_marked_sentence("X\tthe <e1> a </e1> of <e2> b </e2> today");
  EXPECT_EQ(serialize_sentence(truncate_to_arguments(s)), "X\t<e1> a </e1> of <e2> b </e2>");
}

}  // namespace
}  // namespace lisa
