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
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "lisa/interpret.hpp"
#include "lisa/model_io.hpp"
#include "test_support.hpp"

namespace {

using namespace lisa;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome ac1_gradients() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  const int models = 24;
  for (int i = 0; i < models; ++i) {
    const int window = i % 2 ? 3 : 1;
    const int d = 1 + static_cast<int>(rng() % 3);
    const int hidden = 1 + static_cast<int>(rng() % 4);
    const int classes = 2 + static_cast<int>(rng() % 3);
    const auto p = testing::random_params(rng, window, d, hidden, classes, 9);
    const Example ex{testing::random_ids(rng, 1 + rng() % 5, 9), static_cast<int>(rng() % classes)};
    worst = std::max(worst, gradient_check(p, ex, 1e-5));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && secs < 10.0, std::to_string(models) + " models, max rel err " +
                                           fmt("%.3e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome ac2_margin_loss() {
  Eigen::VectorXd s(2);
  s << 2.5, -0.5;
  const double loss = ranking_loss(s, 0, LossConfig{2.0, 2.5, 0.5}).loss;
  const double err = std::abs(loss - 2.0 * std::log(2.0));
  return {err <= 1e-12, "loss " + fmt("%.17g", loss) + ", |err| " + fmt("%.1e", err)};
}

Outcome ac3_cause_effect() {
  const auto s = testing::cause_effect_sentence();
  testing::ReplayScorer scorer(testing::cause_effect_curve());
  const auto p = extract_pattern(scorer, s, 0, s.label, 0.5, 3);
  if (!p) return {false, "no pattern"};
  const std::vector<std::string> want{"cause", "of", "<e2>"};
  const bool ok = p->crossing_index == 7 && s.tokens[6] == "of" && p->ngram(true) == want;
  return {ok, "k=" + std::to_string(p->crossing_index) + " token '" + s.tokens[p->crossing_index - 1] +
                  "' ngram '" + p->ngram(true)[0] + " " + p->ngram(true)[1] + " " +
                  p->ngram(true)[2] + "'"};
}

Outcome ac4_birthplace() {
  const auto s = testing::birthplace_sentence();
  testing::ReplayScorer scorer(testing::birthplace_curve());
  const auto p = extract_pattern(scorer, s, 0, s.label, 0.5, 3);
  if (!p) return {false, "no pattern"};
  // First crossing: scoring stops at k, so later prefixes are never consulted.
  const bool ok = p->crossing_index == 5 && scorer.calls_ == 5;
  return {ok, "k=" + std::to_string(p->crossing_index) + " after " + std::to_string(scorer.calls_) +
                  " scorer calls"};
}

LabeledSentence random_sentence(std::mt19937_64& rng, const TrainedModel& m, int idx) {
  std::vector<std::string> words;
  for (std::size_t i = 6; i < m.vocabulary.size(); ++i) words.push_back(m.vocabulary.token(i));
  words.push_back("unseen-word");
  auto w = [&] { return words[rng() % words.size()]; };
  std::vector<std::string> t;
  for (std::size_t i = rng() % 3; i > 0; --i) t.push_back(w());
  t.insert(t.end(), {"<e1>", w(), "</e1>"});
  for (std::size_t i = rng() % 5; i > 0; --i) t.push_back(w());
  t.insert(t.end(), {"<e2>", w(), "</e2>"});
  for (std::size_t i = rng() % 3; i > 0; --i) t.push_back(w());
  return LabeledSentence{t, m.labels[rng() % m.labels.size()], "rand-" + std::to_string(idx)};
}

Outcome ac5_oracles(const TrainedModel& m) {
  std::mt19937_64 rng(555);
  std::size_t curve_mismatch = 0, pattern_mismatch = 0, points = 0;
  for (int i = 0; i < 100; ++i) {
    const auto s = random_sentence(rng, m, i);
    const int r = m.label_index(s.label);
    const auto curve = prefix_curve(m, s, s.label);
    std::vector<double> oracle;
    for (std::size_t k = 1; k <= s.tokens.size(); ++k) {
      oracle.push_back(testing::oracle_prefix_probs(m, s.tokens, k, false)(r));
      ++points;
      if (curve.points[k - 1].prob_target != oracle.back()) ++curve_mismatch;
    }
    for (double tau : {0.3, 0.5, 0.7}) {
      PatternOptions o;
      o.tau = tau;
      const auto p = extract_pattern(m, s, s.label, o);
      const auto k = testing::oracle_first_crossing(oracle, tau);
      const bool same = p.has_value() == k.has_value() &&
                        (!p || (p->crossing_index == *k && p->score == oracle[*k - 1] &&
                                p->lookahead_ngram == ngram_tokens(s.tokens, *k, 3, s.tokens.size()) &&
                                p->truncated_ngram == ngram_tokens(s.tokens, *k, 3, *k)));
      if (!same) ++pattern_mismatch;
    }
  }
  return {curve_mismatch == 0 && pattern_mismatch == 0,
          "100 sentences, " + std::to_string(points) + " prefix points, curve mismatches " +
              std::to_string(curve_mismatch) + ", pattern mismatches " +
              std::to_string(pattern_mismatch) + " (3 thresholds)"};
}

struct Synthetic {
  CorpusSplit split;
  TrainedModel model;
  double seconds = 0.0;
};

Synthetic train_synthetic() {
  const auto t0 = Clock::now();
  Synthetic out;
  out.split = generate_synthetic(SyntheticConfig{4, 50, 7});
  TrainConfig cfg;
  cfg.seed = 7;
  cfg.hidden = 32;
  cfg.embedding_dim = 16;
  cfg.window = 3;
  cfg.learning_rate = 0.05;
  cfg.epochs = 30;
  out.model = train(out.split, cfg).model;
  out.seconds = seconds_since(t0);
  return out;
}

Outcome ac6_end_to_end(const Synthetic& syn) {
  const auto t0 = Clock::now();
  const auto& m = syn.model;
  const double acc = evaluate(m, syn.split.test).accuracy;

  MineOptions o;
  o.pattern.tau = 0.5;
  o.only_correct = true;
  const auto table = mine_patterns(m, syn.split.test, o);
  std::size_t correct = 0;
  for (const auto& s : syn.split.test) correct += predict(m, s).label_name == s.label;
  // A mined entry counts once per supporting sentence if any of its tokens is a trigger word.
  std::size_t hits = 0;
  for (const auto& rp : table.relations) {
    const auto& trig = syn.split.triggers[static_cast<std::size_t>(m.label_index(rp.relation))];
    const std::set<std::string> trigger(trig.begin(), trig.end());
    for (const auto& e : rp.entries) {
      if (std::any_of(e.ngram.begin(), e.ngram.end(), [&](const auto& t) { return trigger.count(t) > 0; }))
        hits += e.support;
    }
  }
  const double overlap = correct > 0 ? static_cast<double>(hits) / static_cast<double>(correct) : 0.0;
  const double secs = syn.seconds + seconds_since(t0);
  const bool ok = acc >= 0.95 && overlap >= 0.8 && secs < 120.0;
  return {ok, "test accuracy " + fmt("%.4f", acc) + ", trigger overlap " + std::to_string(hits) + "/" +
                  std::to_string(correct) + " = " + fmt("%.4f", overlap) + ", " +
                  fmt("%.1f", secs) + " s"};
}

Outcome ac7_endpoints(const Synthetic& syn) {
  std::size_t bad = 0;
  for (const auto& s : syn.split.test) {
    const auto curve = prefix_curve(syn.model, s, s.label);
    if (curve.points.back().prob_target != predict(syn.model, s).probs(syn.model.label_index(s.label))) ++bad;
  }
  return {bad == 0, std::to_string(syn.split.test.size()) + " curves, " + std::to_string(bad) +
                        " endpoint mismatches"};
}

Outcome ac8_separation(const Synthetic& syn) {
  const auto rows = export_hidden_states(syn.model, syn.split.test);
  double intra = 0.0, inter = 0.0;
  std::size_t n_intra = 0, n_inter = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double dist = (rows[i].state - rows[j].state).norm();
      if (rows[i].label == rows[j].label) {
        intra += dist;
        ++n_intra;
      } else {
        inter += dist;
        ++n_inter;
      }
    }
  }
  intra /= static_cast<double>(n_intra);
  inter /= static_cast<double>(n_inter);
  return {intra < inter, "mean intra " + fmt("%.4f", intra) + " < mean inter " + fmt("%.4f", inter)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome ac9_determinism() {
  const auto dir = testing::temp_dir("acceptance");
  auto train_to = [&](const std::string& name) {
    std::ostringstream out, err;
    return cli::run({"train", "--synthetic", "3x20", "--seed", "4", "--epochs", "3", "--hidden", "8",
                     "--dim", "6", "--out", (dir / name).string()},
                    out, err);
  };
  if (train_to("a.lisa") != 0 || train_to("b.lisa") != 0) return {false, "train command failed"};
  const auto a = slurp(dir / "a.lisa");
  const bool same = !a.empty() && a == slurp(dir / "b.lisa");
  std::istringstream in(a);
  const bool round_trip = model_to_string(load_model(in)) == a;
  std::filesystem::remove_all(dir);
  return {same && round_trip, std::string("two trainings ") + (same ? "identical" : "differ") +
                                  ", save/load/save " + (round_trip ? "identical" : "differs") +
                                  " (" + std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  };

  report("AC1", "gradient check", ac1_gradients);
  report("AC2", "ranking loss at the margins", ac2_margin_loss);
  report("AC3", "cause-effect crossing", ac3_cause_effect);
  report("AC4", "birthplace first crossing", ac4_birthplace);
  const auto small = testing::small_synthetic_model(6);
  report("AC5", "oracle equivalence", [&] { return ac5_oracles(small); });
  const auto syn = train_synthetic();
  report("AC6", "synthetic end to end", [&] { return ac6_end_to_end(syn); });
  report("AC7", "curve endpoint consistency", [&] { return ac7_endpoints(syn); });
  report("AC8", "hidden-state separation", [&] { return ac8_separation(syn); });
  report("AC9", "determinism", ac9_determinism);
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
