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
#ifndef LISA_TESTS_TEST_SUPPORT_HPP_
#define LISA_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lisa/cbrnn.hpp"
#include "lisa/corpus.hpp"
#include "lisa/interpret.hpp"
#include "lisa/train.hpp"

namespace lisa::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c,
                                     double radius) {
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = uniform(rng, -radius, radius);
  return m;
}

// Random parameters; embedding row 0 is kept at zero.
inline CBRNNParams random_params(std::mt19937_64& rng, int window, int d, int hidden, int classes,
                                 std::size_t vocab, double radius = 0.5) {
  CBRNNParams p = CBRNNParams::zeros(window, d, hidden, classes, vocab);
  const Eigen::Index in = static_cast<Eigen::Index>(window) * d;
  p.U_f = random_matrix(rng, in, hidden, radius);
  p.U_b = random_matrix(rng, in, hidden, radius);
  p.W_f = random_matrix(rng, hidden, hidden, radius);
  p.W_b = random_matrix(rng, hidden, hidden, radius);
  p.W_bi = random_matrix(rng, hidden, hidden, radius);
  p.W_hy = random_matrix(rng, hidden, classes, 1.0);
  p.b_y = random_matrix(rng, classes, 1, 0.5);
  p.embeddings.matrix = random_matrix(rng, static_cast<Eigen::Index>(vocab), d, 1.0);
  p.embeddings.matrix.row(0).setZero();
  return p;
}

inline std::vector<std::int32_t> random_ids(std::mt19937_64& rng, std::size_t n, std::size_t vocab) {
  std::vector<std::int32_t> ids(n);
  for (auto& id : ids) id = static_cast<std::int32_t>(1 + rng() % (vocab - 1));
  return ids;
}

// Fixture sentences.
inline LabeledSentence cause_effect_sentence() {
  return parse_marked_sentence(
      "cause-effect(e1,e2)\t<e1> demolition </e1> was the cause of <e2> terror </e2>", "S1");
}

inline LabeledSentence birthplace_sentence() {
  return parse_marked_sentence(
      "per:location_of_birth(e1,e2)\t<e1> person </e1> was born in <e2> location </e2>", "S8");
}

inline const std::vector<double>& cause_effect_curve() {
  static const std::vector<double> v{0.10, 0.25, 0.29, 0.30, 0.35, 0.39, 0.77, 0.98, 1.00, 1.00};
  return v;
}

inline const std::vector<double>& birthplace_curve() {
  static const std::vector<double> v{0.34, 0.34, 0.34, 0.37, 0.50, 0.58, 0.53, 0.54, 0.53};
  return v;
}

// Replays a fixed probability per prefix length.
class ReplayScorer final : public PrefixScorer {
 public:
  explicit ReplayScorer(std::vector<double> probs) : probs_(std::move(probs)) {}
  double target_probability(const std::vector<std::string>&, std::size_t k, int) const override {
    ++calls_;
    return probs_.at(k - 1);
  }
  mutable std::size_t calls_ = 0;

 private:
  std::vector<double> probs_;
};

// ---------------------------------------------------------------------------
// Independent oracles. None of these call compose_ngram_inputs, take_prefix or
// prefix_probabilities.

// Window composition written directly from the definition: slot j of step k
// holds token k - N/2 + j when it lies inside [0, end), else zeros.
inline Eigen::MatrixXd oracle_windows(const std::vector<std::int32_t>& ids, std::size_t steps,
                                      std::size_t end, const Eigen::MatrixXd& table, int window) {
  const Eigen::Index d = table.cols();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(steps), window * d);
  for (std::size_t k = 0; k < steps; ++k) {
    for (int j = 0; j < window; ++j) {
      const long pos = static_cast<long>(k) - window / 2 + j;
      if (pos < 0 || pos >= static_cast<long>(end)) continue;
      for (Eigen::Index c = 0; c < d; ++c) w(static_cast<Eigen::Index>(k), j * d + c) = table(ids[pos], c);
    }
  }
  return w;
}

// Truncate-and-forward: cut the token list, look up ids, rebuild windows and
// run the network once. With lookahead the windows may see tokens past k.
inline Eigen::VectorXd oracle_prefix_probs(const TrainedModel& m,
                                           const std::vector<std::string>& tokens, std::size_t k,
                                           bool lookahead) {
  std::vector<std::int32_t> ids;
  const std::size_t end = lookahead ? tokens.size() : k;
  for (std::size_t i = 0; i < end; ++i) ids.push_back(m.vocabulary.id(tokens[i]));
  NgramInputSequence x;
  x.window = m.params.window;
  x.dim = m.params.embeddings.dim();
  x.windows = oracle_windows(ids, k, end, m.params.embeddings.matrix, m.params.window);
  x.slot_ids.assign(k * static_cast<std::size_t>(x.window), -1);
  return forward_pass(m.params, x).probs;
}

// Minimal k with P >= tau found by scoring every prefix first.
inline std::optional<std::size_t> oracle_first_crossing(const std::vector<double>& probs, double tau) {
  std::optional<std::size_t> best;
  for (std::size_t k = probs.size(); k >= 1; --k) {
    if (probs[k - 1] >= tau) best = k;
  }
  return best;
}

struct ScalarForward {
  std::vector<double> scores;
  std::vector<double> last_hidden;
};

// Scalar-by-scalar evaluation of the three recurrences, no Eigen products.
inline ScalarForward oracle_scalar_forward(const CBRNNParams& p, const Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  const int in = static_cast<int>(x.cols());
  const int dh = static_cast<int>(p.W_f.rows());
  const int c = static_cast<int>(p.b_y.size());
  std::vector<std::vector<double>> f(n + 1, std::vector<double>(dh, 0.0));
  std::vector<std::vector<double>> b(n + 2, std::vector<double>(dh, 0.0));
  std::vector<std::vector<double>> h(n + 1, std::vector<double>(dh, 0.0));
  for (int t = 1; t <= n; ++t) {
    for (int i = 0; i < dh; ++i) {
      double a = 0.0;
      for (int j = 0; j < in; ++j) a += p.U_f(j, i) * x(t - 1, j);
      for (int j = 0; j < dh; ++j) a += p.W_f(i, j) * f[t - 1][j];
      f[t][i] = std::tanh(a);
    }
  }
  for (int t = n; t >= 1; --t) {
    for (int i = 0; i < dh; ++i) {
      double a = 0.0;
      for (int j = 0; j < in; ++j) a += p.U_b(j, i) * x(t - 1, j);
      for (int j = 0; j < dh; ++j) a += p.W_b(i, j) * b[t + 1][j];
      b[t][i] = std::tanh(a);
    }
  }
  for (int t = 1; t <= n; ++t) {
    for (int i = 0; i < dh; ++i) {
      double a = f[t][i] + b[n - t + 1][i];
      for (int j = 0; j < dh; ++j) a += p.W_bi(i, j) * h[t - 1][j];
      h[t][i] = std::tanh(a);
    }
  }
  ScalarForward out;
  out.last_hidden = h[n];
  for (int k = 0; k < c; ++k) {
    double s = p.b_y(k);
    for (int i = 0; i < dh; ++i) s += p.W_hy(i, k) * h[n][i];
    out.scores.push_back(s);
  }
  return out;
}

// Small trained-looking model over a synthetic split, for interpret tests.
inline TrainedModel small_synthetic_model(int epochs, std::uint64_t seed = 7) {
  SyntheticConfig sc;
  sc.n_relations = 3;
  sc.sentences_per_relation = 20;
  sc.seed = seed;
  const auto split = generate_synthetic(sc);
  TrainConfig cfg;
  cfg.hidden = 8;
  cfg.embedding_dim = 6;
  cfg.window = 3;
  cfg.epochs = epochs;
  cfg.seed = seed;
  return train(split, cfg).model;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  // Unique per process so ctest -j runs do not collide.
  const auto tag = std::to_string(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("lisa_test_" + name + "_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace lisa::testing

#endif  // LISA_TESTS_TEST_SUPPORT_HPP_
