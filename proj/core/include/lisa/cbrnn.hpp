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
#ifndef LISA_CBRNN_HPP_
#define LISA_CBRNN_HPP_

#include <cstdint>
#include <map>
#include <string_view>

#include <Eigen/Dense>

#include "lisa/embeddings.hpp"

namespace lisa {

// Connectionist bi-directional RNN:
//
//   h_f[t]  = tanh(U_f' x[t] + W_f h_f[t-1])                  t = 1..n
//   h_b[p]  = tanh(U_b' x[p] + W_b h_b[p+1])                  p = n..1
//   h_bi[t] = tanh(h_f[t] + h_b[n-t+1] + W_bi h_bi[t-1])      t = 1..n
//   s       = W_hy' h_bi[n] + b_y
//
// The backward chain is stored by position; the combined chain at step t
// pairs the t-th forward step with the t-th step of the reversed pass, so
// h_bi[n] sees the full sentence through both directions. No hidden biases.
struct CBRNNParams {
  static constexpr std::string_view kActivation = "tanh";

  Eigen::MatrixXd U_f;   // (N*d) x D
  Eigen::MatrixXd U_b;   // (N*d) x D
  Eigen::MatrixXd W_f;   // D x D
  Eigen::MatrixXd W_b;   // D x D
  Eigen::MatrixXd W_bi;  // D x D
  Eigen::MatrixXd W_hy;  // D x C
  Eigen::VectorXd b_y;   // C
  EmbeddingTable embeddings;
  int window = 1;

  // Bumped by every in-library update; caches remember the value they saw.
  std::uint64_t revision = 0;

  static CBRNNParams zeros(int window, int embedding_dim, int hidden, int classes,
                           std::size_t vocab_size);

  int input_dim() const { return static_cast<int>(U_f.rows()); }
  int hidden() const { return static_cast<int>(W_f.rows()); }
  int classes() const { return static_cast<int>(b_y.size()); }

  // Throws ShapeMismatch when matrices disagree on (N*d, D, C).
  void check_shapes() const;
};

// Per-step states, columns indexed by time step (0-based).
struct ForwardCache {
  NgramInputSequence inputs;
  Eigen::MatrixXd h_f;   // D x n, forward chain
  Eigen::MatrixXd h_b;   // D x n, backward chain by position
  Eigen::MatrixXd h_bi;  // D x n, combined chain
  Eigen::VectorXd scores;
  Eigen::VectorXd probs;
  std::uint64_t revision = 0;
  const CBRNNParams* params = nullptr;
};

struct LossConfig {
  double gamma = 2.0;
  double m_plus = 2.5;
  double m_minus = 0.5;

  // Throws ConfigInvalid unless gamma > 0 and m_plus > m_minus.
  void validate() const;
};

struct RankingLoss {
  double loss = 0.0;
  int c_minus = -1;
};

// Numerically stable softmax (max-shifted).
Eigen::VectorXd softmax(const Eigen::VectorXd& scores);

// Throws ShapeMismatch.
ForwardCache forward_pass(const CBRNNParams& p, const NgramInputSequence& x);

// log(1 + exp(g(m+ - s[y+]))) + log(1 + exp(g(m- + s[c-]))) where c- is the
// best-scoring class other than y+ (lowest index on ties). Throws SingleClass.
RankingLoss ranking_loss(const Eigen::VectorXd& scores, int y_plus,
                         const LossConfig& cfg = {});

// d loss / d scores.
Eigen::VectorXd ranking_loss_score_gradient(const Eigen::VectorXd& scores, int y_plus,
                                            const LossConfig& cfg = {});

struct Gradients {
  Eigen::MatrixXd U_f, U_b, W_f, W_b, W_bi, W_hy;
  Eigen::VectorXd b_y;
  // Sparse embedding gradient keyed by vocabulary row.
  std::map<std::int32_t, Eigen::VectorXd> embedding_rows;

  static Gradients zeros_like(const CBRNNParams& p);
  double squared_norm() const;
  void set_zero();
};

// Exact BPTT through the combined chain, then both directional chains, then
// into the embedding rows of the input windows (when trainable).
// Throws StaleCache when `cache` was not produced by forward_pass(p, ...).
Gradients loss_gradients(const CBRNNParams& p, const ForwardCache& cache, int y_plus,
                         const LossConfig& cfg = {});

struct Example {
  std::vector<std::int32_t> ids;
  int label = 0;
};

double example_loss(const CBRNNParams& p, const Example& example, const LossConfig& cfg = {});

// Central differences over every coordinate of every parameter (embedding
// rows included when trainable). Relative error |a-n| / max(1e-8, |a|+|n|),
// maximised. Throws Precondition unless eps > 0.
double gradient_check(const CBRNNParams& p, const Example& example, double eps,
                      const LossConfig& cfg = {});

// Same comparison against caller-supplied analytic gradients.
double compare_with_finite_differences(const CBRNNParams& p, const Example& example,
                                       const Gradients& analytic, double eps,
                                       const LossConfig& cfg = {});

// Clips the global gradient norm to clip_norm, then p -= lr * g. The padding
// embedding row is never touched. Returns the unclipped norm.
// Throws Precondition for lr < 0 or clip_norm <= 0.
double sgd_step(CBRNNParams& p, const Gradients& grads, double learning_rate,
                double clip_norm);

}  // namespace lisa

#endif  // LISA_CBRNN_HPP_
