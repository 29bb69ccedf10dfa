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
#include "lisa/cbrnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lisa/error.hpp"

namespace lisa {
namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::string shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void expect_shape(const char* name, const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorKind::kShapeMismatch, std::string(name) + " is " + shape(m) + ", expected " +
                                               std::to_string(rows) + "x" + std::to_string(cols));
  }
}

int best_competitor(const Eigen::VectorXd& scores, int y_plus) {
  int best = -1;
  for (int j = 0; j < scores.size(); ++j) {
    if (j == y_plus) continue;
    if (best < 0 || scores(j) > scores(best)) best = j;
  }
  return best;
}

void check_loss_inputs(const Eigen::VectorXd& scores, int y_plus) {
  if (scores.size() < 2) throw Error(ErrorKind::kSingleClass, "ranking loss needs C >= 2");
  if (y_plus < 0 || y_plus >= scores.size()) {
    throw Error(ErrorKind::kPrecondition, "class index " + std::to_string(y_plus) + " out of range");
  }
}

// A dense parameter block paired with its analytic gradient.
struct Block {
  double* param;
  const double* grad;
  Eigen::Index size;
};

std::vector<Block> dense_blocks(CBRNNParams& p, const Gradients& g) {
  if (g.U_f.size() != p.U_f.size() || g.U_b.size() != p.U_b.size() ||
      g.W_f.size() != p.W_f.size() || g.W_b.size() != p.W_b.size() ||
      g.W_bi.size() != p.W_bi.size() || g.W_hy.size() != p.W_hy.size() ||
      g.b_y.size() != p.b_y.size()) {
    throw Error(ErrorKind::kShapeMismatch, "gradient shapes do not match parameters");
  }
  return {
      {p.U_f.data(), g.U_f.data(), p.U_f.size()},   {p.U_b.data(), g.U_b.data(), p.U_b.size()},
      {p.W_f.data(), g.W_f.data(), p.W_f.size()},   {p.W_b.data(), g.W_b.data(), p.W_b.size()},
      {p.W_bi.data(), g.W_bi.data(), p.W_bi.size()}, {p.W_hy.data(), g.W_hy.data(), p.W_hy.size()},
      {p.b_y.data(), g.b_y.data(), p.b_y.size()},
  };
}

}  // namespace

CBRNNParams CBRNNParams::zeros(int window, int embedding_dim, int hidden, int classes,
                               std::size_t vocab_size) {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorKind::kEvenWindow, "window must be odd and >= 1");
  }
  CBRNNParams p;
  p.window = window;
  const Eigen::Index in = static_cast<Eigen::Index>(window) * embedding_dim;
  p.U_f = Eigen::MatrixXd::Zero(in, hidden);
  p.U_b = Eigen::MatrixXd::Zero(in, hidden);
  p.W_f = Eigen::MatrixXd::Zero(hidden, hidden);
  p.W_b = Eigen::MatrixXd::Zero(hidden, hidden);
  p.W_bi = Eigen::MatrixXd::Zero(hidden, hidden);
  p.W_hy = Eigen::MatrixXd::Zero(hidden, classes);
  p.b_y = Eigen::VectorXd::Zero(classes);
  p.embeddings.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vocab_size), embedding_dim);
  return p;
}

void CBRNNParams::check_shapes() const {
  const Eigen::Index in = static_cast<Eigen::Index>(window) * embeddings.dim();
  const Eigen::Index d_hidden = W_f.rows();
  const Eigen::Index c = b_y.size();
  expect_shape("U_f", U_f, in, d_hidden);
  expect_shape("U_b", U_b, in, d_hidden);
  expect_shape("W_f", W_f, d_hidden, d_hidden);
  expect_shape("W_b", W_b, d_hidden, d_hidden);
  expect_shape("W_bi", W_bi, d_hidden, d_hidden);
  expect_shape("W_hy", W_hy, d_hidden, c);
}

void LossConfig::validate() const {
  if (!(gamma > 0.0)) throw Error(ErrorKind::kConfigInvalid, "gamma must be > 0");
  if (!(m_plus > m_minus)) throw Error(ErrorKind::kConfigInvalid, "m_plus must exceed m_minus");
}

Eigen::VectorXd softmax(const Eigen::VectorXd& scores) {
  const Eigen::VectorXd e = (scores.array() - scores.maxCoeff()).exp().matrix();
  return e / e.sum();
}

ForwardCache forward_pass(const CBRNNParams& p, const NgramInputSequence& x) {
  p.check_shapes();
  if (x.length() == 0) throw Error(ErrorKind::kShapeMismatch, "empty input sequence");
  if (x.windows.cols() != p.input_dim()) {
    throw Error(ErrorKind::kShapeMismatch, "input width " + std::to_string(x.windows.cols()) +
                                               ", model expects " + std::to_string(p.input_dim()));
  }
  const auto n = static_cast<Eigen::Index>(x.length());
  const Eigen::Index dh = p.hidden();

  ForwardCache c;
  c.inputs = x;
  c.revision = p.revision;
  c.params = &p;
  const Eigen::MatrixXd in_f = p.U_f.transpose() * x.windows.transpose();  // D x n
  const Eigen::MatrixXd in_b = p.U_b.transpose() * x.windows.transpose();

  c.h_f.resize(dh, n);
  c.h_f.col(0) = in_f.col(0).array().tanh();
  for (Eigen::Index t = 1; t < n; ++t) {
    c.h_f.col(t) = (in_f.col(t) + p.W_f * c.h_f.col(t - 1)).array().tanh();
  }

  c.h_b.resize(dh, n);
  c.h_b.col(n - 1) = in_b.col(n - 1).array().tanh();
  for (Eigen::Index t = n - 2; t >= 0; --t) {
    c.h_b.col(t) = (in_b.col(t) + p.W_b * c.h_b.col(t + 1)).array().tanh();
  }

  c.h_bi.resize(dh, n);
  c.h_bi.col(0) = (c.h_f.col(0) + c.h_b.col(n - 1)).array().tanh();
  for (Eigen::Index t = 1; t < n; ++t) {
    c.h_bi.col(t) =
        (c.h_f.col(t) + c.h_b.col(n - 1 - t) + p.W_bi * c.h_bi.col(t - 1)).array().tanh();
  }

  c.scores = p.W_hy.transpose() * c.h_bi.col(n - 1) + p.b_y;
  c.probs = softmax(c.scores);
  return c;
}

RankingLoss ranking_loss(const Eigen::VectorXd& scores, int y_plus, const LossConfig& cfg) {
  check_loss_inputs(scores, y_plus);
  RankingLoss out;
  out.c_minus = best_competitor(scores, y_plus);
  out.loss = softplus(cfg.gamma * (cfg.m_plus - scores(y_plus))) +
             softplus(cfg.gamma * (cfg.m_minus + scores(out.c_minus)));
  return out;
}

Eigen::VectorXd ranking_loss_score_gradient(const Eigen::VectorXd& scores, int y_plus,
                                            const LossConfig& cfg) {
  check_loss_inputs(scores, y_plus);
  const int c_minus = best_competitor(scores, y_plus);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(scores.size());
  g(y_plus) = -cfg.gamma * sigmoid(cfg.gamma * (cfg.m_plus - scores(y_plus)));
  g(c_minus) = cfg.gamma * sigmoid(cfg.gamma * (cfg.m_minus + scores(c_minus)));
  return g;
}

Gradients Gradients::zeros_like(const CBRNNParams& p) {
  Gradients g;
  g.U_f = Eigen::MatrixXd::Zero(p.U_f.rows(), p.U_f.cols());
  g.U_b = Eigen::MatrixXd::Zero(p.U_b.rows(), p.U_b.cols());
  g.W_f = Eigen::MatrixXd::Zero(p.W_f.rows(), p.W_f.cols());
  g.W_b = Eigen::MatrixXd::Zero(p.W_b.rows(), p.W_b.cols());
  g.W_bi = Eigen::MatrixXd::Zero(p.W_bi.rows(), p.W_bi.cols());
  g.W_hy = Eigen::MatrixXd::Zero(p.W_hy.rows(), p.W_hy.cols());
  g.b_y = Eigen::VectorXd::Zero(p.b_y.size());
  return g;
}

double Gradients::squared_norm() const {
  double total = U_f.squaredNorm() + U_b.squaredNorm() + W_f.squaredNorm() + W_b.squaredNorm() +
                 W_bi.squaredNorm() + W_hy.squaredNorm() + b_y.squaredNorm();
  for (const auto& [id, row] : embedding_rows) total += row.squaredNorm();
  return total;
}

void Gradients::set_zero() {
  U_f.setZero();
  U_b.setZero();
  W_f.setZero();
  W_b.setZero();
  W_bi.setZero();
  W_hy.setZero();
  b_y.setZero();
  embedding_rows.clear();
}

Gradients loss_gradients(const CBRNNParams& p, const ForwardCache& cache, int y_plus,
                         const LossConfig& cfg) {
  if (cache.params != &p || cache.revision != p.revision) {
    throw Error(ErrorKind::kStaleCache, "forward cache was computed with different parameters");
  }
  p.check_shapes();
  const Eigen::Index n = cache.h_bi.cols();
  const Eigen::Index dh = p.hidden();
  if (n == 0 || cache.h_bi.rows() != dh || cache.scores.size() != p.classes()) {
    throw Error(ErrorKind::kStaleCache, "forward cache shape does not match parameters");
  }

  Gradients g = Gradients::zeros_like(p);
  const Eigen::VectorXd ds = ranking_loss_score_gradient(cache.scores, y_plus, cfg);
  g.W_hy = cache.h_bi.col(n - 1) * ds.transpose();
  g.b_y = ds;

  // Combined chain, right to left. Each step also feeds the forward state at
  // t and the backward state at n-1-t.
  Eigen::MatrixXd d_f = Eigen::MatrixXd::Zero(dh, n);
  Eigen::MatrixXd d_b = Eigen::MatrixXd::Zero(dh, n);
  Eigen::VectorXd carry = p.W_hy * ds;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const Eigen::VectorXd dz =
        (carry.array() * (1.0 - cache.h_bi.col(t).array().square())).matrix();
    d_f.col(t) += dz;
    d_b.col(n - 1 - t) += dz;
    if (t > 0) {
      g.W_bi.noalias() += dz * cache.h_bi.col(t - 1).transpose();
      carry = p.W_bi.transpose() * dz;
    }
  }

  // Forward chain, right to left.
  Eigen::MatrixXd dz_f(dh, n);
  carry = Eigen::VectorXd::Zero(dh);
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    dz_f.col(t) = ((d_f.col(t) + carry).array() * (1.0 - cache.h_f.col(t).array().square())).matrix();
    if (t > 0) {
      g.W_f.noalias() += dz_f.col(t) * cache.h_f.col(t - 1).transpose();
      carry = p.W_f.transpose() * dz_f.col(t);
    }
  }

  // Backward chain, left to right.
  Eigen::MatrixXd dz_b(dh, n);
  carry = Eigen::VectorXd::Zero(dh);
  for (Eigen::Index t = 0; t < n; ++t) {
    dz_b.col(t) = ((d_b.col(t) + carry).array() * (1.0 - cache.h_b.col(t).array().square())).matrix();
    if (t + 1 < n) {
      g.W_b.noalias() += dz_b.col(t) * cache.h_b.col(t + 1).transpose();
      carry = p.W_b.transpose() * dz_b.col(t);
    }
  }

  const Eigen::MatrixXd& x = cache.inputs.windows;  // n x (N*d)
  g.U_f.noalias() = x.transpose() * dz_f.transpose();
  g.U_b.noalias() = x.transpose() * dz_b.transpose();

  if (p.embeddings.trainable) {
    const Eigen::MatrixXd dx = (p.U_f * dz_f + p.U_b * dz_b).transpose();  // n x (N*d)
    const int window = cache.inputs.window;
    const int d = cache.inputs.dim;
    for (Eigen::Index k = 0; k < n; ++k) {
      for (int j = 0; j < window; ++j) {
        const auto id = cache.inputs.slot_ids[static_cast<std::size_t>(k * window + j)];
        if (id <= Vocabulary::kPaddingId) continue;
        auto [it, inserted] = g.embedding_rows.try_emplace(id, Eigen::VectorXd::Zero(d));
        it->second += dx.block(k, static_cast<Eigen::Index>(j) * d, 1, d).transpose();
      }
    }
  }
  return g;
}

double example_loss(const CBRNNParams& p, const Example& example, const LossConfig& cfg) {
  const auto seq = compose_ngram_inputs(example.ids, p.embeddings, p.window);
  return ranking_loss(forward_pass(p, seq).scores, example.label, cfg).loss;
}

double compare_with_finite_differences(const CBRNNParams& p, const Example& example,
                                       const Gradients& analytic, double eps,
                                       const LossConfig& cfg) {
  if (!(eps > 0.0)) throw Error(ErrorKind::kPrecondition, "eps must be > 0");
  CBRNNParams q = p;
  double worst = 0.0;
  const auto compare = [&](double& coordinate, double a) {
    const double saved = coordinate;
    coordinate = saved + eps;
    const double up = example_loss(q, example, cfg);
    coordinate = saved - eps;
    const double down = example_loss(q, example, cfg);
    coordinate = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double err = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
    worst = std::max(worst, err);
  };
  for (const auto& block : dense_blocks(q, analytic)) {
    for (Eigen::Index i = 0; i < block.size; ++i) compare(block.param[i], block.grad[i]);
  }
  if (q.embeddings.trainable) {
    auto& table = q.embeddings.matrix;
    for (Eigen::Index r = 1; r < table.rows(); ++r) {
      const auto it = analytic.embedding_rows.find(static_cast<std::int32_t>(r));
      for (Eigen::Index c = 0; c < table.cols(); ++c) {
        compare(table(r, c), it == analytic.embedding_rows.end() ? 0.0 : it->second(c));
      }
    }
  }
  return worst;
}

double gradient_check(const CBRNNParams& p, const Example& example, double eps,
                      const LossConfig& cfg) {
  if (!(eps > 0.0)) throw Error(ErrorKind::kPrecondition, "eps must be > 0");
  const auto seq = compose_ngram_inputs(example.ids, p.embeddings, p.window);
  const auto cache = forward_pass(p, seq);
  return compare_with_finite_differences(p, example, loss_gradients(p, cache, example.label, cfg),
                                         eps, cfg);
}

double sgd_step(CBRNNParams& p, const Gradients& grads, double learning_rate, double clip_norm) {
  if (!(learning_rate >= 0.0)) throw Error(ErrorKind::kPrecondition, "learning rate must be >= 0");
  if (!(clip_norm > 0.0)) throw Error(ErrorKind::kPrecondition, "clip_norm must be > 0");
  const double norm = std::sqrt(grads.squared_norm());
  const double scale = norm > clip_norm ? clip_norm / norm : 1.0;
  const double step = learning_rate * scale;
  for (const auto& block : dense_blocks(p, grads)) {
    for (Eigen::Index i = 0; i < block.size; ++i) block.param[i] -= step * block.grad[i];
  }
  if (p.embeddings.trainable) {
    for (const auto& [id, row] : grads.embedding_rows) {
      if (id == Vocabulary::kPaddingId) continue;
      p.embeddings.matrix.row(id) -= step * row.transpose();
    }
  }
  ++p.revision;
  return norm;
}

}  // namespace lisa
