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
#include "lisa/train.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lisa/error.hpp"
#include "random.hpp"

namespace lisa {
namespace {

// Independent generator streams derived from the single user seed.
constexpr std::uint64_t kWeightStream = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kShuffleStream = 0xC2B2AE3D27D4EB4FULL;

// Glorot-uniform, drawn row-major so the order matches the model file layout.
void fill_uniform(Eigen::MatrixXd& m, std::mt19937_64& rng) {
  const double radius = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = detail::uniform_symmetric(rng, radius);
  }
}

double accuracy_of(const TrainedModel& m, const std::vector<LabeledSentence>& sentences) {
  return evaluate(m, sentences).accuracy;
}

}  // namespace

void TrainConfig::validate() const {
  const auto fail = [](const std::string& what) { throw Error(ErrorKind::kConfigInvalid, what); };
  if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (epochs < 0) fail("epochs must be >= 0");
  if (!(clip_norm > 0.0)) fail("clip_norm must be > 0");
  if (window < 1 || window % 2 == 0) fail("window must be odd and >= 1");
  if (hidden < 1) fail("hidden size must be >= 1");
  if (embedding_dim < 1) fail("embedding dimension must be >= 1");
  if (min_count < 1) fail("min_count must be >= 1");
}

int TrainedModel::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

TrainedModel initialize_model(const CorpusSplit& split, const TrainConfig& cfg,
                              const LossConfig& lcfg,
                              const std::optional<std::filesystem::path>& pretrained) {
  cfg.validate();
  lcfg.validate();
  if (split.train.empty()) throw Error(ErrorKind::kEmptyTrainSet, "training set is empty");

  TrainedModel m;
  m.train_config = cfg;
  m.loss_config = lcfg;
  m.labels = split.label_set.empty() ? collect_labels({&split.train, &split.dev, &split.test})
                                     : split.label_set;
  if (m.labels.size() < 2) throw Error(ErrorKind::kSingleClass, "need at least two labels");
  m.vocabulary = build_vocabulary(split.train, cfg.min_count);

  m.params = CBRNNParams::zeros(cfg.window, cfg.embedding_dim, cfg.hidden,
                                static_cast<int>(m.labels.size()), m.vocabulary.size());
  m.params.embeddings = pretrained ? load_pretrained_text(*pretrained, m.vocabulary,
                                                          cfg.embedding_dim, cfg.seed)
                                   : init_random(m.vocabulary, cfg.embedding_dim, cfg.seed);
  std::mt19937_64 rng(cfg.seed ^ kWeightStream);
  fill_uniform(m.params.U_f, rng);
  fill_uniform(m.params.U_b, rng);
  fill_uniform(m.params.W_f, rng);
  fill_uniform(m.params.W_b, rng);
  fill_uniform(m.params.W_bi, rng);
  fill_uniform(m.params.W_hy, rng);
  return m;
}

Example make_example(const TrainedModel& m, const LabeledSentence& s) {
  const int label = m.label_index(s.label);
  if (label < 0) throw Error(ErrorKind::kUnknownRelation, "label '" + s.label + "' not in model");
  return Example{encode_sentence(s, m.vocabulary), label};
}

TrainResult train_from(TrainedModel model, const CorpusSplit& split) {
  const TrainConfig& cfg = model.train_config;
  cfg.validate();
  if (split.train.empty()) throw Error(ErrorKind::kEmptyTrainSet, "training set is empty");

  std::vector<Example> examples;
  examples.reserve(split.train.size());
  for (const auto& s : split.train) examples.push_back(make_example(model, s));
  const auto& dev = split.dev.empty() ? split.train : split.dev;

  TrainResult result;
  result.model = model;
  double best_accuracy = -1.0;
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed ^ kShuffleStream);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.shuffle) {
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
      }
    }
    double total = 0.0;
    for (auto idx : order) {
      const auto& ex = examples[idx];
      const auto seq = compose_ngram_inputs(ex.ids, model.params.embeddings, model.params.window);
      const auto cache = forward_pass(model.params, seq);
      total += ranking_loss(cache.scores, ex.label, model.loss_config).loss;
      const auto grads = loss_gradients(model.params, cache, ex.label, model.loss_config);
      sgd_step(model.params, grads, cfg.learning_rate, cfg.clip_norm);
    }
    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = total / static_cast<double>(examples.size());
    record.dev_accuracy = accuracy_of(model, dev);
    result.history.push_back(record);
    if (record.dev_accuracy >= best_accuracy) {
      best_accuracy = record.dev_accuracy;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

TrainResult train(const CorpusSplit& split, const TrainConfig& cfg, const LossConfig& lcfg,
                  const std::optional<std::filesystem::path>& pretrained) {
  return train_from(initialize_model(split, cfg, lcfg, pretrained), split);
}

int argmax_lowest(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}

Prediction predict(const TrainedModel& m, const std::vector<std::string>& tokens) {
  validate_markers(tokens);
  const auto seq = compose_ngram_inputs(encode_tokens(tokens, m.vocabulary), m.params.embeddings,
                                        m.params.window);
  Prediction out;
  out.probs = forward_pass(m.params, seq).probs;
  out.label = argmax_lowest(out.probs);
  out.label_name = m.labels[static_cast<std::size_t>(out.label)];
  return out;
}

Prediction predict(const TrainedModel& m, const LabeledSentence& s) { return predict(m, s.tokens); }

EvalResult evaluate_predictions(const std::vector<int>& gold, const std::vector<int>& predicted,
                                const std::vector<std::string>& labels) {
  if (gold.empty()) throw Error(ErrorKind::kEmptyEvalSet, "no sentences to evaluate");
  if (gold.size() != predicted.size()) {
    throw Error(ErrorKind::kPrecondition, "gold and predicted lengths differ");
  }
  const std::size_t classes = labels.size();
  std::vector<std::size_t> tp(classes, 0), fp(classes, 0), fn(classes, 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto g = static_cast<std::size_t>(gold[i]);
    const auto p = static_cast<std::size_t>(predicted[i]);
    if (g >= classes || p >= classes) throw Error(ErrorKind::kPrecondition, "class index out of range");
    if (g == p) {
      ++correct;
      ++tp[g];
    } else {
      ++fp[p];
      ++fn[g];
    }
  }
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };

  EvalResult r;
  r.accuracy = ratio(correct, gold.size());
  double f1_sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    ClassMetrics cm;
    cm.label = labels[c];
    cm.precision = ratio(tp[c], tp[c] + fp[c]);
    cm.recall = ratio(tp[c], tp[c] + fn[c]);
    cm.f1 = cm.precision + cm.recall == 0.0
                ? 0.0
                : 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
    cm.support = tp[c] + fn[c];
    if (cm.support > 0) {
      f1_sum += cm.f1;
      ++present;
    }
    r.per_class.push_back(std::move(cm));
  }
  r.macro_f1 = present == 0 ? 0.0 : f1_sum / static_cast<double>(present);
  return r;
}

EvalResult evaluate(const TrainedModel& m, const std::vector<LabeledSentence>& sentences) {
  if (sentences.empty()) throw Error(ErrorKind::kEmptyEvalSet, "no sentences to evaluate");
  std::vector<int> gold;
  std::vector<int> predicted;
  gold.reserve(sentences.size());
  predicted.reserve(sentences.size());
  for (const auto& s : sentences) {
    const int g = m.label_index(s.label);
    if (g < 0) throw Error(ErrorKind::kUnknownRelation, "label '" + s.label + "' not in model");
    gold.push_back(g);
    predicted.push_back(predict(m, s).label);
  }
  return evaluate_predictions(gold, predicted, m.labels);
}

}  // namespace lisa
