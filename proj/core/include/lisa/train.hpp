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
#ifndef LISA_TRAIN_HPP_
#define LISA_TRAIN_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lisa/cbrnn.hpp"
#include "lisa/corpus.hpp"

namespace lisa {

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 50;
  std::uint64_t seed = 1;
  int window = 3;          // N, odd
  int hidden = 64;         // D
  int embedding_dim = 50;  // d
  std::size_t min_count = 1;
  double clip_norm = 5.0;
  bool shuffle = true;

  // Throws ConfigInvalid.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TrainedModel {
  TrainConfig train_config;
  LossConfig loss_config;
  std::vector<std::string> labels;
  Vocabulary vocabulary;
  CBRNNParams params;

  int label_index(std::string_view label) const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean over the epoch's examples
  double dev_accuracy = 0.0;
};

struct TrainResult {
  TrainedModel model;
  std::vector<EpochRecord> history;
  int best_epoch = 0;  // 0 when no epoch ran
};

// Vocabulary from split.train, embeddings from init_random (or the pretrained
// file, when given), Glorot-uniform weights, b_y = 0. Seeded.
TrainedModel initialize_model(const CorpusSplit& split, const TrainConfig& cfg,
                              const LossConfig& lcfg,
                              const std::optional<std::filesystem::path>& pretrained = {});

// Per-example SGD over a seeded shuffle of split.train. After every epoch the
// dev accuracy is measured (on split.train when split.dev is empty) and the
// best snapshot kept, ties going to the later epoch. Throws EmptyTrainSet.
TrainResult train(const CorpusSplit& split, const TrainConfig& cfg,
                  const LossConfig& lcfg = {},
                  const std::optional<std::filesystem::path>& pretrained = {});

// Continues training an already initialised model.
TrainResult train_from(TrainedModel model, const CorpusSplit& split);

Example make_example(const TrainedModel& m, const LabeledSentence& s);

struct Prediction {
  int label = 0;
  std::string label_name;
  Eigen::VectorXd probs;
};

// Validates markers first; argmax ties go to the lowest class index.
Prediction predict(const TrainedModel& m, const std::vector<std::string>& tokens);
Prediction predict(const TrainedModel& m, const LabeledSentence& s);

int argmax_lowest(const Eigen::VectorXd& v);

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold count
};

struct EvalResult {
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;  // label_set order
  double macro_f1 = 0.0;                // over classes present in gold
};

// Zero denominators give 0. Throws EmptyEvalSet.
EvalResult evaluate_predictions(const std::vector<int>& gold, const std::vector<int>& predicted,
                                const std::vector<std::string>& labels);

// Throws EmptyEvalSet, UnknownRelation for gold labels outside the model.
EvalResult evaluate(const TrainedModel& m, const std::vector<LabeledSentence>& sentences);

}  // namespace lisa

#endif  // LISA_TRAIN_HPP_
