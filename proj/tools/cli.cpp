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
#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lisa/corpus.hpp"
#include "lisa/error.hpp"
#include "lisa/interpret.hpp"
#include "lisa/model_io.hpp"
#include "lisa/train.hpp"

namespace lisa::cli {
namespace {

struct TrainArgs {
  std::string data, dev, test, synthetic, out, metrics, embeddings;
  bool truncate = false;
  bool no_shuffle = false;
  TrainConfig cfg;
  LossConfig loss;
};

struct ModelDataArgs {
  std::string model, data, out;
  bool truncate = false;
};

struct LisaArgs {
  std::string model, sentence, data, id, relation, out;
  int ngram = 0;
  bool lookahead = false;
  bool truncate = false;
};

struct PatternArgs {
  ModelDataArgs io;
  double tau = 0.5;
  int ngram = 0;
  bool only_correct = true;
  bool lookahead = true;
  bool scoring_lookahead = false;
};

struct SynthArgs {
  SyntheticConfig config;
  std::string out_dir;
};

struct ImportArgs {
  std::string in = "-", out;
};

// Moves --config <file> / --config=<file> out of args and splices the file's
// key=value pairs in front of the explicit flags, so explicit flags win.
void expand_config(std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config requires a path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return;
  std::ifstream in(*path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config " + *path);
  std::vector<std::string> injected;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kConfigInvalid,
                  *path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto key = line.substr(first, eq - first);
    auto value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r") + 1);
    injected.push_back("--" + key + "=" + value);
  }
  const std::size_t at = args.empty() ? 0 : 1;  // after the subcommand name
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
}

std::vector<LabeledSentence> load_sentences(const std::string& path, bool truncate) {
  auto sentences = read_corpus_file(path);
  if (truncate) {
    for (auto& s : sentences) s = truncate_to_arguments(s);
  }
  return sentences;
}

void truncate_all(std::vector<LabeledSentence>& sentences) {
  for (auto& s : sentences) s = truncate_to_arguments(s);
}

// Writes to the file when a path is given, otherwise to out.
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::kIo, "cannot write " + path);
  write(file);
}

SyntheticConfig parse_synthetic(const std::string& text, std::uint64_t seed) {
  const auto x = text.find('x');
  SyntheticConfig c;
  c.seed = seed;
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    c.n_relations = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    const auto rest = text.substr(x + 1);
    c.sentences_per_relation = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kConfigInvalid, "--synthetic expects <relations>x<per-relation>, got '" + text + "'");
  }
  return c;
}

int cmd_train(TrainArgs& a, std::ostream& out, std::ostream& err) {
  a.cfg.shuffle = !a.no_shuffle;
  CorpusSplit split;
  if (!a.synthetic.empty()) {
    split = generate_synthetic(parse_synthetic(a.synthetic, a.cfg.seed));
  } else {
    if (a.data.empty()) throw Error(ErrorKind::kConfigInvalid, "train needs --data or --synthetic");
    split.train = read_corpus_file(a.data);
    if (!a.dev.empty()) split.dev = read_corpus_file(a.dev);
    if (!a.test.empty()) split.test = read_corpus_file(a.test);
    split.label_set = collect_labels({&split.train, &split.dev, &split.test});
  }
  if (a.truncate) {
    truncate_all(split.train);
    truncate_all(split.dev);
    truncate_all(split.test);
  }

  std::optional<std::filesystem::path> pretrained;
  if (!a.embeddings.empty()) pretrained = a.embeddings;
  const auto result = train(split, a.cfg, a.loss, pretrained);
  save_model_file(a.out, result.model);

  const std::string metrics_path = a.metrics.empty() ? a.out + ".metrics.tsv" : a.metrics;
  emit(metrics_path, err, [&](std::ostream& o) {
    o << "epoch\ttrain_loss\tdev_accuracy\n";
    for (const auto& r : result.history) {
      o << r.epoch << '\t' << format_real(r.train_loss) << '\t' << format_real(r.dev_accuracy) << '\n';
    }
  });

  out << "best_epoch:" << result.best_epoch << '\n';
  if (!result.history.empty()) {
    out << "dev_accuracy:"
        << format_real(result.history[static_cast<std::size_t>(result.best_epoch - 1)].dev_accuracy)
        << '\n';
  }
  if (!split.test.empty()) {
    out << "test_accuracy:" << format_real(evaluate(result.model, split.test).accuracy) << '\n';
  }
  return kExitOk;
}

int cmd_lisa(const LisaArgs& a, std::ostream& out) {
  const auto model = load_model_file(a.model);
  if (a.ngram != 0 && a.ngram != model.params.window) {
    throw Error(ErrorKind::kConfigInvalid, "--ngram " + std::to_string(a.ngram) +
                                               " differs from the model window " +
                                               std::to_string(model.params.window));
  }
  LabeledSentence s;
  if (!a.sentence.empty()) {
    if (!a.data.empty() || !a.id.empty()) {
      throw Error(ErrorKind::kConfigInvalid, "use either --sentence or --data/--id");
    }
    if (a.relation.empty()) throw Error(ErrorKind::kConfigInvalid, "--sentence needs --relation");
    s = parse_marked_sentence(a.relation + "\t" + a.sentence, "cli");
  } else {
    if (a.data.empty() || a.id.empty()) {
      throw Error(ErrorKind::kConfigInvalid, "lisa needs --sentence or --data with --id");
    }
    const auto sentences = load_sentences(a.data, false);
    const auto it = std::find_if(sentences.begin(), sentences.end(),
                                 [&](const LabeledSentence& x) { return x.id == a.id; });
    if (it == sentences.end()) throw Error(ErrorKind::kConfigInvalid, "no sentence with id " + a.id);
    s = *it;
  }
  if (a.truncate) s = truncate_to_arguments(s);
  const std::string relation = a.relation.empty() ? s.label : a.relation;
  const auto curve = prefix_curve(model, s, relation, a.lookahead);
  emit(a.out, out, [&](std::ostream& o) { write_curve_csv(o, curve); });
  return kExitOk;
}

int cmd_patterns(const PatternArgs& a, std::ostream& out) {
  const auto model = load_model_file(a.io.model);
  const auto sentences = load_sentences(a.io.data, a.io.truncate);
  MineOptions options;
  options.only_correct = a.only_correct;
  options.pattern.tau = a.tau;
  options.pattern.window = a.ngram;
  options.pattern.report_lookahead = a.lookahead;
  options.pattern.scoring_lookahead = a.scoring_lookahead;
  const auto table = mine_patterns(model, sentences, options);
  emit(a.io.out, out, [&](std::ostream& o) { write_pattern_tsv(o, table); });
  return kExitOk;
}

int cmd_eval(const ModelDataArgs& a, std::ostream& out) {
  const auto model = load_model_file(a.model);
  const auto r = evaluate(model, load_sentences(a.data, a.truncate));
  emit(a.out, out, [&](std::ostream& o) {
    o << "accuracy:" << format_real(r.accuracy) << '\n';
    o << "macro_f1:" << format_real(r.macro_f1) << '\n';
    for (const auto& c : r.per_class) {
      o << "precision[" << c.label << "]:" << format_real(c.precision) << '\n';
      o << "recall[" << c.label << "]:" << format_real(c.recall) << '\n';
      o << "f1[" << c.label << "]:" << format_real(c.f1) << '\n';
      o << "support[" << c.label << "]:" << c.support << '\n';
    }
  });
  return kExitOk;
}

int cmd_export_hidden(const ModelDataArgs& a, std::ostream& out) {
  const auto model = load_model_file(a.model);
  const auto rows = export_hidden_states(model, load_sentences(a.data, a.truncate));
  emit(a.out, out, [&](std::ostream& o) { write_hidden_tsv(o, rows); });
  return kExitOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const auto split = generate_synthetic(a.config);
  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  write_corpus_file(dir / "train.tsv", split.train);
  write_corpus_file(dir / "dev.tsv", split.dev);
  write_corpus_file(dir / "test.tsv", split.test);
  std::ofstream triggers(dir / "triggers.tsv", std::ios::binary);
  for (std::size_t r = 0; r < split.label_set.size(); ++r) {
    triggers << split.label_set[r] << '\t';
    for (std::size_t i = 0; i < split.triggers[r].size(); ++i) {
      triggers << (i ? " " : "") << split.triggers[r][i];
    }
    triggers << '\n';
  }
  out << "train:" << split.train.size() << "\ndev:" << split.dev.size()
      << "\ntest:" << split.test.size() << '\n';
  return kExitOk;
}

int cmd_import(const ImportArgs& a, std::ostream& out) {
  std::string raw;
  if (a.in == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    raw = ss.str();
  } else {
    std::ifstream in(a.in, std::ios::binary);
    if (!in) throw Error(ErrorKind::kIo, "cannot open " + a.in);
    std::ostringstream ss;
    ss << in.rdbuf();
    raw = ss.str();
  }
  const auto sentences = import_semeval(raw);
  emit(a.out, out, [&](std::ostream& o) { write_corpus(o, sentences); });
  return kExitOk;
}

void add_model_data(CLI::App* sub, ModelDataArgs& a) {
  sub->add_option("--model", a.model, "Model file")->required();
  sub->add_option("--data", a.data, "Normalized corpus file")->required();
  sub->add_option("--out", a.out, "Output path (default: stdout)");
  sub->add_flag("--truncate", a.truncate, "Keep only <e1> ... </e2>");
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"C-BRNN relation classifier with LISA prefix curves and saliency patterns", "lisa"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--data", train_args.data, "Training corpus");
  train_cmd->add_option("--dev", train_args.dev, "Development corpus (model selection)");
  train_cmd->add_option("--test", train_args.test, "Test corpus (reported only)");
  train_cmd->add_option("--synthetic", train_args.synthetic, "Generate RxM synthetic corpus, e.g. 4x50");
  train_cmd->add_option("--out", train_args.out, "Model file")->required();
  train_cmd->add_option("--metrics", train_args.metrics, "Per-epoch log (default: <out>.metrics.tsv)");
  train_cmd->add_option("--embeddings", train_args.embeddings, "Pretrained word2vec text file");
  train_cmd->add_option("--seed", train_args.cfg.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--epochs", train_args.cfg.epochs)->capture_default_str();
  train_cmd->add_option("--lr", train_args.cfg.learning_rate, "Learning rate")->capture_default_str();
  train_cmd->add_option("--hidden", train_args.cfg.hidden, "Hidden size D")->capture_default_str();
  train_cmd->add_option("--dim", train_args.cfg.embedding_dim, "Embedding size d")->capture_default_str();
  train_cmd->add_option("--ngram", train_args.cfg.window, "Input window N (odd)")->capture_default_str();
  train_cmd->add_option("--min-count", train_args.cfg.min_count)->capture_default_str();
  train_cmd->add_option("--clip", train_args.cfg.clip_norm, "Global gradient norm clip")->capture_default_str();
  train_cmd->add_flag("--no-shuffle", train_args.no_shuffle);
  train_cmd->add_option("--gamma", train_args.loss.gamma)->capture_default_str();
  train_cmd->add_option("--m-plus", train_args.loss.m_plus)->capture_default_str();
  train_cmd->add_option("--m-minus", train_args.loss.m_minus)->capture_default_str();
  train_cmd->add_flag("--truncate", train_args.truncate, "Keep only <e1> ... </e2>");

  LisaArgs lisa_args;
  auto* lisa_cmd = app.add_subcommand("lisa", "Prefix probability curve for one sentence");
  lisa_cmd->add_option("--model", lisa_args.model)->required();
  lisa_cmd->add_option("--sentence", lisa_args.sentence, "Space-separated tokens with markers");
  lisa_cmd->add_option("--data", lisa_args.data, "Corpus holding the sentence");
  lisa_cmd->add_option("--id", lisa_args.id, "Sentence id (line number) in --data");
  lisa_cmd->add_option("--relation", lisa_args.relation, "Target relation (default: gold)");
  lisa_cmd->add_option("--ngram", lisa_args.ngram, "Must match the model window when given");
  lisa_cmd->add_flag("--lookahead,!--no-lookahead", lisa_args.lookahead,
                     "Score prefixes with full-sentence windows");
  lisa_cmd->add_option("--out", lisa_args.out);
  lisa_cmd->add_flag("--truncate", lisa_args.truncate);

  PatternArgs pattern_args;
  auto* patterns_cmd = app.add_subcommand("patterns", "Mine saliency patterns over a corpus");
  add_model_data(patterns_cmd, pattern_args.io);
  patterns_cmd->add_option("--tau", pattern_args.tau)->capture_default_str();
  patterns_cmd->add_option("--ngram", pattern_args.ngram, "Reported window (default: model window)");
  patterns_cmd->add_flag("--only-correct,!--all-sentences", pattern_args.only_correct)->capture_default_str();
  patterns_cmd->add_flag("--lookahead,!--no-lookahead", pattern_args.lookahead,
                         "Report full-sentence windows")->capture_default_str();
  patterns_cmd->add_flag("--scoring-lookahead", pattern_args.scoring_lookahead);

  ModelDataArgs eval_args;
  add_model_data(app.add_subcommand("eval", "Accuracy and per-class F1"), eval_args);

  ModelDataArgs hidden_args;
  add_model_data(app.add_subcommand("export-hidden", "Final combined hidden state per sentence"),
                 hidden_args);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus split");
  synth_cmd->add_option("--relations", synth_args.config.n_relations)->capture_default_str();
  synth_cmd->add_option("--per-relation", synth_args.config.sentences_per_relation)->capture_default_str();
  synth_cmd->add_option("--seed", synth_args.config.seed)->capture_default_str();
  synth_cmd->add_option("--out-dir", synth_args.out_dir)->required();

  ImportArgs import_args;
  auto* import_cmd = app.add_subcommand("import-semeval", "Convert SemEval-2010 Task 8 text");
  import_cmd->add_option("--in", import_args.in, "Input path or - for stdin")->capture_default_str();
  import_cmd->add_option("--out", import_args.out, "Output path (default: stdout)");

  try {
    expand_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    err << "lisa: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train_args, out, err);
    if (lisa_cmd->parsed()) return cmd_lisa(lisa_args, out);
    if (patterns_cmd->parsed()) return cmd_patterns(pattern_args, out);
    if (app.get_subcommand("eval")->parsed()) return cmd_eval(eval_args, out);
    if (app.get_subcommand("export-hidden")->parsed()) return cmd_export_hidden(hidden_args, out);
    if (synth_cmd->parsed()) return cmd_synth(synth_args, out);
    if (import_cmd->parsed()) return cmd_import(import_args, out);
  } catch (const Error& e) {
    err << "lisa: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "lisa: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace lisa::cli
