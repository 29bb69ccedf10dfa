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
#include "lisa/model_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lisa/error.hpp"

namespace lisa {
namespace {

constexpr std::string_view kMagic = "lisa-cbrnn-model";

void write_matrix(std::ostream& out, std::string_view name, const Eigen::MatrixXd& m) {
  out << '[' << name << "] " << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_real(m(r, c));
    }
    out << '\n';
  }
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) fail("unexpected end of file");
    ++line_no_;
    return s;
  }

  std::vector<std::string> fields() {
    std::istringstream ss(line());
    std::vector<std::string> out;
    for (std::string f; ss >> f;) out.push_back(std::move(f));
    return out;
  }

  // "key value" with a fixed key.
  std::string value(std::string_view key) {
    const auto f = fields();
    if (f.size() != 2 || f[0] != key) fail("expected '" + std::string(key) + " <value>'");
    return f[1];
  }

  // "[name] a b ..." returning the integer arguments.
  std::vector<long long> section(std::string_view name, std::size_t arity) {
    const auto f = fields();
    if (f.size() != arity + 1 || f[0] != "[" + std::string(name) + "]") {
      fail("expected section [" + std::string(name) + "]");
    }
    std::vector<long long> args;
    for (std::size_t i = 1; i < f.size(); ++i) args.push_back(to_int(f[i]));
    return args;
  }

  Eigen::MatrixXd matrix(std::string_view name) {
    const auto dims = section(name, 2);
    if (dims[0] < 0 || dims[1] < 0) fail("negative dimension");
    Eigen::MatrixXd m(dims[0], dims[1]);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const auto f = fields();
      if (static_cast<Eigen::Index>(f.size()) != m.cols()) fail("row width mismatch");
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = to_real(f[static_cast<std::size_t>(c)]);
    }
    return m;
  }

  long long to_int(const std::string& s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("bad integer '" + s + "'");
    return v;
  }

  double to_real(const std::string& s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("bad real '" + s + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::kModelFormat, "line " + std::to_string(line_no_) + ": " + why);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void save_model(std::ostream& out, const TrainedModel& m) {
  m.params.check_shapes();
  const auto& tc = m.train_config;
  const auto& lc = m.loss_config;
  out << kMagic << '\n';
  out << "format_version " << kModelFormatVersion << '\n';
  out << "activation " << CBRNNParams::kActivation << '\n';
  out << "[train_config]\n";
  out << "learning_rate " << format_real(tc.learning_rate) << '\n';
  out << "epochs " << tc.epochs << '\n';
  out << "seed " << tc.seed << '\n';
  out << "window " << tc.window << '\n';
  out << "hidden " << tc.hidden << '\n';
  out << "embedding_dim " << tc.embedding_dim << '\n';
  out << "min_count " << tc.min_count << '\n';
  out << "clip_norm " << format_real(tc.clip_norm) << '\n';
  out << "shuffle " << (tc.shuffle ? 1 : 0) << '\n';
  out << "[loss_config]\n";
  out << "gamma " << format_real(lc.gamma) << '\n';
  out << "m_plus " << format_real(lc.m_plus) << '\n';
  out << "m_minus " << format_real(lc.m_minus) << '\n';
  out << "[labels] " << m.labels.size() << '\n';
  for (const auto& l : m.labels) out << l << '\n';
  out << "[vocabulary] " << m.vocabulary.size() << '\n';
  for (const auto& t : m.vocabulary.tokens()) out << t << '\n';
  out << "[embedding_options] trainable " << (m.params.embeddings.trainable ? 1 : 0) << '\n';
  write_matrix(out, "embeddings", m.params.embeddings.matrix);
  write_matrix(out, "U_f", m.params.U_f);
  write_matrix(out, "U_b", m.params.U_b);
  write_matrix(out, "W_f", m.params.W_f);
  write_matrix(out, "W_b", m.params.W_b);
  write_matrix(out, "W_bi", m.params.W_bi);
  write_matrix(out, "W_hy", m.params.W_hy);
  write_matrix(out, "b_y", m.params.b_y.transpose());
  out << "end\n";
}

std::string model_to_string(const TrainedModel& m) {
  std::ostringstream out;
  save_model(out, m);
  return out.str();
}

void save_model_file(const std::filesystem::path& path, const TrainedModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  save_model(out, m);
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

TrainedModel load_model(std::istream& in) {
  Reader r(in);
  if (r.line() != kMagic) r.fail("not a model file");
  if (r.to_int(r.value("format_version")) != kModelFormatVersion) r.fail("unsupported version");
  if (r.value("activation") != CBRNNParams::kActivation) r.fail("unsupported activation");

  TrainedModel m;
  r.section("train_config", 0);
  auto& tc = m.train_config;
  tc.learning_rate = r.to_real(r.value("learning_rate"));
  tc.epochs = static_cast<int>(r.to_int(r.value("epochs")));
  {
    const auto s = r.value("seed");
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || ptr != s.data() + s.size()) r.fail("bad seed");
    tc.seed = seed;
  }
  tc.window = static_cast<int>(r.to_int(r.value("window")));
  tc.hidden = static_cast<int>(r.to_int(r.value("hidden")));
  tc.embedding_dim = static_cast<int>(r.to_int(r.value("embedding_dim")));
  tc.min_count = static_cast<std::size_t>(r.to_int(r.value("min_count")));
  tc.clip_norm = r.to_real(r.value("clip_norm"));
  tc.shuffle = r.to_int(r.value("shuffle")) != 0;

  r.section("loss_config", 0);
  m.loss_config.gamma = r.to_real(r.value("gamma"));
  m.loss_config.m_plus = r.to_real(r.value("m_plus"));
  m.loss_config.m_minus = r.to_real(r.value("m_minus"));

  const auto n_labels = r.section("labels", 1)[0];
  for (long long i = 0; i < n_labels; ++i) m.labels.push_back(r.line());

  const auto n_vocab = r.section("vocabulary", 1)[0];
  for (long long i = 0; i < n_vocab; ++i) {
    const auto token = r.line();
    if (m.vocabulary.add(token) != static_cast<std::int32_t>(i)) {
      r.fail("vocabulary entry '" + token + "' out of order");
    }
  }
  if (static_cast<long long>(m.vocabulary.size()) != n_vocab) r.fail("vocabulary is missing specials");

  const auto options = r.fields();
  if (options.size() != 3 || options[0] != "[embedding_options]" || options[1] != "trainable") {
    r.fail("expected [embedding_options] trainable <0|1>");
  }
  m.params.embeddings.trainable = r.to_int(options[2]) != 0;
  m.params.embeddings.matrix = r.matrix("embeddings");
  m.params.window = tc.window;
  m.params.U_f = r.matrix("U_f");
  m.params.U_b = r.matrix("U_b");
  m.params.W_f = r.matrix("W_f");
  m.params.W_b = r.matrix("W_b");
  m.params.W_bi = r.matrix("W_bi");
  m.params.W_hy = r.matrix("W_hy");
  const Eigen::MatrixXd b = r.matrix("b_y");
  if (b.rows() != 1) r.fail("b_y must be a single row");
  m.params.b_y = b.row(0).transpose();
  if (r.line() != "end") r.fail("expected 'end'");

  try {
    tc.validate();
    m.loss_config.validate();
    m.params.check_shapes();
  } catch (const Error& e) {
    r.fail(e.what());
  }
  if (m.params.embeddings.rows() != m.vocabulary.size()) r.fail("embedding rows != vocabulary size");
  if (static_cast<std::size_t>(m.params.classes()) != m.labels.size()) r.fail("class count mismatch");
  return m;
}

TrainedModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return load_model(in);
}

}  // namespace lisa
