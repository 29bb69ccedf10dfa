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
#include "lisa/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "lisa/error.hpp"
#include "random.hpp"

namespace lisa {
namespace {

constexpr double kInitRadius = 0.1;

bool parse_double(std::string_view text, double& value) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

bool parse_int(std::string_view text, long long& value) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

EmbeddingTable init_random(const Vocabulary& v, int d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorKind::kPrecondition, "embedding dimension must be >= 1");
  EmbeddingTable t;
  t.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(v.size()), d);
  std::mt19937_64 rng(seed);
  for (Eigen::Index r = 1; r < t.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < d; ++c) t.matrix(r, c) = detail::uniform_symmetric(rng, kInitRadius);
  }
  return t;
}

EmbeddingTable load_pretrained_text(std::istream& in, const Vocabulary& v, int d,
                                    std::uint64_t fallback_seed) {
  EmbeddingTable t = init_random(v, d, fallback_seed);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fields.clear();
    std::istringstream ss(line);
    for (std::string f; ss >> f;) fields.push_back(std::move(f));
    if (fields.empty()) continue;

    long long count = 0;
    long long dim = 0;
    if (line_no == 1 && fields.size() == 2 && parse_int(fields[0], count) &&
        parse_int(fields[1], dim)) {
      if (dim != d) {
        throw Error(ErrorKind::kDimensionMismatch,
                    "expected " + std::to_string(d) + ", found " + std::to_string(dim));
      }
      continue;
    }
    if (fields.size() < 2) {
      throw Error(ErrorKind::kMalformedLine, "line " + std::to_string(line_no));
    }
    const auto found = static_cast<long long>(fields.size() - 1);
    if (found != d) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "expected " + std::to_string(d) + ", found " + std::to_string(found) +
                      " at line " + std::to_string(line_no));
    }
    Eigen::VectorXd row(d);
    for (int c = 0; c < d; ++c) {
      if (!parse_double(fields[static_cast<std::size_t>(c) + 1], row(c))) {
        throw Error(ErrorKind::kMalformedLine, "line " + std::to_string(line_no));
      }
    }
    if (!v.contains(fields[0])) continue;
    const auto id = v.id(fields[0]);
    if (id == Vocabulary::kPaddingId) continue;
    t.matrix.row(id) = row.transpose();
  }
  t.matrix.row(Vocabulary::kPaddingId).setZero();
  return t;
}

EmbeddingTable load_pretrained_text(const std::filesystem::path& path, const Vocabulary& v,
                                    int d, std::uint64_t fallback_seed) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return load_pretrained_text(in, v, d, fallback_seed);
}

NgramInputSequence compose_ngram_inputs(const std::vector<std::int32_t>& ids,
                                        const EmbeddingTable& table, int window) {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorKind::kEvenWindow, "window must be odd and >= 1, got " + std::to_string(window));
  }
  if (ids.empty()) throw Error(ErrorKind::kPrecondition, "empty id sequence");
  const int d = table.dim();
  const auto n = static_cast<std::ptrdiff_t>(ids.size());
  const int half = window / 2;

  NgramInputSequence seq;
  seq.window = window;
  seq.dim = d;
  seq.windows = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(window) * d);
  seq.slot_ids.assign(ids.size() * static_cast<std::size_t>(window), -1);
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    for (int j = 0; j < window; ++j) {
      const std::ptrdiff_t pos = k - half + j;
      if (pos < 0 || pos >= n) continue;
      const auto id = ids[static_cast<std::size_t>(pos)];
      if (id < 0 || static_cast<std::size_t>(id) >= table.rows()) {
        throw Error(ErrorKind::kPrecondition, "token id " + std::to_string(id) + " out of range");
      }
      seq.windows.block(k, static_cast<Eigen::Index>(j) * d, 1, d) = table.matrix.row(id);
      seq.slot_ids[static_cast<std::size_t>(k * window + j)] = id;
    }
  }
  return seq;
}

NgramInputSequence take_prefix(const NgramInputSequence& full, std::size_t k) {
  if (k == 0 || k > full.length()) {
    throw Error(ErrorKind::kPrecondition, "prefix length " + std::to_string(k) + " out of range");
  }
  NgramInputSequence out;
  out.window = full.window;
  out.dim = full.dim;
  out.windows = full.windows.topRows(static_cast<Eigen::Index>(k));
  out.slot_ids.assign(full.slot_ids.begin(),
                      full.slot_ids.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(full.window)));
  return out;
}

std::vector<std::string> ngram_tokens(const std::vector<std::string>& tokens, std::size_t k,
                                      int window, std::size_t end) {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorKind::kEvenWindow, "window must be odd and >= 1, got " + std::to_string(window));
  }
  end = std::min(end, tokens.size());
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(window));
  for (std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(k) - half;
       pos <= static_cast<std::ptrdiff_t>(k) + half; ++pos) {
    if (pos >= 1 && pos <= static_cast<std::ptrdiff_t>(end)) {
      out.push_back(tokens[static_cast<std::size_t>(pos - 1)]);
    } else {
      out.emplace_back(kPaddingToken);
    }
  }
  return out;
}

}  // namespace lisa
