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
#ifndef LISA_EMBEDDINGS_HPP_
#define LISA_EMBEDDINGS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lisa/corpus.hpp"

namespace lisa {

// |V| x d word vectors. Row 0 (padding) stays zero.
struct EmbeddingTable {
  Eigen::MatrixXd matrix;
  bool trainable = true;

  int dim() const { return static_cast<int>(matrix.cols()); }
  std::size_t rows() const { return static_cast<std::size_t>(matrix.rows()); }
};

// Uniform[-0.1, 0.1] entries from a seeded generator, padding row zeroed.
EmbeddingTable init_random(const Vocabulary& v, int d, std::uint64_t seed);

// word2vec text format: optional "count dim" header, then "word v1 ... vd".
// Vocabulary tokens missing from the file keep the init_random(fallback_seed)
// row. Throws DimensionMismatch, MalformedLine.
EmbeddingTable load_pretrained_text(std::istream& in, const Vocabulary& v, int d,
                                    std::uint64_t fallback_seed);
EmbeddingTable load_pretrained_text(const std::filesystem::path& path,
                                    const Vocabulary& v, int d,
                                    std::uint64_t fallback_seed);

// One row per time step; row k is the concatenation of the window*dim
// embedding entries centred on token k, with zeros outside the sequence.
struct NgramInputSequence {
  Eigen::MatrixXd windows;  // n x (window * dim)
  // Token id feeding each slot (row-major n x window); -1 marks padding.
  std::vector<std::int32_t> slot_ids;
  int window = 1;
  int dim = 0;

  std::size_t length() const { return static_cast<std::size_t>(windows.rows()); }
};

// Throws EvenWindow for even or non-positive windows, Precondition for empty ids.
NgramInputSequence compose_ngram_inputs(const std::vector<std::int32_t>& ids,
                                        const EmbeddingTable& table, int window);

// First k steps of a sequence composed over the whole sentence, so the last
// window still sees the words after position k.
NgramInputSequence take_prefix(const NgramInputSequence& full, std::size_t k);

// Surface tokens of the window centred on 1-based position k of tokens[0, end),
// with kPaddingToken outside that range.
std::vector<std::string> ngram_tokens(const std::vector<std::string>& tokens,
                                      std::size_t k, int window, std::size_t end);

}  // namespace lisa

#endif  // LISA_EMBEDDINGS_HPP_
