/* Copyright 2026 The qgen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qgen/common/real.hpp"
#include "qgen/common/rng.hpp"
#include "qgen/data/vocab.hpp"

namespace qgen::data {

// One fixed row of `dim` values per vocabulary index.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::vector<Real> values;      // vocab_size x dim, row-major
  std::vector<bool> from_file;   // per vocabulary index

  std::size_t rows() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const Real> row(std::size_t index) const {
    return {values.data() + index * dim, dim};
  }
};

// Whitespace-separated text vectors: a word followed by `dim` numbers per
// line. Vocabulary words missing from the file get U(-0.1, 0.1) rows drawn
// from `rng` in vocabulary order; <pad> stays zero.
EmbeddingTable parse_embeddings(std::istream& in, const Vocabulary& vocab, Rng& rng,
                                const std::string& source = "vectors");
EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                               Rng& rng);
// Table with no file: every regular word gets a random row.
EmbeddingTable random_embeddings(std::size_t dim, const Vocabulary& vocab, Rng& rng);

// Word-keyed view of fixed vectors, used by the semantic reward.
class WordVectors {
 public:
  WordVectors() = default;
  explicit WordVectors(std::size_t dim) : dim_(dim) {}
  static WordVectors from_table(const Vocabulary& vocab, const EmbeddingTable& table);

  void set(const std::string& word, std::vector<double> vec);
  std::size_t dim() const { return dim_; }
  // nullptr when the word has no vector.
  const std::vector<double>* find(const std::string& word) const;
  std::size_t size() const { return vectors_.size(); }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

}  // namespace qgen::data
