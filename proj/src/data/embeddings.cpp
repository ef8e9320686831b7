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

#include "qgen/data/embeddings.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "qgen/common/error.hpp"

namespace qgen::data {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

void fill_missing(EmbeddingTable& table, const Vocabulary& vocab, Rng& rng) {
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    if (table.from_file[w] || w == Vocabulary::kPad) continue;
    for (std::size_t d = 0; d < table.dim; ++d)
      table.values[w * table.dim + d] = static_cast<Real>(rng.uniform(-0.1, 0.1));
  }
}

}  // namespace

EmbeddingTable parse_embeddings(std::istream& in, const Vocabulary& vocab, Rng& rng,
                                const std::string& source) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, std::vector<Real>>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    const std::size_t dim = fields.size() - 1;
    if (table.dim == 0) {
      if (dim == 0) throw DataError(source + ":" + std::to_string(line_no) + ": no vector values");
      table.dim = dim;
    } else if (dim != table.dim) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.dim) + " values, found " + std::to_string(dim));
    }
    std::vector<Real> vec(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      const auto f = fields[d + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), vec[d]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw DataError(source + ":" + std::to_string(line_no) + ": unparsable number '" +
                        std::string(f) + "'");
      }
    }
    const std::string word(fields[0]);
    if (vocab.contains(word)) rows.emplace_back(vocab.index(word), std::move(vec));
  }
  if (table.dim == 0) throw DataError(source + ": no vectors found");
  table.values.assign(vocab.size() * table.dim, Real(0));
  table.from_file.assign(vocab.size(), false);
  for (auto& [idx, vec] : rows) {
    if (table.from_file[idx]) continue;  // first occurrence wins
    std::copy(vec.begin(), vec.end(), table.values.begin() + idx * table.dim);
    table.from_file[idx] = true;
  }
  fill_missing(table, vocab, rng);
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                               Rng& rng) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open word vectors " + path.string());
  return parse_embeddings(in, vocab, rng, path.string());
}

EmbeddingTable random_embeddings(std::size_t dim, const Vocabulary& vocab, Rng& rng) {
  EmbeddingTable table;
  table.dim = dim;
  table.values.assign(vocab.size() * dim, Real(0));
  table.from_file.assign(vocab.size(), false);
  fill_missing(table, vocab, rng);
  return table;
}

WordVectors WordVectors::from_table(const Vocabulary& vocab, const EmbeddingTable& table) {
  WordVectors wv(table.dim);
  for (std::size_t w = Vocabulary::kReservedCount; w < vocab.size(); ++w) {
    auto row = table.row(w);
    wv.set(vocab.word(w), std::vector<double>(row.begin(), row.end()));
  }
  // Lowercased aliases so case-folded reward tokens still find a vector; an
  // exact entry always wins over an alias.
  for (std::size_t w = Vocabulary::kReservedCount; w < vocab.size(); ++w) {
    std::string lower = vocab.word(w);
    for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (wv.find(lower) == nullptr) {
      auto row = table.row(w);
      wv.set(lower, std::vector<double>(row.begin(), row.end()));
    }
  }
  return wv;
}

void WordVectors::set(const std::string& word, std::vector<double> vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) throw DataError("word vector for '" + word + "' has wrong dimension");
  vectors_[word] = std::move(vec);
}

const std::vector<double>* WordVectors::find(const std::string& word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

}  // namespace qgen::data
