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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qgen/data/example.hpp"
#include "qgen/data/vocab.hpp"

namespace qgen::data {

// Padded index matrices for a group of examples plus the batch-level extended
// vocabulary: base vocabulary followed by every source word the base
// vocabulary lacks, in order of first appearance.
struct Batch {
  std::size_t size = 0;
  std::size_t max_passage = 0;
  std::size_t max_answer = 0;
  std::size_t max_question = 0;

  // size x max_passage
  std::vector<std::size_t> passage_ids;
  std::vector<std::size_t> passage_pos;
  std::vector<std::size_t> passage_ner;
  std::vector<std::size_t> passage_case;
  std::vector<std::size_t> source_ext_ids;
  std::vector<std::uint8_t> passage_mask;
  // size x max_answer
  std::vector<std::size_t> answer_ids;
  std::vector<std::uint8_t> answer_mask;
  // size x max_question; extended indices, no EOS
  std::vector<std::size_t> question_ids;
  std::vector<std::uint8_t> question_mask;

  std::vector<std::size_t> passage_lengths;
  std::vector<std::size_t> answer_lengths;
  std::vector<std::size_t> question_lengths;
  std::vector<std::size_t> answer_starts;

  std::size_t base_vocab_size = 0;
  std::vector<std::string> oov_words;

  std::size_t ext_vocab_size() const { return base_vocab_size + oov_words.size(); }
  // Word for an extended index.
  std::string ext_word(std::size_t ext_index, const Vocabulary& vocab) const;

  // Unpadded per-example views.
  std::span<const std::size_t> passage(std::size_t i) const { return row(passage_ids, max_passage, i, passage_lengths[i]); }
  std::span<const std::size_t> pos(std::size_t i) const { return row(passage_pos, max_passage, i, passage_lengths[i]); }
  std::span<const std::size_t> ner(std::size_t i) const { return row(passage_ner, max_passage, i, passage_lengths[i]); }
  std::span<const std::size_t> casing(std::size_t i) const { return row(passage_case, max_passage, i, passage_lengths[i]); }
  std::span<const std::size_t> sources(std::size_t i) const { return row(source_ext_ids, max_passage, i, passage_lengths[i]); }
  std::span<const std::size_t> answer(std::size_t i) const { return row(answer_ids, max_answer, i, answer_lengths[i]); }
  std::span<const std::size_t> question(std::size_t i) const { return row(question_ids, max_question, i, question_lengths[i]); }

 private:
  static std::span<const std::size_t> row(const std::vector<std::size_t>& m, std::size_t width,
                                          std::size_t i, std::size_t len) {
    return {m.data() + i * width, len};
  }
};

// Question tokens map to base indices when in vocabulary, to their extended
// index when they occur in the same example's passage, and to <unk>
// otherwise. Throws DataError on an empty example list.
Batch encode_batch(std::span<const Example> examples, const Vocabulary& vocab,
                   const FeatureVocab& features);

}  // namespace qgen::data
