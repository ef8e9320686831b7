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

#include "qgen/data/batch.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "qgen/common/error.hpp"

namespace qgen::data {

std::string Batch::ext_word(std::size_t ext_index, const Vocabulary& vocab) const {
  if (ext_index < base_vocab_size) return vocab.word(ext_index);
  const std::size_t k = ext_index - base_vocab_size;
  if (k >= oov_words.size()) throw DataError("extended index " + std::to_string(ext_index) + " out of range");
  return oov_words[k];
}

Batch encode_batch(std::span<const Example> examples, const Vocabulary& vocab,
                   const FeatureVocab& features) {
  if (examples.empty()) throw DataError("encode_batch: no examples");
  Batch b;
  b.size = examples.size();
  b.base_vocab_size = vocab.size();
  for (const auto& ex : examples) {
    b.max_passage = std::max(b.max_passage, ex.passage_length());
    b.max_answer = std::max(b.max_answer, ex.answer_length());
    b.max_question = std::max(b.max_question, ex.question.size());
  }
  const std::size_t B = b.size, P = b.max_passage, A = b.max_answer, Q = b.max_question;
  b.passage_ids.assign(B * P, Vocabulary::kPad);
  b.passage_pos.assign(B * P, 0);
  b.passage_ner.assign(B * P, 0);
  b.passage_case.assign(B * P, 0);
  b.source_ext_ids.assign(B * P, Vocabulary::kPad);
  b.passage_mask.assign(B * P, 0);
  b.answer_ids.assign(B * A, Vocabulary::kPad);
  b.answer_mask.assign(B * A, 0);
  b.question_ids.assign(B * Q, Vocabulary::kPad);
  b.question_mask.assign(B * Q, 0);

  std::unordered_map<std::string, std::size_t> oov_index;
  for (std::size_t i = 0; i < B; ++i) {
    const auto& ex = examples[i];
    b.passage_lengths.push_back(ex.passage_length());
    b.answer_lengths.push_back(ex.answer_length());
    b.question_lengths.push_back(ex.question.size());
    b.answer_starts.push_back(ex.answer_start);
    std::unordered_map<std::string, std::size_t> local_source;
    for (std::size_t p = 0; p < ex.passage_length(); ++p) {
      const auto& tok = ex.passage[p];
      const std::size_t base = vocab.index(tok.surface);
      std::size_t ext = base;
      if (!vocab.contains(tok.surface)) {
        auto [it, fresh] = oov_index.try_emplace(tok.surface, vocab.size() + b.oov_words.size());
        if (fresh) b.oov_words.push_back(tok.surface);
        ext = it->second;
      }
      b.passage_ids[i * P + p] = base;
      b.passage_pos[i * P + p] = features.pos.index(tok.pos);
      b.passage_ner[i * P + p] = features.ner.index(tok.ner);
      b.passage_case[i * P + p] = static_cast<std::size_t>(tok.case_class);
      b.source_ext_ids[i * P + p] = ext;
      b.passage_mask[i * P + p] = 1;
      local_source.emplace(tok.surface, ext);
    }
    for (std::size_t a = 0; a < ex.answer_length(); ++a) {
      b.answer_ids[i * A + a] = b.passage_ids[i * P + ex.answer_start + a];
      b.answer_mask[i * A + a] = 1;
    }
    for (std::size_t q = 0; q < ex.question.size(); ++q) {
      const auto& w = ex.question[q];
      std::size_t id = vocab.index(w);
      if (!vocab.contains(w)) {
        auto it = local_source.find(w);
        id = it == local_source.end() ? Vocabulary::kUnk : it->second;
      }
      b.question_ids[i * Q + q] = id;
      b.question_mask[i * Q + q] = 1;
    }
  }
  return b;
}

}  // namespace qgen::data
