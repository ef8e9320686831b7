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

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qgen/data/example.hpp"

namespace qgen::data {

class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;
  static constexpr std::size_t kSos = 2;
  static constexpr std::size_t kEos = 3;
  static constexpr std::size_t kReservedCount = 4;
  static constexpr const char* kReserved[kReservedCount] = {"<pad>", "<unk>", "<s>", "</s>"};

  Vocabulary();
  // `words` excludes the reserved entries; their order fixes the indices.
  static Vocabulary from_words(const std::vector<std::string>& words);

  std::size_t size() const { return words_.size(); }
  bool contains(const std::string& word) const { return index_.count(word) > 0; }
  // Index of `word`, kUnk when absent.
  std::size_t index(const std::string& word) const;
  const std::string& word(std::size_t index) const;
  // Every entry, reserved ones first.
  const std::vector<std::string>& words() const { return words_; }
  std::vector<std::string> regular_words() const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Keeps the `cap` most frequent passage/question words of the corpus; equal
// counts are ordered by first occurrence. Throws DataError on an empty
// corpus and ConfigError when cap == 0.
Vocabulary build_vocab(std::span<const Example> examples, std::size_t cap);

// Closed tag inventory for POS or NER labels; index 0 is the unknown tag.
class TagSet {
 public:
  TagSet();
  static TagSet from_tags(const std::vector<std::string>& tags);
  void add(const std::string& tag);
  std::size_t index(const std::string& tag) const;
  std::size_t size() const { return tags_.size(); }
  const std::vector<std::string>& tags() const { return tags_; }

 private:
  std::vector<std::string> tags_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct FeatureVocab {
  TagSet pos;
  TagSet ner;
};

FeatureVocab build_feature_vocab(std::span<const Example> examples);

}  // namespace qgen::data
