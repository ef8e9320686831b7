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

#include "qgen/data/vocab.hpp"

#include <algorithm>

#include "qgen/common/error.hpp"

namespace qgen::data {

Vocabulary::Vocabulary() {
  for (std::size_t i = 0; i < kReservedCount; ++i) {
    words_.emplace_back(kReserved[i]);
    index_[words_.back()] = i;
  }
}

Vocabulary Vocabulary::from_words(const std::vector<std::string>& words) {
  Vocabulary v;
  for (const auto& w : words) {
    if (v.index_.count(w)) throw DataError("duplicate vocabulary word '" + w + "'");
    v.index_[w] = v.words_.size();
    v.words_.push_back(w);
  }
  return v;
}

std::size_t Vocabulary::index(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::word(std::size_t index) const {
  if (index >= words_.size()) throw DataError("vocabulary index " + std::to_string(index) + " out of range");
  return words_[index];
}

std::vector<std::string> Vocabulary::regular_words() const {
  return {words_.begin() + kReservedCount, words_.end()};
}

Vocabulary build_vocab(std::span<const Example> examples, std::size_t cap) {
  if (cap == 0) throw ConfigError("vocabulary cap must be at least 1");
  if (examples.empty()) throw DataError("cannot build a vocabulary from an empty corpus");

  struct Entry {
    std::size_t count = 0;
    std::size_t first = 0;
  };
  std::unordered_map<std::string, Entry> stats;
  std::vector<std::string> order;
  const Vocabulary reserved;
  auto see = [&](const std::string& w) {
    if (reserved.contains(w)) return;
    auto [it, fresh] = stats.try_emplace(w, Entry{0, order.size()});
    if (fresh) order.push_back(w);
    ++it->second.count;
  };
  for (const auto& ex : examples) {
    for (const auto& t : ex.passage) see(t.surface);
    for (const auto& q : ex.question) see(q);
  }
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    const auto& ea = stats.at(a);
    const auto& eb = stats.at(b);
    if (ea.count != eb.count) return ea.count > eb.count;
    return ea.first < eb.first;
  });
  if (order.size() > cap) order.resize(cap);
  return Vocabulary::from_words(order);
}

TagSet::TagSet() {
  tags_.push_back("<unk>");
  index_["<unk>"] = 0;
}

TagSet TagSet::from_tags(const std::vector<std::string>& tags) {
  TagSet t;
  for (const auto& tag : tags)
    if (tag != "<unk>") t.add(tag);
  return t;
}

void TagSet::add(const std::string& tag) {
  if (index_.count(tag)) return;
  index_[tag] = tags_.size();
  tags_.push_back(tag);
}

std::size_t TagSet::index(const std::string& tag) const {
  auto it = index_.find(tag);
  return it == index_.end() ? 0 : it->second;
}

FeatureVocab build_feature_vocab(std::span<const Example> examples) {
  FeatureVocab fv;
  for (const auto& ex : examples) {
    for (const auto& t : ex.passage) {
      fv.pos.add(t.pos);
      fv.ner.add(t.ner);
    }
  }
  return fv;
}

}  // namespace qgen::data
