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
#include <string>
#include <vector>

#include "qgen/data/example.hpp"

namespace qgen::data {

// Small synthetic question-generation corpus built from templates about
// people, organisations and objects. Every passage carries hand-written
// POS/NER tags and a dependency parse, and is paired with two or three
// different answers, so the right question depends on the answer span.
// Validation passages recombine the training entities into new facts.
struct ToyCorpusOptions {
  std::size_t train_examples = 32;
  std::size_t dev_examples = 16;
  std::size_t vector_dim = 16;
  std::uint64_t seed = 7;
};

struct ToyCorpus {
  std::vector<Example> train;
  std::vector<Example> dev;
  // Word vectors in the text format read by load_embeddings: related words
  // (cities, years, ...) are clustered.
  std::string vectors_text;
};

ToyCorpus make_toy_corpus(const ToyCorpusOptions& options);

}  // namespace qgen::data
