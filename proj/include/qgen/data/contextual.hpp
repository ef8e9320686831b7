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
#include <map>
#include <string>
#include <vector>

#include "qgen/common/real.hpp"
#include "qgen/data/example.hpp"

namespace qgen::data {

// Precomputed per-token contextual vectors keyed by example id.
//
// Binary layout (little-endian):
//   magic "QGCV", u32 version (1), u32 dim, u64 record count, then per record
//   u32 id length, id bytes, u32 token count, token_count * dim f32 values
//   (token-major: all dims of token 0, then token 1, ...).
struct ContextualVectors {
  std::size_t dim = 0;
  std::map<std::string, std::vector<float>> by_id;
};

ContextualVectors read_contextual_vectors(const std::filesystem::path& path);
void write_contextual_vectors(const std::filesystem::path& path, const ContextualVectors& vectors);

// Copies vectors onto matching examples (stored dim x N). Every example must
// have an entry with one vector per passage token.
void attach_contextual_vectors(std::vector<Example>& examples, const ContextualVectors& vectors);

}  // namespace qgen::data
