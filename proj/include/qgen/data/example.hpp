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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qgen/common/real.hpp"

namespace qgen::data {

enum class CaseClass { kLower = 0, kCapitalized = 1, kUpper = 2, kMixed = 3, kOther = 4 };
inline constexpr std::size_t kCaseClassCount = 5;

// Case of a surface form, judged on its alphabetic characters only:
//   no letters                      -> other
//   every letter lowercase          -> lower
//   first letter upper, rest lower  -> capitalized (includes "A", "3D")
//   every letter upper, 2+ letters  -> upper
//   anything else                   -> mixed
CaseClass classify_case(std::string_view surface);
std::string_view case_name(CaseClass c);

struct TokenAnnotation {
  std::string surface;
  std::string pos;
  std::string ner;
  CaseClass case_class = CaseClass::kOther;
};

TokenAnnotation make_token(std::string surface, std::string pos, std::string ner);

struct DependencyEdge {
  std::size_t head = 0;
  std::size_t dependent = 0;
  std::string label;

  bool operator==(const DependencyEdge&) const = default;
};

// One training instance. The answer is the passage slice
// [answer_start, answer_end).
struct Example {
  std::string id;
  std::vector<TokenAnnotation> passage;
  std::size_t answer_start = 0;
  std::size_t answer_end = 0;
  std::vector<std::string> question;
  std::optional<std::vector<DependencyEdge>> dependency_edges;
  std::vector<std::size_t> sentence_starts{0};
  // Optional precomputed per-token vectors, contextual_dim x N row-major.
  std::size_t contextual_dim = 0;
  std::vector<Real> contextual;

  std::size_t passage_length() const { return passage.size(); }
  std::size_t answer_length() const { return answer_end - answer_start; }
  std::vector<std::string> passage_surfaces() const;
  std::vector<std::string> answer_surfaces() const;

  // Throws DataError on any broken invariant.
  void validate() const;
};

}  // namespace qgen::data
