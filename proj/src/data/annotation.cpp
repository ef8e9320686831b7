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

#include "qgen/data/example.hpp"

#include <cctype>

#include "qgen/common/error.hpp"

namespace qgen::data {

CaseClass classify_case(std::string_view surface) {
  std::size_t letters = 0, upper = 0;
  bool first_upper = false;
  for (unsigned char ch : surface) {
    if (!std::isalpha(ch)) continue;
    if (letters == 0) first_upper = std::isupper(ch) != 0;
    ++letters;
    if (std::isupper(ch)) ++upper;
  }
  if (letters == 0) return CaseClass::kOther;
  if (upper == 0) return CaseClass::kLower;
  if (first_upper && upper == 1) return CaseClass::kCapitalized;
  if (upper == letters) return CaseClass::kUpper;
  return CaseClass::kMixed;
}

std::string_view case_name(CaseClass c) {
  switch (c) {
    case CaseClass::kLower: return "lower";
    case CaseClass::kCapitalized: return "capitalized";
    case CaseClass::kUpper: return "upper";
    case CaseClass::kMixed: return "mixed";
    case CaseClass::kOther: return "other";
  }
  return "other";
}

TokenAnnotation make_token(std::string surface, std::string pos, std::string ner) {
  TokenAnnotation t{std::move(surface), std::move(pos), std::move(ner), CaseClass::kOther};
  t.case_class = classify_case(t.surface);
  return t;
}

std::vector<std::string> Example::passage_surfaces() const {
  std::vector<std::string> out;
  out.reserve(passage.size());
  for (const auto& t : passage) out.push_back(t.surface);
  return out;
}

std::vector<std::string> Example::answer_surfaces() const {
  std::vector<std::string> out;
  for (std::size_t i = answer_start; i < answer_end && i < passage.size(); ++i)
    out.push_back(passage[i].surface);
  return out;
}

void Example::validate() const {
  const std::size_t n = passage.size();
  if (n == 0) throw DataError("empty passage");
  for (std::size_t i = 0; i < n; ++i) {
    if (passage[i].surface.empty())
      throw DataError("passage token " + std::to_string(i) + " has an empty surface");
  }
  if (!(answer_start < answer_end && answer_end <= n)) {
    throw DataError("answer span [" + std::to_string(answer_start) + "," +
                    std::to_string(answer_end) + ") out of range for passage of " +
                    std::to_string(n) + " tokens");
  }
  if (sentence_starts.empty() || sentence_starts.front() != 0)
    throw DataError("sentence_starts must begin with 0");
  for (std::size_t i = 1; i < sentence_starts.size(); ++i) {
    if (sentence_starts[i] <= sentence_starts[i - 1])
      throw DataError("sentence_starts must be strictly increasing");
  }
  if (sentence_starts.back() >= n)
    throw DataError("sentence start " + std::to_string(sentence_starts.back()) +
                    " beyond passage end");
  if (dependency_edges) {
    for (const auto& e : *dependency_edges) {
      if (e.head >= n || e.dependent >= n) {
        throw DataError("dependency edge (" + std::to_string(e.head) + "," +
                        std::to_string(e.dependent) + ") out of range for " +
                        std::to_string(n) + " tokens");
      }
    }
  }
  if (contextual_dim > 0 && contextual.size() != contextual_dim * n)
    throw DataError("contextual vectors do not cover every passage token");
}

}  // namespace qgen::data
