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
#include <string>
#include <vector>

#include "json.hpp"
#include "qgen/data/example.hpp"

namespace qgen::data {

// JSONL corpus, one record per line:
//   {"id": "...",                                   (optional)
//    "passage_tokens": [{"surface","pos","ner"}, ...],
//    "sentence_starts": [0, ...],
//    "answer_span": [start, end],
//    "question_tokens": ["...", ...],
//    "dependency_edges": [[head, dep, "label"], ...]}   (optional)
// Records without an id get their 0-based record number.
Example example_from_json(const nlohmann::json& record, std::size_t record_index);
nlohmann::json example_to_json(const Example& example);

// Parses and validates every line; throws DataError listing each malformed
// line as "<source>:<line>: <reason>". Blank lines are skipped.
std::vector<Example> parse_corpus(std::istream& in, const std::string& source = "corpus");
std::vector<Example> load_corpus(const std::filesystem::path& path);
void write_corpus(const std::filesystem::path& path, const std::vector<Example>& examples);

}  // namespace qgen::data
