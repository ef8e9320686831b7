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

#include "qgen/data/corpus.hpp"

#include <fstream>
#include <sstream>

#include "qgen/common/error.hpp"

namespace qgen::data {
namespace {

const nlohmann::json& required(const nlohmann::json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end()) throw DataError(std::string("missing required field '") + key + "'");
  return *it;
}

std::size_t as_index(const nlohmann::json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw DataError(std::string(what) + " must be a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

Example example_from_json(const nlohmann::json& record, std::size_t record_index) {
  if (!record.is_object()) throw DataError("record is not a JSON object");
  Example ex;
  if (auto it = record.find("id"); it != record.end()) {
    ex.id = it->is_string() ? it->get<std::string>() : it->dump();
  } else {
    ex.id = std::to_string(record_index);
  }
  for (const auto& tok : required(record, "passage_tokens")) {
    if (!tok.is_object()) throw DataError("passage token is not an object");
    auto surface = required(tok, "surface").get<std::string>();
    auto pos = tok.value("pos", std::string("X"));
    auto ner = tok.value("ner", std::string("O"));
    ex.passage.push_back(make_token(std::move(surface), std::move(pos), std::move(ner)));
  }
  ex.sentence_starts.clear();
  for (const auto& s : required(record, "sentence_starts"))
    ex.sentence_starts.push_back(as_index(s, "sentence start"));
  const auto& span = required(record, "answer_span");
  if (!span.is_array() || span.size() != 2) throw DataError("answer_span must be [start, end]");
  ex.answer_start = as_index(span[0], "answer start");
  ex.answer_end = as_index(span[1], "answer end");
  for (const auto& q : required(record, "question_tokens")) ex.question.push_back(q.get<std::string>());
  if (auto it = record.find("dependency_edges"); it != record.end() && !it->is_null()) {
    std::vector<DependencyEdge> edges;
    for (const auto& e : *it) {
      if (!e.is_array() || e.size() < 2) throw DataError("dependency edge must be [head, dep, label]");
      DependencyEdge edge{as_index(e[0], "edge head"), as_index(e[1], "edge dependent"),
                          e.size() > 2 ? e[2].get<std::string>() : std::string()};
      edges.push_back(std::move(edge));
    }
    ex.dependency_edges = std::move(edges);
  }
  ex.validate();
  return ex;
}

nlohmann::json example_to_json(const Example& ex) {
  nlohmann::json j;
  j["id"] = ex.id;
  auto& toks = j["passage_tokens"] = nlohmann::json::array();
  for (const auto& t : ex.passage) toks.push_back({{"surface", t.surface}, {"pos", t.pos}, {"ner", t.ner}});
  j["sentence_starts"] = ex.sentence_starts;
  j["answer_span"] = {ex.answer_start, ex.answer_end};
  j["question_tokens"] = ex.question;
  if (ex.dependency_edges) {
    auto& edges = j["dependency_edges"] = nlohmann::json::array();
    for (const auto& e : *ex.dependency_edges) edges.push_back({e.head, e.dependent, e.label});
  }
  return j;
}

std::vector<Example> parse_corpus(std::istream& in, const std::string& source) {
  std::vector<Example> out;
  std::vector<std::string> problems;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(example_from_json(nlohmann::json::parse(line), out.size()));
    } catch (const nlohmann::json::exception& e) {
      problems.push_back(source + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      problems.push_back(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << problems.size() << " malformed record(s)";
    const std::size_t shown = std::min<std::size_t>(problems.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) msg << "\n  " << problems[i];
    throw DataError(msg.str());
  }
  return out;
}

std::vector<Example> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path.string());
  return parse_corpus(in, path.string());
}

void write_corpus(const std::filesystem::path& path, const std::vector<Example>& examples) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& ex : examples) out << example_to_json(ex).dump() << '\n';
}

}  // namespace qgen::data
