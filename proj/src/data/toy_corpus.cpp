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

#include "qgen/data/toy_corpus.hpp"

#include <map>
#include <set>
#include <sstream>

#include "qgen/common/error.hpp"
#include "qgen/common/rng.hpp"

namespace qgen::data {

namespace {

const std::vector<std::string> kPeople = {"Alice", "Marco", "Chen", "Ingrid", "Tomas", "Leila",
                                          "Omar", "Greta", "Hugo", "Nadia", "Pablo", "Yuki"};
const std::vector<std::string> kCities = {"Paris", "Rome",   "Berlin", "Vienna", "Madrid",
                                          "Oslo",  "Prague", "Lisbon", "Dublin", "Athens"};
const std::vector<std::string> kYears = {"1850", "1857", "1864", "1871", "1878", "1885",
                                         "1892", "1899", "1906", "1913", "1920", "1927"};
const std::vector<std::string> kOrgs = {"Acme",     "Globex",  "Initech",   "Hooli",
                                        "Vandelay", "Soylent", "Cyberdyne", "Tyrell"};
const std::vector<std::string> kObjects = {"bridge", "tower", "statue", "clock",
                                           "bell",   "ship",  "organ",  "gate"};
const std::vector<std::string> kMaterials = {"steel", "bronze", "stone", "oak", "glass", "marble"};

struct Draft {
  std::vector<TokenAnnotation> tokens;
  std::vector<DependencyEdge> edges;
  std::vector<std::size_t> sentence_starts;
  // (answer start, answer end, question) candidates
  std::vector<std::tuple<std::size_t, std::size_t, std::vector<std::string>>> questions;
  std::string key;  // identifies the fact combination

  std::size_t add(const std::string& surface, const std::string& pos, const std::string& ner = "O") {
    tokens.push_back(make_token(surface, pos, ner));
    return tokens.size() - 1;
  }
  void edge(std::size_t head, std::size_t dep, const std::string& label) {
    edges.push_back({head, dep, label});
  }
  void sentence() { sentence_starts.push_back(tokens.size()); }
};

std::vector<std::string> words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

const std::string& pick(const std::vector<std::string>& pool, Rng& rng) {
  return pool[rng.below(pool.size())];
}

// "X was born in C in Y ." [+ "X founded O in Z ."]
Draft person_passage(Rng& rng, bool second) {
  Draft d;
  const std::string x = pick(kPeople, rng), c = pick(kCities, rng), y = pick(kYears, rng);
  d.sentence();
  const auto px = d.add(x, "NNP", "PERSON");
  const auto was = d.add("was", "VBD");
  const auto born = d.add("born", "VBN");
  const auto in1 = d.add("in", "IN");
  const auto pc = d.add(c, "NNP", "LOCATION");
  const auto in2 = d.add("in", "IN");
  const auto py = d.add(y, "CD", "DATE");
  const auto dot = d.add(".", ".");
  d.edge(born, px, "nsubjpass");
  d.edge(born, was, "auxpass");
  d.edge(born, pc, "obl");
  d.edge(pc, in1, "case");
  d.edge(born, py, "obl");
  d.edge(py, in2, "case");
  d.edge(born, dot, "punct");
  d.questions.push_back({pc, pc + 1, words("where was " + x + " born ?")});
  d.questions.push_back({py, py + 1, words("when was " + x + " born ?")});
  d.questions.push_back({px, px + 1, words("who was born in " + c + " ?")});
  d.key = "p|" + x + "|" + c + "|" + y;
  if (second) {
    std::string z = pick(kYears, rng);
    while (z == y) z = pick(kYears, rng);
    const std::string o = pick(kOrgs, rng);
    d.sentence();
    const auto px2 = d.add(x, "NNP", "PERSON");
    const auto founded = d.add("founded", "VBD");
    const auto po = d.add(o, "NNP", "ORGANIZATION");
    const auto in3 = d.add("in", "IN");
    const auto pz = d.add(z, "CD", "DATE");
    const auto dot2 = d.add(".", ".");
    d.edge(founded, px2, "nsubj");
    d.edge(founded, po, "obj");
    d.edge(founded, pz, "obl");
    d.edge(pz, in3, "case");
    d.edge(founded, dot2, "punct");
    d.questions.push_back({po, po + 1, words("what did " + x + " found ?")});
    d.questions.push_back({pz, pz + 1, words("when did " + x + " found " + o + " ?")});
    d.key += "|" + o + "|" + z;
  }
  return d;
}

// "the T is made of M ." [+ "it was built in Y ."]
Draft object_passage(Rng& rng, bool second) {
  Draft d;
  const std::string t = pick(kObjects, rng), m = pick(kMaterials, rng);
  d.sentence();
  const auto the = d.add("the", "DT");
  const auto pt = d.add(t, "NN");
  const auto is = d.add("is", "VBZ");
  const auto made = d.add("made", "VBN");
  const auto of = d.add("of", "IN");
  const auto pm = d.add(m, "NN");
  const auto dot = d.add(".", ".");
  d.edge(made, pt, "nsubjpass");
  d.edge(pt, the, "det");
  d.edge(made, is, "auxpass");
  d.edge(made, pm, "obl");
  d.edge(pm, of, "case");
  d.edge(made, dot, "punct");
  d.questions.push_back({pm, pm + 1, words("what is the " + t + " made of ?")});
  d.questions.push_back({pt, pt + 1, words("what is made of " + m + " ?")});
  d.key = "o|" + t + "|" + m;
  if (second) {
    const std::string y = pick(kYears, rng);
    d.sentence();
    const auto it = d.add("it", "PRP");
    const auto was = d.add("was", "VBD");
    const auto built = d.add("built", "VBN");
    const auto in = d.add("in", "IN");
    const auto py = d.add(y, "CD", "DATE");
    const auto dot2 = d.add(".", ".");
    d.edge(built, it, "nsubjpass");
    d.edge(built, was, "auxpass");
    d.edge(built, py, "obl");
    d.edge(py, in, "case");
    d.edge(built, dot2, "punct");
    d.questions.push_back({py, py + 1, words("when was the " + t + " built ?")});
    d.key += "|" + y;
  }
  return d;
}

Draft random_passage(Rng& rng) {
  const bool person = rng.bernoulli(0.6);
  const bool second = rng.bernoulli(0.5);
  return person ? person_passage(rng, second) : object_passage(rng, second);
}

// Emits two or three questions of a passage, up to `limit` examples.
void emit(Draft& d, Rng& rng, const std::string& prefix, std::size_t limit,
          std::vector<Example>& out) {
  rng.shuffle(d.questions);
  const std::size_t want = std::min<std::size_t>(d.questions.size(), 2 + rng.below(2));
  for (std::size_t q = 0; q < want && out.size() < limit; ++q) {
    Example ex;
    std::ostringstream id;
    id << prefix << '-';
    id.width(4);
    id.fill('0');
    id << out.size();
    ex.id = id.str();
    ex.passage = d.tokens;
    ex.dependency_edges = d.edges;
    ex.sentence_starts = d.sentence_starts;
    std::tie(ex.answer_start, ex.answer_end, ex.question) = d.questions[q];
    ex.validate();
    out.push_back(std::move(ex));
  }
}

std::string vectors_text(std::size_t dim, Rng& rng) {
  // Each word class gets a random centre; members scatter around it.
  const std::vector<std::pair<const std::vector<std::string>*, double>> groups = {
      {&kPeople, 0.3}, {&kCities, 0.3},  {&kYears, 0.3},
      {&kOrgs, 0.3},   {&kObjects, 0.3}, {&kMaterials, 0.3}};
  const std::vector<std::string> function_words = {
      "was", "born", "in", ".", "founded", "the", "is", "made", "of", "it", "built", "where",
      "when", "who", "what", "did", "found", "?"};
  std::ostringstream os;
  os.precision(6);
  auto emit_vec = [&](const std::string& w, const std::vector<double>& centre, double spread) {
    os << w;
    for (std::size_t k = 0; k < dim; ++k) os << ' ' << centre[k] + spread * rng.normal();
    os << '\n';
  };
  for (const auto& [pool, spread] : groups) {
    std::vector<double> centre(dim);
    for (auto& v : centre) v = rng.normal();
    for (const auto& w : *pool) emit_vec(w, centre, spread);
  }
  const std::vector<double> origin(dim, 0.0);
  for (const auto& w : function_words) emit_vec(w, origin, 1.0);
  return os.str();
}

}  // namespace

ToyCorpus make_toy_corpus(const ToyCorpusOptions& options) {
  if (options.train_examples == 0) throw ConfigError("toy corpus: need at least one training example");
  if (options.vector_dim == 0) throw ConfigError("toy corpus: vector_dim must be positive");
  Rng rng(options.seed);
  Rng train_rng = rng.fork(), dev_rng = rng.fork(), vec_rng = rng.fork();

  ToyCorpus corpus;
  std::set<std::string> seen_keys;
  std::set<std::string> train_words;
  while (corpus.train.size() < options.train_examples) {
    Draft d = random_passage(train_rng);
    if (!seen_keys.insert(d.key).second) continue;
    emit(d, train_rng, "train", options.train_examples, corpus.train);
  }
  for (const auto& ex : corpus.train)
    for (const auto& t : ex.passage) train_words.insert(t.surface);

  std::size_t attempts = 0;
  while (corpus.dev.size() < options.dev_examples) {
    if (++attempts > 100000) throw DataError("toy corpus: could not build enough validation passages");
    Draft d = random_passage(dev_rng);
    if (seen_keys.count(d.key)) continue;
    bool known = true;
    for (const auto& t : d.tokens) known = known && train_words.count(t.surface) > 0;
    if (!known) continue;
    seen_keys.insert(d.key);
    emit(d, dev_rng, "dev", options.dev_examples, corpus.dev);
  }
  corpus.vectors_text = vectors_text(options.vector_dim, vec_rng);
  return corpus;
}

}  // namespace qgen::data
