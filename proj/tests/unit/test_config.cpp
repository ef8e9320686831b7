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

#include <set>

#include "doctest.h"
#include "qgen/common/error.hpp"
#include "qgen/model/config.hpp"
#include "qgen/training/pipeline.hpp"
#include "qgen/data/toy_corpus.hpp"

using namespace qgen;

TEST_CASE("defaults validate and describe the full-size model") {
  model::Config c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.hidden_size == 300);
  CHECK(c.node_dim() == 300);
  CHECK(c.feature_dim() == 23);
  CHECK(c.beam_width == 5);
  CHECK(c.mixed_gamma == doctest::Approx(0.99));
}

TEST_CASE("overrides change exactly the named keys") {
  const model::Config base;
  model::Config c = base;
  model::apply_overrides(c, {"hidden_size=64", "graph_type=static", "use_alignment=false", "lr_stage2=3e-5"});
  std::set<std::string> changed;
  for (const auto& key : model::Config::keys())
    if (c.get(key) != base.get(key)) changed.insert(key);
  CHECK(changed == std::set<std::string>{"hidden_size", "graph_type", "use_alignment", "lr_stage2"});
  CHECK(c.hidden_size == 64);
  CHECK_FALSE(c.use_alignment);
  CHECK(c.lr_stage2 == doctest::Approx(3e-5));
}

TEST_CASE("bad keys and values are configuration errors") {
  model::Config c;
  CHECK_THROWS_AS(model::apply_overrides(c, {"no_such_key=1"}), ConfigError);
  CHECK_THROWS_AS(model::apply_overrides(c, {"hidden_size"}), ConfigError);
  CHECK_THROWS_AS(model::apply_overrides(c, {"hidden_size=-3"}), ConfigError);
  CHECK_THROWS_AS(model::apply_overrides(c, {"use_alignment=maybe"}), ConfigError);
  CHECK_THROWS_AS(model::apply_overrides(c, {"mixed_gamma=abc"}), ConfigError);
  model::Config bad;
  bad.mixed_gamma = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = model::Config{};
  bad.lr_patience = 10;
  bad.early_stop = 10;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = model::Config{};
  bad.graph_type = "dense";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = model::Config{};
  bad.hidden_size = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("text and json forms round trip") {
  model::Config c;
  model::apply_overrides(c, {"seed=99", "train_path=/data/train.jsonl", "coverage_lambda=0.25", "gnn_direction=forward"});
  const auto from_text = model::parse_config(c.to_text());
  const auto from_json = model::Config::from_json(c.to_json());
  for (const auto& key : model::Config::keys()) {
    CHECK(from_text.get(key) == c.get(key));
    CHECK(from_json.get(key) == c.get(key));
  }
}

TEST_CASE("config files allow comments and report line numbers") {
  const auto c = model::parse_config("# header\n\nhidden_size = 32  # trailing\nbeam_width=2\n");
  CHECK(c.hidden_size == 32);
  CHECK(c.beam_width == 2);
  try {
    model::parse_config("hidden_size = 3\nnonsense\n", "x.conf");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("x.conf:2") != std::string::npos);
  }
  CHECK_THROWS_AS(model::load_config("/nonexistent/qgen.conf"), ConfigError);
}

TEST_CASE("pipeline builds a model from in-memory data") {
  data::ToyCorpusOptions to;
  to.train_examples = 6;
  to.dev_examples = 3;
  to.vector_dim = 4;
  const auto toy = data::make_toy_corpus(to);
  model::Config c;
  model::apply_overrides(c, {"word_embed_dim=4", "bilstm_hidden=3", "hidden_size=6", "graph_embed_dim=5"});
  const auto data = training::make_dataset(c, toy.train, toy.dev, toy.vectors_text);
  CHECK(data.train.size() == 6);
  auto m = training::build_model(c, data);
  CHECK(m->graph_mode() == graph::GraphMode::kDynamic);
  const auto vectors = training::reward_vectors(*m);
  CHECK(vectors.dim() == 4);
  CHECK(vectors.size() + data::Vocabulary::kReservedCount >= data.vocab.size());
  model::Config missing = c;
  CHECK_THROWS_AS(training::load_dataset(missing), ConfigError);
  c.word_embed_dim = 5;  // vectors file has 4 columns
  CHECK_THROWS(training::make_dataset(c, toy.train, toy.dev, toy.vectors_text));
}
