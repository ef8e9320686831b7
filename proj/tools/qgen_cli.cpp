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

// qgen: command-line front end for preprocessing, two-stage training,
// generation, evaluation, graph inspection and the hop-count sweep.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qgen/common/error.hpp"
#include "qgen/common/hash.hpp"
#include "qgen/common/log.hpp"
#include "qgen/data/batch.hpp"
#include "qgen/data/corpus.hpp"
#include "qgen/data/toy_corpus.hpp"
#include "qgen/graph/passage_graph.hpp"
#include "qgen/metrics/bleu.hpp"
#include "qgen/metrics/reward.hpp"
#include "qgen/metrics/rouge.hpp"
#include "qgen/metrics/wmd.hpp"
#include "qgen/model/config.hpp"
#include "qgen/training/checkpoint.hpp"
#include "qgen/training/pipeline.hpp"
#include "qgen/training/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qgen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::string out_dir = "qgen_out";
  std::string log_level = "info";
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Records what a command read and wrote; written as manifest.json in the
// output directory when the command finishes.
class RunManifest {
 public:
  RunManifest(std::string command, const fs::path& out_dir) : out_dir_(out_dir) {
    j_["command"] = std::move(command);
    j_["started"] = utc_now();
    j_["inputs"] = json::object();
    j_["artifacts"] = json::array();
  }
  void set_config(const model::Config& c) {
    j_["config"] = c.to_json();
    j_["seed"] = c.seed;
  }
  void add_input(const std::string& path) {
    if (path.empty() || !fs::exists(path)) return;
    j_["inputs"][path] = hash_file(path);
  }
  void add_artifact(const fs::path& path) {
    const std::string p = path.string();
    for (const auto& a : j_["artifacts"])
      if (a == p) return;
    j_["artifacts"].push_back(p);
  }
  json& extra() { return j_; }
  void write() {
    j_["finished"] = utc_now();
    std::ofstream out(out_dir_ / "manifest.json");
    if (!out) throw IoError("cannot write manifest in " + out_dir_.string());
    out << j_.dump(2) << '\n';
  }

 private:
  fs::path out_dir_;
  json j_;
};

fs::path prepare_out_dir(const GlobalOptions& g) {
  fs::path dir(g.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

model::Config resolve_config(const GlobalOptions& g) {
  model::Config c = g.config_path.empty() ? model::Config{} : model::load_config(g.config_path);
  if (g.seed) c.seed = *g.seed;
  model::apply_overrides(c, g.overrides);
  c.validate();
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

// Appends one JSON object per line.
class JsonlWriter {
 public:
  explicit JsonlWriter(const fs::path& path) : out_(path, std::ios::trunc) {
    if (!out_) throw IoError("cannot write " + path.string());
  }
  void write(const json& j) {
    out_ << j.dump() << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

void record_inputs(RunManifest& manifest, const model::Config& c) {
  manifest.add_input(c.train_path);
  manifest.add_input(c.dev_path);
  manifest.add_input(c.test_path);
  manifest.add_input(c.vectors_path);
  manifest.add_input(c.contextual_path);
}

// Keys that change parameter shapes or the encoder structure; a checkpoint's
// values for these cannot be overridden.
const std::vector<std::string> kStructuralKeys = {
    "word_embed_dim", "case_embed_dim", "pos_embed_dim",  "ner_embed_dim", "contextual_dim",
    "bilstm_hidden",  "hidden_size",    "graph_embed_dim", "use_alignment", "graph_type",
    "gnn_direction",  "gnn_fusion",     "word_vocab_cap"};

model::Config checkpoint_config(const model::Config& stored, const GlobalOptions& g) {
  model::Config c = stored;
  if (g.seed) c.seed = *g.seed;
  model::apply_overrides(c, g.overrides);
  for (const auto& key : kStructuralKeys)
    if (c.get(key) != stored.get(key))
      throw ConfigError("'" + key + "' is fixed by the checkpoint (" + stored.get(key) +
                        ") and cannot be changed to " + c.get(key));
  c.validate();
  return c;
}

// Rebuilds a loaded model under an adjusted (non-structural) config.
std::unique_ptr<model::Graph2Seq> with_config(training::LoadedCheckpoint& ckpt, const model::Config& c) {
  Rng rng(c.seed);
  auto m = std::make_unique<model::Graph2Seq>(c, ckpt.model->vocab(), ckpt.model->features(), nullptr, rng);
  training::copy_parameters(ckpt.model->params(), m->params());
  return m;
}

// ---------------------------------------------------------------- commands

int cmd_toy_corpus(const GlobalOptions& g, const data::ToyCorpusOptions& opts_in) {
  const fs::path dir = prepare_out_dir(g);
  data::ToyCorpusOptions opts = opts_in;
  if (g.seed) opts.seed = *g.seed;
  const auto corpus = data::make_toy_corpus(opts);
  RunManifest manifest("toy-corpus", dir);
  data::write_corpus(dir / "train.jsonl", corpus.train);
  data::write_corpus(dir / "dev.jsonl", corpus.dev);
  write_text(dir / "vectors.txt", corpus.vectors_text);

  // A ready-to-use scaled-down configuration for this corpus.
  model::Config c;
  c.seed = opts.seed;
  c.train_path = (dir / "train.jsonl").string();
  c.dev_path = (dir / "dev.jsonl").string();
  c.test_path = (dir / "dev.jsonl").string();
  c.vectors_path = (dir / "vectors.txt").string();
  c.word_embed_dim = opts.vector_dim;
  c.bilstm_hidden = 32;
  c.hidden_size = 64;
  c.graph_embed_dim = 64;
  c.batch_size = 8;
  c.max_epochs = 300;
  write_text(dir / "toy.conf", c.to_text());
  manifest.set_config(c);
  for (const char* f : {"train.jsonl", "dev.jsonl", "vectors.txt", "toy.conf"}) manifest.add_artifact(dir / f);
  manifest.extra()["toy"] = {{"train_examples", corpus.train.size()},
                             {"dev_examples", corpus.dev.size()},
                             {"vector_dim", opts.vector_dim}};
  manifest.write();
  std::cout << "wrote " << corpus.train.size() << " training and " << corpus.dev.size()
            << " validation examples to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_preprocess(const GlobalOptions& g) {
  const model::Config c = resolve_config(g);
  const fs::path dir = prepare_out_dir(g);
  RunManifest manifest("preprocess", dir);
  manifest.set_config(c);
  record_inputs(manifest, c);
  const auto data = training::load_dataset(c);

  std::ostringstream vocab;
  for (const auto& w : data.vocab.words()) vocab << w << '\n';
  write_text(dir / "vocab.txt", vocab.str());
  json features = {{"pos", data.features.pos.tags()}, {"ner", data.features.ner.tags()}};
  write_text(dir / "features.json", features.dump(2) + "\n");

  auto stats_for = [&](const std::vector<data::Example>& split) {
    std::size_t tokens = 0, oov = 0, parsed = 0, qtokens = 0;
    for (const auto& ex : split) {
      tokens += ex.passage_length();
      for (const auto& t : ex.passage) oov += data.vocab.contains(t.surface) ? 0 : 1;
      parsed += ex.dependency_edges ? 1 : 0;
      qtokens += ex.question.size();
    }
    return json{{"examples", split.size()},
                {"passage_tokens", tokens},
                {"question_tokens", qtokens},
                {"passage_oov_tokens", oov},
                {"with_dependency_parse", parsed}};
  };
  json stats = {{"train", stats_for(data.train)},
                {"dev", stats_for(data.dev)},
                {"vocab_size", data.vocab.size()},
                {"vectors_from_file", std::count(data.table.from_file.begin(), data.table.from_file.end(), true)}};
  write_text(dir / "stats.json", stats.dump(2) + "\n");
  write_text(dir / "config.txt", c.to_text());
  for (const char* f : {"vocab.txt", "features.json", "stats.json", "config.txt"}) manifest.add_artifact(dir / f);
  manifest.write();
  std::cout << stats.dump(2) << '\n';
  return kExitOk;
}

int cmd_train(const GlobalOptions& g) {
  const model::Config c = resolve_config(g);
  const fs::path dir = prepare_out_dir(g);
  RunManifest manifest("train", dir);
  manifest.set_config(c);
  record_inputs(manifest, c);
  write_text(dir / "config.txt", c.to_text());
  manifest.add_artifact(dir / "config.txt");

  const auto data = training::load_dataset(c);
  auto model = training::build_model(c, data);
  const auto vectors = training::reward_vectors(*model);
  training::Trainer trainer(*model, &vectors, c.seed);

  JsonlWriter metrics(dir / "metrics.jsonl");
  manifest.add_artifact(dir / "metrics.jsonl");
  training::StageCallbacks cb;
  cb.on_epoch = [&](const training::EpochRecord& r) { metrics.write(r.to_json()); };
  cb.on_best = [&](const training::TrainingState& s) {
    training::save_checkpoint(dir / "best.ckpt", *model, &trainer.optimizer(), s);
    manifest.add_artifact(dir / "best.ckpt");
  };
  const auto summary = trainer.run_stage1(data.train, data.dev, cb);
  training::save_checkpoint(dir / "last.ckpt", *model, &trainer.optimizer(), trainer.state());
  manifest.add_artifact(dir / "last.ckpt");
  manifest.extra()["summary"] = {{"epochs", summary.epochs},
                                 {"steps", summary.steps},
                                 {"best_bleu4", summary.best_metric},
                                 {"early_stopped", summary.early_stopped},
                                 {"reached_target", summary.reached_target}};
  manifest.write();
  std::cout << "trained " << summary.epochs << " epochs; best validation BLEU-4 "
            << summary.best_metric << '\n';
  return kExitOk;
}

int cmd_finetune(const GlobalOptions& g, const std::string& checkpoint, std::optional<std::size_t> iterations) {
  auto ckpt = training::load_checkpoint(checkpoint);
  model::Config c = g.config_path.empty() ? ckpt.model->config() : model::load_config(g.config_path);
  if (!g.config_path.empty()) {
    // Paths and stage-2 settings come from the file; structure stays.
    for (const auto& key : kStructuralKeys) c.set(key, ckpt.model->config().get(key));
  }
  GlobalOptions rest = g;
  c = checkpoint_config(c, rest);
  const fs::path dir = prepare_out_dir(g);
  RunManifest manifest("finetune", dir);
  manifest.set_config(c);
  record_inputs(manifest, c);
  manifest.add_input(checkpoint);
  write_text(dir / "config.txt", c.to_text());
  manifest.add_artifact(dir / "config.txt");

  if (c.train_path.empty() || !fs::exists(c.train_path))
    throw ConfigError("train_path '" + c.train_path + "' does not exist");
  const auto train = data::load_corpus(c.train_path);
  const auto dev = c.dev_path.empty() ? std::vector<data::Example>{} : data::load_corpus(c.dev_path);

  auto model = with_config(ckpt, c);
  const auto vectors = training::reward_vectors(*model);
  training::Trainer trainer(*model, &vectors, c.seed);
  trainer.state() = ckpt.state;
  if (ckpt.has_optimizer) trainer.optimizer() = ckpt.optimizer;
  trainer.begin_stage2();

  JsonlWriter metrics(dir / "metrics.jsonl");
  manifest.add_artifact(dir / "metrics.jsonl");
  training::StageCallbacks cb;
  cb.on_epoch = [&](const training::EpochRecord& r) { metrics.write(r.to_json()); };
  cb.on_best = [&](const training::TrainingState& s) {
    training::save_checkpoint(dir / "best.ckpt", *model, &trainer.optimizer(), s);
    manifest.add_artifact(dir / "best.ckpt");
  };
  const auto summary = trainer.run_stage2(train, dev, iterations.value_or(c.finetune_iterations), cb);
  training::save_checkpoint(dir / "last.ckpt", *model, &trainer.optimizer(), trainer.state());
  manifest.add_artifact(dir / "last.ckpt");
  manifest.extra()["summary"] = {{"passes", summary.epochs}, {"steps", summary.steps},
                                 {"best_bleu4", summary.best_metric}};
  manifest.write();
  std::cout << "fine-tuned for " << summary.steps << " total steps; best validation BLEU-4 "
            << summary.best_metric << '\n';
  return kExitOk;
}

int cmd_generate(const GlobalOptions& g, const std::string& checkpoint, std::string corpus_path,
                 const std::string& graph_type, std::optional<std::size_t> beam, std::string output) {
  auto ckpt = training::load_checkpoint(checkpoint);
  model::Config c = checkpoint_config(ckpt.model->config(), g);
  if (!graph_type.empty() && graph::parse_graph_mode(graph_type) != ckpt.model->graph_mode())
    throw ConfigError("checkpoint was trained with the " + graph::graph_mode_name(ckpt.model->graph_mode()) +
                      " graph; --graph " + graph_type + " needs a model trained that way");
  if (corpus_path.empty()) corpus_path = c.test_path;
  if (corpus_path.empty() || !fs::exists(corpus_path))
    throw ConfigError("corpus '" + corpus_path + "' does not exist");
  const std::size_t width = beam.value_or(c.beam_width);
  if (width == 0) throw ConfigError("--beam must be at least 1");

  const fs::path dir = prepare_out_dir(g);
  if (output.empty()) output = (dir / "generated.jsonl").string();
  RunManifest manifest("generate", dir);
  manifest.set_config(c);
  manifest.add_input(checkpoint);
  manifest.add_input(corpus_path);
  manifest.extra()["beam"] = width;

  auto model = with_config(ckpt, c);
  const auto examples = data::load_corpus(corpus_path);
  training::EvalOptions opts;
  opts.beam_width = width;
  opts.max_len = c.max_decode_len;
  opts.length_normalize = c.length_normalize;
  opts.batch_size = c.batch_size;
  const auto result = training::evaluate(*model, examples, opts);

  JsonlWriter out(output);
  for (std::size_t i = 0; i < examples.size(); ++i)
    out.write({{"id", examples[i].id},
               {"tokens", result.predictions[i].tokens},
               {"score", result.predictions[i].score}});
  manifest.add_artifact(output);
  manifest.extra()["metrics"] = {{"bleu4", result.bleu4}, {"rougeL", result.rouge_l},
                                 {"exact_match", result.exact_match}};
  manifest.write();
  std::cout << "generated " << examples.size() << " questions (BLEU-4 " << result.bleu4 << ") -> "
            << output << '\n';
  return kExitOk;
}

// id -> tokens from either generator output ({id, tokens}) or corpus records.
std::vector<std::pair<std::string, std::vector<std::string>>> read_token_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  std::string line;
  std::size_t lineno = 0, record = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (j.contains("question_tokens")) {
        const auto ex = data::example_from_json(j, record);
        out.emplace_back(ex.id, ex.question);
      } else {
        std::string id = j.contains("id") ? (j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump())
                                          : std::to_string(record);
        out.emplace_back(id, j.at("tokens").get<std::vector<std::string>>());
      }
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    ++record;
  }
  return out;
}

int cmd_evaluate(const GlobalOptions& g, const std::string& hyp_path, const std::string& ref_path,
                 const std::string& vectors_path, const std::string& checkpoint) {
  const fs::path dir = prepare_out_dir(g);
  RunManifest manifest("evaluate", dir);
  manifest.add_input(hyp_path);
  manifest.add_input(ref_path);
  const auto hyps = read_token_file(hyp_path);
  const auto refs = read_token_file(ref_path);
  if (hyps.size() != refs.size())
    throw DataError("hypotheses have " + std::to_string(hyps.size()) + " records, references " +
                    std::to_string(refs.size()));

  std::optional<data::WordVectors> vectors;
  if (!checkpoint.empty()) {
    manifest.add_input(checkpoint);
    auto ckpt = training::load_checkpoint(checkpoint);
    vectors = training::reward_vectors(*ckpt.model);
  } else if (!vectors_path.empty()) {
    manifest.add_input(vectors_path);
    std::ifstream in(vectors_path);
    if (!in) throw ConfigError("cannot open vectors file " + vectors_path);
    data::WordVectors wv;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string word;
      if (!(ls >> word)) continue;
      std::vector<double> v;
      for (double x; ls >> x;) v.push_back(x);
      wv.set(word, std::move(v));
    }
    vectors = std::move(wv);
  }

  json per = json::array();
  double bleu_sum = 0, rouge_sum = 0, wmd_sum = 0;
  std::size_t wmd_count = 0;
  std::vector<metrics::Tokens> all_h, all_r;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (hyps[i].first != refs[i].first)
      throw DataError("record " + std::to_string(i) + ": hypothesis id '" + hyps[i].first +
                      "' does not match reference id '" + refs[i].first + "'");
    const auto h = metrics::lowercased(hyps[i].second);
    const auto r = metrics::lowercased(refs[i].second);
    if (r.empty()) throw DataError("reference '" + refs[i].first + "' is empty");
    json row = {{"id", hyps[i].first}};
    double bleu = 0.0, rouge = 0.0;
    if (h.empty()) {
      log::warn("empty hypothesis for '", hyps[i].first, "'; scoring it 0");
      row["wmd"] = nullptr;
    } else {
      bleu = metrics::bleu4(h, r);
      rouge = metrics::rouge_l(h, r);
      row["wmd"] = nullptr;
      if (vectors) {
        try {
          const double d = metrics::wmd(h, r, *vectors);
          row["wmd"] = d;
          wmd_sum += d;
          ++wmd_count;
        } catch (const DomainError&) {
          // no in-table word on one side; distance undefined
        }
      }
    }
    row["bleu4"] = bleu;
    row["rougeL"] = rouge;
    bleu_sum += bleu;
    rouge_sum += rouge;
    all_h.push_back(h);
    all_r.push_back(r);
    per.push_back(std::move(row));
  }
  const double n = std::max<double>(1.0, static_cast<double>(hyps.size()));
  json report = {{"examples", hyps.size()},
                 {"mean", {{"bleu4", bleu_sum / n}, {"rougeL", rouge_sum / n},
                           {"wmd", wmd_count ? json(wmd_sum / static_cast<double>(wmd_count)) : json(nullptr)}}},
                 {"corpus_bleu4", hyps.empty() ? 0.0 : metrics::corpus_bleu4(all_h, all_r)},
                 {"per_example", per}};
  write_text(dir / "evaluation.json", report.dump(2) + "\n");
  manifest.add_artifact(dir / "evaluation.json");
  manifest.write();

  std::cout << std::left << std::setw(24) << "id" << std::setw(10) << "bleu4" << std::setw(10) << "rougeL"
            << "wmd\n";
  for (const auto& row : per) {
    std::cout << std::setw(24) << row["id"].get<std::string>() << std::setw(10) << std::fixed
              << std::setprecision(4) << row["bleu4"].get<double>() << std::setw(10)
              << row["rougeL"].get<double>() << (row["wmd"].is_null() ? "-" : std::to_string(row["wmd"].get<double>()))
              << '\n';
  }
  std::cout << std::setw(24) << "mean" << std::setw(10) << bleu_sum / n << std::setw(10) << rouge_sum / n
            << (wmd_count ? std::to_string(wmd_sum / static_cast<double>(wmd_count)) : "-") << '\n';
  std::cout << "corpus BLEU-4 " << report["corpus_bleu4"].get<double>() << '\n';
  return kExitOk;
}

int cmd_graph(const GlobalOptions& g, const std::string& checkpoint, std::string corpus_path,
              const std::string& id, std::size_t index, std::string graph_type, bool as_json) {
  std::unique_ptr<model::Graph2Seq> model;
  model::Config c;
  std::vector<data::Example> examples;
  if (!checkpoint.empty()) {
    auto ckpt = training::load_checkpoint(checkpoint);
    c = checkpoint_config(ckpt.model->config(), g);
    model = with_config(ckpt, c);
  } else {
    c = resolve_config(g);
  }
  if (corpus_path.empty()) corpus_path = c.train_path;
  if (corpus_path.empty() || !fs::exists(corpus_path))
    throw ConfigError("corpus '" + corpus_path + "' does not exist");
  examples = data::load_corpus(corpus_path);
  if (graph_type.empty()) graph_type = c.graph_type;
  const auto mode = graph::parse_graph_mode(graph_type);

  const data::Example* ex = nullptr;
  if (!id.empty()) {
    for (const auto& e : examples)
      if (e.id == id) ex = &e;
    if (ex == nullptr) throw DataError("no example with id '" + id + "' in " + corpus_path);
  } else {
    if (index >= examples.size())
      throw DataError("example index " + std::to_string(index) + " is past the end of " + corpus_path);
    ex = &examples[index];
  }

  graph::PassageGraph pg;
  if (mode == graph::GraphMode::kStatic) {
    pg = graph::build_static(*ex);
  } else {
    if (!model) {
      // Without a checkpoint the similarity projection is freshly initialised.
      c.graph_type = "dynamic";
      auto data = training::make_dataset(c, examples, {}, "");
      model = training::build_model(c, data);
      log::warn("no checkpoint given: dynamic edges use an untrained projection");
    }
    if (model->graph_mode() != graph::GraphMode::kDynamic)
      throw ConfigError("checkpoint has no dynamic-graph projection (trained with the static graph)");
    ad::NoGradGuard guard;
    const std::vector<data::Example> one{*ex};
    const auto batch = data::encode_batch(one, model->vocab(), model->features());
    pg = model->encode(one[0], batch, 0, {}).graph;
  }
  const fs::path dir = prepare_out_dir(g);
  const json j = graph::graph_to_json(pg, ex->passage_surfaces());
  write_text(dir / "graph.json", j.dump(2) + "\n");
  RunManifest manifest("graph", dir);
  manifest.set_config(c);
  manifest.add_input(corpus_path);
  manifest.add_input(checkpoint);
  manifest.add_artifact(dir / "graph.json");
  manifest.write();
  std::cout << (as_json ? j.dump(2) + "\n" : graph::graph_to_text(pg, ex->passage_surfaces()));
  return kExitOk;
}

std::vector<std::size_t> parse_hops(const std::string& list) {
  std::vector<std::size_t> hops;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      hops.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("--hops: '" + item + "' is not a hop count");
    }
  }
  if (hops.empty()) throw ConfigError("--hops needs at least one value");
  return hops;
}

int cmd_sweep(const GlobalOptions& g, const std::string& hop_list, bool with_ablation) {
  const model::Config c = resolve_config(g);
  const auto hops = parse_hops(hop_list);
  const fs::path dir = prepare_out_dir(g);
  RunManifest manifest("sweep-hops", dir);
  manifest.set_config(c);
  record_inputs(manifest, c);
  const auto data = training::load_dataset(c);

  JsonlWriter metrics(dir / "metrics.jsonl");
  manifest.add_artifact(dir / "metrics.jsonl");
  std::size_t run = 0;
  training::StageCallbacks cb;
  // The callback cannot see run boundaries, so count them from epoch 1 rows.
  cb.on_epoch = [&, first = true](const training::EpochRecord& r) mutable {
    if (r.epoch == 1 && !first) ++run;
    first = false;
    json j = r.to_json();
    j["run"] = run;
    metrics.write(j);
  };
  const auto rows = training::sweep_hops(c, data, hops, with_ablation, cb);

  json table = json::array();
  std::ostringstream tsv;
  tsv << "run\thops\talignment\tbest_bleu4\tfinal_bleu4\tepochs\n";
  for (const auto& r : rows) {
    table.push_back({{"label", r.label}, {"hops", r.hops}, {"alignment", r.alignment},
                     {"best_bleu4", r.best_bleu4}, {"final_bleu4", r.final_bleu4}, {"epochs", r.epochs}});
    tsv << r.label << '\t' << r.hops << '\t' << (r.alignment ? "yes" : "no") << '\t' << r.best_bleu4
        << '\t' << r.final_bleu4 << '\t' << r.epochs << '\n';
  }
  write_text(dir / "sweep.json", table.dump(2) + "\n");
  write_text(dir / "sweep.tsv", tsv.str());
  manifest.add_artifact(dir / "sweep.json");
  manifest.add_artifact(dir / "sweep.tsv");
  manifest.write();
  std::cout << tsv.str();
  return kExitOk;
}

log::Level parse_level(const std::string& s) {
  if (s == "debug") return log::Level::kDebug;
  if (s == "info") return log::Level::kInfo;
  if (s == "warn") return log::Level::kWarn;
  if (s == "error") return log::Level::kError;
  if (s == "off") return log::Level::kOff;
  throw ConfigError("unknown log level '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qgen: answer-aware question generation with graph encoders"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "key = value configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "overrides the configured seed");
  app.add_option("--override", g.overrides, "key=value, applied after the config file (repeatable)");
  app.add_option("--out-dir", g.out_dir, "directory for artifacts and manifest.json");
  app.add_option("--log-level", g.log_level, "debug, info, warn, error or off");

  data::ToyCorpusOptions toy;
  auto* toy_cmd = app.add_subcommand("toy-corpus", "write the synthetic corpus, word vectors and a config");
  toy_cmd->add_option("--train-examples", toy.train_examples);
  toy_cmd->add_option("--dev-examples", toy.dev_examples);
  toy_cmd->add_option("--vector-dim", toy.vector_dim);

  auto* pre_cmd = app.add_subcommand("preprocess", "validate corpora and write vocabularies and statistics");
  auto* train_cmd = app.add_subcommand("train", "stage 1: cross-entropy + coverage training");

  std::string checkpoint, corpus, graph_type, output, hyp_path, ref_path, vectors_path, example_id;
  std::optional<std::size_t> iterations, beam;
  std::size_t example_index = 0;
  bool as_json = false, with_ablation = false;
  std::string hop_list = "1,2,3,4";

  auto* ft_cmd = app.add_subcommand("finetune", "stage 2: self-critical fine-tuning from a checkpoint");
  ft_cmd->add_option("--checkpoint", checkpoint)->required();
  ft_cmd->add_option("--iterations", iterations, "optimizer steps (default: finetune_iterations)");

  auto* gen_cmd = app.add_subcommand("generate", "decode questions for a corpus");
  gen_cmd->add_option("--checkpoint", checkpoint)->required();
  gen_cmd->add_option("--corpus", corpus, "JSONL corpus (default: test_path)");
  gen_cmd->add_option("--graph", graph_type, "static or dynamic; must match the checkpoint");
  gen_cmd->add_option("--beam", beam, "beam width (default: beam_width)");
  gen_cmd->add_option("--output", output, "JSONL output (default: <out-dir>/generated.jsonl)");

  auto* eval_cmd = app.add_subcommand("evaluate", "score generated questions against references");
  eval_cmd->add_option("--hypotheses", hyp_path)->required();
  eval_cmd->add_option("--references", ref_path)->required();
  eval_cmd->add_option("--vectors", vectors_path, "text word vectors for WMD");
  eval_cmd->add_option("--checkpoint", checkpoint, "take WMD vectors from a checkpoint");

  auto* graph_cmd = app.add_subcommand("graph", "print the passage graph of one example");
  graph_cmd->add_option("--checkpoint", checkpoint);
  graph_cmd->add_option("--corpus", corpus, "JSONL corpus (default: train_path)");
  graph_cmd->add_option("--id", example_id);
  graph_cmd->add_option("--index", example_index);
  graph_cmd->add_option("--graph", graph_type, "static or dynamic (default: graph_type)");
  graph_cmd->add_flag("--json", as_json);

  auto* sweep_cmd = app.add_subcommand("sweep-hops", "train one model per GNN hop count");
  sweep_cmd->add_option("--hops", hop_list, "comma-separated hop counts");
  sweep_cmd->add_flag("--with-ablation", with_ablation, "add a run without the alignment network");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (*seed_opt) g.seed = seed;

  try {
    log::set_level(parse_level(g.log_level));
    if (*toy_cmd) return cmd_toy_corpus(g, toy);
    if (*pre_cmd) return cmd_preprocess(g);
    if (*train_cmd) return cmd_train(g);
    if (*ft_cmd) return cmd_finetune(g, checkpoint, iterations);
    if (*gen_cmd) return cmd_generate(g, checkpoint, corpus, graph_type, beam, output);
    if (*eval_cmd) return cmd_evaluate(g, hyp_path, ref_path, vectors_path, checkpoint);
    if (*graph_cmd) return cmd_graph(g, checkpoint, corpus, example_id, example_index, graph_type, as_json);
    if (*sweep_cmd) return cmd_sweep(g, hop_list, with_ablation);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
