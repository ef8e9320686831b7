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

#include "qgen/training/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "qgen/common/error.hpp"
#include "qgen/common/hash.hpp"
#include "qgen/common/real.hpp"

namespace qgen::training {

namespace {

constexpr char kMagic[4] = {'Q', 'G', 'C', 'K'};

struct Block {
  std::string name;
  std::vector<std::size_t> shape;
  std::span<const Real> values;
};

std::string checksum(std::span<const Real> values) {
  return hex64(fnv1a(std::as_bytes(values)));
}

template <class T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class T>
T read_pod(std::istream& in, const std::string& what) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof value)) throw IoError("checkpoint: truncated " + what);
  return value;
}

nlohmann::json describe(std::vector<Block>& blocks, const std::string& name, std::vector<std::size_t> shape,
                        std::span<const Real> values, std::size_t& offset) {
  nlohmann::json j = {{"name", name},
                      {"shape", shape},
                      {"offset", offset},
                      {"count", values.size()},
                      {"checksum", checksum(values)}};
  offset += values.size() * sizeof(Real);
  blocks.push_back({name, std::move(shape), values});
  return j;
}

// Reads `count` stored values of `dtype` into Real.
std::vector<Real> decode_block(const std::vector<char>& data, const nlohmann::json& entry,
                               const std::string& dtype) {
  const std::size_t offset = entry.at("offset").get<std::size_t>();
  const std::size_t count = entry.at("count").get<std::size_t>();
  const std::size_t width = dtype == "f64" ? sizeof(double) : sizeof(float);
  if (offset + count * width > data.size())
    throw IoError("checkpoint: block '" + entry.at("name").get<std::string>() + "' out of range");
  const char* src = data.data() + offset;
  const std::string name = entry.at("name").get<std::string>();
  if (hex64(fnv1a(std::as_bytes(std::span<const char>(src, count * width)))) !=
      entry.at("checksum").get<std::string>())
    throw IoError("checkpoint: checksum mismatch in block '" + name + "'");
  std::vector<Real> out(count);
  if (dtype == "f64") {
    for (std::size_t i = 0; i < count; ++i) {
      double d;
      std::memcpy(&d, src + i * sizeof d, sizeof d);
      out[i] = static_cast<Real>(d);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      float f;
      std::memcpy(&f, src + i * sizeof f, sizeof f);
      out[i] = static_cast<Real>(f);
    }
  }
  return out;
}

}  // namespace

nlohmann::json TrainingState::to_json() const {
  return {{"stage", stage},
          {"epoch", epoch},
          {"global_step", global_step},
          {"lr", lr},
          {"best_metric", best_metric},
          {"has_best", has_best},
          {"bad_epochs", bad_epochs},
          {"epochs_since_best", epochs_since_best}};
}

TrainingState TrainingState::from_json(const nlohmann::json& j) {
  TrainingState s;
  s.stage = j.value("stage", s.stage);
  s.epoch = j.value("epoch", s.epoch);
  s.global_step = j.value("global_step", s.global_step);
  s.lr = j.value("lr", s.lr);
  s.best_metric = j.value("best_metric", s.best_metric);
  s.has_best = j.value("has_best", s.has_best);
  s.bad_epochs = j.value("bad_epochs", s.bad_epochs);
  s.epochs_since_best = j.value("epochs_since_best", s.epochs_since_best);
  return s;
}

void save_checkpoint(const std::filesystem::path& path, const model::Graph2Seq& model,
                     const Adam* optimizer, const TrainingState& state) {
  std::vector<Block> blocks;
  std::size_t offset = 0;
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : model.params().parameters()) {
    auto entry = describe(blocks, p.name, {p.tensor.rows(), p.tensor.cols()}, p.tensor.values(), offset);
    entry["trainable"] = p.trainable;
    params.push_back(std::move(entry));
  }
  nlohmann::json moments = nlohmann::json::array();
  if (optimizer != nullptr) {
    for (const auto& [name, m] : optimizer->first_moments())
      moments.push_back(describe(blocks, "adam.m/" + name, {m.size()}, m, offset));
    for (const auto& [name, v] : optimizer->second_moments())
      moments.push_back(describe(blocks, "adam.v/" + name, {v.size()}, v, offset));
  }

  nlohmann::json manifest;
  manifest["format_version"] = kCheckpointVersion;
  manifest["dtype"] = kRealTypeName;
  manifest["config"] = model.config().to_json();
  manifest["vocab"] = model.vocab().regular_words();
  manifest["pos_tags"] = model.features().pos.tags();
  manifest["ner_tags"] = model.features().ner.tags();
  manifest["parameters"] = std::move(params);
  manifest["optimizer"] = {{"present", optimizer != nullptr},
                           {"steps", optimizer ? optimizer->steps() : 0},
                           {"moments", std::move(moments)}};
  manifest["state"] = state.to_json();
  const std::string text = manifest.dump();

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + tmp.string());
    out.write(kMagic, 4);
    write_pod<std::uint32_t>(out, kCheckpointVersion);
    write_pod<std::uint64_t>(out, text.size());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& b : blocks)
      out.write(reinterpret_cast<const char*>(b.values.data()),
                static_cast<std::streamsize>(b.values.size() * sizeof(Real)));
    if (!out) throw IoError("failed while writing checkpoint " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError(path.string() + " is not a checkpoint file");
  const auto version = read_pod<std::uint32_t>(in, "version");
  if (version != kCheckpointVersion)
    throw IoError("checkpoint version " + std::to_string(version) + " is not supported");
  const auto length = read_pod<std::uint64_t>(in, "manifest length");
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length))) throw IoError("checkpoint: truncated manifest");
  std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  LoadedCheckpoint out;
  try {
    out.manifest = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("checkpoint: bad manifest: ") + e.what());
  }
  const auto& m = out.manifest;
  const std::string dtype = m.at("dtype").get<std::string>();
  if (dtype != "f32" && dtype != "f64") throw IoError("checkpoint: unknown dtype " + dtype);

  model::Config config = model::Config::from_json(m.at("config"));
  auto vocab = data::Vocabulary::from_words(m.at("vocab").get<std::vector<std::string>>());
  data::FeatureVocab features;
  features.pos = data::TagSet::from_tags(m.at("pos_tags").get<std::vector<std::string>>());
  features.ner = data::TagSet::from_tags(m.at("ner_tags").get<std::vector<std::string>>());
  Rng rng(config.seed);
  out.model = std::make_unique<model::Graph2Seq>(config, std::move(vocab), std::move(features), nullptr, rng);

  auto& store = out.model->params();
  std::size_t filled = 0;
  for (const auto& entry : m.at("parameters")) {
    const std::string name = entry.at("name").get<std::string>();
    if (!store.contains(name)) throw IoError("checkpoint: unexpected parameter '" + name + "'");
    auto& p = store.at(name);
    const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != 2 || shape[0] != p.tensor.rows() || shape[1] != p.tensor.cols())
      throw IoError("checkpoint: parameter '" + name + "' has shape " + entry.at("shape").dump() +
                    ", model expects " + p.tensor.shape().str());
    auto values = decode_block(data, entry, dtype);
    std::copy(values.begin(), values.end(), p.tensor.mutable_values().begin());
    ++filled;
  }
  if (filled != store.parameters().size()) throw IoError("checkpoint: missing parameters");

  const auto& opt = m.at("optimizer");
  out.has_optimizer = opt.at("present").get<bool>();
  if (out.has_optimizer) {
    out.optimizer.set_steps(opt.at("steps").get<std::size_t>());
    for (const auto& entry : opt.at("moments")) {
      const std::string name = entry.at("name").get<std::string>();
      auto values = decode_block(data, entry, dtype);
      if (name.rfind("adam.m/", 0) == 0)
        out.optimizer.first_moments()[name.substr(7)] = std::move(values);
      else if (name.rfind("adam.v/", 0) == 0)
        out.optimizer.second_moments()[name.substr(7)] = std::move(values);
    }
  }
  out.state = TrainingState::from_json(m.at("state"));
  return out;
}

void copy_parameters(const ad::ParameterStore& source, ad::ParameterStore& target) {
  for (const auto& p : source.parameters()) {
    auto& t = target.at(p.name);
    if (t.tensor.shape() != p.tensor.shape())
      throw ShapeError("copy_parameters: shape mismatch for " + p.name);
    std::copy(p.tensor.values().begin(), p.tensor.values().end(), t.tensor.mutable_values().begin());
  }
}

}  // namespace qgen::training
