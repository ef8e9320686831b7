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

#include "qgen/model/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "qgen/common/error.hpp"
#include "qgen/gnn/biggnn.hpp"
#include "qgen/graph/passage_graph.hpp"

namespace qgen::model {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::size_t parse_size(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string format_double(double d) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, p);
}

struct Field {
  std::function<void(Config&, const std::string&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
  char kind;  // 'u' unsigned, 'd' double, 'b' bool, 's' string
};

template <class T>
Field make_field(T Config::*member) {
  Field f;
  if constexpr (std::is_same_v<T, std::string>) {
    f.kind = 's';
    f.set = [member](Config& c, const std::string&, const std::string& v) { c.*member = v; };
    f.get = [member](const Config& c) { return c.*member; };
  } else if constexpr (std::is_same_v<T, bool>) {
    f.kind = 'b';
    f.set = [member](Config& c, const std::string& k, const std::string& v) { c.*member = parse_bool(k, v); };
    f.get = [member](const Config& c) { return std::string(c.*member ? "true" : "false"); };
  } else if constexpr (std::is_same_v<T, double>) {
    f.kind = 'd';
    f.set = [member](Config& c, const std::string& k, const std::string& v) { c.*member = parse_double(k, v); };
    f.get = [member](const Config& c) { return format_double(c.*member); };
  } else if constexpr (std::is_same_v<T, std::uint64_t> && !std::is_same_v<std::uint64_t, std::size_t>) {
    f.kind = 'u';
    f.set = [member](Config& c, const std::string& k, const std::string& v) { c.*member = parse_u64(k, v); };
    f.get = [member](const Config& c) { return std::to_string(c.*member); };
  } else {
    f.kind = 'u';
    f.set = [member](Config& c, const std::string& k, const std::string& v) { c.*member = parse_size(k, v); };
    f.get = [member](const Config& c) { return std::to_string(c.*member); };
  }
  return f;
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"seed", make_field(&Config::seed)},
      {"train_path", make_field(&Config::train_path)},
      {"dev_path", make_field(&Config::dev_path)},
      {"test_path", make_field(&Config::test_path)},
      {"vectors_path", make_field(&Config::vectors_path)},
      {"contextual_path", make_field(&Config::contextual_path)},
      {"word_vocab_cap", make_field(&Config::word_vocab_cap)},
      {"word_embed_dim", make_field(&Config::word_embed_dim)},
      {"case_embed_dim", make_field(&Config::case_embed_dim)},
      {"pos_embed_dim", make_field(&Config::pos_embed_dim)},
      {"ner_embed_dim", make_field(&Config::ner_embed_dim)},
      {"contextual_dim", make_field(&Config::contextual_dim)},
      {"bilstm_hidden", make_field(&Config::bilstm_hidden)},
      {"hidden_size", make_field(&Config::hidden_size)},
      {"graph_embed_dim", make_field(&Config::graph_embed_dim)},
      {"word_dropout", make_field(&Config::word_dropout)},
      {"rnn_dropout", make_field(&Config::rnn_dropout)},
      {"use_alignment", make_field(&Config::use_alignment)},
      {"graph_type", make_field(&Config::graph_type)},
      {"graph_k", make_field(&Config::graph_k)},
      {"gnn_hops", make_field(&Config::gnn_hops)},
      {"gnn_direction", make_field(&Config::gnn_direction)},
      {"gnn_fusion", make_field(&Config::gnn_fusion)},
      {"coverage_lambda", make_field(&Config::coverage_lambda)},
      {"reward_alpha", make_field(&Config::reward_alpha)},
      {"mixed_gamma", make_field(&Config::mixed_gamma)},
      {"bleu_smoothing", make_field(&Config::bleu_smoothing)},
      {"undefined_semantic", make_field(&Config::undefined_semantic)},
      {"tf_initial", make_field(&Config::tf_initial)},
      {"tf_decay", make_field(&Config::tf_decay)},
      {"lr_stage1", make_field(&Config::lr_stage1)},
      {"lr_stage2", make_field(&Config::lr_stage2)},
      {"lr_decay", make_field(&Config::lr_decay)},
      {"lr_patience", make_field(&Config::lr_patience)},
      {"early_stop", make_field(&Config::early_stop)},
      {"grad_clip", make_field(&Config::grad_clip)},
      {"batch_size", make_field(&Config::batch_size)},
      {"max_epochs", make_field(&Config::max_epochs)},
      {"finetune_iterations", make_field(&Config::finetune_iterations)},
      {"fresh_stage2_moments", make_field(&Config::fresh_stage2_moments)},
      {"target_exact_match", make_field(&Config::target_exact_match)},
      {"eval_every", make_field(&Config::eval_every)},
      {"beam_width", make_field(&Config::beam_width)},
      {"max_decode_len", make_field(&Config::max_decode_len)},
      {"length_normalize", make_field(&Config::length_normalize)},
  };
  return table;
}

const Field& field(const std::string& key) {
  for (const auto& [k, f] : fields())
    if (k == key) return f;
  throw ConfigError("unknown config key '" + key + "'");
}

void check_unit(const std::string& key, double v, bool allow_one) {
  if (!(v >= 0.0) || (allow_one ? v > 1.0 : v >= 1.0))
    throw ConfigError(key + " must lie in [0, 1" + (allow_one ? "]" : ")"));
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  field(key).set(*this, key, trim(value));
}

std::string Config::get(const std::string& key) const { return field(key).get(*this); }

const std::vector<std::string>& Config::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, f] : fields()) out.push_back(k);
    return out;
  }();
  return names;
}

void Config::validate() const {
  auto positive = [](const char* key, std::size_t v) {
    if (v == 0) throw ConfigError(std::string(key) + " must be positive");
  };
  positive("word_vocab_cap", word_vocab_cap);
  positive("word_embed_dim", word_embed_dim);
  positive("bilstm_hidden", bilstm_hidden);
  positive("hidden_size", hidden_size);
  positive("graph_embed_dim", graph_embed_dim);
  positive("graph_k", graph_k);
  positive("batch_size", batch_size);
  positive("beam_width", beam_width);
  positive("max_decode_len", max_decode_len);
  positive("eval_every", eval_every);
  check_unit("word_dropout", word_dropout, false);
  check_unit("rnn_dropout", rnn_dropout, false);
  check_unit("mixed_gamma", mixed_gamma, true);
  check_unit("tf_initial", tf_initial, true);
  check_unit("tf_decay", tf_decay, true);
  check_unit("target_exact_match", target_exact_match, true);
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw ConfigError("lr_decay must lie in (0, 1]");
  if (!(coverage_lambda >= 0.0)) throw ConfigError("coverage_lambda must be nonnegative");
  if (!(reward_alpha >= 0.0)) throw ConfigError("reward_alpha must be nonnegative");
  if (!(bleu_smoothing > 0.0)) throw ConfigError("bleu_smoothing must be positive");
  if (!(lr_stage1 > 0.0) || !(lr_stage2 > 0.0)) throw ConfigError("learning rates must be positive");
  if (!(grad_clip > 0.0)) throw ConfigError("grad_clip must be positive");
  if (lr_patience >= early_stop)
    throw ConfigError("lr_patience must be smaller than early_stop");
  graph::parse_graph_mode(graph_type);
  gnn::parse_direction(gnn_direction);
  gnn::parse_fusion(gnn_fusion);
}

std::string Config::to_text() const {
  std::ostringstream os;
  for (const auto& [k, f] : fields()) os << k << " = " << f.get(*this) << '\n';
  return os.str();
}

nlohmann::json Config::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, f] : fields()) {
    const std::string v = f.get(*this);
    switch (f.kind) {
      case 'u': j[k] = std::stoull(v); break;
      case 'd': j[k] = parse_double(k, v); break;
      case 'b': j[k] = v == "true"; break;
      default: j[k] = v;
    }
  }
  return j;
}

Config Config::from_json(const nlohmann::json& j) {
  Config c;
  for (const auto& [k, v] : j.items()) {
    if (v.is_string()) {
      c.set(k, v.get<std::string>());
    } else if (v.is_boolean()) {
      c.set(k, v.get<bool>() ? "true" : "false");
    } else if (v.is_number_float()) {
      c.set(k, format_double(v.get<double>()));
    } else {
      c.set(k, v.dump());
    }
  }
  return c;
}

Config parse_config(const std::string& text, const std::string& source) {
  Config c;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      c.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void apply_overrides(Config& config, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    config.set(trim(o.substr(0, eq)), o.substr(eq + 1));
  }
}

}  // namespace qgen::model
