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

#include "qgen/data/contextual.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "qgen/common/error.hpp"

namespace qgen::data {
namespace {

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::string& source) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError(source + ": truncated file");
  return v;
}

}  // namespace

ContextualVectors read_contextual_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string source = path.string();
  if (!in) throw DataError("cannot open contextual vectors " + source);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "QGCV", 4) != 0) throw DataError(source + ": bad magic");
  if (get<std::uint32_t>(in, source) != 1) throw DataError(source + ": unsupported version");
  ContextualVectors cv;
  cv.dim = get<std::uint32_t>(in, source);
  const auto count = get<std::uint64_t>(in, source);
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto id_len = get<std::uint32_t>(in, source);
    std::string id(id_len, '\0');
    if (!in.read(id.data(), id_len)) throw DataError(source + ": truncated id");
    const auto tokens = get<std::uint32_t>(in, source);
    std::vector<float> values(static_cast<std::size_t>(tokens) * cv.dim);
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(values.size() * sizeof(float))))
      throw DataError(source + ": truncated vectors for '" + id + "'");
    cv.by_id[id] = std::move(values);
  }
  return cv;
}

void write_contextual_vectors(const std::filesystem::path& path, const ContextualVectors& cv) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write("QGCV", 4);
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cv.dim));
  put<std::uint64_t>(out, cv.by_id.size());
  for (const auto& [id, values] : cv.by_id) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(cv.dim == 0 ? 0 : values.size() / cv.dim));
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(float)));
  }
}

void attach_contextual_vectors(std::vector<Example>& examples, const ContextualVectors& cv) {
  for (auto& ex : examples) {
    auto it = cv.by_id.find(ex.id);
    if (it == cv.by_id.end()) throw DataError("no contextual vectors for example '" + ex.id + "'");
    const std::size_t n = ex.passage_length();
    if (it->second.size() != n * cv.dim)
      throw DataError("contextual vectors for '" + ex.id + "' do not match passage length");
    ex.contextual_dim = cv.dim;
    ex.contextual.assign(n * cv.dim, Real(0));
    // token-major on disk -> feature-major (dim x N) in memory
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t d = 0; d < cv.dim; ++d)
        ex.contextual[d * n + t] = static_cast<Real>(it->second[t * cv.dim + d]);
  }
}

}  // namespace qgen::data
