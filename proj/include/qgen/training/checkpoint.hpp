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
#include <memory>
#include <string>

#include "json.hpp"
#include "qgen/model/graph2seq.hpp"
#include "qgen/training/adam.hpp"

namespace qgen::training {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Progress counters persisted next to the weights.
struct TrainingState {
  std::string stage = "stage1";
  std::size_t epoch = 0;
  std::size_t global_step = 0;
  double lr = 0.0;
  double best_metric = 0.0;
  bool has_best = false;
  std::size_t bad_epochs = 0;
  std::size_t epochs_since_best = 0;

  nlohmann::json to_json() const;
  static TrainingState from_json(const nlohmann::json& j);
};

// Layout: "QGCK", u32 version, u64 manifest byte count, manifest JSON, then
// raw little-endian value blocks at the offsets the manifest lists (relative
// to the end of the manifest). Each block carries an FNV-1a checksum.
void save_checkpoint(const std::filesystem::path& path, const model::Graph2Seq& model,
                     const Adam* optimizer, const TrainingState& state);

struct LoadedCheckpoint {
  std::unique_ptr<model::Graph2Seq> model;
  Adam optimizer;
  bool has_optimizer = false;
  TrainingState state;
  nlohmann::json manifest;
};

// Rebuilds the model from the stored config and vocabularies, then fills
// every parameter. Values stored at the other precision are converted.
// Throws IoError on unreadable/corrupt files and on checksum mismatches.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

// Copies parameter values from `source` into `target` (matching names and
// shapes).
void copy_parameters(const ad::ParameterStore& source, ad::ParameterStore& target);

}  // namespace qgen::training
