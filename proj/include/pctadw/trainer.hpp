// Copyright 2026 The pctadw Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "pctadw/dataset.hpp"
#include "pctadw/model.hpp"
#include "pctadw/sampler.hpp"

namespace pctadw {

struct EpochLoss {
  std::uint64_t epoch = 0;  // 1-based
  // Mean loss per head over the samples where the head was present.
  double word = 0.0;
  double child = 0.0;
  double parent = 0.0;
  std::size_t samples = 0;
  std::size_t word_samples = 0;
  std::size_t child_samples = 0;
  std::size_t parent_samples = 0;

  double total() const { return word + child + parent; }
};

struct TrainConfig {
  int epochs = 100;
  SamplerConfig sampler;
  ModelConfig model;
  std::uint64_t seed = 1;
  /// 1 is deterministic. More workers update parameters lock-free
  /// (Hogwild) and are not reproducible.
  int workers = 1;
  /// Save to `checkpoint_path` every this many epochs (0: only at the end).
  int checkpoint_interval = 0;
  std::filesystem::path checkpoint_path;
  std::function<void(const EpochLoss&)> on_epoch;

  void validate() const;
};

struct TrainResult {
  EmbeddingModel<float> model;
  std::vector<EpochLoss> log;
};

/// Fresh model, `config.epochs` epochs.
TrainResult train(const Dataset& dataset, const TrainConfig& config);

/// Restores parameters, moments and counters from `checkpoint` and runs
/// `config.epochs` more epochs (0 allowed). Throws IncompatibleCheckpoint
/// when the header disagrees with the dataset or configuration.
TrainResult resume(const std::filesystem::path& checkpoint, const Dataset& dataset,
                   const TrainConfig& config);

/// Runs `epochs` epochs on an existing model, continuing its epoch and step
/// counters. Epoch e draws from a generator seeded by (seed, e), so split
/// runs reproduce a straight run.
std::vector<EpochLoss> train_epochs(EmbeddingModel<float>& model, const Dataset& dataset,
                                    const TrainConfig& config, int epochs);

/// CSV "epoch,word_loss,child_loss,parent_loss".
void write_loss_csv(const std::filesystem::path& path, const std::vector<EpochLoss>& log);

}  // namespace pctadw
