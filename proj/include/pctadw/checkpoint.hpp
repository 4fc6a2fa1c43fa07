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

#include <cstdint>
#include <filesystem>

#include "pctadw/model.hpp"

namespace pctadw {

// Binary checkpoint layout, all integers and floats little-endian:
//
//   char[8]  magic "PCTADWCK"
//   u32      version (1)
//   u32      architecture (1 = pctadw1, 2 = pctadw2)
//   u32      dim
//   u64      node_count
//   u64      vocab_size
//   u32      loss_mode (0 = exact_softmax, 1 = negative_sampling)
//   u32      negatives
//   u64      adam step counter
//   u64      epochs completed
//   f64 x4   learning rate, beta1, beta2, epsilon
//   f64      init_scale
//
// followed by row-major f32 matrices: parameters of input, child_output,
// parent_output, word_output; then first moments in the same order; then
// second moments.
inline constexpr char kCheckpointMagic[8] = {'P', 'C', 'T', 'A', 'D', 'W', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointHeader {
  std::uint32_t version = kCheckpointVersion;
  Architecture architecture = Architecture::pctadw2;
  std::uint32_t dim = 0;
  std::uint64_t node_count = 0;
  std::uint64_t vocab_size = 0;
  LossMode loss_mode = LossMode::negative_sampling;
  std::uint32_t negatives = 0;
  std::uint64_t step = 0;
  std::uint64_t epochs_completed = 0;
  AdamConfig adam;
  double init_scale = 0.5;
};

/// Writes via a temporary file renamed into place; the temporary is removed
/// if writing fails.
void save_checkpoint(const EmbeddingModel<float>& model, const std::filesystem::path& path);

EmbeddingModel<float> load_checkpoint(const std::filesystem::path& path);

CheckpointHeader read_checkpoint_header(const std::filesystem::path& path);

}  // namespace pctadw
