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

#include "pctadw/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <type_traits>

#include "pctadw/errors.hpp"

namespace pctadw {

namespace {

template <typename T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  value = to_little(value);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::filesystem::path& path) {
  T value;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw Error("truncated checkpoint " + path.string());
  }
  return to_little(value);
}

void put_matrix(std::ostream& out, const EmbeddingModel<float>::Matrix& m) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(float)));
  } else {
    for (Eigen::Index i = 0; i < m.size(); ++i) put(out, m.data()[i]);
  }
}

void get_matrix(std::istream& in, EmbeddingModel<float>::Matrix& m,
                const std::filesystem::path& path) {
  if (!in.read(reinterpret_cast<char*>(m.data()),
               static_cast<std::streamsize>(m.size() * sizeof(float)))) {
    throw Error("truncated checkpoint " + path.string());
  }
  if constexpr (std::endian::native != std::endian::little) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = to_little(m.data()[i]);
  }
}

CheckpointHeader read_header(std::istream& in, const std::filesystem::path& path) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
    throw Error(path.string() + " is not a checkpoint");
  }
  CheckpointHeader h;
  h.version = get<std::uint32_t>(in, path);
  if (h.version != kCheckpointVersion) {
    throw IncompatibleCheckpoint("version",
                                 "unsupported checkpoint version " + std::to_string(h.version));
  }
  auto arch = get<std::uint32_t>(in, path);
  if (arch != 1 && arch != 2) throw Error("bad architecture tag in " + path.string());
  h.architecture = static_cast<Architecture>(arch);
  h.dim = get<std::uint32_t>(in, path);
  h.node_count = get<std::uint64_t>(in, path);
  h.vocab_size = get<std::uint64_t>(in, path);
  auto mode = get<std::uint32_t>(in, path);
  if (mode > 1) throw Error("bad loss mode in " + path.string());
  h.loss_mode = static_cast<LossMode>(mode);
  h.negatives = get<std::uint32_t>(in, path);
  h.step = get<std::uint64_t>(in, path);
  h.epochs_completed = get<std::uint64_t>(in, path);
  h.adam.learning_rate = get<double>(in, path);
  h.adam.beta1 = get<double>(in, path);
  h.adam.beta2 = get<double>(in, path);
  h.adam.epsilon = get<double>(in, path);
  h.init_scale = get<double>(in, path);
  return h;
}

}  // namespace

void save_checkpoint(const EmbeddingModel<float>& model, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + tmp.string());
      const auto& cfg = model.config();
      out.write(kCheckpointMagic, sizeof kCheckpointMagic);
      put<std::uint32_t>(out, kCheckpointVersion);
      put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.architecture));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.dim));
      put<std::uint64_t>(out, model.node_count());
      put<std::uint64_t>(out, model.vocab_size());
      put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.loss_mode));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.negatives));
      put<std::uint64_t>(out, model.step());
      put<std::uint64_t>(out, model.epochs_completed());
      put<double>(out, cfg.adam.learning_rate);
      put<double>(out, cfg.adam.beta1);
      put<double>(out, cfg.adam.beta2);
      put<double>(out, cfg.adam.epsilon);
      put<double>(out, cfg.init_scale);
      for (auto b : kBlocks) put_matrix(out, model.params(b));
      for (auto b : kBlocks) put_matrix(out, model.first_moment(b));
      for (auto b : kBlocks) put_matrix(out, model.second_moment(b));
      out.flush();
      if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

CheckpointHeader read_checkpoint_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_header(in, path);
}

EmbeddingModel<float> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  auto h = read_header(in, path);
  ModelConfig cfg;
  cfg.architecture = h.architecture;
  cfg.dim = static_cast<int>(h.dim);
  cfg.loss_mode = h.loss_mode;
  cfg.negatives = static_cast<int>(h.negatives);
  cfg.adam = h.adam;
  cfg.init_scale = h.init_scale;
  EmbeddingModel<float> model(cfg, h.node_count, h.vocab_size);
  for (auto b : kBlocks) get_matrix(in, model.params(b), path);
  for (auto b : kBlocks) get_matrix(in, model.first_moment(b), path);
  for (auto b : kBlocks) get_matrix(in, model.second_moment(b), path);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error("trailing bytes in checkpoint " + path.string());
  }
  model.set_step(h.step);
  model.set_epochs_completed(h.epochs_completed);
  return model;
}

}  // namespace pctadw
