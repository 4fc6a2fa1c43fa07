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

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pctadw {

/// Named node vectors, one row per name.
struct NamedEmbedding {
  std::vector<std::string> names;
  Eigen::MatrixXd vectors;
};

/// word2vec text format: "count dim" header, then "name f1 ... fD" per row.
/// Values are written with shortest round-trip float formatting, so a
/// float-valued matrix reads back exactly. Values are parsed as float32.
void write_text_embedding(const std::filesystem::path& path, const std::vector<std::string>& names,
                          const Eigen::MatrixXf& vectors);

NamedEmbedding read_text_embedding(const std::filesystem::path& path);

}  // namespace pctadw
