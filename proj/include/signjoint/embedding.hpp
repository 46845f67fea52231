// Copyright 2026 The signjoint Authors.
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

#ifndef SIGNJOINT_EMBEDDING_HPP
#define SIGNJOINT_EMBEDDING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "signjoint/matrix.hpp"

namespace signjoint::corpus {

// Which representation a file stores. Codes 16/17 are used for training
// checkpoints of projection-head parameters.
enum class EmbeddingRole : std::uint32_t {
  kFrameVideo = 0,
  kSentenceVideo = 1,
  kWordText = 2,
  kSentenceText = 3,
  kHeadWeights = 16,
  kHeadBias = 17,
};

// rows x dim matrix of finite binary32 values, row-major.
struct EmbeddingMatrix {
  std::uint32_t rows = 0;
  std::uint32_t dim = 0;
  std::vector<float> data;

  float at(std::uint32_t r, std::uint32_t c) const { return data[std::size_t(r) * dim + c]; }
  bool operator==(const EmbeddingMatrix&) const = default;
};

struct EmbeddingFile {
  EmbeddingMatrix matrix;
  EmbeddingRole role = EmbeddingRole::kFrameVideo;
};

// Binary layout: 8-byte magic "SSB1EMB\0", then u32 little-endian
// version (=1), rows, dim, role, then rows*dim IEEE-754 binary32
// little-endian values, row-major. Round trips preserve every bit.
std::string write_embeddings(const EmbeddingFile& f);
EmbeddingFile load_embeddings(const std::string& bytes);

// f64 widening / narrowing helpers between storage and loss math.
Matd to_matd(const EmbeddingMatrix& m);
EmbeddingMatrix from_matd(const Matd& m);

}  // namespace signjoint::corpus

#endif  // SIGNJOINT_EMBEDDING_HPP
