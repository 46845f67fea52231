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

#include "signjoint/embedding.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace signjoint::corpus {

namespace {

constexpr char kMagic[8] = {'S', 'S', 'B', '1', 'E', 'M', 'B', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const std::string& s, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(s[off])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 3])) << 24;
}

bool known_role(std::uint32_t r) {
  return r <= 3 || r == 16 || r == 17;
}

}  // namespace

std::string write_embeddings(const EmbeddingFile& f) {
  const EmbeddingMatrix& m = f.matrix;
  const std::uint64_t count = std::uint64_t(m.rows) * m.dim;
  if (count != m.data.size())
    throw std::runtime_error("write_embeddings: rows*dim != data size");
  for (float v : m.data)
    if (!std::isfinite(v)) throw std::runtime_error("write_embeddings: non-finite value");

  std::string out;
  out.reserve(24 + count * 4);
  out.append(kMagic, 8);
  put_u32(out, kVersion);
  put_u32(out, m.rows);
  put_u32(out, m.dim);
  put_u32(out, static_cast<std::uint32_t>(f.role));
  for (float v : m.data) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
  }
  return out;
}

EmbeddingFile load_embeddings(const std::string& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw std::runtime_error("load_embeddings: bad magic");
  if (bytes.size() < 24) throw std::runtime_error("load_embeddings: truncated header");
  const std::uint32_t version = get_u32(bytes, 8);
  if (version != kVersion)
    throw std::runtime_error("load_embeddings: unsupported version " + std::to_string(version));
  EmbeddingFile f;
  f.matrix.rows = get_u32(bytes, 12);
  f.matrix.dim = get_u32(bytes, 16);
  const std::uint32_t role = get_u32(bytes, 20);
  if (!known_role(role))
    throw std::runtime_error("load_embeddings: unknown role code " + std::to_string(role));
  f.role = static_cast<EmbeddingRole>(role);

  const std::uint64_t count = std::uint64_t(f.matrix.rows) * f.matrix.dim;
  if (bytes.size() < 24 + count * 4)
    throw std::runtime_error("load_embeddings: truncated payload");
  if (bytes.size() > 24 + count * 4)
    throw std::runtime_error("load_embeddings: trailing bytes after payload");
  f.matrix.data.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t bits = get_u32(bytes, 24 + i * 4);
    float v;
    std::memcpy(&v, &bits, 4);
    if (!std::isfinite(v))
      throw std::runtime_error("load_embeddings: non-finite value at index " + std::to_string(i));
    f.matrix.data[i] = v;
  }
  return f;
}

Matd to_matd(const EmbeddingMatrix& m) {
  Matd out(m.rows, m.dim);
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = m.data[i];
  return out;
}

EmbeddingMatrix from_matd(const Matd& m) {
  EmbeddingMatrix out;
  out.rows = static_cast<std::uint32_t>(m.rows);
  out.dim = static_cast<std::uint32_t>(m.cols);
  out.data.resize(m.a.size());
  for (std::size_t i = 0; i < m.a.size(); ++i) out.data[i] = static_cast<float>(m.a[i]);
  return out;
}

}  // namespace signjoint::corpus
