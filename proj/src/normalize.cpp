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

#include "signjoint/normalize.hpp"

#include <cctype>
#include <stdexcept>

namespace signjoint::corpus {

namespace {
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_terminal_punct(char c) { return c == '.' || c == ',' || c == '!' || c == '?'; }
}  // namespace

std::string normalize_word(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  while (!out.empty() && is_terminal_punct(out.back())) out.pop_back();
  while (!out.empty() && out.back() == ' ') out.pop_back();
  if (out.empty())
    throw std::runtime_error("normalize_word: \"" + raw + "\" normalizes to empty");
  return out;
}

}  // namespace signjoint::corpus
