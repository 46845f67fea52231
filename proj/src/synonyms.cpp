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

#include "signjoint/synonyms.hpp"

#include <sstream>

#include "signjoint/normalize.hpp"

namespace signjoint::corpus {

void SynonymTable::add_group(const std::set<std::string>& group) {
  for (const std::string& u : group) {
    auto& s = groups_[u];
    s.insert(group.begin(), group.end());
  }
}

bool SynonymTable::equivalent(const std::string& u, const std::string& w) const {
  if (u == w) return true;
  auto it = groups_.find(u);
  return it != groups_.end() && it->second.count(w) > 0;
}

std::set<std::string> SynonymTable::synonyms_of(const std::string& w) const {
  auto it = groups_.find(w);
  if (it == groups_.end()) return {w};
  return it->second;
}

SynonymTable load_synonyms(const std::string& bytes) {
  SynonymTable table;
  std::istringstream in(bytes);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::set<std::string> group;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t tab = line.find('\t', pos);
      const std::string field =
          line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos);
      // Empty fields (e.g. doubled tabs) are skipped like empty lines.
      bool blank = true;
      for (char c : field)
        if (c != ' ' && c != '\t') blank = false;
      if (!blank) group.insert(normalize_word(field));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (!group.empty()) table.add_group(group);
  }
  return table;
}

}  // namespace signjoint::corpus
