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

#ifndef SIGNJOINT_SYNONYMS_HPP
#define SIGNJOINT_SYNONYMS_HPP

#include <set>
#include <string>
#include <unordered_map>

namespace signjoint::corpus {

// Symmetric, reflexive word-equivalence relation. Groups are pairwise
// within a file line; the relation is deliberately NOT transitively
// closed across lines ("a b" plus "b c" relates b to both but leaves a
// and c unrelated).
class SynonymTable {
 public:
  SynonymTable() = default;

  // Relates every unordered pair drawn from `group` (and each word to
  // itself). Duplicates within the group are ignored.
  void add_group(const std::set<std::string>& group);

  bool equivalent(const std::string& u, const std::string& w) const;

  // syn(w); contains w itself even when w is unknown to the table.
  std::set<std::string> synonyms_of(const std::string& w) const;

  bool empty() const { return groups_.empty(); }
  std::size_t known_words() const { return groups_.size(); }

  const std::unordered_map<std::string, std::set<std::string>>& groups() const {
    return groups_;
  }

 private:
  std::unordered_map<std::string, std::set<std::string>> groups_;
};

// Text format: one group per line, words tab-separated, '#' comment
// lines and empty lines skipped. Words are normalized on load.
SynonymTable load_synonyms(const std::string& bytes);

}  // namespace signjoint::corpus

#endif  // SIGNJOINT_SYNONYMS_HPP
