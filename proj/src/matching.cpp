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

#include "signjoint/matching.hpp"

namespace signjoint::metrics {

BipartiteMatcher::BipartiteMatcher(std::size_t n_left, std::size_t n_right)
    : adj_(n_left), match_left_(n_left, -1), match_right_(n_right, -1) {}

void BipartiteMatcher::add_edge(std::size_t left, std::size_t right) {
  adj_[left].push_back(right);
}

bool BipartiteMatcher::try_augment(std::size_t v, std::vector<bool>& visited) {
  for (std::size_t u : adj_[v]) {
    if (visited[u]) continue;
    visited[u] = true;
    if (match_right_[u] < 0 ||
        try_augment(static_cast<std::size_t>(match_right_[u]), visited)) {
      match_left_[v] = static_cast<int>(u);
      match_right_[u] = static_cast<int>(v);
      return true;
    }
  }
  return false;
}

std::size_t BipartiteMatcher::solve() {
  std::size_t matched = 0;
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    std::vector<bool> visited(match_right_.size(), false);
    if (try_augment(v, visited)) ++matched;
  }
  return matched;
}

}  // namespace signjoint::metrics
