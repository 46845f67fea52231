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

#ifndef SIGNJOINT_MATCHING_HPP
#define SIGNJOINT_MATCHING_HPP

#include <vector>

namespace signjoint::metrics {

// Maximum bipartite matching via augmenting paths (Kuhn), O(V*E).
// Left vertices are processed in index order, so the matching itself is
// deterministic, not just its size.
class BipartiteMatcher {
 public:
  BipartiteMatcher(std::size_t n_left, std::size_t n_right);

  void add_edge(std::size_t left, std::size_t right);

  // Returns the matching size; match_of_left/right expose the pairing
  // (-1 for unmatched).
  std::size_t solve();

  const std::vector<int>& match_of_left() const { return match_left_; }
  const std::vector<int>& match_of_right() const { return match_right_; }

 private:
  bool try_augment(std::size_t v, std::vector<bool>& visited);

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> match_left_;
  std::vector<int> match_right_;
};

}  // namespace signjoint::metrics

#endif  // SIGNJOINT_MATCHING_HPP
