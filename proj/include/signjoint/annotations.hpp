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

#ifndef SIGNJOINT_ANNOTATIONS_HPP
#define SIGNJOINT_ANNOTATIONS_HPP

#include <string>
#include <vector>

#include "signjoint/types.hpp"

namespace signjoint::corpus {

// Annotation files are UTF-8 JSON lines, one SentenceRecord per line:
//   {"id":..., "episode_id":..., "subtitle":..., "span":[s,e],
//    "segments":[{"start_s":..,"end_s":..,"words":[..],
//                 "sign_type":null|"P"|...,"confidence":..?}, ...]}
// Parsers reject invariant violations instead of repairing them; errors
// carry the 1-based line number.
std::vector<SentenceRecord> parse_annotations(const std::string& bytes);
std::string write_annotations(const std::vector<SentenceRecord>& records);

}  // namespace signjoint::corpus

#endif  // SIGNJOINT_ANNOTATIONS_HPP
