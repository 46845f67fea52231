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

#ifndef SIGNJOINT_NORMALIZE_HPP
#define SIGNJOINT_NORMALIZE_HPP

#include <string>

namespace signjoint::corpus {

// Canonical word form: ASCII-lowercased, surrounding whitespace stripped,
// internal whitespace runs collapsed to single spaces, trailing
// {. , ! ?} removed. Throws if the result is empty.
std::string normalize_word(const std::string& raw);

}  // namespace signjoint::corpus

#endif  // SIGNJOINT_NORMALIZE_HPP
