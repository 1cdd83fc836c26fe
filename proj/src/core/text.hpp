// Copyright 2026 The Medpair Authors.
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

#include <string>
#include <string_view>
#include <vector>

namespace medpair::text {

// ASCII case folding. Bytes >= 0x80 pass through untouched.
std::string CaseFold(std::string_view s);

std::string Trim(std::string_view s);

// Casefold, trim, collapse internal whitespace runs, strip trailing
// punctuation. Two answers match iff their normalized forms are equal.
std::string NormalizeAnswer(std::string_view s);

// Casefold, replace ASCII punctuation with spaces, split on whitespace.
std::vector<std::string> Tokenize(std::string_view s);

std::vector<std::string> SplitLines(std::string_view s);

bool Contains(std::string_view haystack, std::string_view needle);

}  // namespace medpair::text
