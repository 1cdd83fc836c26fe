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

#include "core/llm/prompt_format.hpp"

#include <cctype>

#include "core/text.hpp"

namespace medpair::llm {
namespace {

// "Name:" on its own line, Name made of letters and spaces.
bool IsBlockOpener(const std::string& line) {
  if (line.size() < 2 || line.back() != ':') return false;
  if (!std::isupper(static_cast<unsigned char>(line[0]))) return false;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const char c = line[i];
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != ' ') return false;
  }
  return true;
}

}  // namespace

std::optional<std::string> PromptBlock(const std::string& prompt,
                                       const std::string& name) {
  const auto lines = text::SplitLines(prompt);
  const std::string opener = name + ":";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i] != opener) continue;
    std::string body;
    for (std::size_t j = i + 1; j < lines.size() && !IsBlockOpener(lines[j]);
         ++j) {
      if (!body.empty()) body += "\n";
      body += lines[j];
    }
    return body;
  }
  return std::nullopt;
}

std::optional<std::string> PromptField(const std::string& prompt,
                                       const std::string& key) {
  const std::string prefix = key + ": ";
  for (const auto& line : text::SplitLines(prompt)) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> ParseOptionLines(
    const std::string& block) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& line : text::SplitLines(block)) {
    const auto dot = line.find(". ");
    if (dot == std::string::npos || dot == 0) continue;
    out.emplace_back(line.substr(0, dot), line.substr(dot + 2));
  }
  return out;
}

}  // namespace medpair::llm
