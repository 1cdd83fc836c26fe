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

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace medpair::llm {

// User prompts are a sequence of "Key: value" header lines followed by
// block sections, each opened by a line "Name:" and running to the next
// block opener. PromptBuilder writes that layout; the parsers below read it
// back (the mock backend uses them to build its default replies).
class PromptBuilder {
 public:
  PromptBuilder& Field(const std::string& key, const std::string& value) {
    os_ << key << ": " << value << "\n";
    return *this;
  }
  PromptBuilder& Block(const std::string& name, const std::string& body) {
    os_ << name << ":\n" << body;
    if (body.empty() || body.back() != '\n') os_ << "\n";
    return *this;
  }
  PromptBuilder& Line(const std::string& line) {
    os_ << line << "\n";
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

// Body of block `name`, or nullopt when absent.
std::optional<std::string> PromptBlock(const std::string& prompt,
                                       const std::string& name);

// Value of header field `key`, or nullopt when absent.
std::optional<std::string> PromptField(const std::string& prompt,
                                       const std::string& key);

// Parses "A. text" lines of an Options block.
std::vector<std::pair<std::string, std::string>> ParseOptionLines(
    const std::string& block);

}  // namespace medpair::llm
