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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/llm/backend.hpp"

namespace medpair::llm {

// One canned reply. Exactly one of the three is meaningful: `fail` simulates
// a transport failure, `raw` is sent verbatim, otherwise `payload` is
// serialized.
struct MockResponse {
  json payload;
  std::optional<std::string> raw;
  bool fail = false;
};

// A rule fires when the request carries `tag` and the user prompt contains
// every string in `contains` and none in `excludes`. A rule with several
// responses replays them in order and then repeats the last one.
struct MockRule {
  SchemaTag tag = SchemaTag::kPlan;
  std::vector<std::string> contains;
  std::vector<std::string> excludes;
  std::vector<MockResponse> responses;
};

// Rules are tried in order; the first match wins. When nothing matches, the
// per-tag default is used, and failing that a built-in default derived from
// the prompt sections (see DefaultPayload).
struct MockScript {
  std::vector<MockRule> rules;
  std::map<SchemaTag, MockResponse> defaults;

  // Line-delimited records; one rule per line. A record with
  // "default": true sets the default for its tag.
  static MockScript FromJsonLines(const std::string& content);
  static MockScript Load(const std::filesystem::path& path);
  std::string ToJsonLines() const;
};

// Built-in reply for a tag when the script has nothing better. Always valid
// for its schema given a prompt produced by this library.
json DefaultPayload(SchemaTag tag, const std::string& user_prompt);

class MockChatBackend : public ChatBackend {
 public:
  explicit MockChatBackend(MockScript script);

  std::string Send(const ChatRequest& request) override;

  // Snapshot of every request seen, in arrival order.
  std::vector<ChatRequest> calls() const;

 private:
  MockScript script_;
  mutable std::mutex mu_;
  std::vector<std::size_t> cursor_;
  std::vector<ChatRequest> calls_;
};

// Seeded feature-hashing embedder over the same tokens used for ROUGE.
// Identical text maps to an identical vector; texts sharing tokens land
// close together, which is what the retrieval fixtures rely on.
class HashEmbedder : public EmbeddingBackend {
 public:
  HashEmbedder(std::size_t dim, std::uint64_t seed);

  std::size_t dim() const override { return dim_; }
  std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string>& texts) override;

  EmbeddingVector EmbedOne(const std::string& text) const;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// Fraction of distinct query tokens that occur in the passage.
class OverlapReranker : public RerankBackend {
 public:
  double Score(const std::string& instruction, const std::string& query,
               const std::string& passage) override;
};

// Adapts a callable; handy for scripted scorers in tests.
class FunctionReranker : public RerankBackend {
 public:
  using Fn = std::function<double(const std::string&, const std::string&,
                                  const std::string&)>;
  explicit FunctionReranker(Fn fn) : fn_(std::move(fn)) {}
  double Score(const std::string& instruction, const std::string& query,
               const std::string& passage) override {
    return fn_(instruction, query, passage);
  }

 private:
  Fn fn_;
};

}  // namespace medpair::llm
