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

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/vector.hpp"

namespace medpair::llm {

using nlohmann::json;

// Names the structured output a chat call is expected to produce.
enum class SchemaTag {
  kPlan,
  kQueries,
  kConfidence,
  kDiagnosis,
  kAdoption,
  kMedication,
  kJudge,
  kClassify,
};

std::string_view ToString(SchemaTag tag);
SchemaTag ParseSchemaTag(std::string_view text);

struct ChatRequest {
  std::string system_prompt;
  std::string user_prompt;
  SchemaTag schema_tag = SchemaTag::kPlan;
  double temperature = 0.0;
};

// A reply that has been parsed and validated against its tag's schema.
struct StructuredOutput {
  SchemaTag schema_tag = SchemaTag::kPlan;
  json payload;
  std::string raw;
  int repair_count = 0;
  int attempts = 0;
};

// Thrown by backends for network-level failures. Retried by the callers in
// client.hpp; everything else propagates immediately.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All backends must be safe to call from several worker threads at once.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string Send(const ChatRequest& request) = 0;
};

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::size_t dim() const = 0;
  virtual std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string>& texts) = 0;
};

class RerankBackend {
 public:
  virtual ~RerankBackend() = default;
  // Relevance of `passage` to `query` under `instruction`, in [0, 1].
  virtual double Score(const std::string& instruction, const std::string& query,
                       const std::string& passage) = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  int base_delay_ms = 200;
};

// Extra validation on top of the tag's schema; returns an error message or
// nullopt when the payload is acceptable.
using PayloadCheck = std::function<std::optional<std::string>(const json&)>;

}  // namespace medpair::llm
