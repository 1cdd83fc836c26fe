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
#include <string>
#include <vector>

#include "core/llm/backend.hpp"

namespace medpair::llm {

// Validates `payload` against the fixed schema for `tag`. Returns the first
// violation found, or nullopt.
std::optional<std::string> ValidateSchema(SchemaTag tag, const json& payload);

// Pulls the JSON object out of a model reply: tolerates surrounding prose and
// markdown fences. Throws Error(kParse) when no object can be parsed.
json ExtractJson(const std::string& raw);

// Sends `request`, parses and validates the reply. A reply that fails to
// parse or validate gets exactly one repair round in which the validation
// error is fed back to the model; a second failure is a hard error
// (kParse or kSchema). Transport failures are retried with exponential
// backoff up to policy.max_attempts per send.
StructuredOutput Complete(ChatBackend& backend, const ChatRequest& request,
                          const RetryPolicy& policy = {},
                          const PayloadCheck& check = nullptr);

// Embeds and L2-normalizes. One vector per input, in input order.
std::vector<EmbeddingVector> Embed(EmbeddingBackend& backend,
                                   const std::vector<std::string>& texts,
                                   const RetryPolicy& policy = {});

enum class Rubric { kRelevance, kContribution };

// One integer score in [0, 10] per document. Contribution is judged against
// the gold answer and requires it.
std::vector<int> Judge(ChatBackend& backend, const std::string& question,
                       const std::vector<std::string>& docs, Rubric rubric,
                       const std::optional<std::string>& gold,
                       const RetryPolicy& policy = {});

// Runs `fn` and retries on TransportError. Used by every backend call.
template <typename Fn>
auto WithRetry(const RetryPolicy& policy, int* attempts, Fn&& fn)
    -> decltype(fn());

}  // namespace medpair::llm

#include "core/llm/retry_inl.hpp"
