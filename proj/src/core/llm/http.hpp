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

#include "core/llm/backend.hpp"

namespace medpair::llm {

struct HttpEndpoint {
  std::string base_url;  // e.g. http://127.0.0.1:8000/v1
  std::string model;
  std::string api_key;   // sent as a bearer token when non-empty
  int timeout_seconds = 120;
};

// POST {base_url}/chat/completions with a system and a user message and a
// JSON response-format hint; returns choices[0].message.content.
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpEndpoint endpoint) : ep_(std::move(endpoint)) {}
  std::string Send(const ChatRequest& request) override;

 private:
  HttpEndpoint ep_;
};

// POST {base_url}/embeddings {model, input: [...]}; reads data[i].embedding.
class HttpEmbeddingBackend : public EmbeddingBackend {
 public:
  HttpEmbeddingBackend(HttpEndpoint endpoint, std::size_t dim)
      : ep_(std::move(endpoint)), dim_(dim) {}
  std::size_t dim() const override { return dim_; }
  std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string>& texts) override;

 private:
  HttpEndpoint ep_;
  std::size_t dim_;
};

// POST {base_url}/rerank {model, instruction, query, documents: [passage]};
// reads results[0].relevance_score.
class HttpRerankBackend : public RerankBackend {
 public:
  explicit HttpRerankBackend(HttpEndpoint endpoint) : ep_(std::move(endpoint)) {}
  double Score(const std::string& instruction, const std::string& query,
               const std::string& passage) override;

 private:
  HttpEndpoint ep_;
};

// POSTs `body` to base_url + path and returns the parsed JSON reply.
// Connection failures and 5xx/429 replies raise TransportError; other
// non-2xx statuses and unparsable bodies raise Error(kTransport) directly,
// since retrying them cannot help.
json PostJson(const HttpEndpoint& endpoint, const std::string& path,
              const json& body);

}  // namespace medpair::llm
