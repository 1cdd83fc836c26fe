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
#include <vector>

#include <nlohmann/json.hpp>

#include "core/common.hpp"
#include "core/kb/kb.hpp"
#include "core/llm/backend.hpp"

namespace medpair::retrieval {

struct RetrievalParams {
  int top_k = 20;  // coarse recall size
  int top_n = 5;   // rerank output size
  Role role = Role::kDoctor;

  void Validate() const;
};

struct RetrievalQuery {
  std::string text;
  Role role = Role::kDoctor;
  std::string instruction;
  int round = 0;
};

struct RetrievedDoc {
  std::string chunk_id;
  std::string text;
  double coarse_score = 0.0;  // cosine, [-1, 1]
  double rerank_score = 0.0;  // [0, 1]
  int rank = 0;               // 1-based
};

struct RetrievalResult {
  RetrievalQuery query;
  std::vector<RetrievedDoc> docs;
  RetrievalParams params;
  // Set when the reranker failed and coarse order was kept.
  bool degraded = false;
};

struct ScoredChunk {
  std::string chunk_id;
  double score = 0.0;
};

// Role-specific instruction template, also handed to the reranker.
const std::string& RoleTemplate(Role role);

// Instruction-bearing query text that gets embedded for coarse recall.
// Pure function of its inputs.
std::string RenderInstruction(Role role, const std::string& query_text);

// Exact scan: the min(k, |index|) highest cosine scores, descending, ties by
// chunk_id ascending.
std::vector<ScoredChunk> CoarseRecall(const kb::VectorIndex& index,
                                      const EmbeddingVector& query, int k);

struct Candidate {
  std::string chunk_id;
  std::string text;
  double coarse_score = 0.0;
};

struct RerankOutcome {
  std::vector<RetrievedDoc> docs;
  bool degraded = false;
};

// Scores every (deduplicated) candidate once and keeps the best n by rerank
// score, ties by chunk_id. If the scorer throws or returns a value outside
// [0, 1], the coarse order is kept instead and the outcome is marked
// degraded; rerank_score is then (coarse_score + 1) / 2.
RerankOutcome Rerank(std::vector<Candidate> candidates, Role role,
                     const std::string& query_text,
                     llm::RerankBackend& scorer, int n);

// render instruction -> embed -> coarse recall (top_k) -> rerank (top_n),
// over the index that belongs to params.role.
RetrievalResult Search(const std::string& query_text,
                       const kb::KnowledgeBases& indexes,
                       llm::EmbeddingBackend& embedder,
                       llm::RerankBackend& scorer,
                       const RetrievalParams& params, int round = 0,
                       const llm::RetryPolicy& retry = {});

// Sort by rerank score desc, chunk_id asc; assign contiguous ranks.
void SortAndRank(std::vector<RetrievedDoc>& docs);

nlohmann::json ToJson(const RetrievedDoc& doc);
nlohmann::json ToJson(const RetrievalResult& result);
RetrievedDoc RetrievedDocFromJson(const nlohmann::json& j);
RetrievalResult RetrievalResultFromJson(const nlohmann::json& j);

}  // namespace medpair::retrieval
