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

#include "core/retrieval/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/llm/client.hpp"

namespace medpair::retrieval {
namespace {

bool ByScoreThenId(const ScoredChunk& a, const ScoredChunk& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.chunk_id < b.chunk_id;
}

}  // namespace

void RetrievalParams::Validate() const {
  if (top_n < 1 || top_k < top_n) {
    throw Error(ErrorCode::kInvalidArgument,
                "retrieval params need 1 <= top_n <= top_k (got top_k=" +
                    std::to_string(top_k) + ", top_n=" + std::to_string(top_n) + ")");
  }
}

const std::string& RoleTemplate(Role role) {
  static const std::string kDoctor =
      "As a doctor agent, retrieve medical guideline passages on disease "
      "symptoms, diagnostic criteria, and differential diagnosis, with "
      "department-level clinical guidance for the patient query.";
  static const std::string kPharmacist =
      "As a pharmacist agent, retrieve pharmaceutical guideline passages on "
      "drug mechanisms, indications, contraindications, and interactions, "
      "with dosage recommendations for the patient query.";
  return role == Role::kDoctor ? kDoctor : kPharmacist;
}

std::string RenderInstruction(Role role, const std::string& query_text) {
  return "Instruct: " + RoleTemplate(role) + "\nQuery: " + query_text;
}

std::vector<ScoredChunk> CoarseRecall(const kb::VectorIndex& index,
                                      const EmbeddingVector& query, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (query.dim() != index.dim) {
    throw Error(ErrorCode::kDimMismatch,
                "query dim " + std::to_string(query.dim()) +
                    " does not match index dim " + std::to_string(index.dim));
  }
  std::vector<ScoredChunk> scored;
  scored.reserve(index.entries.size());
  for (const auto& e : index.entries) {
    scored.push_back({e.chunk_id, Dot(query.values, e.vector.values)});
  }
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), ByScoreThenId);
  scored.resize(keep);
  return scored;
}

void SortAndRank(std::vector<RetrievedDoc>& docs) {
  std::sort(docs.begin(), docs.end(), [](const RetrievedDoc& a, const RetrievedDoc& b) {
    if (a.rerank_score != b.rerank_score) return a.rerank_score > b.rerank_score;
    return a.chunk_id < b.chunk_id;
  });
  for (std::size_t i = 0; i < docs.size(); ++i) docs[i].rank = static_cast<int>(i + 1);
}

RerankOutcome Rerank(std::vector<Candidate> candidates, Role role,
                     const std::string& query_text, llm::RerankBackend& scorer,
                     int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  RerankOutcome out;
  if (candidates.empty()) return out;

  // Dedup, keeping the best coarse score per chunk, in coarse order.
  std::map<std::string, Candidate> unique;
  for (auto& c : candidates) {
    auto [it, inserted] = unique.try_emplace(c.chunk_id, c);
    if (!inserted && c.coarse_score > it->second.coarse_score) it->second = std::move(c);
  }
  std::vector<Candidate> pool;
  pool.reserve(unique.size());
  for (auto& [id, c] : unique) pool.push_back(std::move(c));
  std::stable_sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    return a.coarse_score > b.coarse_score;
  });

  std::vector<RetrievedDoc> docs;
  docs.reserve(pool.size());
  try {
    for (const auto& c : pool) {
      const double s = scorer.Score(RoleTemplate(role), query_text, c.text);
      if (!(s >= 0.0 && s <= 1.0)) {
        throw Error(ErrorCode::kSchema, "rerank score outside [0, 1]");
      }
      docs.push_back({c.chunk_id, c.text, c.coarse_score, s, 0});
    }
  } catch (const std::exception&) {
    out.degraded = true;
    docs.clear();
    for (const auto& c : pool) {
      docs.push_back({c.chunk_id, c.text, c.coarse_score,
                      std::clamp((c.coarse_score + 1.0) / 2.0, 0.0, 1.0), 0});
    }
  }
  SortAndRank(docs);
  if (docs.size() > static_cast<std::size_t>(n)) docs.resize(static_cast<std::size_t>(n));
  out.docs = std::move(docs);
  return out;
}

RetrievalResult Search(const std::string& query_text,
                       const kb::KnowledgeBases& indexes,
                       llm::EmbeddingBackend& embedder,
                       llm::RerankBackend& scorer,
                       const RetrievalParams& params, int round,
                       const llm::RetryPolicy& retry) {
  params.Validate();
  if (query_text.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "retrieval query text is empty");
  }
  RetrievalResult result;
  result.params = params;
  result.query.text = query_text;
  result.query.role = params.role;
  result.query.round = round;
  result.query.instruction = RenderInstruction(params.role, query_text);

  const kb::VectorIndex& index = indexes.For(params.role);
  if (index.entries.empty()) return result;

  const auto qvec = llm::Embed(embedder, {result.query.instruction}, retry).front();
  const auto recalled = CoarseRecall(index, qvec, params.top_k);
  std::vector<Candidate> candidates;
  candidates.reserve(recalled.size());
  for (const auto& r : recalled) {
    candidates.push_back({r.chunk_id, index.chunk(r.chunk_id).text, r.score});
  }
  auto reranked = Rerank(std::move(candidates), params.role, query_text, scorer,
                         params.top_n);
  result.docs = std::move(reranked.docs);
  result.degraded = reranked.degraded;
  return result;
}

nlohmann::json ToJson(const RetrievedDoc& doc) {
  return {{"chunk_id", doc.chunk_id},
          {"text", doc.text},
          {"coarse_score", doc.coarse_score},
          {"rerank_score", doc.rerank_score},
          {"rank", doc.rank}};
}

nlohmann::json ToJson(const RetrievalResult& result) {
  nlohmann::json docs = nlohmann::json::array();
  for (const auto& d : result.docs) docs.push_back(ToJson(d));
  return {{"query",
           {{"text", result.query.text},
            {"role", ToString(result.query.role)},
            {"instruction", result.query.instruction},
            {"round", result.query.round}}},
          {"params",
           {{"top_k", result.params.top_k},
            {"top_n", result.params.top_n},
            {"role", ToString(result.params.role)}}},
          {"degraded", result.degraded},
          {"docs", docs}};
}

RetrievedDoc RetrievedDocFromJson(const nlohmann::json& j) {
  RetrievedDoc d;
  d.chunk_id = j.at("chunk_id").get<std::string>();
  d.text = j.at("text").get<std::string>();
  d.coarse_score = j.at("coarse_score").get<double>();
  d.rerank_score = j.at("rerank_score").get<double>();
  d.rank = j.at("rank").get<int>();
  return d;
}

RetrievalResult RetrievalResultFromJson(const nlohmann::json& j) {
  RetrievalResult r;
  const auto& q = j.at("query");
  r.query.text = q.at("text").get<std::string>();
  r.query.role = ParseRole(q.at("role").get<std::string>());
  r.query.instruction = q.at("instruction").get<std::string>();
  r.query.round = q.at("round").get<int>();
  const auto& p = j.at("params");
  r.params.top_k = p.at("top_k").get<int>();
  r.params.top_n = p.at("top_n").get<int>();
  r.params.role = ParseRole(p.at("role").get<std::string>());
  r.degraded = j.at("degraded").get<bool>();
  for (const auto& d : j.at("docs")) r.docs.push_back(RetrievedDocFromJson(d));
  return r;
}

}  // namespace medpair::retrieval
