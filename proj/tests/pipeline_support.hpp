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

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "core/agents/agents.hpp"
#include "core/kb/kb.hpp"
#include "core/llm/mock.hpp"
#include "core/llm/prompt_format.hpp"

namespace medpair::testing {

// Chat backend that answers by the prompt's Task/Role/Round header lines.
// Confidence replies follow a per-role list indexed by round (last value
// repeats). Everything else gets a valid canned payload.
class ScriptedChat : public llm::ChatBackend {
 public:
  std::map<std::string, std::vector<double>> confidence;  // role -> per round
  std::vector<std::string> regenerated = {"refined query"};
  int empty_regenerations = 0;  // this many regenerate calls reply []
  bool adopt = true;
  std::string fail_task;        // task whose replies are unparsable

  std::string Send(const llm::ChatRequest& r) override {
    std::lock_guard<std::mutex> lock(mu_);
    calls_.push_back(r);
    const std::string task = llm::PromptField(r.user_prompt, "Task").value_or("");
    const std::string role = llm::PromptField(r.user_prompt, "Role").value_or("");
    if (task == fail_task) return "not json";
    if (task == "assess-confidence") {
      const int round = std::stoi(llm::PromptField(r.user_prompt, "Round").value_or("0"));
      const auto& seq = confidence[role];
      const double v = seq.empty() ? 1.0
                                   : seq[std::min<std::size_t>(static_cast<std::size_t>(round),
                                                               seq.size() - 1)];
      return llm::json{{"sufficiency", v}, {"accuracy", 1.0}}.dump();
    }
    if (task == "regenerate-queries") {
      if (empty_regenerations > 0) {
        --empty_regenerations;
        return R"({"queries": []})";
      }
      return llm::json{{"queries", regenerated}}.dump();
    }
    if (task == "pharmacist-adopt") {
      return llm::json{{"adopt", adopt}, {"justification", "scripted"}}.dump();
    }
    return llm::DefaultPayload(r.schema_tag, r.user_prompt).dump();
  }

  std::vector<llm::ChatRequest> calls() const {
    std::lock_guard<std::mutex> lock(mu_);
    return calls_;
  }
  std::vector<llm::ChatRequest> CallsFor(const std::string& task) const {
    std::vector<llm::ChatRequest> out;
    for (const auto& c : calls()) {
      if (llm::PromptField(c.user_prompt, "Task") == task) out.push_back(c);
    }
    return out;
  }

 private:
  mutable std::mutex mu_;
  std::vector<llm::ChatRequest> calls_;
};

// Tiny two-role knowledge base plus mock embedder and reranker.
struct SmallWorld {
  llm::HashEmbedder embedder{32, 1};
  llm::OverlapReranker reranker;
  kb::KnowledgeBases indexes;

  SmallWorld() {
    const std::vector<kb::SourceDocument> corpus = {
        {"d1", "", "Fever and cough are typical symptoms of influenza.", {}},
        {"d2", "", "Diagnosis of asthma relies on wheeze findings.", {}},
        {"p1", "", "Oseltamivir dose is 75 mg twice daily.", {}},
        {"p2", "", "Salbutamol tablet interactions are rare.", {}},
        {"b1", "", "General advice for patients with a cough.", {}},
    };
    indexes = kb::BuildIndexes(corpus, embedder, kb::BuildOptions{}).indexes;
  }

  agents::AgentContext Context(llm::ChatBackend* chat) const {
    agents::AgentContext ctx;
    ctx.indexes = &indexes;
    ctx.backends.chat = chat;
    ctx.backends.embedder = const_cast<llm::HashEmbedder*>(&embedder);
    ctx.backends.reranker = const_cast<llm::OverlapReranker*>(&reranker);
    ctx.backends.retry = {2, 0};
    ctx.top_k = 5;
    ctx.top_n = 3;
    ctx.departments = agents::DefaultDepartments();
    return ctx;
  }
};

}  // namespace medpair::testing
