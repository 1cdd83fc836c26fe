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

#include <nlohmann/json.hpp>

#include "core/dataset/cases.hpp"
#include "core/kb/kb.hpp"
#include "core/llm/backend.hpp"
#include "core/retrieval/retrieval.hpp"

namespace medpair::agents {

using retrieval::RetrievalResult;
using retrieval::RetrievedDoc;

struct ReflectionConfig {
  double tau = 0.6;  // confidence threshold
  int r_max = 2;     // reflection rounds after the first retrieval
  int q_max = 4;     // queries kept per plan

  void Validate() const;
};

struct DiagnosticPlan {
  std::string department;
  std::vector<std::string> queries;
  std::string reasoning;
  // Coercions applied to the backend reply (truncation, unknown department).
  std::vector<std::string> notes;
};

// overall is always min(sufficiency, accuracy), recomputed locally.
struct ConfidenceReport {
  double sufficiency = 0.0;
  double accuracy = 0.0;
  double overall = 0.0;
  std::string rationale;
};

struct RankedCondition {
  std::string condition;
  std::string rationale;
};

struct Diagnosis {
  std::vector<RankedCondition> ranked;  // >= 3, most likely first

  const std::string& primary() const { return ranked.front().condition; }
};

struct AdoptionDecision {
  bool adopt = true;
  std::string justification;
};

struct RecommendedDrug {
  std::string drug;
  std::string rationale;
};

struct MedicationPlan {
  std::vector<RecommendedDrug> recommended;  // >= 1
  std::optional<std::string> selected_option;  // iff the case has options
};

struct RoundTrace {
  int round = 0;
  std::vector<std::string> queries;
  std::vector<RetrievalResult> results;  // one per query
  std::vector<RetrievedDoc> evidence;    // merged and deduplicated
  std::optional<ConfidenceReport> report;
  std::vector<std::string> notes;
};

struct ReflectionTrace {
  std::vector<RoundTrace> rounds;
  int best_round = 0;
  std::vector<RetrievedDoc> final_evidence;
};

enum class AgentMode { kAgent, kNaive };

struct DoctorTrace {
  AgentMode mode = AgentMode::kAgent;
  std::optional<DiagnosticPlan> plan;
  std::string plan_prompt;
  ReflectionTrace retrieval;
  std::string diagnose_prompt;
  std::optional<Diagnosis> diagnosis;
};

struct PharmacistTrace {
  AgentMode mode = AgentMode::kAgent;
  std::optional<AdoptionDecision> adoption;
  std::string plan_prompt;
  std::vector<std::string> queries;
  ReflectionTrace retrieval;
  std::string recommend_prompt;
  std::optional<MedicationPlan> medication;
};

struct ConsultationRecord {
  std::string case_id;
  bool ok = true;
  std::string failed_stage;  // e.g. "doctor.plan"; empty when ok
  std::string error;
  nlohmann::json config;     // provenance snapshot
  DoctorTrace doctor;
  PharmacistTrace pharmacist;
  std::optional<nlohmann::json> timing_ms;
};

struct Backends {
  llm::ChatBackend* chat = nullptr;
  llm::EmbeddingBackend* embedder = nullptr;
  llm::RerankBackend* reranker = nullptr;
  llm::RetryPolicy retry;
};

// Everything an agent step needs. Non-owning.
struct AgentContext {
  const kb::KnowledgeBases* indexes = nullptr;
  Backends backends;
  int top_k = 20;
  int top_n = 5;
  ReflectionConfig reflection;
  std::vector<std::string> departments;
};

std::vector<std::string> DefaultDepartments();

// What the reflection loop knows about the case when judging evidence and
// regenerating queries.
struct QueryContext {
  std::string complaint;
  std::optional<std::string> diagnosis;  // pharmacist side, when adopted
};

struct PlanResult {
  DiagnosticPlan plan;
  std::string prompt;
};

PlanResult DoctorPlan(const std::string& complaint, const AgentContext& ctx);

ConfidenceReport AssessConfidence(Role role, const QueryContext& query_context,
                                  const std::vector<std::string>& queries,
                                  const std::vector<RetrievedDoc>& evidence,
                                  int round, const AgentContext& ctx);

// Queries for the next round given the previous ones and the assessment
// that rejected them. May return an empty list.
std::vector<std::string> RegenerateQueries(
    Role role, const QueryContext& query_context,
    const std::vector<std::string>& previous, const ConfidenceReport& report,
    int next_round, const AgentContext& ctx);

// Retrieve, assess, and re-plan until confidence reaches tau or r_max
// reflection rounds are spent.
ReflectionTrace RunRetrievalWithReflection(Role role,
                                           const QueryContext& query_context,
                                           std::vector<std::string> queries,
                                           const AgentContext& ctx);

// Single retrieval round for the complaint text; no assessment.
ReflectionTrace NaiveRetrieval(Role role, const std::string& complaint,
                               const AgentContext& ctx);

// Union of per-query docs, deduplicated by chunk_id (best rerank score
// kept), re-sorted and re-ranked.
std::vector<RetrievedDoc> MergeEvidence(const std::vector<RetrievalResult>& results);

struct DiagnoseResult {
  Diagnosis diagnosis;
  std::string prompt;
};

DiagnoseResult DoctorDiagnose(const std::string& complaint,
                              const std::vector<RetrievedDoc>& evidence,
                              const std::optional<dataset::Options>& options,
                              AgentMode mode, const AgentContext& ctx);

AdoptionDecision PharmacistAdopt(const std::string& complaint,
                                 const Diagnosis& diagnosis,
                                 const AgentContext& ctx);

struct PharmacistPlanResult {
  std::vector<std::string> queries;
  std::string prompt;
};

// The diagnosis appears in the prompt iff adoption.adopt.
PharmacistPlanResult PharmacistPlan(const Diagnosis& diagnosis,
                                    const std::string& complaint,
                                    const AdoptionDecision& adoption,
                                    const AgentContext& ctx);

struct RecommendResult {
  MedicationPlan plan;
  std::string prompt;
};

RecommendResult PharmacistRecommend(const std::string& complaint,
                                    const std::optional<Diagnosis>& diagnosis_if_adopted,
                                    const std::vector<RetrievedDoc>& evidence,
                                    const std::optional<dataset::Options>& options,
                                    AgentMode mode, const AgentContext& ctx);

struct PipelineFlags {
  bool doctor_agent = true;      // false: naive retrieval + direct answer
  bool pharmacist_agent = true;  // likewise
  bool record_timing = false;
};

// Doctor stage, then pharmacist stage. Stage errors are caught and recorded
// with the stage name; the partial trace is kept.
ConsultationRecord RunConsultation(const dataset::PatientCase& patient,
                                   const AgentContext& ctx,
                                   const PipelineFlags& flags,
                                   const nlohmann::json& config_snapshot);

nlohmann::json ToJson(const ConsultationRecord& record);
ConsultationRecord RecordFromJson(const nlohmann::json& j);

// Human-readable multi-section dump of a record.
std::string PrettyPrint(const ConsultationRecord& record);

}  // namespace medpair::agents
