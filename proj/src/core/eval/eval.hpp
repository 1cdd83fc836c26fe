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

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/agents/agents.hpp"
#include "core/dataset/cases.hpp"
#include "core/llm/backend.hpp"

namespace medpair::eval {

struct CaseOutcome {
  std::string case_id;
  bool top1_hit = false;
  bool top3_hit = false;
  bool drug_hit = false;
  bool failed = false;  // record failed; counted as a miss

  bool operator==(const CaseOutcome&) const = default;
};

struct RougeScores {
  double rouge1_f1 = 0.0;
  double rouge2_f1 = 0.0;
  double rougeL_f1 = 0.0;
};

struct Distribution {
  double mean = 0.0;
  double median = 0.0;
  std::array<int, 10> histogram{};  // bins of width 0.1; 1.0 lands in the last
};

struct OverlapSummary {
  std::vector<std::pair<std::string, RougeScores>> per_case;
  int skipped = 0;  // cases without both evidence traces
  Distribution rouge1;
  Distribution rouge2;
  Distribution rougeL;
};

struct RoleJudgeSummary {
  int n = 0;
  double mean_relevance = 0.0;
  double mean_contribution = 0.0;
};

struct JudgeSummary {
  RoleJudgeSummary doctor;
  RoleJudgeSummary pharmacist;
};

struct RunReport {
  int n_cases = 0;
  int top1_hits = 0;
  int top3_hits = 0;
  int drug_hits = 0;
  int failed_cases = 0;
  double top1_acc = 0.0;
  double top3_acc = 0.0;
  double drug_acc = 0.0;
  std::vector<CaseOutcome> outcomes;  // sorted by case_id
  std::optional<JudgeSummary> judge;
  std::optional<OverlapSummary> rouge;
};

// Option cases compare resolved option letters; free-text answers compare
// exactly after normalization (casefold, trim, collapse whitespace, strip
// terminal punctuation).
bool MatchAnswer(const std::string& predicted, const std::string& gold,
                 const std::optional<dataset::Options>& options);

// top1 from ranked[0], top3 from ranked[0..3), drug from the selected option
// (option cases) or the first recommended drug. Failed records score all
// misses.
CaseOutcome ScoreCase(const agents::ConsultationRecord& record,
                      const dataset::PatientCase& patient);

// Exact hit/n ratios. Throws on an empty outcome list.
RunReport Aggregate(std::vector<CaseOutcome> outcomes);

struct CaseJudgement {
  int relevance = 0;
  int contribution = 0;
};

// Per-document judge scores, reduced by max. No documents scores (0, 0).
CaseJudgement JudgeCase(llm::ChatBackend& judge, const std::string& question,
                        const std::vector<std::string>& docs,
                        const std::string& gold,
                        const llm::RetryPolicy& retry = {});

// Judge means per role over successful records; gold is the diagnosis for
// the doctor and the medication for the pharmacist.
JudgeSummary JudgeRun(llm::ChatBackend& judge,
                      const std::vector<agents::ConsultationRecord>& records,
                      const std::vector<dataset::PatientCase>& cases,
                      const llm::RetryPolicy& retry = {});

// ROUGE-1/2 F1 from clipped n-gram overlap, ROUGE-L F1 from the longest
// common subsequence. Either side empty after tokenization -> all zeros.
RougeScores Rouge(const std::string& candidate, const std::string& reference);

Distribution Summarize(std::vector<double> values);

// ROUGE between each case's doctor and pharmacist final evidence, texts
// concatenated in chunk_id order.
OverlapSummary SpecializationOverlap(
    const std::vector<agents::ConsultationRecord>& records);

// Consults every case on a pool of `workers` threads. Output is ordered by
// case_id whatever the pool width.
std::vector<agents::ConsultationRecord> RunCases(
    const std::vector<dataset::PatientCase>& cases, const agents::AgentContext& ctx,
    const agents::PipelineFlags& flags, const nlohmann::json& config_snapshot,
    int workers);

// Scores records against their cases (matched by case_id), aggregates, and
// attaches the overlap summary.
RunReport ScoreRun(const std::vector<agents::ConsultationRecord>& records,
                   const std::vector<dataset::PatientCase>& cases);

struct AblationRow {
  bool doctor_agent = true;
  bool pharmacist_agent = true;
  RunReport report;
};

// All four on/off combinations, full system first.
std::vector<std::pair<bool, bool>> FullAblationGrid();

// One report per grid entry over the same cases and backends, run one
// configuration at a time.
std::vector<AblationRow> RunAblation(
    const std::vector<dataset::PatientCase>& cases, const agents::AgentContext& ctx,
    const std::vector<std::pair<bool, bool>>& grid,
    const nlohmann::json& config_snapshot, int workers);

nlohmann::json ToJson(const RunReport& report);
nlohmann::json ToJson(const CaseOutcome& outcome);
nlohmann::json ToJson(const OverlapSummary& summary);
nlohmann::json ToJson(const JudgeSummary& summary);

// Tab-separated, one row per configuration, accuracies at 4 decimals.
std::string AblationTable(const std::vector<AblationRow>& rows);
nlohmann::json AblationJson(const std::vector<AblationRow>& rows);

}  // namespace medpair::eval
