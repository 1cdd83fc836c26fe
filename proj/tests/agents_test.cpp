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

#include <gtest/gtest.h>

#include "core/agents/agents.hpp"
#include "core/common.hpp"
#include "pipeline_support.hpp"
#include "support.hpp"

namespace medpair::agents {
namespace {

using testing::ScriptedChat;
using testing::SmallWorld;

const SmallWorld& World() {
  static const SmallWorld w;
  return w;
}

dataset::PatientCase Case() {
  dataset::PatientCase c;
  c.case_id = "case-1";
  c.complaint = "Fever and cough since yesterday.";
  c.gold_diagnosis = "influenza";
  c.gold_medication = "oseltamivir";
  return c;
}

ReflectionTrace RunDoctor(ScriptedChat& chat, double tau = 0.6, int r_max = 2) {
  auto ctx = World().Context(&chat);
  ctx.reflection.tau = tau;
  ctx.reflection.r_max = r_max;
  return RunRetrievalWithReflection(Role::kDoctor, {"Fever and cough.", std::nullopt},
                                    {"fever cough"}, ctx);
}

std::vector<double> Overalls(const ReflectionTrace& t) {
  std::vector<double> v;
  for (const auto& r : t.rounds) v.push_back(r.report->overall);
  return v;
}

TEST(Reflection, StopsAtThresholdOrBudget) {
  struct Row {
    std::vector<double> seq;
    std::size_t rounds;
    int best;
  };
  for (const Row& row : {Row{{0.8}, 1, 0}, Row{{0.4, 0.8}, 2, 1}, Row{{0.3, 0.3, 0.3}, 3, 2},
                         Row{{0.5, 0.2, 0.4}, 3, 0}, Row{{0.6}, 1, 0}, Row{{0.1, 0.59, 0.2}, 3, 1}}) {
    ScriptedChat chat;
    chat.confidence["doctor"] = row.seq;
    const auto t = RunDoctor(chat);
    EXPECT_EQ(t.rounds.size(), row.rounds);
    EXPECT_EQ(t.best_round, row.best);
    for (std::size_t i = 0; i < t.rounds.size(); ++i) EXPECT_EQ(t.rounds[i].round, static_cast<int>(i));
    const auto& best = t.rounds[static_cast<std::size_t>(t.best_round)];
    ASSERT_EQ(t.final_evidence.size(), best.evidence.size());
    for (std::size_t i = 0; i < best.evidence.size(); ++i) {
      EXPECT_EQ(t.final_evidence[i].chunk_id, best.evidence[i].chunk_id);
    }
    EXPECT_EQ(chat.CallsFor("regenerate-queries").size(), row.rounds - 1);
  }
}

TEST(Reflection, BestRoundMaximizesOverallLaterWinsTies) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> tenth(0, 10);
  for (int trial = 0; trial < 200; ++trial) {
    ScriptedChat chat;
    std::vector<double> seq;
    for (int i = 0; i < 3; ++i) seq.push_back(tenth(rng) / 10.0);
    chat.confidence["doctor"] = seq;
    const auto t = RunDoctor(chat, 0.7, 2);
    const auto o = Overalls(t);
    // Oracle: rounds run until one reaches tau or three are done.
    std::size_t expect_rounds = 0;
    while (expect_rounds < 3) {
      ++expect_rounds;
      if (seq[expect_rounds - 1] >= 0.7) break;
    }
    ASSERT_EQ(o.size(), expect_rounds);
    std::size_t best = 0;
    for (std::size_t i = 0; i < o.size(); ++i) {
      if (o[i] >= o[best]) best = i;
    }
    EXPECT_EQ(t.best_round, static_cast<int>(best));
  }
}

TEST(Reflection, ZeroBudgetMeansOneRound) {
  ScriptedChat chat;
  chat.confidence["doctor"] = {0.0};
  EXPECT_EQ(RunDoctor(chat, 0.6, 0).rounds.size(), 1u);
}

TEST(Reflection, RegeneratedQueriesAreUsedNextRound) {
  ScriptedChat chat;
  chat.confidence["doctor"] = {0.1, 0.9};
  chat.regenerated = {"wheeze asthma"};
  const auto t = RunDoctor(chat);
  ASSERT_EQ(t.rounds.size(), 2u);
  EXPECT_EQ(t.rounds[1].queries, std::vector<std::string>{"wheeze asthma"});
  EXPECT_EQ(t.rounds[1].results[0].query.round, 1);
  EXPECT_NE(chat.CallsFor("regenerate-queries")[0].user_prompt.find("Round: 1"), std::string::npos);
}

TEST(Reflection, EmptyRegenerationReusesOnceThenStops) {
  ScriptedChat once;
  once.confidence["doctor"] = {0.1, 0.1, 0.1};
  once.empty_regenerations = 1;
  const auto a = RunDoctor(once);
  ASSERT_EQ(a.rounds.size(), 3u);
  EXPECT_EQ(a.rounds[1].queries, a.rounds[0].queries);
  EXPECT_FALSE(a.rounds[0].notes.empty());

  ScriptedChat twice;
  twice.confidence["doctor"] = {0.1};
  twice.empty_regenerations = 5;
  const auto b = RunDoctor(twice, 0.6, 5);
  EXPECT_EQ(b.rounds.size(), 2u);
}

TEST(Reflection, EmptyEvidenceScoresZeroWithoutAsking) {
  ScriptedChat chat;
  auto ctx = World().Context(&chat);
  kb::KnowledgeBases empty;
  empty.doctor.dim = empty.pharmacist.dim = 32;
  ctx.indexes = &empty;
  ctx.reflection.r_max = 1;
  const auto t = RunRetrievalWithReflection(Role::kDoctor, {"c", std::nullopt}, {"q"}, ctx);
  ASSERT_EQ(t.rounds.size(), 2u);
  EXPECT_EQ(t.rounds[0].report->overall, 0.0);
  EXPECT_TRUE(chat.CallsFor("assess-confidence").empty());
}

TEST(Merge, DeduplicatesAndKeepsBestScore) {
  RetrievalResult a, b;
  a.docs = {{"x", "t", 0.1, 0.3, 1}, {"y", "t", 0.1, 0.2, 2}};
  b.docs = {{"x", "t", 0.1, 0.6, 1}, {"z", "t", 0.1, 0.2, 2}};
  const auto m = MergeEvidence({a, b});
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].chunk_id, "x");
  EXPECT_DOUBLE_EQ(m[0].rerank_score, 0.6);
  EXPECT_EQ(m[1].chunk_id, "y");
  EXPECT_EQ(m[2].rank, 3);
}

TEST(DoctorPlan, CoercesUnknownDepartmentAndTruncatesQueries) {
  testing::FnChat chat([](const llm::ChatRequest&) {
    return R"({"department": "Space medicine", "queries": ["a", "b", "a", "c", "d", "e"]})";
  });
  auto ctx = World().Context(&chat);
  const auto p = DoctorPlan("x", ctx).plan;
  EXPECT_EQ(p.department, "unknown");
  EXPECT_EQ(p.queries, (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_EQ(p.notes.size(), 2u);

  testing::FnChat known([](const llm::ChatRequest&) {
    return R"({"department": "Cardiology", "queries": ["q"]})";
  });
  auto ctx2 = World().Context(&known);
  EXPECT_EQ(DoctorPlan("x", ctx2).plan.department, "cardiology");
}

TEST(Diagnose, OptionAnswersMustComeFromTheOptions) {
  const dataset::Options opts = {{"A", "Flu"}, {"B", "Cold"}, {"C", "Asthma"}};
  testing::FnChat chat([](const llm::ChatRequest& r) -> std::string {
    if (r.user_prompt.find("Repair:") == std::string::npos) {
      return R"({"ranked": [{"condition": "Mars fever"}, {"condition": "B"}, {"condition": "C"}]})";
    }
    return R"({"ranked": [{"condition": "b"}, {"condition": "flu"}, {"condition": "C"}]})";
  });
  auto ctx = World().Context(&chat);
  const auto d = DoctorDiagnose("x", {}, opts, AgentMode::kAgent, ctx).diagnosis;
  EXPECT_EQ(d.primary(), "Cold");
  EXPECT_EQ(d.ranked[1].condition, "Flu");
}

TEST(Pipeline, FullRunRecordsEveryStage) {
  ScriptedChat chat;
  auto ctx = World().Context(&chat);
  const auto rec = RunConsultation(Case(), ctx, {true, true, true}, {{"k", 1}});
  ASSERT_TRUE(rec.ok) << rec.error;
  EXPECT_TRUE(rec.doctor.plan);
  EXPECT_TRUE(rec.doctor.diagnosis);
  EXPECT_TRUE(rec.pharmacist.adoption->adopt);
  EXPECT_FALSE(rec.pharmacist.queries.empty());
  EXPECT_TRUE(rec.pharmacist.medication);
  ASSERT_TRUE(rec.timing_ms);
  for (const char* s : {"doctor.plan", "doctor.retrieval", "doctor.diagnose", "pharmacist.adopt",
                        "pharmacist.plan", "pharmacist.retrieval", "pharmacist.recommend"}) {
    EXPECT_TRUE(rec.timing_ms->contains(s)) << s;
  }
  // Pharmacist evidence comes only from the pharmacist index.
  for (const auto& d : rec.pharmacist.retrieval.final_evidence) {
    EXPECT_TRUE(World().indexes.pharmacist.chunk_store.count(d.chunk_id)) << d.chunk_id;
  }
  EXPECT_NE(rec.pharmacist.recommend_prompt.find("Diagnosis:"), std::string::npos);
}

TEST(Pipeline, RejectedDiagnosisStaysOutOfPharmacistPrompts) {
  ScriptedChat chat;
  chat.adopt = false;
  chat.confidence["pharmacist"] = {0.1, 0.1, 0.1};
  auto ctx = World().Context(&chat);
  const auto rec = RunConsultation(Case(), ctx, {}, {});
  ASSERT_TRUE(rec.ok) << rec.error;
  EXPECT_EQ(rec.pharmacist.plan_prompt.find("Diagnosis:"), std::string::npos);
  EXPECT_EQ(rec.pharmacist.recommend_prompt.find("Diagnosis:"), std::string::npos);
  for (const auto& c : chat.calls()) {
    if (llm::PromptField(c.user_prompt, "Role") == "pharmacist" &&
        llm::PromptField(c.user_prompt, "Task") != "pharmacist-adopt") {
      EXPECT_EQ(c.user_prompt.find("Diagnosis:"), std::string::npos) << c.user_prompt;
    }
  }
}

TEST(Pipeline, NaiveModesSkipPlanningAndReflection) {
  ScriptedChat chat;
  auto ctx = World().Context(&chat);
  const auto rec = RunConsultation(Case(), ctx, {false, false, false}, {});
  ASSERT_TRUE(rec.ok) << rec.error;
  EXPECT_FALSE(rec.doctor.plan);
  EXPECT_EQ(rec.doctor.retrieval.rounds.size(), 1u);
  EXPECT_TRUE(rec.pharmacist.adoption->adopt);
  EXPECT_TRUE(chat.CallsFor("assess-confidence").empty());
  EXPECT_TRUE(chat.CallsFor("doctor-plan").empty());
  EXPECT_TRUE(chat.CallsFor("pharmacist-adopt").empty());
  EXPECT_FALSE(rec.timing_ms);
  EXPECT_NE(rec.doctor.diagnose_prompt.find("Mode: naive-rag"), std::string::npos);
}

TEST(Pipeline, StageFailureIsRecordedWithPartialTrace) {
  for (const auto& [task, stage] : std::vector<std::pair<std::string, std::string>>{
           {"doctor-plan", "doctor.plan"},
           {"doctor-diagnose", "doctor.diagnose"},
           {"pharmacist-adopt", "pharmacist.adopt"},
           {"pharmacist-recommend", "pharmacist.recommend"}}) {
    ScriptedChat chat;
    chat.fail_task = task;
    auto ctx = World().Context(&chat);
    const auto rec = RunConsultation(Case(), ctx, {}, {});
    EXPECT_FALSE(rec.ok);
    EXPECT_EQ(rec.failed_stage, stage);
    EXPECT_FALSE(rec.error.empty());
    if (stage != "doctor.plan") EXPECT_TRUE(rec.doctor.plan);
  }
}

TEST(Record, JsonRoundTripsAndPrettyPrints) {
  ScriptedChat chat;
  chat.confidence["doctor"] = {0.2, 0.9};
  auto ctx = World().Context(&chat);
  auto c = Case();
  c.medication_options = dataset::Options{{"A", "oseltamivir"}, {"B", "aspirin"}};
  const auto rec = RunConsultation(c, ctx, {true, true, true}, {{"seed", 7}});
  ASSERT_TRUE(rec.ok) << rec.error;
  EXPECT_EQ(rec.pharmacist.medication->selected_option, "A");
  const auto j = ToJson(rec);
  EXPECT_EQ(ToJson(RecordFromJson(j)), j);
  EXPECT_EQ(ToJson(RecordFromJson(nlohmann::json::parse(j.dump()))), j);
  const auto pretty = PrettyPrint(rec);
  EXPECT_NE(pretty.find("case-1"), std::string::npos);

  const auto failed = RunConsultation(Case(), World().Context(nullptr), {}, {});
  EXPECT_FALSE(failed.ok);
  EXPECT_EQ(ToJson(RecordFromJson(ToJson(failed))), ToJson(failed));
}

}  // namespace
}  // namespace medpair::agents
