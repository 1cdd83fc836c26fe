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

#include "core/common.hpp"
#include "core/eval/eval.hpp"
#include "core/llm/prompt_format.hpp"
#include "core/text.hpp"
#include "oracles.hpp"
#include "pipeline_support.hpp"
#include "support.hpp"

namespace medpair::eval {
namespace {

agents::ConsultationRecord Record(std::vector<std::string> ranked, std::string drug,
                                  std::optional<std::string> selected = std::nullopt) {
  agents::ConsultationRecord r;
  r.case_id = "c";
  agents::Diagnosis dx;
  for (auto& c : ranked) dx.ranked.push_back({std::move(c), ""});
  r.doctor.diagnosis = dx;
  agents::MedicationPlan m;
  m.recommended.push_back({std::move(drug), ""});
  m.selected_option = std::move(selected);
  r.pharmacist.medication = m;
  return r;
}

dataset::PatientCase Patient(std::string dx, std::string rx) {
  dataset::PatientCase p;
  p.case_id = "c";
  p.complaint = "complaint";
  p.gold_diagnosis = std::move(dx);
  p.gold_medication = std::move(rx);
  return p;
}

TEST(MatchAnswer, NormalizedExactOrOptionLetter) {
  EXPECT_TRUE(MatchAnswer("Acute Bronchitis ", "acute bronchitis", std::nullopt));
  EXPECT_FALSE(MatchAnswer("bronchitis", "acute bronchitis", std::nullopt));
  const dataset::Options o = {{"A", "Flu"}, {"B", "Cold"}, {"C", "Asthma"}};
  EXPECT_TRUE(MatchAnswer("B", "B", o));
  EXPECT_TRUE(MatchAnswer("cold", "B", o));
  EXPECT_FALSE(MatchAnswer("A", "B", o));
  EXPECT_FALSE(MatchAnswer("Z", "Z", o));
}

TEST(ScoreCase, TopKFromRankAndDrugFromPrimary) {
  const auto p = Patient("flu", "oseltamivir");
  auto o = ScoreCase(Record({"cold", "flu", "asthma"}, "oseltamivir"), p);
  EXPECT_FALSE(o.top1_hit);
  EXPECT_TRUE(o.top3_hit);
  EXPECT_TRUE(o.drug_hit);
  o = ScoreCase(Record({"flu", "cold", "asthma"}, "aspirin"), p);
  EXPECT_TRUE(o.top1_hit && o.top3_hit);
  EXPECT_FALSE(o.drug_hit);
  o = ScoreCase(Record({"a", "b", "c", "flu"}, "x"), p);
  EXPECT_FALSE(o.top3_hit);

  auto failed = Record({"flu", "b", "c"}, "oseltamivir");
  failed.ok = false;
  o = ScoreCase(failed, p);
  EXPECT_TRUE(o.failed);
  EXPECT_FALSE(o.top1_hit || o.top3_hit || o.drug_hit);
}

TEST(ScoreCase, OptionCasesUseTheSelectedLetter) {
  auto p = Patient("flu", "B");
  p.medication_options = dataset::Options{{"A", "aspirin"}, {"B", "oseltamivir"}};
  EXPECT_TRUE(ScoreCase(Record({"flu", "b", "c"}, "aspirin", "B"), p).drug_hit);
  EXPECT_FALSE(ScoreCase(Record({"flu", "b", "c"}, "oseltamivir", "A"), p).drug_hit);
}

TEST(Aggregate, ExactRatiosSortedOutcomes) {
  const auto r = Aggregate({{"c3", true, true, false, false},
                            {"c1", false, true, true, false},
                            {"c2", true, true, true, false}});
  EXPECT_EQ(r.top1_hits, 2);
  EXPECT_EQ(r.top1_acc, 2.0 / 3.0);
  EXPECT_NEAR(r.top1_acc, 0.6667, 5e-5);
  EXPECT_EQ(r.top3_acc, 1.0);
  EXPECT_EQ(r.outcomes.front().case_id, "c1");
  EXPECT_THROW(Aggregate({}), Error);
}

TEST(Aggregate, RandomOutcomeSetsKeepTop1BelowTop3) {
  std::mt19937_64 rng(17);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = std::uniform_int_distribution<int>(1, 40)(rng);
    std::vector<CaseOutcome> outs;
    int t1 = 0, t3 = 0, d = 0;
    for (int i = 0; i < n; ++i) {
      CaseOutcome o;
      o.case_id = "c" + std::to_string(i);
      o.top3_hit = coin(rng);
      o.top1_hit = o.top3_hit && coin(rng);
      o.drug_hit = coin(rng);
      t1 += o.top1_hit;
      t3 += o.top3_hit;
      d += o.drug_hit;
      outs.push_back(o);
    }
    const auto r = Aggregate(outs);
    ASSERT_LE(r.top1_acc, r.top3_acc);
    ASSERT_EQ(r.top1_acc, static_cast<double>(t1) / n);
    ASSERT_EQ(r.top3_acc, static_cast<double>(t3) / n);
    ASSERT_EQ(r.drug_acc, static_cast<double>(d) / n);
  }
}

TEST(Rouge, HandDerivedValues) {
  const auto s = Rouge("the cat sat", "the cat ran");
  EXPECT_DOUBLE_EQ(s.rouge1_f1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.rouge2_f1, 0.5);
  EXPECT_DOUBLE_EQ(s.rougeL_f1, 2.0 / 3.0);
  const auto same = Rouge("a b c", "A, b. c");
  EXPECT_EQ(same.rouge1_f1, 1.0);
  EXPECT_EQ(same.rouge2_f1, 1.0);
  EXPECT_EQ(same.rougeL_f1, 1.0);
  const auto none = Rouge("x y", "z w");
  EXPECT_EQ(none.rouge1_f1 + none.rouge2_f1 + none.rougeL_f1, 0.0);
  const auto empty = Rouge("...", "x");
  EXPECT_EQ(empty.rouge1_f1 + empty.rouge2_f1 + empty.rougeL_f1, 0.0);
}

TEST(Rouge, MatchesNaiveOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = testing::RandomText(rng, 14);
    const auto b = testing::RandomText(rng, 14);
    const auto got = Rouge(a, b);
    const auto want = testing::RougeOracle(a, b);
    ASSERT_NEAR(got.rouge1_f1, want.r1, 1e-9) << a << " | " << b;
    ASSERT_NEAR(got.rouge2_f1, want.r2, 1e-9) << a << " | " << b;
    ASSERT_NEAR(got.rougeL_f1, want.rl, 1e-9) << a << " | " << b;
  }
}

TEST(Summarize, MeanMedianHistogram) {
  const auto d = Summarize({0.0, 0.05, 0.1, 0.95, 1.0});
  EXPECT_DOUBLE_EQ(d.mean, 0.42);
  EXPECT_DOUBLE_EQ(d.median, 0.1);
  EXPECT_EQ(d.histogram[0], 2);
  EXPECT_EQ(d.histogram[1], 1);
  EXPECT_EQ(d.histogram[9], 2);
  EXPECT_DOUBLE_EQ(Summarize({0.2, 0.4}).median, 0.3);
  EXPECT_EQ(Summarize({}).mean, 0.0);
}

// Judge whose score for "[doc i] s=<n>" is n.
testing::FnChat ScoreEcho() {
  return testing::FnChat([](const llm::ChatRequest& r) {
    std::vector<int> scores;
    for (const auto& line : text::SplitLines(r.user_prompt)) {
      const auto at = line.find("s=");
      if (line.rfind("[doc ", 0) == 0 && at != std::string::npos) {
        scores.push_back(std::stoi(line.substr(at + 2)));
      }
    }
    return llm::json{{"scores", scores}}.dump();
  });
}

TEST(JudgeCase, MaxOverDocuments) {
  auto judge = ScoreEcho();
  auto j = JudgeCase(judge, "q", {"s=3", "s=7", "s=5"}, "gold", {1, 0});
  EXPECT_EQ(j.relevance, 7);
  EXPECT_EQ(j.contribution, 7);
  EXPECT_EQ(JudgeCase(judge, "q", {"s=6"}, "gold", {1, 0}).relevance, 6);
  const auto empty = JudgeCase(judge, "q", {}, "gold", {1, 0});
  EXPECT_EQ(empty.relevance + empty.contribution, 0);
}

TEST(JudgeCase, AddingADocumentNeverLowersTheScore) {
  auto judge = ScoreEcho();
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> score(0, 10);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> docs;
    const auto n = std::uniform_int_distribution<int>(0, 6)(rng);
    int max_seen = 0;
    for (int i = 0; i < n; ++i) {
      const int s = score(rng);
      max_seen = std::max(max_seen, s);
      docs.push_back("s=" + std::to_string(s));
    }
    const auto before = JudgeCase(judge, "q", docs, "g", {1, 0});
    ASSERT_EQ(before.relevance, max_seen);
    docs.push_back("s=" + std::to_string(score(rng)));
    const auto after = JudgeCase(judge, "q", docs, "g", {1, 0});
    ASSERT_GE(after.relevance, before.relevance);
    ASSERT_GE(after.contribution, before.contribution);
  }
}

TEST(JudgeCase, BackendErrorsPropagate) {
  testing::FnChat dead([](const llm::ChatRequest&) -> std::string {
    throw llm::TransportError("down");
  });
  EXPECT_THROW(JudgeCase(dead, "q", {"d"}, "g", {1, 0}), Error);
}

const testing::SmallWorld& World() {
  static const testing::SmallWorld w;
  return w;
}

std::vector<dataset::PatientCase> Cases(int n) {
  std::vector<dataset::PatientCase> out;
  for (int i = n; i > 0; --i) {
    auto p = Patient("influenza", "oseltamivir");
    p.case_id = "case-" + std::to_string(100 + i);
    p.complaint = i % 2 ? "Fever and cough." : "Wheeze at night.";
    out.push_back(p);
  }
  return out;
}

TEST(RunCases, OutputIsOrderedAndIndependentOfWorkers) {
  const auto cases = Cases(9);
  testing::ScriptedChat c1, c4;
  c1.confidence["doctor"] = c4.confidence["doctor"] = {0.2, 0.9};
  const auto a = RunCases(cases, World().Context(&c1), {}, {{"x", 1}}, 1);
  const auto b = RunCases(cases, World().Context(&c4), {}, {{"x", 1}}, 4);
  ASSERT_EQ(a.size(), 9u);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LT(a[i - 1].case_id, a[i].case_id);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(agents::ToJson(a[i]).dump(), agents::ToJson(b[i]).dump());
  }
  EXPECT_EQ(ToJson(ScoreRun(a, cases)).dump(), ToJson(ScoreRun(b, cases)).dump());
}

TEST(SpecializationOverlap, IdenticalEvidenceScoresOneAndMissingTracesAreSkipped) {
  agents::ConsultationRecord same;
  same.case_id = "a";
  same.doctor.retrieval.final_evidence = {{"x#0000", "alpha beta", 0, 1, 1}};
  same.pharmacist.retrieval.final_evidence = same.doctor.retrieval.final_evidence;
  agents::ConsultationRecord disjoint = same;
  disjoint.case_id = "b";
  disjoint.pharmacist.retrieval.final_evidence = {{"y#0000", "gamma delta", 0, 1, 1}};
  agents::ConsultationRecord missing;
  missing.case_id = "c";
  const auto s = SpecializationOverlap({disjoint, same, missing});
  EXPECT_EQ(s.skipped, 1);
  ASSERT_EQ(s.per_case.size(), 2u);
  EXPECT_EQ(s.per_case[0].first, "a");
  EXPECT_EQ(s.per_case[0].second.rougeL_f1, 1.0);
  EXPECT_EQ(s.per_case[1].second.rouge1_f1, 0.0);
  EXPECT_DOUBLE_EQ(s.rouge1.mean, 0.5);
}

TEST(SpecializationOverlap, ConcatenatesInChunkIdOrderLikeTheOracle) {
  agents::ConsultationRecord r;
  r.case_id = "a";
  r.doctor.retrieval.final_evidence = {{"b#0000", "cat sat", 0, 0.9, 1}, {"a#0000", "the", 0, 0.1, 2}};
  r.pharmacist.retrieval.final_evidence = {{"z#0000", "the cat ran", 0, 1, 1}};
  const auto s = SpecializationOverlap({r});
  const auto want = testing::RougeOracle("the\ncat sat", "the cat ran");
  EXPECT_NEAR(s.per_case[0].second.rouge2_f1, want.r2, 1e-12);
  EXPECT_DOUBLE_EQ(s.per_case[0].second.rouge2_f1, 0.5);
}

TEST(Ablation, TableShapeAndFormatting) {
  const auto cases = Cases(4);
  testing::ScriptedChat chat;
  const auto rows = RunAblation(cases, World().Context(&chat), FullAblationGrid(), {}, 2);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(rows[0].doctor_agent && rows[0].pharmacist_agent);
  EXPECT_FALSE(rows[3].doctor_agent || rows[3].pharmacist_agent);
  const auto table = AblationTable(rows);
  const auto lines = text::SplitLines(table);
  EXPECT_EQ(lines[0], "doctor\tpharmacist\tn_cases\ttop1_acc\ttop3_acc\tdrug_acc\tfailed");
  EXPECT_EQ(lines[1].rfind("agent\tagent\t4\t", 0), 0u);
  EXPECT_EQ(lines[4].rfind("naive\tnaive\t4\t", 0), 0u);
  EXPECT_EQ(AblationJson(rows).size(), 4u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.report.outcomes.size(), 4u);
    EXPECT_EQ(row.report.outcomes[0].case_id, "case-101");
  }
}

}  // namespace
}  // namespace medpair::eval
