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

#include "core/eval/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "core/common.hpp"
#include "core/llm/client.hpp"
#include "core/text.hpp"

namespace medpair::eval {

using nlohmann::json;

bool MatchAnswer(const std::string& predicted, const std::string& gold,
                 const std::optional<dataset::Options>& options) {
  if (options) {
    auto p = dataset::ResolveOption(*options, predicted);
    auto g = dataset::ResolveOption(*options, gold);
    return p && g && *p == *g;
  }
  auto g = text::NormalizeAnswer(gold);
  return !g.empty() && text::NormalizeAnswer(predicted) == g;
}

CaseOutcome ScoreCase(const agents::ConsultationRecord& record,
                      const dataset::PatientCase& patient) {
  CaseOutcome out;
  out.case_id = patient.case_id;
  if (!record.ok || !record.doctor.diagnosis || !record.pharmacist.medication) {
    out.failed = true;
    return out;
  }
  const auto& ranked = record.doctor.diagnosis->ranked;
  for (std::size_t i = 0; i < ranked.size() && i < 3; ++i) {
    if (MatchAnswer(ranked[i].condition, patient.gold_diagnosis,
                    patient.diagnosis_options)) {
      if (i == 0) out.top1_hit = true;
      out.top3_hit = true;
      break;
    }
  }
  const auto& med = *record.pharmacist.medication;
  std::string drug;
  if (patient.medication_options && med.selected_option) {
    drug = *med.selected_option;
  } else if (!med.recommended.empty()) {
    drug = med.recommended.front().drug;
  }
  out.drug_hit = MatchAnswer(drug, patient.gold_medication, patient.medication_options);
  return out;
}

RunReport Aggregate(std::vector<CaseOutcome> outcomes) {
  if (outcomes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot aggregate an empty outcome set");
  }
  std::sort(outcomes.begin(), outcomes.end(),
            [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  RunReport r;
  r.n_cases = static_cast<int>(outcomes.size());
  for (const auto& o : outcomes) {
    r.top1_hits += o.top1_hit;
    r.top3_hits += o.top3_hit;
    r.drug_hits += o.drug_hit;
    r.failed_cases += o.failed;
  }
  const double n = r.n_cases;
  r.top1_acc = r.top1_hits / n;
  r.top3_acc = r.top3_hits / n;
  r.drug_acc = r.drug_hits / n;
  r.outcomes = std::move(outcomes);
  return r;
}

CaseJudgement JudgeCase(llm::ChatBackend& judge, const std::string& question,
                        const std::vector<std::string>& docs, const std::string& gold,
                        const llm::RetryPolicy& retry) {
  CaseJudgement out;
  if (docs.empty()) return out;
  auto rel = llm::Judge(judge, question, docs, llm::Rubric::kRelevance, std::nullopt, retry);
  auto con = llm::Judge(judge, question, docs, llm::Rubric::kContribution, gold, retry);
  out.relevance = *std::max_element(rel.begin(), rel.end());
  out.contribution = *std::max_element(con.begin(), con.end());
  return out;
}

namespace {

std::string GoldText(const std::optional<dataset::Options>& options,
                     const std::string& gold) {
  if (!options) return gold;
  auto letter = dataset::ResolveOption(*options, gold);
  for (const auto& o : *options) {
    if (letter && o.letter == *letter) return o.text;
  }
  return gold;
}

std::vector<std::string> EvidenceTexts(const std::vector<agents::RetrievedDoc>& docs) {
  std::vector<std::string> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(d.text);
  return out;
}

std::map<std::string, const dataset::PatientCase*> IndexCases(
    const std::vector<dataset::PatientCase>& cases) {
  std::map<std::string, const dataset::PatientCase*> by_id;
  for (const auto& c : cases) by_id[c.case_id] = &c;
  return by_id;
}

}  // namespace

JudgeSummary JudgeRun(llm::ChatBackend& judge,
                      const std::vector<agents::ConsultationRecord>& records,
                      const std::vector<dataset::PatientCase>& cases,
                      const llm::RetryPolicy& retry) {
  auto by_id = IndexCases(cases);
  JudgeSummary s;
  long dr = 0, dc = 0, pr = 0, pc = 0;
  for (const auto& rec : records) {
    auto it = by_id.find(rec.case_id);
    if (!rec.ok || it == by_id.end()) continue;
    const auto& c = *it->second;
    auto d = JudgeCase(judge, c.complaint, EvidenceTexts(rec.doctor.retrieval.final_evidence),
                       GoldText(c.diagnosis_options, c.gold_diagnosis), retry);
    auto p = JudgeCase(judge, c.complaint,
                       EvidenceTexts(rec.pharmacist.retrieval.final_evidence),
                       GoldText(c.medication_options, c.gold_medication), retry);
    dr += d.relevance;
    dc += d.contribution;
    pr += p.relevance;
    pc += p.contribution;
    ++s.doctor.n;
    ++s.pharmacist.n;
  }
  if (s.doctor.n > 0) {
    s.doctor.mean_relevance = static_cast<double>(dr) / s.doctor.n;
    s.doctor.mean_contribution = static_cast<double>(dc) / s.doctor.n;
    s.pharmacist.mean_relevance = static_cast<double>(pr) / s.pharmacist.n;
    s.pharmacist.mean_contribution = static_cast<double>(pc) / s.pharmacist.n;
  }
  return s;
}

namespace {

using Counts = std::unordered_map<std::string, int>;

Counts NGrams(const std::vector<std::string>& tokens, std::size_t n) {
  Counts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) key += '\x1f' + tokens[i + k];
    ++counts[key];
  }
  return counts;
}

double F1(double overlap, double cand_total, double ref_total) {
  if (overlap <= 0.0 || cand_total <= 0.0 || ref_total <= 0.0) return 0.0;
  const double p = overlap / cand_total;
  const double r = overlap / ref_total;
  return 2.0 * p * r / (p + r);
}

double NGramF1(const std::vector<std::string>& c, const std::vector<std::string>& r,
               std::size_t n) {
  if (c.size() < n || r.size() < n) return 0.0;
  auto cc = NGrams(c, n);
  auto rc = NGrams(r, n);
  long overlap = 0;
  for (const auto& [k, v] : cc) {
    auto it = rc.find(k);
    if (it != rc.end()) overlap += std::min(v, it->second);
  }
  return F1(static_cast<double>(overlap), static_cast<double>(c.size() - n + 1),
            static_cast<double>(r.size() - n + 1));
}

std::size_t Lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

RougeScores Rouge(const std::string& candidate, const std::string& reference) {
  RougeScores s;
  auto c = text::Tokenize(candidate);
  auto r = text::Tokenize(reference);
  if (c.empty() || r.empty()) return s;
  s.rouge1_f1 = NGramF1(c, r, 1);
  s.rouge2_f1 = NGramF1(c, r, 2);
  s.rougeL_f1 = F1(static_cast<double>(Lcs(c, r)), static_cast<double>(c.size()),
                   static_cast<double>(r.size()));
  return s;
}

Distribution Summarize(std::vector<double> values) {
  Distribution d;
  if (values.empty()) return d;
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    int bin = static_cast<int>(std::floor(v * 10.0));
    d.histogram[std::clamp(bin, 0, 9)]++;
  }
  d.mean = sum / values.size();
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  d.median = values.size() % 2 ? values[m] : (values[m - 1] + values[m]) / 2.0;
  return d;
}

namespace {

std::string ConcatenateEvidence(std::vector<agents::RetrievedDoc> docs) {
  std::sort(docs.begin(), docs.end(),
            [](const auto& a, const auto& b) { return a.chunk_id < b.chunk_id; });
  std::string out;
  for (const auto& d : docs) {
    if (!out.empty()) out += '\n';
    out += d.text;
  }
  return out;
}

}  // namespace

OverlapSummary SpecializationOverlap(
    const std::vector<agents::ConsultationRecord>& records) {
  OverlapSummary s;
  std::vector<double> r1, r2, rl;
  for (const auto& rec : records) {
    const auto& de = rec.doctor.retrieval.final_evidence;
    const auto& pe = rec.pharmacist.retrieval.final_evidence;
    if (!rec.ok || de.empty() || pe.empty()) {
      ++s.skipped;
      continue;
    }
    auto scores = Rouge(ConcatenateEvidence(de), ConcatenateEvidence(pe));
    s.per_case.emplace_back(rec.case_id, scores);
    r1.push_back(scores.rouge1_f1);
    r2.push_back(scores.rouge2_f1);
    rl.push_back(scores.rougeL_f1);
  }
  std::sort(s.per_case.begin(), s.per_case.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  s.rouge1 = Summarize(std::move(r1));
  s.rouge2 = Summarize(std::move(r2));
  s.rougeL = Summarize(std::move(rl));
  return s;
}

std::vector<agents::ConsultationRecord> RunCases(
    const std::vector<dataset::PatientCase>& cases, const agents::AgentContext& ctx,
    const agents::PipelineFlags& flags, const json& config_snapshot, int workers) {
  std::vector<agents::ConsultationRecord> out(cases.size());
  const std::size_t width =
      std::max<std::size_t>(1, std::min<std::size_t>(workers < 1 ? 1 : workers, cases.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      out[i] = agents::RunConsultation(cases[i], ctx, flags, config_snapshot);
    }
  };
  if (width == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < width; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  return out;
}

RunReport ScoreRun(const std::vector<agents::ConsultationRecord>& records,
                   const std::vector<dataset::PatientCase>& cases) {
  auto by_id = IndexCases(cases);
  std::vector<CaseOutcome> outcomes;
  for (const auto& rec : records) {
    auto it = by_id.find(rec.case_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "record for unknown case '" + rec.case_id + "'");
    }
    outcomes.push_back(ScoreCase(rec, *it->second));
  }
  auto report = Aggregate(std::move(outcomes));
  report.rouge = SpecializationOverlap(records);
  return report;
}

std::vector<std::pair<bool, bool>> FullAblationGrid() {
  return {{true, true}, {true, false}, {false, true}, {false, false}};
}

std::vector<AblationRow> RunAblation(const std::vector<dataset::PatientCase>& cases,
                                     const agents::AgentContext& ctx,
                                     const std::vector<std::pair<bool, bool>>& grid,
                                     const json& config_snapshot, int workers) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty ablation grid");
  std::vector<AblationRow> rows;
  for (const auto& [doctor_on, pharmacist_on] : grid) {
    agents::PipelineFlags flags;
    flags.doctor_agent = doctor_on;
    flags.pharmacist_agent = pharmacist_on;
    json snapshot = config_snapshot;
    snapshot["doctor_agent"] = doctor_on;
    snapshot["pharmacist_agent"] = pharmacist_on;
    auto records = RunCases(cases, ctx, flags, snapshot, workers);
    rows.push_back({doctor_on, pharmacist_on, ScoreRun(records, cases)});
  }
  return rows;
}

namespace {

json ToJson(const RougeScores& s) {
  return {{"rouge1_f1", s.rouge1_f1}, {"rouge2_f1", s.rouge2_f1}, {"rougeL_f1", s.rougeL_f1}};
}

json ToJson(const Distribution& d) {
  return {{"mean", d.mean}, {"median", d.median}, {"histogram", d.histogram}};
}

json ToJson(const RoleJudgeSummary& s) {
  return {{"n", s.n},
          {"mean_relevance", s.mean_relevance},
          {"mean_contribution", s.mean_contribution}};
}

std::string Fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

const char* OnOff(bool on) { return on ? "agent" : "naive"; }

}  // namespace

json ToJson(const CaseOutcome& o) {
  return {{"case_id", o.case_id},
          {"top1_hit", o.top1_hit},
          {"top3_hit", o.top3_hit},
          {"drug_hit", o.drug_hit},
          {"failed", o.failed}};
}

json ToJson(const OverlapSummary& s) {
  json per_case = json::array();
  for (const auto& [id, scores] : s.per_case) {
    json row = ToJson(scores);
    row["case_id"] = id;
    per_case.push_back(row);
  }
  return {{"scored", s.per_case.size()},
          {"skipped", s.skipped},
          {"rouge1", ToJson(s.rouge1)},
          {"rouge2", ToJson(s.rouge2)},
          {"rougeL", ToJson(s.rougeL)},
          {"per_case", per_case}};
}

json ToJson(const JudgeSummary& s) {
  return {{"doctor", ToJson(s.doctor)}, {"pharmacist", ToJson(s.pharmacist)}};
}

json ToJson(const RunReport& r) {
  json outcomes = json::array();
  for (const auto& o : r.outcomes) outcomes.push_back(ToJson(o));
  return {{"n_cases", r.n_cases},
          {"failed_cases", r.failed_cases},
          {"hits", {{"top1", r.top1_hits}, {"top3", r.top3_hits}, {"drug", r.drug_hits}}},
          {"top1_acc", r.top1_acc},
          {"top3_acc", r.top3_acc},
          {"drug_acc", r.drug_acc},
          {"outcomes", outcomes},
          {"judge", r.judge ? ToJson(*r.judge) : json(nullptr)},
          {"rouge", r.rouge ? ToJson(*r.rouge) : json(nullptr)}};
}

std::string AblationTable(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "doctor\tpharmacist\tn_cases\ttop1_acc\ttop3_acc\tdrug_acc\tfailed\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    os << OnOff(row.doctor_agent) << '\t' << OnOff(row.pharmacist_agent) << '\t' << r.n_cases
       << '\t' << Fixed4(r.top1_acc) << '\t' << Fixed4(r.top3_acc) << '\t'
       << Fixed4(r.drug_acc) << '\t' << r.failed_cases << '\n';
  }
  return os.str();
}

json AblationJson(const std::vector<AblationRow>& rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    arr.push_back({{"doctor_agent", row.doctor_agent},
                   {"pharmacist_agent", row.pharmacist_agent},
                   {"report", ToJson(row.report)}});
  }
  return arr;
}

}  // namespace medpair::eval
