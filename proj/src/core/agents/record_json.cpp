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

#include <iomanip>
#include <sstream>

#include "core/agents/agents.hpp"

namespace medpair::agents {
namespace {

using nlohmann::json;

template <typename T, typename F>
json OptionalToJson(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : json(nullptr);
}

json ToJson(const DiagnosticPlan& p) {
  return {{"department", p.department},
          {"queries", p.queries},
          {"reasoning", p.reasoning},
          {"notes", p.notes}};
}

DiagnosticPlan PlanFromJson(const json& j) {
  DiagnosticPlan p;
  p.department = j.at("department").get<std::string>();
  p.queries = j.at("queries").get<std::vector<std::string>>();
  p.reasoning = j.at("reasoning").get<std::string>();
  p.notes = j.at("notes").get<std::vector<std::string>>();
  return p;
}

json ToJson(const ConfidenceReport& r) {
  return {{"sufficiency", r.sufficiency},
          {"accuracy", r.accuracy},
          {"overall", r.overall},
          {"rationale", r.rationale}};
}

ConfidenceReport ReportFromJson(const json& j) {
  ConfidenceReport r;
  r.sufficiency = j.at("sufficiency").get<double>();
  r.accuracy = j.at("accuracy").get<double>();
  r.overall = j.at("overall").get<double>();
  r.rationale = j.at("rationale").get<std::string>();
  return r;
}

json DocsToJson(const std::vector<RetrievedDoc>& docs) {
  json arr = json::array();
  for (const auto& d : docs) arr.push_back(retrieval::ToJson(d));
  return arr;
}

std::vector<RetrievedDoc> DocsFromJson(const json& j) {
  std::vector<RetrievedDoc> out;
  for (const auto& d : j) out.push_back(retrieval::RetrievedDocFromJson(d));
  return out;
}

json ToJson(const ReflectionTrace& t) {
  json rounds = json::array();
  for (const auto& r : t.rounds) {
    json results = json::array();
    for (const auto& res : r.results) results.push_back(retrieval::ToJson(res));
    rounds.push_back({{"round", r.round},
                      {"queries", r.queries},
                      {"results", results},
                      {"evidence", DocsToJson(r.evidence)},
                      {"report", OptionalToJson(r.report, [](const auto& x) { return ToJson(x); })},
                      {"notes", r.notes}});
  }
  return {{"rounds", rounds},
          {"best_round", t.best_round},
          {"final_evidence", DocsToJson(t.final_evidence)}};
}

ReflectionTrace TraceFromJson(const json& j) {
  ReflectionTrace t;
  for (const auto& r : j.at("rounds")) {
    RoundTrace rt;
    rt.round = r.at("round").get<int>();
    rt.queries = r.at("queries").get<std::vector<std::string>>();
    for (const auto& res : r.at("results")) {
      rt.results.push_back(retrieval::RetrievalResultFromJson(res));
    }
    rt.evidence = DocsFromJson(r.at("evidence"));
    if (!r.at("report").is_null()) rt.report = ReportFromJson(r["report"]);
    rt.notes = r.at("notes").get<std::vector<std::string>>();
    t.rounds.push_back(std::move(rt));
  }
  t.best_round = j.at("best_round").get<int>();
  t.final_evidence = DocsFromJson(j.at("final_evidence"));
  return t;
}

json ToJson(const Diagnosis& d) {
  json ranked = json::array();
  for (const auto& r : d.ranked) {
    ranked.push_back({{"condition", r.condition}, {"rationale", r.rationale}});
  }
  return {{"ranked", ranked}};
}

Diagnosis DiagnosisFromJson(const json& j) {
  Diagnosis d;
  for (const auto& r : j.at("ranked")) {
    d.ranked.push_back({r.at("condition").get<std::string>(),
                        r.at("rationale").get<std::string>()});
  }
  return d;
}

json ToJson(const MedicationPlan& m) {
  json rec = json::array();
  for (const auto& r : m.recommended) {
    rec.push_back({{"drug", r.drug}, {"rationale", r.rationale}});
  }
  return {{"recommended", rec},
          {"selected_option",
           OptionalToJson(m.selected_option, [](const auto& s) { return json(s); })}};
}

MedicationPlan MedicationFromJson(const json& j) {
  MedicationPlan m;
  for (const auto& r : j.at("recommended")) {
    m.recommended.push_back({r.at("drug").get<std::string>(),
                             r.at("rationale").get<std::string>()});
  }
  if (!j.at("selected_option").is_null()) {
    m.selected_option = j["selected_option"].get<std::string>();
  }
  return m;
}

std::string ModeName(AgentMode m) { return m == AgentMode::kAgent ? "agent" : "naive-rag"; }

AgentMode ParseMode(const std::string& s) {
  if (s == "agent") return AgentMode::kAgent;
  if (s == "naive-rag") return AgentMode::kNaive;
  throw Error(ErrorCode::kFormat, "unknown agent mode '" + s + "'");
}

}  // namespace

nlohmann::json ToJson(const ConsultationRecord& r) {
  json doctor = {
      {"mode", ModeName(r.doctor.mode)},
      {"plan", OptionalToJson(r.doctor.plan, [](const auto& p) { return ToJson(p); })},
      {"plan_prompt", r.doctor.plan_prompt},
      {"retrieval", ToJson(r.doctor.retrieval)},
      {"diagnose_prompt", r.doctor.diagnose_prompt},
      {"diagnosis", OptionalToJson(r.doctor.diagnosis, [](const auto& d) { return ToJson(d); })},
  };
  json pharmacist = {
      {"mode", ModeName(r.pharmacist.mode)},
      {"adoption", OptionalToJson(r.pharmacist.adoption,
                                  [](const auto& a) {
                                    return json{{"adopt", a.adopt},
                                                {"justification", a.justification}};
                                  })},
      {"plan_prompt", r.pharmacist.plan_prompt},
      {"queries", r.pharmacist.queries},
      {"retrieval", ToJson(r.pharmacist.retrieval)},
      {"recommend_prompt", r.pharmacist.recommend_prompt},
      {"medication",
       OptionalToJson(r.pharmacist.medication, [](const auto& m) { return ToJson(m); })},
  };
  return {{"case_id", r.case_id},
          {"status", r.ok ? "ok" : "failed"},
          {"failed_stage", r.failed_stage},
          {"error", r.error},
          {"config", r.config},
          {"doctor", doctor},
          {"pharmacist", pharmacist},
          {"timing_ms", r.timing_ms ? *r.timing_ms : json(nullptr)}};
}

ConsultationRecord RecordFromJson(const nlohmann::json& j) {
  ConsultationRecord r;
  try {
    r.case_id = j.at("case_id").get<std::string>();
    r.ok = j.at("status").get<std::string>() == "ok";
    r.failed_stage = j.at("failed_stage").get<std::string>();
    r.error = j.at("error").get<std::string>();
    r.config = j.at("config");
    const auto& d = j.at("doctor");
    r.doctor.mode = ParseMode(d.at("mode").get<std::string>());
    if (!d.at("plan").is_null()) r.doctor.plan = PlanFromJson(d["plan"]);
    r.doctor.plan_prompt = d.at("plan_prompt").get<std::string>();
    r.doctor.retrieval = TraceFromJson(d.at("retrieval"));
    r.doctor.diagnose_prompt = d.at("diagnose_prompt").get<std::string>();
    if (!d.at("diagnosis").is_null()) r.doctor.diagnosis = DiagnosisFromJson(d["diagnosis"]);
    const auto& p = j.at("pharmacist");
    r.pharmacist.mode = ParseMode(p.at("mode").get<std::string>());
    if (!p.at("adoption").is_null()) {
      r.pharmacist.adoption = AdoptionDecision{p["adoption"].at("adopt").get<bool>(),
                                               p["adoption"].at("justification").get<std::string>()};
    }
    r.pharmacist.plan_prompt = p.at("plan_prompt").get<std::string>();
    r.pharmacist.queries = p.at("queries").get<std::vector<std::string>>();
    r.pharmacist.retrieval = TraceFromJson(p.at("retrieval"));
    r.pharmacist.recommend_prompt = p.at("recommend_prompt").get<std::string>();
    if (!p.at("medication").is_null()) {
      r.pharmacist.medication = MedicationFromJson(p["medication"]);
    }
    if (j.contains("timing_ms") && !j["timing_ms"].is_null()) r.timing_ms = j["timing_ms"];
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("malformed consultation record: ") + e.what());
  }
  return r;
}

std::string PrettyPrint(const ConsultationRecord& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  auto print_retrieval = [&os](const ReflectionTrace& t) {
    for (const auto& round : t.rounds) {
      os << "  round " << round.round << "\n";
      for (const auto& q : round.queries) os << "    query: " << q << "\n";
      for (const auto& d : round.evidence) {
        os << "    #" << d.rank << " " << d.chunk_id << " rerank=" << d.rerank_score
           << " cosine=" << d.coarse_score << "\n";
      }
      if (round.report) {
        os << "    confidence: sufficiency=" << round.report->sufficiency
           << " accuracy=" << round.report->accuracy
           << " overall=" << round.report->overall << "\n";
      }
      for (const auto& n : round.notes) os << "    note: " << n << "\n";
    }
    os << "  best round: " << t.best_round << " (" << t.final_evidence.size()
       << " evidence chunks)\n";
  };

  os << "== consultation " << r.case_id << " [" << (r.ok ? "ok" : "failed") << "]\n";
  if (!r.ok) os << "failed at " << r.failed_stage << ": " << r.error << "\n";

  os << "\n-- doctor (" << ModeName(r.doctor.mode) << ")\n";
  if (r.doctor.plan) {
    os << "  department: " << r.doctor.plan->department << "\n";
    for (const auto& n : r.doctor.plan->notes) os << "  note: " << n << "\n";
  }
  print_retrieval(r.doctor.retrieval);
  if (r.doctor.diagnosis) {
    os << "  diagnosis:\n";
    for (std::size_t i = 0; i < r.doctor.diagnosis->ranked.size(); ++i) {
      os << "    " << (i + 1) << ". " << r.doctor.diagnosis->ranked[i].condition << "\n";
    }
  }

  os << "\n-- pharmacist (" << ModeName(r.pharmacist.mode) << ")\n";
  if (r.pharmacist.adoption) {
    os << "  adopt diagnosis: " << (r.pharmacist.adoption->adopt ? "yes" : "no") << "\n";
  }
  print_retrieval(r.pharmacist.retrieval);
  if (r.pharmacist.medication) {
    os << "  medication:\n";
    for (const auto& d : r.pharmacist.medication->recommended) os << "    - " << d.drug << "\n";
    if (r.pharmacist.medication->selected_option) {
      os << "  selected option: " << *r.pharmacist.medication->selected_option << "\n";
    }
  }
  return os.str();
}

}  // namespace medpair::agents
