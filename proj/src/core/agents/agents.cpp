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

#include "core/agents/agents.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

#include "core/agents/prompts.hpp"
#include "core/llm/client.hpp"
#include "core/llm/prompt_format.hpp"
#include "core/text.hpp"

namespace medpair::agents {
namespace {

using llm::json;
using llm::PromptBuilder;
using llm::SchemaTag;

// Default prompt wording. Not canonical; tune per deployment.
constexpr const char* kDoctorSystem =
    "You are a doctor agent in a clinical team. Analyse the patient's chief "
    "complaint and history, assign a clinical department, and reason from "
    "symptoms through diagnostic criteria to a ranked differential diagnosis. "
    "Always answer with a single JSON object.";
constexpr const char* kPharmacistSystem =
    "You are a pharmacist agent in a clinical team. Decide independently "
    "whether to rely on the doctor's diagnosis, then reason about drug "
    "mechanisms, indications, contraindications, interactions and dosing to "
    "recommend medication. Always answer with a single JSON object.";
constexpr const char* kNaiveSystem =
    "Answer the medical question using the retrieved passages. Always answer "
    "with a single JSON object.";

const char* SystemFor(Role role) {
  return role == Role::kDoctor ? kDoctorSystem : kPharmacistSystem;
}

std::string OptString(const json& obj, const char* key) {
  auto it = obj.find(key);
  return (it != obj.end() && it->is_string()) ? it->get<std::string>() : std::string();
}

std::string Flatten(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

std::string EvidenceBlock(const std::vector<RetrievedDoc>& evidence) {
  if (evidence.empty()) return "(none retrieved)";
  std::ostringstream os;
  for (const auto& d : evidence) os << "[" << d.chunk_id << "] " << Flatten(d.text) << "\n";
  return os.str();
}

std::string ListBlock(const std::vector<std::string>& items) {
  std::ostringstream os;
  for (const auto& q : items) os << "- " << Flatten(q) << "\n";
  return os.str();
}

std::string OptionsBlock(const dataset::Options& options) {
  std::ostringstream os;
  for (const auto& o : options) os << o.letter << ". " << Flatten(o.text) << "\n";
  return os.str();
}

std::string DiagnosisBlock(const Diagnosis& dx) {
  std::ostringstream os;
  for (std::size_t i = 0; i < dx.ranked.size(); ++i) {
    os << (i + 1) << ". " << Flatten(dx.ranked[i].condition);
    if (!dx.ranked[i].rationale.empty()) os << " (" << Flatten(dx.ranked[i].rationale) << ")";
    os << "\n";
  }
  return os.str();
}

std::string OptionsSummary(const dataset::Options& options) {
  std::string s;
  for (const auto& o : options) {
    if (!s.empty()) s += "; ";
    s += o.letter + ". " + o.text;
  }
  return s;
}

llm::StructuredOutput Ask(const AgentContext& ctx, const std::string& system,
                          const std::string& user, SchemaTag tag,
                          const llm::PayloadCheck& check = nullptr) {
  if (ctx.backends.chat == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "no chat backend configured");
  }
  llm::ChatRequest req;
  req.system_prompt = system;
  req.user_prompt = user;
  req.schema_tag = tag;
  return llm::Complete(*ctx.backends.chat, req, ctx.backends.retry, check);
}

std::vector<std::string> CleanQueries(const json& arr, std::size_t q_max,
                                      std::vector<std::string>* notes) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& q : arr) {
    std::string t = text::Trim(q.get<std::string>());
    if (t.empty() || !seen.insert(t).second) continue;
    out.push_back(std::move(t));
  }
  if (out.size() > q_max) {
    if (notes) {
      notes->push_back("truncated " + std::to_string(out.size()) + " queries to q_max=" +
                       std::to_string(q_max));
    }
    out.resize(q_max);
  }
  return out;
}

retrieval::RetrievalParams ParamsFor(Role role, const AgentContext& ctx) {
  retrieval::RetrievalParams p;
  p.top_k = ctx.top_k;
  p.top_n = ctx.top_n;
  p.role = role;
  return p;
}

void RequireRetrieval(const AgentContext& ctx) {
  if (ctx.indexes == nullptr || ctx.backends.embedder == nullptr ||
      ctx.backends.reranker == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "retrieval needs indexes, an embedder and a reranker");
  }
}

}  // namespace

void ReflectionConfig::Validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau must lie in [0, 1]");
  }
  if (r_max < 0) throw Error(ErrorCode::kInvalidArgument, "r_max must be >= 0");
  if (q_max < 1) throw Error(ErrorCode::kInvalidArgument, "q_max must be >= 1");
}

std::vector<std::string> DefaultDepartments() {
  return {"cardiology",     "dermatology",   "endocrinology",  "gastroenterology",
          "general medicine", "gynecology",  "hematology",     "infectious disease",
          "nephrology",     "neurology",     "oncology",       "ophthalmology",
          "otolaryngology", "pediatrics",    "psychiatry",     "pulmonology",
          "rheumatology",   "urology"};
}

PlanResult DoctorPlan(const std::string& complaint, const AgentContext& ctx) {
  if (text::Trim(complaint).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "complaint is empty");
  }
  std::string departments;
  for (const auto& d : ctx.departments) {
    if (!departments.empty()) departments += ", ";
    departments += d;
  }
  PlanResult result;
  result.prompt =
      PromptBuilder()
          .Line(prompt::TaskLine(prompt::kDoctorPlan))
          .Line(prompt::RoleLine("doctor"))
          .Line(prompt::ModeLine(prompt::kModeAgent))
          .Block("Complaint", complaint)
          .Block("Departments", departments)
          .Line("Classify the case into one department from the list, then write "
                "up to " + std::to_string(ctx.reflection.q_max) +
                " targeted literature search queries covering symptoms, diagnostic "
                "criteria and differential diagnosis.")
          .Line("Respond with JSON: {\"department\": \"...\", \"queries\": [\"...\"], "
                "\"reasoning\": \"...\"}")
          .str();
  const auto out = Ask(ctx, kDoctorSystem, result.prompt, SchemaTag::kPlan);

  DiagnosticPlan& plan = result.plan;
  plan.reasoning = OptString(out.payload, "reasoning");
  const std::string dept = text::Trim(out.payload["department"].get<std::string>());
  plan.department = "unknown";
  for (const auto& d : ctx.departments) {
    if (text::NormalizeAnswer(d) == text::NormalizeAnswer(dept)) plan.department = d;
  }
  if (plan.department == "unknown" && text::NormalizeAnswer(dept) != "unknown") {
    plan.notes.push_back("department '" + dept + "' not in configured list; coerced to unknown");
  }
  plan.queries = CleanQueries(out.payload["queries"],
                              static_cast<std::size_t>(ctx.reflection.q_max), &plan.notes);
  if (plan.queries.empty()) {
    throw Error(ErrorCode::kSchema, "plan contains no usable queries");
  }
  if (out.repair_count > 0) plan.notes.push_back("plan reply repaired once");
  return result;
}

ConfidenceReport AssessConfidence(Role role, const QueryContext& query_context,
                                  const std::vector<std::string>& queries,
                                  const std::vector<RetrievedDoc>& evidence,
                                  int round, const AgentContext& ctx) {
  ConfidenceReport report;
  if (evidence.empty()) {
    report.rationale = "no evidence retrieved";
    return report;
  }
  PromptBuilder pb;
  pb.Line(prompt::TaskLine(prompt::kAssessConfidence))
      .Line(prompt::RoleLine(ToString(role)))
      .Line(prompt::RoundLine(round))
      .Block("Complaint", query_context.complaint);
  if (query_context.diagnosis) pb.Block("Diagnosis", *query_context.diagnosis);
  pb.Block("Queries", ListBlock(queries))
      .Block("Evidence", EvidenceBlock(evidence))
      .Line("Rate the evidence: sufficiency (does it cover what is needed to "
            "answer) and accuracy (is it correct and applicable), each in [0, 1].")
      .Line("Respond with JSON: {\"sufficiency\": 0.0, \"accuracy\": 0.0, "
            "\"rationale\": \"...\"}");
  const auto out = Ask(ctx, SystemFor(role), pb.str(), SchemaTag::kConfidence);
  report.sufficiency = out.payload["sufficiency"].get<double>();
  report.accuracy = out.payload["accuracy"].get<double>();
  report.overall = std::min(report.sufficiency, report.accuracy);
  report.rationale = OptString(out.payload, "rationale");
  return report;
}

std::vector<std::string> RegenerateQueries(
    Role role, const QueryContext& query_context,
    const std::vector<std::string>& previous, const ConfidenceReport& report,
    int next_round, const AgentContext& ctx) {
  PromptBuilder pb;
  pb.Line(prompt::TaskLine(prompt::kRegenerateQueries))
      .Line(prompt::RoleLine(ToString(role)))
      .Line(prompt::RoundLine(next_round))
      .Block("Complaint", query_context.complaint);
  if (query_context.diagnosis) pb.Block("Diagnosis", *query_context.diagnosis);
  std::ostringstream assessment;
  assessment << "sufficiency=" << report.sufficiency << " accuracy=" << report.accuracy
             << " overall=" << report.overall << "\n"
             << Flatten(report.rationale);
  pb.Block("Previous queries", ListBlock(previous))
      .Block("Assessment", assessment.str())
      .Line("The retrieved evidence was judged insufficient. Write up to " +
            std::to_string(ctx.reflection.q_max) + " improved search queries.")
      .Line("Respond with JSON: {\"queries\": [\"...\"]}");
  const auto out = Ask(ctx, SystemFor(role), pb.str(), SchemaTag::kQueries);
  return CleanQueries(out.payload["queries"], static_cast<std::size_t>(ctx.reflection.q_max),
                      nullptr);
}

std::vector<RetrievedDoc> MergeEvidence(const std::vector<RetrievalResult>& results) {
  std::map<std::string, RetrievedDoc> best;
  for (const auto& r : results) {
    for (const auto& d : r.docs) {
      auto [it, inserted] = best.try_emplace(d.chunk_id, d);
      if (!inserted && d.rerank_score > it->second.rerank_score) it->second = d;
    }
  }
  std::vector<RetrievedDoc> merged;
  merged.reserve(best.size());
  for (auto& [id, d] : best) merged.push_back(std::move(d));
  retrieval::SortAndRank(merged);
  return merged;
}

ReflectionTrace RunRetrievalWithReflection(Role role,
                                           const QueryContext& query_context,
                                           std::vector<std::string> queries,
                                           const AgentContext& ctx) {
  if (queries.empty()) throw Error(ErrorCode::kInvalidArgument, "no queries to run");
  ctx.reflection.Validate();
  RequireRetrieval(ctx);
  const auto params = ParamsFor(role, ctx);

  ReflectionTrace trace;
  bool reused = false;
  for (int round = 0;; ++round) {
    RoundTrace rt;
    rt.round = round;
    rt.queries = queries;
    for (const auto& q : queries) {
      rt.results.push_back(retrieval::Search(q, *ctx.indexes, *ctx.backends.embedder,
                                             *ctx.backends.reranker, params, round,
                                             ctx.backends.retry));
    }
    rt.evidence = MergeEvidence(rt.results);
    rt.report = AssessConfidence(role, query_context, queries, rt.evidence, round, ctx);
    const ConfidenceReport report = *rt.report;
    trace.rounds.push_back(std::move(rt));

    if (report.overall >= ctx.reflection.tau || round >= ctx.reflection.r_max) break;

    auto next = RegenerateQueries(role, query_context, queries, report, round + 1, ctx);
    if (next.empty()) {
      if (reused) {
        trace.rounds.back().notes.push_back(
            "regeneration returned no queries again; stopping");
        break;
      }
      reused = true;
      trace.rounds.back().notes.push_back(
          "regeneration returned no queries; reusing this round's queries");
      continue;
    }
    queries = std::move(next);
  }

  // Highest overall wins; later rounds win ties.
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    if (trace.rounds[i].report->overall >=
        trace.rounds[static_cast<std::size_t>(trace.best_round)].report->overall) {
      trace.best_round = static_cast<int>(i);
    }
  }
  trace.final_evidence = trace.rounds[static_cast<std::size_t>(trace.best_round)].evidence;
  return trace;
}

ReflectionTrace NaiveRetrieval(Role role, const std::string& complaint,
                               const AgentContext& ctx) {
  RequireRetrieval(ctx);
  ReflectionTrace trace;
  RoundTrace rt;
  rt.queries = {complaint};
  rt.results.push_back(retrieval::Search(complaint, *ctx.indexes, *ctx.backends.embedder,
                                         *ctx.backends.reranker, ParamsFor(role, ctx), 0,
                                         ctx.backends.retry));
  rt.evidence = MergeEvidence(rt.results);
  trace.final_evidence = rt.evidence;
  trace.rounds.push_back(std::move(rt));
  return trace;
}

DiagnoseResult DoctorDiagnose(const std::string& complaint,
                              const std::vector<RetrievedDoc>& evidence,
                              const std::optional<dataset::Options>& options,
                              AgentMode mode, const AgentContext& ctx) {
  const bool naive = mode == AgentMode::kNaive;
  PromptBuilder pb;
  pb.Line(prompt::TaskLine(prompt::kDoctorDiagnose))
      .Line(prompt::RoleLine("doctor"))
      .Line(prompt::ModeLine(naive ? prompt::kModeNaive : prompt::kModeAgent))
      .Block("Complaint", complaint);
  if (options) pb.Block("Options", OptionsBlock(*options));
  pb.Block("Evidence", EvidenceBlock(evidence));
  if (evidence.empty()) pb.Line("Note: no supporting evidence was retrieved.");
  pb.Line(options ? "Rank at least three distinct conditions chosen from the options, "
                    "most likely first."
                  : "Rank at least three distinct candidate conditions, most likely first.")
      .Line("Respond with JSON: {\"ranked\": [{\"condition\": \"...\", "
            "\"rationale\": \"...\"}, ...]}");

  DiagnoseResult result;
  result.prompt = pb.str();
  auto check = [&options](const json& p) -> std::optional<std::string> {
    if (!options) return std::nullopt;
    std::set<std::string> letters;
    for (const auto& item : p["ranked"]) {
      const auto cond = item["condition"].get<std::string>();
      const auto letter = dataset::ResolveOption(*options, cond);
      if (!letter) {
        return "condition '" + cond + "' is not one of the options: " +
               OptionsSummary(*options);
      }
      if (!letters.insert(*letter).second) {
        return "option " + *letter + " listed twice";
      }
    }
    return std::nullopt;
  };
  const auto out = Ask(ctx, naive ? kNaiveSystem : kDoctorSystem, result.prompt,
                       SchemaTag::kDiagnosis, check);
  for (const auto& item : out.payload["ranked"]) {
    RankedCondition rc;
    rc.condition = text::Trim(item["condition"].get<std::string>());
    if (options) {
      const auto letter = *dataset::ResolveOption(*options, rc.condition);
      for (const auto& o : *options) {
        if (o.letter == letter) rc.condition = o.text;
      }
    }
    rc.rationale = OptString(item, "rationale");
    result.diagnosis.ranked.push_back(std::move(rc));
  }
  return result;
}

AdoptionDecision PharmacistAdopt(const std::string& complaint,
                                 const Diagnosis& diagnosis,
                                 const AgentContext& ctx) {
  const std::string user =
      PromptBuilder()
          .Line(prompt::TaskLine(prompt::kPharmacistAdopt))
          .Line(prompt::RoleLine("pharmacist"))
          .Line(prompt::ModeLine(prompt::kModeAgent))
          .Block("Complaint", complaint)
          .Block("Diagnosis", DiagnosisBlock(diagnosis))
          .Line("Decide whether the doctor's diagnosis is consistent with the "
                "complaint and should inform medication planning.")
          .Line("Respond with JSON: {\"adopt\": true | false, \"justification\": \"...\"}")
          .str();
  const auto out = Ask(ctx, kPharmacistSystem, user, SchemaTag::kAdoption);
  AdoptionDecision d;
  d.adopt = out.payload["adopt"].get<bool>();
  d.justification = OptString(out.payload, "justification");
  return d;
}

PharmacistPlanResult PharmacistPlan(const Diagnosis& diagnosis,
                                    const std::string& complaint,
                                    const AdoptionDecision& adoption,
                                    const AgentContext& ctx) {
  PromptBuilder pb;
  pb.Line(prompt::TaskLine(prompt::kPharmacistPlan))
      .Line(prompt::RoleLine("pharmacist"))
      .Line(prompt::ModeLine(prompt::kModeAgent))
      .Block("Complaint", complaint);
  if (adoption.adopt) pb.Block("Diagnosis", DiagnosisBlock(diagnosis));
  pb.Line("Write up to " + std::to_string(ctx.reflection.q_max) +
          " diverse search queries for therapeutic guidance: drug mechanisms, "
          "indications, contraindications, interactions and dosage.")
      .Line("Respond with JSON: {\"queries\": [\"...\"]}");
  PharmacistPlanResult result;
  result.prompt = pb.str();
  const auto out = Ask(ctx, kPharmacistSystem, result.prompt, SchemaTag::kQueries,
                       [](const json& p) -> std::optional<std::string> {
                         if (p["queries"].empty()) return "at least one query is required";
                         return std::nullopt;
                       });
  result.queries = CleanQueries(out.payload["queries"],
                                static_cast<std::size_t>(ctx.reflection.q_max), nullptr);
  if (result.queries.empty()) {
    throw Error(ErrorCode::kSchema, "pharmacist plan contains no usable queries");
  }
  return result;
}

RecommendResult PharmacistRecommend(const std::string& complaint,
                                    const std::optional<Diagnosis>& diagnosis_if_adopted,
                                    const std::vector<RetrievedDoc>& evidence,
                                    const std::optional<dataset::Options>& options,
                                    AgentMode mode, const AgentContext& ctx) {
  const bool naive = mode == AgentMode::kNaive;
  PromptBuilder pb;
  pb.Line(prompt::TaskLine(prompt::kPharmacistRecommend))
      .Line(prompt::RoleLine("pharmacist"))
      .Line(prompt::ModeLine(naive ? prompt::kModeNaive : prompt::kModeAgent))
      .Block("Complaint", complaint);
  if (diagnosis_if_adopted) pb.Block("Diagnosis", DiagnosisBlock(*diagnosis_if_adopted));
  if (options) pb.Block("Options", OptionsBlock(*options));
  pb.Block("Evidence", EvidenceBlock(evidence));
  if (evidence.empty()) pb.Line("Note: no supporting evidence was retrieved.");
  pb.Line(options ? "Recommend medication and select exactly one option letter."
                  : "Recommend medication, primary choice first.")
      .Line("Respond with JSON: {\"recommended\": [{\"drug\": \"...\", \"rationale\": "
            "\"...\"}], \"selected_option\": \"letter or null\"}");

  RecommendResult result;
  result.prompt = pb.str();
  auto selected = [&options](const json& p) -> std::optional<std::string> {
    if (p.contains("selected_option") && p["selected_option"].is_string()) {
      if (auto l = dataset::ResolveOption(*options, p["selected_option"].get<std::string>())) {
        return l;
      }
    }
    return dataset::ResolveOption(*options, p["recommended"][0]["drug"].get<std::string>());
  };
  auto check = [&](const json& p) -> std::optional<std::string> {
    if (!options) return std::nullopt;
    if (!selected(p)) {
      return "selected option must be one of: " + OptionsSummary(*options);
    }
    return std::nullopt;
  };
  const auto out = Ask(ctx, naive ? kNaiveSystem : kPharmacistSystem, result.prompt,
                       SchemaTag::kMedication, check);
  for (const auto& item : out.payload["recommended"]) {
    RecommendedDrug d;
    d.drug = text::Trim(item["drug"].get<std::string>());
    d.rationale = OptString(item, "rationale");
    result.plan.recommended.push_back(std::move(d));
  }
  if (options) result.plan.selected_option = selected(out.payload);
  return result;
}

ConsultationRecord RunConsultation(const dataset::PatientCase& patient,
                                   const AgentContext& ctx,
                                   const PipelineFlags& flags,
                                   const nlohmann::json& config_snapshot) {
  using Clock = std::chrono::steady_clock;
  ConsultationRecord rec;
  rec.case_id = patient.case_id;
  rec.config = config_snapshot;
  rec.doctor.mode = flags.doctor_agent ? AgentMode::kAgent : AgentMode::kNaive;
  rec.pharmacist.mode = flags.pharmacist_agent ? AgentMode::kAgent : AgentMode::kNaive;
  json timing = json::object();

  std::string stage;
  auto run = [&](const std::string& name, auto&& fn) {
    stage = name;
    const auto t0 = Clock::now();
    fn();
    if (flags.record_timing) {
      timing[name] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
  };

  try {
    // Doctor stage.
    if (flags.doctor_agent) {
      run("doctor.plan", [&] {
        auto r = DoctorPlan(patient.complaint, ctx);
        rec.doctor.plan = std::move(r.plan);
        rec.doctor.plan_prompt = std::move(r.prompt);
      });
      run("doctor.retrieval", [&] {
        rec.doctor.retrieval = RunRetrievalWithReflection(
            Role::kDoctor, {patient.complaint, std::nullopt}, rec.doctor.plan->queries, ctx);
      });
    } else {
      run("doctor.retrieval", [&] {
        rec.doctor.retrieval = NaiveRetrieval(Role::kDoctor, patient.complaint, ctx);
      });
    }
    run("doctor.diagnose", [&] {
      auto r = DoctorDiagnose(patient.complaint, rec.doctor.retrieval.final_evidence,
                              patient.diagnosis_options, rec.doctor.mode, ctx);
      rec.doctor.diagnosis = std::move(r.diagnosis);
      rec.doctor.diagnose_prompt = std::move(r.prompt);
    });

    // Pharmacist stage: sees exactly the doctor's diagnosis and the complaint.
    const Diagnosis& dx = *rec.doctor.diagnosis;
    if (flags.pharmacist_agent) {
      run("pharmacist.adopt", [&] { rec.pharmacist.adoption = PharmacistAdopt(patient.complaint, dx, ctx); });
      run("pharmacist.plan", [&] {
        auto r = PharmacistPlan(dx, patient.complaint, *rec.pharmacist.adoption, ctx);
        rec.pharmacist.queries = std::move(r.queries);
        rec.pharmacist.plan_prompt = std::move(r.prompt);
      });
      run("pharmacist.retrieval", [&] {
        QueryContext qc{patient.complaint, std::nullopt};
        if (rec.pharmacist.adoption->adopt) qc.diagnosis = DiagnosisBlock(dx);
        rec.pharmacist.retrieval = RunRetrievalWithReflection(
            Role::kPharmacist, qc, rec.pharmacist.queries, ctx);
      });
    } else {
      rec.pharmacist.adoption = AdoptionDecision{
          true, "naive retrieval baseline passes the diagnosis through unchanged"};
      rec.pharmacist.queries = {patient.complaint};
      run("pharmacist.retrieval", [&] {
        rec.pharmacist.retrieval = NaiveRetrieval(Role::kPharmacist, patient.complaint, ctx);
      });
    }
    run("pharmacist.recommend", [&] {
      std::optional<Diagnosis> shared;
      if (rec.pharmacist.adoption->adopt) shared = dx;
      auto r = PharmacistRecommend(patient.complaint, shared,
                                   rec.pharmacist.retrieval.final_evidence,
                                   patient.medication_options, rec.pharmacist.mode, ctx);
      rec.pharmacist.medication = std::move(r.plan);
      rec.pharmacist.recommend_prompt = std::move(r.prompt);
    });
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.failed_stage = stage;
    rec.error = e.what();
  }
  if (flags.record_timing) rec.timing_ms = std::move(timing);
  return rec;
}

}  // namespace medpair::agents
