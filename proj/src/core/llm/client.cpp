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

#include "core/llm/client.hpp"

#include <set>
#include <sstream>

#include "core/common.hpp"
#include "core/text.hpp"

namespace medpair::llm {
namespace {

struct TagName {
  SchemaTag tag;
  std::string_view name;
};

constexpr TagName kTagNames[] = {
    {SchemaTag::kPlan, "Plan"},
    {SchemaTag::kQueries, "Queries"},
    {SchemaTag::kConfidence, "Confidence"},
    {SchemaTag::kDiagnosis, "Diagnosis"},
    {SchemaTag::kAdoption, "Adoption"},
    {SchemaTag::kMedication, "Medication"},
    {SchemaTag::kJudge, "Judge"},
    {SchemaTag::kClassify, "Classify"},
};

std::optional<std::string> CheckNonEmptyString(const json& obj,
                                               const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    return std::string("field '") + key + "' must be a string";
  }
  if (text::Trim(it->get<std::string>()).empty()) {
    return std::string("field '") + key + "' must not be empty";
  }
  return std::nullopt;
}

std::optional<std::string> CheckOptionalString(const json& obj,
                                               const char* key) {
  auto it = obj.find(key);
  if (it != obj.end() && !it->is_string() && !it->is_null()) {
    return std::string("field '") + key + "' must be a string";
  }
  return std::nullopt;
}

std::optional<std::string> CheckUnit(const json& obj, const char* key,
                                     bool required) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (!required) return std::nullopt;
    return std::string("missing field '") + key + "'";
  }
  if (!it->is_number()) return std::string("field '") + key + "' must be a number";
  const double v = it->get<double>();
  if (!(v >= 0.0 && v <= 1.0)) {
    return std::string("field '") + key + "' must lie in [0, 1]";
  }
  return std::nullopt;
}

std::optional<std::string> CheckStringList(const json& obj, const char* key,
                                           std::size_t min_items) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    return std::string("field '") + key + "' must be an array";
  }
  if (it->size() < min_items) {
    return std::string("field '") + key + "' needs at least " +
           std::to_string(min_items) + " item(s)";
  }
  for (const auto& item : *it) {
    if (!item.is_string() || text::Trim(item.get<std::string>()).empty()) {
      return std::string("field '") + key + "' must hold non-empty strings";
    }
  }
  return std::nullopt;
}

// Array of objects each carrying a distinct non-empty `name_key`.
std::optional<std::string> CheckRankedList(const json& obj, const char* key,
                                           const char* name_key,
                                           std::size_t min_items) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    return std::string("field '") + key + "' must be an array";
  }
  if (it->size() < min_items) {
    return std::string("field '") + key + "' needs at least " +
           std::to_string(min_items) + " item(s), got " +
           std::to_string(it->size());
  }
  std::set<std::string> seen;
  for (const auto& item : *it) {
    if (!item.is_object()) return std::string("items of '") + key + "' must be objects";
    if (auto err = CheckNonEmptyString(item, name_key)) return err;
    if (auto err = CheckOptionalString(item, "rationale")) return err;
    if (!seen.insert(text::NormalizeAnswer(item[name_key].get<std::string>()))
             .second) {
      return std::string("duplicate ") + name_key + " '" +
             item[name_key].get<std::string>() + "'";
    }
  }
  return std::nullopt;
}

std::optional<std::string> ValidateObject(SchemaTag tag, const json& p) {
  switch (tag) {
    case SchemaTag::kPlan:
      if (auto e = CheckNonEmptyString(p, "department")) return e;
      if (auto e = CheckStringList(p, "queries", 1)) return e;
      return CheckOptionalString(p, "reasoning");
    case SchemaTag::kQueries:
      return CheckStringList(p, "queries", 0);
    case SchemaTag::kConfidence:
      if (auto e = CheckUnit(p, "sufficiency", true)) return e;
      if (auto e = CheckUnit(p, "accuracy", true)) return e;
      if (auto e = CheckUnit(p, "overall", false)) return e;
      return CheckOptionalString(p, "rationale");
    case SchemaTag::kDiagnosis:
      return CheckRankedList(p, "ranked", "condition", 3);
    case SchemaTag::kAdoption: {
      auto it = p.find("adopt");
      if (it == p.end() || !it->is_boolean()) return "field 'adopt' must be a boolean";
      return CheckOptionalString(p, "justification");
    }
    case SchemaTag::kMedication:
      if (auto e = CheckRankedList(p, "recommended", "drug", 1)) return e;
      return CheckOptionalString(p, "selected_option");
    case SchemaTag::kJudge: {
      auto it = p.find("scores");
      if (it == p.end() || !it->is_array()) return "field 'scores' must be an array";
      for (const auto& s : *it) {
        if (!s.is_number_integer()) return "scores must be integers";
        const auto v = s.get<long long>();
        if (v < 0 || v > 10) return "score " + std::to_string(v) + " outside [0, 10]";
      }
      return std::nullopt;
    }
    case SchemaTag::kClassify: {
      if (auto e = CheckNonEmptyString(p, "label")) return e;
      const auto label = p["label"].get<std::string>();
      if (label != "DoctorOnly" && label != "PharmacistOnly" && label != "Both") {
        return "field 'label' must be DoctorOnly, PharmacistOnly or Both";
      }
      return CheckOptionalString(p, "rationale");
    }
  }
  return "unknown schema tag";
}

std::string RepairPrompt(const ChatRequest& request, const std::string& raw,
                         const std::string& problem) {
  std::ostringstream os;
  os << request.user_prompt << "\n\n"
     << "Repair: your previous reply was rejected: " << problem << "\n"
     << "Previous reply:\n" << raw << "\n"
     << "Reply again with a single corrected JSON object.";
  return os.str();
}

}  // namespace

std::string_view ToString(SchemaTag tag) {
  for (const auto& t : kTagNames) {
    if (t.tag == tag) return t.name;
  }
  return "?";
}

SchemaTag ParseSchemaTag(std::string_view name) {
  for (const auto& t : kTagNames) {
    if (t.name == name) return t.tag;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown schema tag '" + std::string(name) + "'");
}

std::optional<std::string> ValidateSchema(SchemaTag tag, const json& payload) {
  if (!payload.is_object()) return "payload must be a JSON object";
  return ValidateObject(tag, payload);
}

json ExtractJson(const std::string& raw) {
  const auto first = raw.find('{');
  const auto last = raw.rfind('}');
  if (first == std::string::npos || last == std::string::npos || last < first) {
    throw Error(ErrorCode::kParse, "reply contains no JSON object");
  }
  try {
    return json::parse(raw.substr(first, last - first + 1));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
}

StructuredOutput Complete(ChatBackend& backend, const ChatRequest& request,
                          const RetryPolicy& policy, const PayloadCheck& check) {
  StructuredOutput out;
  out.schema_tag = request.schema_tag;

  ChatRequest current = request;
  for (int round = 0;; ++round) {
    out.raw = WithRetry(policy, &out.attempts,
                        [&] { return backend.Send(current); });
    ErrorCode code = ErrorCode::kParse;
    std::string problem;
    try {
      json payload = ExtractJson(out.raw);
      code = ErrorCode::kSchema;
      auto err = ValidateSchema(request.schema_tag, payload);
      if (!err && check) err = check(payload);
      if (!err) {
        out.payload = std::move(payload);
        out.repair_count = round;
        return out;
      }
      problem = *err;
    } catch (const Error& e) {
      problem = e.what();
    }
    if (round >= 1) {
      throw Error(code, std::string(ToString(request.schema_tag)) +
                            " reply invalid after repair: " + problem);
    }
    current.user_prompt = RepairPrompt(request, out.raw, problem);
  }
}

std::vector<EmbeddingVector> Embed(EmbeddingBackend& backend,
                                   const std::vector<std::string>& texts,
                                   const RetryPolicy& policy) {
  if (texts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "embed called with no texts");
  }
  auto vectors =
      WithRetry(policy, nullptr, [&] { return backend.EmbedBatch(texts); });
  if (vectors.size() != texts.size()) {
    throw Error(ErrorCode::kEmbedding,
                "embedder returned " + std::to_string(vectors.size()) +
                    " vectors for " + std::to_string(texts.size()) + " texts");
  }
  for (auto& v : vectors) {
    if (v.dim() != backend.dim()) {
      throw Error(ErrorCode::kDimMismatch,
                  "embedder returned dim " + std::to_string(v.dim()) +
                      ", expected " + std::to_string(backend.dim()));
    }
    if (!v.AllFinite() || !v.Normalize()) {
      throw Error(ErrorCode::kEmbedding, "embedder returned a degenerate vector");
    }
  }
  return vectors;
}

std::vector<int> Judge(ChatBackend& backend, const std::string& question,
                       const std::vector<std::string>& docs, Rubric rubric,
                       const std::optional<std::string>& gold,
                       const RetryPolicy& policy) {
  if (rubric == Rubric::kContribution && !gold) {
    throw Error(ErrorCode::kInvalidArgument,
                "contribution judging requires a gold answer");
  }
  if (docs.empty()) return {};

  ChatRequest req;
  req.schema_tag = SchemaTag::kJudge;
  std::ostringstream os;
  if (rubric == Rubric::kRelevance) {
    req.system_prompt =
        "You grade retrieved medical documents. Relevance: how well a "
        "document semantically and topically aligns with the patient's "
        "question, symptoms, conditions or scenario. Score 0-10.";
    os << "Task: judge-relevance\n";
  } else {
    req.system_prompt =
        "You grade retrieved medical documents. Contribution: how well a "
        "document supports reaching the reference answer. Score 0-10.";
    os << "Task: judge-contribution\n";
  }
  os << "Question:\n" << question << "\n";
  if (gold) os << "Reference answer:\n" << *gold << "\n";
  os << "Documents:\n";
  for (std::size_t i = 0; i < docs.size(); ++i) {
    os << "[doc " << (i + 1) << "] " << docs[i] << "\n";
  }
  os << "Respond with JSON: {\"scores\": [one integer 0-10 per document, in "
        "order]}";
  req.user_prompt = os.str();

  const std::size_t expected = docs.size();
  auto out = Complete(backend, req, policy, [expected](const json& p) -> std::optional<std::string> {
    if (p["scores"].size() != expected) {
      return "expected " + std::to_string(expected) + " scores, got " +
             std::to_string(p["scores"].size());
    }
    return std::nullopt;
  });
  return out.payload["scores"].get<std::vector<int>>();
}

}  // namespace medpair::llm
