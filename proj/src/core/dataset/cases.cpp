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

#include "core/dataset/cases.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "core/common.hpp"
#include "core/text.hpp"

namespace medpair::dataset {
namespace {

using nlohmann::json;

std::optional<std::string> ValidateOptions(const Options& options,
                                           const std::string& gold,
                                           const char* what) {
  std::set<std::string> letters;
  for (const auto& o : options) {
    if (o.letter.empty() || o.text.empty()) {
      return std::string(what) + " option with empty letter or text";
    }
    if (!letters.insert(o.letter).second) {
      return std::string(what) + " option letter '" + o.letter + "' repeated";
    }
  }
  if (!ResolveOption(options, gold)) {
    return std::string("gold ") + what + " '" + gold + "' is not among the options";
  }
  return std::nullopt;
}

json OptionsToJson(const Options& options) {
  json arr = json::array();
  for (const auto& o : options) arr.push_back({{"letter", o.letter}, {"text", o.text}});
  return arr;
}

Options OptionsFromJson(const json& j) {
  Options out;
  for (const auto& o : j) {
    out.push_back({o.at("letter").get<std::string>(), o.at("text").get<std::string>()});
  }
  return out;
}

}  // namespace

std::optional<std::string> ResolveOption(const Options& options,
                                         const std::string& answer) {
  const std::string trimmed = text::Trim(answer);
  for (const auto& o : options) {
    if (text::CaseFold(o.letter) == text::CaseFold(trimmed)) return o.letter;
  }
  const std::string norm = text::NormalizeAnswer(answer);
  for (const auto& o : options) {
    if (text::NormalizeAnswer(o.text) == norm) return o.letter;
  }
  return std::nullopt;
}

std::optional<std::string> ValidateCase(const PatientCase& c) {
  if (text::Trim(c.case_id).empty()) return "empty case_id";
  if (text::Trim(c.complaint).empty()) return "empty complaint";
  if (text::Trim(c.gold_diagnosis).empty()) return "empty gold_diagnosis";
  if (text::Trim(c.gold_medication).empty()) return "empty gold_medication";
  if (c.diagnosis_options) {
    if (c.diagnosis_options->size() < 3) {
      return "diagnosis_options needs at least 3 entries for top-3 scoring";
    }
    if (auto e = ValidateOptions(*c.diagnosis_options, c.gold_diagnosis, "diagnosis")) {
      return e;
    }
  }
  if (c.medication_options) {
    if (c.medication_options->empty()) return "medication_options is empty";
    if (auto e = ValidateOptions(*c.medication_options, c.gold_medication, "medication")) {
      return e;
    }
  }
  return std::nullopt;
}

json ToJson(const PatientCase& c) {
  json j = {{"case_id", c.case_id},
            {"complaint", c.complaint},
            {"gold_diagnosis", c.gold_diagnosis},
            {"gold_medication", c.gold_medication}};
  j["diagnosis_options"] = c.diagnosis_options ? OptionsToJson(*c.diagnosis_options) : json(nullptr);
  j["medication_options"] = c.medication_options ? OptionsToJson(*c.medication_options) : json(nullptr);
  j["department"] = c.department ? json(*c.department) : json(nullptr);
  return j;
}

PatientCase CaseFromJson(const json& j) {
  PatientCase c;
  c.case_id = j.at("case_id").get<std::string>();
  c.complaint = j.at("complaint").get<std::string>();
  c.gold_diagnosis = j.at("gold_diagnosis").get<std::string>();
  c.gold_medication = j.at("gold_medication").get<std::string>();
  if (j.contains("diagnosis_options") && !j["diagnosis_options"].is_null()) {
    c.diagnosis_options = OptionsFromJson(j["diagnosis_options"]);
  }
  if (j.contains("medication_options") && !j["medication_options"].is_null()) {
    c.medication_options = OptionsFromJson(j["medication_options"]);
  }
  if (j.contains("department") && !j["department"].is_null()) {
    c.department = j["department"].get<std::string>();
  }
  return c;
}

std::vector<PatientCase> ParseCases(const std::string& content) {
  std::vector<PatientCase> cases;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  for (const auto& line : text::SplitLines(content)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    const std::string where = "case file line " + std::to_string(line_no) + ": ";
    PatientCase c;
    try {
      c = CaseFromJson(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kFormat, where + e.what());
    }
    if (auto err = ValidateCase(c)) throw Error(ErrorCode::kFormat, where + *err);
    if (!ids.insert(c.case_id).second) {
      throw Error(ErrorCode::kFormat, where + "duplicate case_id '" + c.case_id + "'");
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

std::vector<PatientCase> LoadCases(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read case file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCases(buf.str());
}

std::string SerializeCases(const std::vector<PatientCase>& cases) {
  std::ostringstream os;
  for (const auto& c : cases) os << ToJson(c).dump() << "\n";
  return os.str();
}

}  // namespace medpair::dataset
