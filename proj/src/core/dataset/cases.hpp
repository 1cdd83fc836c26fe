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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace medpair::dataset {

struct AnswerOption {
  std::string letter;
  std::string text;

  bool operator==(const AnswerOption&) const = default;
};

using Options = std::vector<AnswerOption>;

// One benchmark record: chief complaint plus gold diagnosis and medication,
// optionally as a multiple-choice question.
struct PatientCase {
  std::string case_id;
  std::string complaint;
  std::string gold_diagnosis;
  std::string gold_medication;
  std::optional<Options> diagnosis_options;
  std::optional<Options> medication_options;
  std::optional<std::string> department;

  bool operator==(const PatientCase&) const = default;
};

// Letter of the option that `answer` denotes: either the letter itself or
// text equal to the option text after answer normalization.
std::optional<std::string> ResolveOption(const Options& options,
                                         const std::string& answer);

// Returns the first broken invariant, or nullopt.
std::optional<std::string> ValidateCase(const PatientCase& c);

nlohmann::json ToJson(const PatientCase& c);
PatientCase CaseFromJson(const nlohmann::json& j);

// Line-delimited case records. Every error message names its line.
std::vector<PatientCase> ParseCases(const std::string& content);
std::vector<PatientCase> LoadCases(const std::filesystem::path& path);
std::string SerializeCases(const std::vector<PatientCase>& cases);

}  // namespace medpair::dataset
