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

#include <string>
#include <string_view>

// Header fields written into every agent prompt. Mock scripts match on these
// lines, so they are part of the stable prompt surface.
namespace medpair::agents::prompt {

inline constexpr std::string_view kDoctorPlan = "doctor-plan";
inline constexpr std::string_view kAssessConfidence = "assess-confidence";
inline constexpr std::string_view kRegenerateQueries = "regenerate-queries";
inline constexpr std::string_view kDoctorDiagnose = "doctor-diagnose";
inline constexpr std::string_view kPharmacistAdopt = "pharmacist-adopt";
inline constexpr std::string_view kPharmacistPlan = "pharmacist-plan";
inline constexpr std::string_view kPharmacistRecommend = "pharmacist-recommend";

inline constexpr std::string_view kModeAgent = "agent";
inline constexpr std::string_view kModeNaive = "naive-rag";

inline std::string TaskLine(std::string_view task) {
  return "Task: " + std::string(task);
}
inline std::string ModeLine(std::string_view mode) {
  return "Mode: " + std::string(mode);
}
inline std::string RoleLine(std::string_view role) {
  return "Role: " + std::string(role);
}
inline std::string RoundLine(int round) {
  return "Round: " + std::to_string(round);
}

}  // namespace medpair::agents::prompt
