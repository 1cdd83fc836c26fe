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

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "core/dataset/cases.hpp"
#include "core/kb/kb.hpp"
#include "core/llm/mock.hpp"

namespace medpair::dataset {

// Synthetic benchmark whose mock chat script answers correctly exactly when
// the pipeline does its job: agent-mode answers are right only if the
// case's planted document reached the final evidence.
//
// Per case i the corpus holds dx-<i> (DoctorOnly, diagnostic vocabulary
// shared with the complaint) and rx-<i> (PharmacistOnly, medication
// vocabulary used by the pharmacist's queries), plus shared gen-<j> docs
// (Both). Naive-mode answers ignore evidence and are scripted per case.
struct FixtureSpec {
  std::uint64_t seed = 7;
  int n_cases = 20;
  int n_general_docs = 10;
  int n_option_cases = 10;
  int n_reflection_cases = 4;  // doctor round 0 scores low and re-queries
  int n_rejected_adoptions = 1;
  int n_naive_top1_miss = 3;   // naive doctor puts gold second
  int n_naive_top3_miss = 1;   // naive doctor omits gold
  int n_naive_drug_miss = 4;   // naive pharmacist picks a distractor
  int n_corrupt_drug = 0;      // agent pharmacist scripted wrong
  std::size_t embed_dim = 256;

  void Validate() const;
};

// Scripted outcome of one case under one agent on/off configuration.
struct ExpectedOutcome {
  std::string case_id;
  bool top1 = false;
  bool top3 = false;
  bool drug = false;
};

struct Fixture {
  FixtureSpec spec;
  std::vector<PatientCase> cases;
  std::vector<kb::SourceDocument> corpus;
  llm::MockScript script;

  std::set<std::string> reflection_cases;
  std::set<std::string> naive_top1_miss;
  std::set<std::string> naive_top3_miss;
  std::set<std::string> naive_drug_miss;
  std::set<std::string> corrupt_drug;

  std::vector<ExpectedOutcome> Expected(bool doctor_agent, bool pharmacist_agent) const;
};

// Deterministic in spec (including seed).
Fixture GenerateFixture(const FixtureSpec& spec);

// Writes cases.jsonl, corpus.jsonl, chat_mock.jsonl and expected.json.
void WriteFixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace medpair::dataset
