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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/app/config.hpp"
#include "core/dataset/fixture.hpp"
#include "core/eval/eval.hpp"

namespace medpair::app {

// Backends and indexes for one command invocation, built on first use.
class Session {
 public:
  explicit Session(SystemConfig config);
  ~Session();

  const SystemConfig& config() const { return config_; }
  // Only meaningful before the first backend or index access.
  SystemConfig& mutable_config() { return config_; }

  // Null when no chat backend is configured.
  llm::ChatBackend* chat();
  // The judge slot, else the chat backend.
  llm::ChatBackend* judge();
  llm::EmbeddingBackend& embedder();
  llm::RerankBackend& reranker();

  // Loads <index_dir>/doctor.idx and pharmacist.idx.
  const kb::KnowledgeBases& indexes();

  // Requires a chat backend and loaded indexes.
  agents::AgentContext Context();

 private:
  SystemConfig config_;
  std::unique_ptr<llm::ChatBackend> chat_;
  std::unique_ptr<llm::ChatBackend> judge_;
  std::unique_ptr<llm::EmbeddingBackend> embedder_;
  std::unique_ptr<llm::RerankBackend> reranker_;
  std::optional<kb::KnowledgeBases> indexes_;
};

inline constexpr const char* kDoctorIndexFile = "doctor.idx";
inline constexpr const char* kPharmacistIndexFile = "pharmacist.idx";

// Classifies, chunks, embeds and writes both index files plus
// manifest.json into `out_dir`. Returns the manifest.
nlohmann::json BuildKb(Session& session, const std::filesystem::path& corpus_path,
                       const std::filesystem::path& out_dir);

struct BenchResult {
  std::vector<agents::ConsultationRecord> records;
  eval::RunReport report;
};

// Writes run.jsonl (one record per case with its outcome appended),
// report.json and report.tsv into `out_dir`.
BenchResult Bench(Session& session, const std::filesystem::path& dataset_path,
                  const std::filesystem::path& out_dir, bool with_judge);

// "on,off;off,off" style list of doctor,pharmacist settings. Empty -> all four.
std::vector<std::pair<bool, bool>> ParseGrid(const std::string& spec);

// Writes ablation.tsv and ablation.json into `out_dir`.
std::vector<eval::AblationRow> Ablate(Session& session,
                                      const std::filesystem::path& dataset_path,
                                      const std::vector<std::pair<bool, bool>>& grid,
                                      const std::filesystem::path& out_dir);

// One-off consultation for a bare complaint. The record is also written to
// `record_path` when given.
agents::ConsultationRecord Consult(Session& session, const std::string& complaint,
                                   const std::optional<std::filesystem::path>& record_path);

// Judges the final evidence of a finished run and writes judge.json.
eval::JudgeSummary JudgeRunFile(Session& session, const std::filesystem::path& run_path,
                                const std::filesystem::path& dataset_path,
                                const std::filesystem::path& out_dir);

std::vector<agents::ConsultationRecord> LoadRecords(const std::filesystem::path& path);

// Writes the synthetic fixture and a mock-mode config.json into `out_dir`.
void GenerateFixtureFiles(const dataset::FixtureSpec& spec,
                          const std::filesystem::path& out_dir);

void WriteFile(const std::filesystem::path& path, const std::string& content);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace medpair::app
