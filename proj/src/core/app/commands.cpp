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

#include "core/app/commands.hpp"

#include <fstream>
#include <sstream>

#include "core/common.hpp"
#include "core/llm/http.hpp"
#include "core/llm/mock.hpp"
#include "core/text.hpp"

namespace medpair::app {
namespace {

using nlohmann::json;

std::unique_ptr<llm::ChatBackend> MakeChat(const BackendConfig& b) {
  if (b.mock) {
    return std::make_unique<llm::MockChatBackend>(llm::MockScript::Load(b.mock_script));
  }
  if (b.remote()) {
    return std::make_unique<llm::HttpChatBackend>(
        llm::HttpEndpoint{b.url, b.model, b.api_key, b.timeout_seconds});
  }
  return nullptr;
}

void EnsureDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

std::string DumpLine(const json& j) { return j.dump() + "\n"; }

}  // namespace

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) EnsureDir(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Session::Session(SystemConfig config) : config_(std::move(config)) { config_.Validate(); }

Session::~Session() = default;

llm::ChatBackend* Session::chat() {
  if (!chat_) chat_ = MakeChat(config_.chat);
  return chat_.get();
}

llm::ChatBackend* Session::judge() {
  if (!config_.judge.configured()) return chat();
  if (!judge_) judge_ = MakeChat(config_.judge);
  return judge_.get();
}

llm::EmbeddingBackend& Session::embedder() {
  if (!embedder_) {
    const auto& b = config_.embed;
    if (b.remote()) {
      embedder_ = std::make_unique<llm::HttpEmbeddingBackend>(
          llm::HttpEndpoint{b.url, b.model, b.api_key, b.timeout_seconds}, config_.embed_dim);
    } else {
      embedder_ = std::make_unique<llm::HashEmbedder>(config_.embed_dim, config_.seed);
    }
  }
  return *embedder_;
}

llm::RerankBackend& Session::reranker() {
  if (!reranker_) {
    const auto& b = config_.rerank;
    if (b.remote()) {
      reranker_ = std::make_unique<llm::HttpRerankBackend>(
          llm::HttpEndpoint{b.url, b.model, b.api_key, b.timeout_seconds});
    } else {
      reranker_ = std::make_unique<llm::OverlapReranker>();
    }
  }
  return *reranker_;
}

const kb::KnowledgeBases& Session::indexes() {
  if (!indexes_) {
    kb::KnowledgeBases k;
    const auto dim = embedder().dim();
    k.doctor = kb::LoadIndex(config_.index_dir / kDoctorIndexFile, dim);
    k.pharmacist = kb::LoadIndex(config_.index_dir / kPharmacistIndexFile, dim);
    if (k.doctor.role != Role::kDoctor || k.pharmacist.role != Role::kPharmacist) {
      throw Error(ErrorCode::kFormat, "index files in " + config_.index_dir.string() +
                                          " carry the wrong role scope");
    }
    indexes_ = std::move(k);
  }
  return *indexes_;
}

agents::AgentContext Session::Context() {
  if (chat() == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "no chat backend configured; set backends.chat or pass a mock script");
  }
  agents::AgentContext ctx;
  ctx.indexes = &indexes();
  ctx.backends.chat = chat();
  ctx.backends.embedder = &embedder();
  ctx.backends.reranker = &reranker();
  ctx.backends.retry = config_.retry;
  ctx.top_k = config_.top_k;
  ctx.top_n = config_.top_n;
  ctx.reflection = config_.reflection;
  ctx.departments = agents::DefaultDepartments();
  return ctx;
}

json BuildKb(Session& session, const std::filesystem::path& corpus_path,
             const std::filesystem::path& out_dir) {
  const auto corpus = kb::LoadCorpus(corpus_path);
  kb::BuildOptions opts;
  opts.chunking = session.config().chunking;
  opts.classifier = session.chat();
  opts.retry = session.config().retry;
  const auto built = kb::BuildIndexes(corpus, session.embedder(), opts);

  EnsureDir(out_dir);
  kb::SaveIndex(built.indexes.doctor, out_dir / kDoctorIndexFile);
  kb::SaveIndex(built.indexes.pharmacist, out_dir / kPharmacistIndexFile);

  json assignments = json::array();
  for (const auto& [doc_id, a] : built.assignments) {
    assignments.push_back({{"doc_id", doc_id},
                           {"target", std::string(kb::ToString(a.target))},
                           {"source", a.source},
                           {"rationale", a.rationale}});
  }
  auto index_summary = [](const kb::VectorIndex& idx, const char* file) {
    return json{{"file", file},
                {"role_scope", ToString(idx.role)},
                {"dim", idx.dim},
                {"entry_count", idx.size()}};
  };
  json manifest = {
      {"format_version", kb::kIndexFormatVersion},
      {"corpus", corpus_path.filename().string()},
      {"documents", corpus.size()},
      {"config", session.config().Snapshot()},
      {"indexes",
       {index_summary(built.indexes.doctor, kDoctorIndexFile),
        index_summary(built.indexes.pharmacist, kPharmacistIndexFile)}},
      {"assignments", assignments}};
  WriteFile(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

BenchResult Bench(Session& session, const std::filesystem::path& dataset_path,
                  const std::filesystem::path& out_dir, bool with_judge) {
  const auto cases = dataset::LoadCases(dataset_path);
  if (cases.empty()) throw Error(ErrorCode::kInvalidArgument, "dataset has no cases");
  const auto ctx = session.Context();
  agents::PipelineFlags flags;
  flags.record_timing = session.config().record_timing;
  BenchResult result;
  result.records =
      eval::RunCases(cases, ctx, flags, session.config().Snapshot(), session.config().workers);
  result.report = eval::ScoreRun(result.records, cases);
  if (with_judge) {
    llm::ChatBackend* judge = session.judge();
    if (judge == nullptr) throw Error(ErrorCode::kInvalidArgument, "no judge backend configured");
    result.report.judge = eval::JudgeRun(*judge, result.records, cases, session.config().retry);
  }

  std::string run;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    json line = agents::ToJson(result.records[i]);
    line["outcome"] = eval::ToJson(result.report.outcomes[i]);
    run += DumpLine(line);
  }
  EnsureDir(out_dir);
  WriteFile(out_dir / "run.jsonl", run);
  json report = eval::ToJson(result.report);
  report["config"] = session.config().Snapshot();
  report["dataset"] = dataset_path.filename().string();
  WriteFile(out_dir / "report.json", report.dump(2) + "\n");
  WriteFile(out_dir / "report.tsv", eval::AblationTable({{true, true, result.report}}));
  return result;
}

std::vector<std::pair<bool, bool>> ParseGrid(const std::string& spec) {
  if (text::Trim(spec).empty()) return eval::FullAblationGrid();
  auto flag = [&spec](std::string s) {
    s = text::CaseFold(text::Trim(s));
    if (s == "on" || s == "agent" || s == "1") return true;
    if (s == "off" || s == "naive" || s == "0") return false;
    throw Error(ErrorCode::kInvalidArgument, "bad grid entry '" + s + "' in '" + spec + "'");
  };
  std::vector<std::pair<bool, bool>> grid;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (text::Trim(item).empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid entries are doctor,pharmacist pairs: '" + item + "'");
    }
    grid.emplace_back(flag(item.substr(0, comma)), flag(item.substr(comma + 1)));
  }
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty ablation grid");
  return grid;
}

std::vector<eval::AblationRow> Ablate(Session& session,
                                      const std::filesystem::path& dataset_path,
                                      const std::vector<std::pair<bool, bool>>& grid,
                                      const std::filesystem::path& out_dir) {
  const auto cases = dataset::LoadCases(dataset_path);
  if (cases.empty()) throw Error(ErrorCode::kInvalidArgument, "dataset has no cases");
  const auto ctx = session.Context();
  auto rows = eval::RunAblation(cases, ctx, grid, session.config().Snapshot(),
                                session.config().workers);
  EnsureDir(out_dir);
  WriteFile(out_dir / "ablation.tsv", eval::AblationTable(rows));
  json doc = {{"config", session.config().Snapshot()},
              {"dataset", dataset_path.filename().string()},
              {"rows", eval::AblationJson(rows)}};
  WriteFile(out_dir / "ablation.json", doc.dump(2) + "\n");
  return rows;
}

agents::ConsultationRecord Consult(Session& session, const std::string& complaint,
                                   const std::optional<std::filesystem::path>& record_path) {
  if (text::Trim(complaint).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "complaint is empty");
  }
  const auto ctx = session.Context();
  dataset::PatientCase patient;
  patient.case_id = "consult";
  patient.complaint = complaint;
  agents::PipelineFlags flags;
  flags.record_timing = session.config().record_timing;
  auto record = agents::RunConsultation(patient, ctx, flags, session.config().Snapshot());
  if (record_path) WriteFile(*record_path, agents::ToJson(record).dump(2) + "\n");
  return record;
}

std::vector<agents::ConsultationRecord> LoadRecords(const std::filesystem::path& path) {
  std::vector<agents::ConsultationRecord> out;
  std::size_t line_no = 0;
  for (const auto& line : text::SplitLines(ReadFile(path))) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    try {
      out.push_back(agents::RecordFromJson(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kFormat, path.string() + " line " + std::to_string(line_no) +
                                          ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + " line " + std::to_string(line_no) + ": " +
                                e.what());
    }
  }
  return out;
}

eval::JudgeSummary JudgeRunFile(Session& session, const std::filesystem::path& run_path,
                                const std::filesystem::path& dataset_path,
                                const std::filesystem::path& out_dir) {
  const auto records = LoadRecords(run_path);
  const auto cases = dataset::LoadCases(dataset_path);
  llm::ChatBackend* judge = session.judge();
  if (judge == nullptr) throw Error(ErrorCode::kInvalidArgument, "no judge backend configured");
  auto summary = eval::JudgeRun(*judge, records, cases, session.config().retry);
  EnsureDir(out_dir);
  json doc = eval::ToJson(summary);
  doc["run"] = run_path.filename().string();
  WriteFile(out_dir / "judge.json", doc.dump(2) + "\n");
  return summary;
}

void GenerateFixtureFiles(const dataset::FixtureSpec& spec,
                          const std::filesystem::path& out_dir) {
  const auto fx = dataset::GenerateFixture(spec);
  dataset::WriteFixture(fx, out_dir);
  auto cfg = FixtureConfigJson(spec.seed);
  cfg["backends"]["embed"]["dim"] = spec.embed_dim;
  WriteFile(out_dir / "config.json", cfg.dump(2) + "\n");
}

}  // namespace medpair::app
