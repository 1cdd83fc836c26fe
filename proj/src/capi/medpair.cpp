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

#include "medpair/medpair.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "core/app/commands.hpp"
#include "core/common.hpp"

struct mp_session {
  std::unique_ptr<medpair::app::Session> session;
  std::filesystem::path out_dir;
  bool started = false;
};

namespace {

using medpair::Error;
using medpair::ErrorCode;

thread_local std::string g_last_error;

mp_status ToStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return MP_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return MP_ERR_IO;
    case ErrorCode::kFormat: return MP_ERR_FORMAT;
    case ErrorCode::kVersion: return MP_ERR_VERSION;
    case ErrorCode::kTruncated: return MP_ERR_TRUNCATED;
    case ErrorCode::kDimMismatch: return MP_ERR_DIM_MISMATCH;
    case ErrorCode::kSchema: return MP_ERR_SCHEMA;
    case ErrorCode::kParse: return MP_ERR_PARSE;
    case ErrorCode::kTransport: return MP_ERR_TRANSPORT;
    case ErrorCode::kClassification: return MP_ERR_CLASSIFICATION;
    case ErrorCode::kEmbedding: return MP_ERR_EMBEDDING;
    case ErrorCode::kMissingIndex: return MP_ERR_MISSING_INDEX;
    case ErrorCode::kInternal: return MP_ERR_INTERNAL;
  }
  return MP_ERR_INTERNAL;
}

template <typename F>
mp_status Guard(F&& fn) {
  g_last_error.clear();
  try {
    fn();
    return MP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MP_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

void Emit(char** out, const std::string& s) {
  if (out == nullptr) return;
  char* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (buf == nullptr) throw std::bad_alloc();
  std::memcpy(buf, s.c_str(), s.size() + 1);
  *out = buf;
}

medpair::app::Session& Start(mp_session* s) {
  Require(s != nullptr && s->session != nullptr, "session is null");
  s->started = true;
  return *s->session;
}

long ParseLong(const char* value, const char* key) {
  char* end = nullptr;
  const long v = std::strtol(value, &end, 10);
  if (end == value || *end != '\0') {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("option ") + key + " expects an integer, got '" + value + "'");
  }
  return v;
}

}  // namespace

extern "C" {

mp_status mp_session_create(const char* config_path, mp_session** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = nullptr;
    medpair::app::SystemConfig cfg =
        config_path != nullptr ? medpair::app::LoadConfig(config_path)
                               : medpair::app::ParseConfig(nlohmann::json::object(), {});
    auto s = std::make_unique<mp_session>();
    s->out_dir = cfg.out_dir;
    s->session = std::make_unique<medpair::app::Session>(std::move(cfg));
    *out = s.release();
  });
}

void mp_session_destroy(mp_session* session) { delete session; }

mp_status mp_session_set_option(mp_session* s, const char* key, const char* value) {
  return Guard([&] {
    Require(s != nullptr && key != nullptr && value != nullptr, "null argument");
    Require(!s->started, "options must be set before the first command");
    auto& cfg = s->session->mutable_config();
    const std::string k = key;
    if (k == "seed") {
      const long v = ParseLong(value, key);
      Require(v >= 0, "seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(v);
    } else if (k == "workers") {
      const long v = ParseLong(value, key);
      Require(v >= 1 && v <= 1024, "workers must lie in [1, 1024]");
      cfg.workers = static_cast<int>(v);
    } else if (k == "mock") {
      medpair::app::ForceMock(cfg, value);
    } else if (k == "out") {
      s->out_dir = value;
    } else if (k == "index_dir") {
      cfg.index_dir = value;
    } else if (k == "record_timing") {
      cfg.record_timing = ParseLong(value, key) != 0;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown option '" + k + "'");
    }
    cfg.Validate();
  });
}

mp_status mp_build_kb(mp_session* s, const char* corpus_path, char** summary_out) {
  return Guard([&] {
    Require(corpus_path != nullptr, "corpus path is null");
    auto manifest = medpair::app::BuildKb(Start(s), corpus_path, s->out_dir);
    Emit(summary_out, manifest.dump(2) + "\n");
  });
}

mp_status mp_bench(mp_session* s, const char* dataset_path, int with_judge,
                   char** summary_out) {
  return Guard([&] {
    Require(dataset_path != nullptr, "dataset path is null");
    auto result = medpair::app::Bench(Start(s), dataset_path, s->out_dir, with_judge != 0);
    Emit(summary_out, medpair::eval::AblationTable({{true, true, result.report}}));
  });
}

mp_status mp_ablate(mp_session* s, const char* dataset_path, const char* grid,
                    char** table_out) {
  return Guard([&] {
    Require(dataset_path != nullptr, "dataset path is null");
    const auto g = medpair::app::ParseGrid(grid != nullptr ? grid : "");
    auto rows = medpair::app::Ablate(Start(s), dataset_path, g, s->out_dir);
    Emit(table_out, medpair::eval::AblationTable(rows));
  });
}

mp_status mp_consult(mp_session* s, const char* complaint, const char* record_path,
                     char** pretty_out) {
  return Guard([&] {
    Require(complaint != nullptr, "complaint is null");
    std::optional<std::filesystem::path> rp;
    if (record_path != nullptr) rp = record_path;
    auto record = medpair::app::Consult(Start(s), complaint, rp);
    Emit(pretty_out, medpair::agents::PrettyPrint(record));
  });
}

mp_status mp_judge(mp_session* s, const char* run_path, const char* dataset_path,
                   char** summary_out) {
  return Guard([&] {
    Require(run_path != nullptr && dataset_path != nullptr, "null path");
    auto summary = medpair::app::JudgeRunFile(Start(s), run_path, dataset_path, s->out_dir);
    Emit(summary_out, medpair::eval::ToJson(summary).dump(2) + "\n");
  });
}

mp_status mp_generate_fixture(uint64_t seed, int n_cases, int n_corrupt, const char* out_dir) {
  return Guard([&] {
    Require(out_dir != nullptr, "out_dir is null");
    medpair::dataset::FixtureSpec spec;
    spec.seed = seed;
    spec.n_cases = n_cases;
    spec.n_corrupt_drug = n_corrupt;
    spec.n_option_cases = n_cases / 2;
    medpair::app::GenerateFixtureFiles(spec, out_dir);
  });
}

mp_status mp_rouge(const char* candidate, const char* reference, double* rouge1,
                   double* rouge2, double* rouge_l) {
  return Guard([&] {
    Require(candidate != nullptr && reference != nullptr, "null text");
    const auto r = medpair::eval::Rouge(candidate, reference);
    if (rouge1 != nullptr) *rouge1 = r.rouge1_f1;
    if (rouge2 != nullptr) *rouge2 = r.rouge2_f1;
    if (rouge_l != nullptr) *rouge_l = r.rougeL_f1;
  });
}

void mp_string_free(char* s) { std::free(s); }

const char* mp_last_error_message(void) { return g_last_error.c_str(); }

const char* mp_status_string(mp_status status) {
  switch (status) {
    case MP_OK: return "ok";
    case MP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MP_ERR_IO: return "i/o error";
    case MP_ERR_FORMAT: return "format error";
    case MP_ERR_VERSION: return "unsupported version";
    case MP_ERR_TRUNCATED: return "truncated file";
    case MP_ERR_DIM_MISMATCH: return "dimension mismatch";
    case MP_ERR_SCHEMA: return "schema violation";
    case MP_ERR_PARSE: return "unparsable reply";
    case MP_ERR_TRANSPORT: return "transport failure";
    case MP_ERR_CLASSIFICATION: return "classification failure";
    case MP_ERR_EMBEDDING: return "embedding failure";
    case MP_ERR_MISSING_INDEX: return "missing index";
    case MP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mp_version(void) { return "0.1.0"; }

}  // extern "C"
