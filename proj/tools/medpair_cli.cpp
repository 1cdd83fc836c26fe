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

// Command-line front end. Talks to the engine only through the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "medpair/medpair.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfra = 2;

int ExitFor(mp_status status) {
  if (status == MP_OK) return kExitOk;
  return status == MP_ERR_INVALID_ARGUMENT ? kExitUsage : kExitInfra;
}

int Fail(mp_status status) {
  std::cerr << "error: " << mp_status_string(status) << ": " << mp_last_error_message()
            << "\n";
  return ExitFor(status);
}

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string mock;
  std::string out;
  std::string index_dir;
  bool timing = false;
};

class SessionHandle {
 public:
  ~SessionHandle() { mp_session_destroy(s_); }
  mp_session* get() const { return s_; }
  mp_session** out() { return &s_; }

 private:
  mp_session* s_ = nullptr;
};

mp_status Open(const Globals& g, SessionHandle& h) {
  mp_status st = mp_session_create(g.config.empty() ? nullptr : g.config.c_str(), h.out());
  if (st != MP_OK) return st;
  auto set = [&](const char* key, const std::string& value) {
    if (st == MP_OK) st = mp_session_set_option(h.get(), key, value.c_str());
  };
  if (g.seed) set("seed", std::to_string(*g.seed));
  if (g.workers) set("workers", std::to_string(*g.workers));
  if (!g.mock.empty()) set("mock", g.mock);
  if (!g.out.empty()) set("out", g.out);
  if (!g.index_dir.empty()) set("index_dir", g.index_dir);
  if (g.timing) set("record_timing", "1");
  return st;
}

int PrintAndFree(mp_status st, char* text) {
  if (st != MP_OK) return Fail(st);
  if (text != nullptr) {
    std::fputs(text, stdout);
    mp_string_free(text);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-agent clinical consultation engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mp_version()));

  Globals g;
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for mock backends");
  app.add_option("--workers", g.workers, "Worker threads for per-case runs")
      ->check(CLI::Range(1, 1024));
  app.add_option("--mock", g.mock, "Chat mock script; switches every backend to mock mode");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--index", g.index_dir, "Directory holding doctor.idx and pharmacist.idx");
  app.add_flag("--timing", g.timing, "Record per-stage wall time in records");

  std::string corpus;
  auto* build = app.add_subcommand("build-kb", "Classify, chunk and embed a corpus");
  build->add_option("corpus", corpus, "Corpus JSONL")->required();

  std::string dataset;
  bool with_judge = false;
  auto* bench = app.add_subcommand("bench", "Consult and score every case of a dataset");
  bench->add_option("dataset", dataset, "Case JSONL")->required();
  bench->add_flag("--judge", with_judge, "Also score evidence with the judge backend");

  std::string grid;
  auto* ablate = app.add_subcommand("ablate", "Run the agent on/off grid");
  ablate->add_option("dataset", dataset, "Case JSONL")->required();
  ablate->add_option("--grid", grid,
                     "doctor,pharmacist pairs separated by ';' (on/off); default all four");

  std::string complaint, record;
  auto* consult = app.add_subcommand("consult", "One consultation with a printed trace");
  consult->add_option("complaint", complaint, "Chief complaint text")->required();
  consult->add_option("--record", record, "Also write the raw record here");

  std::string run;
  auto* judge = app.add_subcommand("judge", "Judge retrieved evidence of a finished run");
  judge->add_option("run", run, "run.jsonl from bench")->required();
  judge->add_option("dataset", dataset, "Case JSONL")->required();

  std::string fixture_dir;
  int n_cases = 20, n_corrupt = 0;
  auto* fixture = app.add_subcommand("gen-fixture", "Write the synthetic offline benchmark");
  fixture->add_option("dir", fixture_dir, "Output directory")->required();
  fixture->add_option("--cases", n_cases, "Number of cases")->check(CLI::Range(4, 9999));
  fixture->add_option("--corrupt", n_corrupt, "Cases with a wrong agent pharmacist script")
      ->check(CLI::NonNegativeNumber);

  for (auto* sub : {build, bench, ablate, consult, judge, fixture}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (fixture->parsed()) {
    const mp_status st =
        mp_generate_fixture(g.seed.value_or(7), n_cases, n_corrupt, fixture_dir.c_str());
    if (st != MP_OK) return Fail(st);
    std::cout << "fixture written to " << fixture_dir << "\n";
    return kExitOk;
  }

  SessionHandle h;
  if (mp_status st = Open(g, h); st != MP_OK) return Fail(st);
  char* text = nullptr;
  mp_status st = MP_ERR_INVALID_ARGUMENT;
  if (build->parsed()) {
    st = mp_build_kb(h.get(), corpus.c_str(), &text);
  } else if (bench->parsed()) {
    st = mp_bench(h.get(), dataset.c_str(), with_judge ? 1 : 0, &text);
  } else if (ablate->parsed()) {
    st = mp_ablate(h.get(), dataset.c_str(), grid.empty() ? nullptr : grid.c_str(), &text);
  } else if (consult->parsed()) {
    st = mp_consult(h.get(), complaint.c_str(), record.empty() ? nullptr : record.c_str(), &text);
  } else if (judge->parsed()) {
    st = mp_judge(h.get(), run.c_str(), dataset.c_str(), &text);
  }
  return PrintAndFree(st, text);
}
