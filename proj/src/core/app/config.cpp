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

#include "core/app/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/common.hpp"

namespace medpair::app {
namespace {

using nlohmann::json;

[[noreturn]] void Bad(const std::string& msg) {
  throw Error(ErrorCode::kInvalidArgument, "config: " + msg);
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

template <typename T>
void Read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    Bad(where + "." + key + " has the wrong type");
  }
}

BackendConfig ParseBackend(const json& obj, const std::string& slot,
                           const std::filesystem::path& base, const EnvLookup& env) {
  BackendConfig b;
  if (!obj.is_object()) Bad("backends." + slot + " must be an object");
  const std::string where = "backends." + slot;
  std::string script;
  Read(obj, "mock", b.mock, where);
  Read(obj, "mock_script", script, where);
  Read(obj, "url", b.url, where);
  Read(obj, "model", b.model, where);
  Read(obj, "api_key", b.api_key, where);
  Read(obj, "api_key_env", b.api_key_env, where);
  Read(obj, "timeout_seconds", b.timeout_seconds, where);
  if (!script.empty()) {
    b.mock = true;
    b.mock_script = Resolve(base, script);
  }
  if (b.mock && !b.url.empty()) Bad(where + " sets both a mock and a url");
  if (b.api_key_env.empty()) {
    std::string upper = slot;
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    b.api_key_env = "MEDPAIR_" + upper + "_API_KEY";
  }
  if (auto key = env(b.api_key_env)) b.api_key = *key;
  if (b.timeout_seconds <= 0) Bad(where + ".timeout_seconds must be positive");
  return b;
}

json BackendSnapshot(const BackendConfig& b) {
  if (b.mock) {
    json j = {{"mode", "mock"}};
    if (!b.mock_script.empty()) j["script"] = b.mock_script.filename().string();
    return j;
  }
  if (b.remote()) return {{"mode", "remote"}, {"url", b.url}, {"model", b.model}};
  return {{"mode", "none"}};
}

}  // namespace

std::optional<std::string> ProcessEnv(const std::string& name) {
  if (const char* v = std::getenv(name.c_str()); v != nullptr && *v != '\0') {
    return std::string(v);
  }
  return std::nullopt;
}

void SystemConfig::Validate() const {
  if (top_k < 1) Bad("retrieval.top_k must be >= 1");
  if (top_n < 1 || top_n > top_k) Bad("retrieval.top_n must lie in [1, top_k]");
  try {
    reflection.Validate();
  } catch (const Error& e) {
    Bad(e.what());
  }
  if (chunking.max_chars == 0 || chunking.overlap_chars >= chunking.max_chars) {
    Bad("chunking.overlap_chars must be smaller than chunking.max_chars");
  }
  if (retry.max_attempts < 1) Bad("retry.max_attempts must be >= 1");
  if (retry.base_delay_ms < 0) Bad("retry.base_delay_ms must be >= 0");
  if (workers < 1) Bad("workers must be >= 1");
  if (embed_dim == 0) Bad("backends.embed.dim must be positive");
  if (chat.mock && chat.mock_script.empty()) Bad("backends.chat mock needs a mock_script");
}

json SystemConfig::Snapshot() const {
  return {{"seed", seed},
          {"backends",
           {{"chat", BackendSnapshot(chat)},
            {"judge", BackendSnapshot(judge.configured() ? judge : chat)},
            {"embed", BackendSnapshot(embed)},
            {"rerank", BackendSnapshot(rerank)},
            {"embed_dim", embed_dim}}},
          {"retrieval", {{"top_k", top_k}, {"top_n", top_n}}},
          {"reflection",
           {{"tau", reflection.tau}, {"r_max", reflection.r_max}, {"q_max", reflection.q_max}}},
          {"chunking",
           {{"max_chars", chunking.max_chars}, {"overlap_chars", chunking.overlap_chars}}},
          {"retry",
           {{"max_attempts", retry.max_attempts}, {"base_delay_ms", retry.base_delay_ms}}}};
}

SystemConfig ParseConfig(const json& doc, const std::filesystem::path& base_dir,
                         const EnvLookup& env) {
  if (!doc.is_object()) Bad("top level must be an object");
  SystemConfig c;
  const json empty = json::object();
  const json& backends = doc.contains("backends") ? doc["backends"] : empty;
  if (!backends.is_object()) Bad("backends must be an object");
  auto slot = [&](const char* name) {
    return ParseBackend(backends.contains(name) ? backends[name] : empty, name, base_dir, env);
  };
  c.chat = slot("chat");
  c.judge = slot("judge");
  c.embed = slot("embed");
  c.rerank = slot("rerank");
  if (backends.contains("embed")) Read(backends["embed"], "dim", c.embed_dim, "backends.embed");
  // Retrieval without any backend configured runs on the offline ones.
  if (!c.embed.configured()) c.embed.mock = true;
  if (!c.rerank.configured()) c.rerank.mock = true;

  const json& r = doc.contains("retrieval") ? doc["retrieval"] : empty;
  Read(r, "top_k", c.top_k, "retrieval");
  Read(r, "top_n", c.top_n, "retrieval");
  const json& rf = doc.contains("reflection") ? doc["reflection"] : empty;
  Read(rf, "tau", c.reflection.tau, "reflection");
  Read(rf, "r_max", c.reflection.r_max, "reflection");
  Read(rf, "q_max", c.reflection.q_max, "reflection");
  const json& ch = doc.contains("chunking") ? doc["chunking"] : empty;
  Read(ch, "max_chars", c.chunking.max_chars, "chunking");
  Read(ch, "overlap_chars", c.chunking.overlap_chars, "chunking");
  const json& rt = doc.contains("retry") ? doc["retry"] : empty;
  Read(rt, "max_attempts", c.retry.max_attempts, "retry");
  Read(rt, "base_delay_ms", c.retry.base_delay_ms, "retry");

  Read(doc, "workers", c.workers, "config");
  Read(doc, "seed", c.seed, "config");
  Read(doc, "record_timing", c.record_timing, "config");
  std::string out_dir, index_dir;
  Read(doc, "out_dir", out_dir, "config");
  Read(doc, "index_dir", index_dir, "config");
  if (!out_dir.empty()) c.out_dir = Resolve(base_dir, out_dir);
  if (!index_dir.empty()) c.index_dir = Resolve(base_dir, index_dir);
  c.Validate();
  return c;
}

SystemConfig LoadConfig(const std::filesystem::path& path, const EnvLookup& env) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return ParseConfig(doc, path.parent_path(), env);
}

void ForceMock(SystemConfig& config, const std::filesystem::path& chat_script) {
  for (BackendConfig* b : {&config.chat, &config.judge}) {
    *b = BackendConfig{};
    b->mock = true;
    b->mock_script = chat_script;
  }
  for (BackendConfig* b : {&config.embed, &config.rerank}) {
    *b = BackendConfig{};
    b->mock = true;
  }
}

json FixtureConfigJson(std::uint64_t seed) {
  return {{"seed", seed},
          {"workers", 1},
          {"index_dir", "kb"},
          {"out_dir", "out"},
          {"backends",
           {{"chat", {{"mock_script", "chat_mock.jsonl"}}},
            {"embed", {{"mock", true}, {"dim", 256}}},
            {"rerank", {{"mock", true}}}}},
          {"retrieval", {{"top_k", 20}, {"top_n", 5}}},
          {"reflection", {{"tau", 0.6}, {"r_max", 2}, {"q_max", 4}}},
          {"chunking", {{"max_chars", 800}, {"overlap_chars", 80}}}};
}

}  // namespace medpair::app
