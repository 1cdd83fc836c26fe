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
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "core/agents/agents.hpp"
#include "core/kb/kb.hpp"
#include "core/llm/backend.hpp"

namespace medpair::app {

// One backend slot. Mock and remote settings are mutually exclusive.
struct BackendConfig {
  bool mock = false;
  std::filesystem::path mock_script;  // chat-like slots only
  std::string url;
  std::string model;
  std::string api_key;
  std::string api_key_env;
  int timeout_seconds = 120;

  bool remote() const { return !url.empty(); }
  bool configured() const { return mock || remote(); }
};

struct SystemConfig {
  BackendConfig chat;
  BackendConfig judge;  // falls back to chat when unconfigured
  BackendConfig embed;
  BackendConfig rerank;
  std::size_t embed_dim = 256;

  int top_k = 20;
  int top_n = 5;
  agents::ReflectionConfig reflection;
  kb::ChunkParams chunking;
  llm::RetryPolicy retry;

  int workers = 1;
  std::filesystem::path out_dir = "out";
  std::filesystem::path index_dir = "kb";
  std::uint64_t seed = 7;
  bool record_timing = false;

  // Throws Error(kInvalidArgument) on the first out-of-range value.
  void Validate() const;

  // Provenance copy: every setting that can change results, never secrets,
  // worker width, or output locations.
  nlohmann::json Snapshot() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> ProcessEnv(const std::string& name);

// Relative paths inside the document resolve against `base_dir`. API keys
// come from the variable named by api_key_env (default
// MEDPAIR_<SLOT>_API_KEY), which wins over any inline key.
SystemConfig ParseConfig(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                         const EnvLookup& env = ProcessEnv);

SystemConfig LoadConfig(const std::filesystem::path& path,
                        const EnvLookup& env = ProcessEnv);

// Switches every slot to its offline backend, using `chat_script` for the
// chat and judge scripts.
void ForceMock(SystemConfig& config, const std::filesystem::path& chat_script);

// Config the fixture generator writes next to its files.
nlohmann::json FixtureConfigJson(std::uint64_t seed);

}  // namespace medpair::app
