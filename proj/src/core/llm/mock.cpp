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

#include "core/llm/mock.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "core/common.hpp"
#include "core/llm/prompt_format.hpp"
#include "core/text.hpp"

namespace medpair::llm {
namespace {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t SplitMix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr int kHashesPerToken = 4;

MockResponse ResponseFromJson(const json& j) {
  MockResponse r;
  if (j.contains("fail") && j["fail"].get<bool>()) r.fail = true;
  if (j.contains("raw")) r.raw = j["raw"].get<std::string>();
  if (j.contains("payload")) r.payload = j["payload"];
  if (!r.fail && !r.raw && !j.contains("payload")) {
    throw Error(ErrorCode::kFormat,
                "mock response needs one of payload, raw or fail");
  }
  return r;
}

json ResponseToJson(const MockResponse& r) {
  json j = json::object();
  if (r.fail) j["fail"] = true;
  else if (r.raw) j["raw"] = *r.raw;
  else j["payload"] = r.payload;
  return j;
}

std::vector<std::string> DefaultQueries(const std::string& prompt) {
  auto complaint = PromptBlock(prompt, "Complaint");
  std::string q = complaint ? text::Trim(*complaint) : std::string();
  if (q.empty()) q = "clinical assessment";
  return {q};
}

}  // namespace

MockScript MockScript::FromJsonLines(const std::string& content) {
  MockScript script;
  std::size_t line_no = 0;
  for (const auto& line : text::SplitLines(content)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      const SchemaTag tag = ParseSchemaTag(j.at("tag").get<std::string>());
      if (j.value("default", false)) {
        script.defaults[tag] = ResponseFromJson(j);
        continue;
      }
      MockRule rule;
      rule.tag = tag;
      if (j.contains("contains")) {
        rule.contains = j["contains"].get<std::vector<std::string>>();
      }
      if (j.contains("excludes")) {
        rule.excludes = j["excludes"].get<std::vector<std::string>>();
      }
      if (j.contains("responses")) {
        for (const auto& r : j["responses"]) rule.responses.push_back(ResponseFromJson(r));
      } else {
        rule.responses.push_back(ResponseFromJson(j));
      }
      if (rule.responses.empty()) {
        throw Error(ErrorCode::kFormat, "rule has no responses");
      }
      script.rules.push_back(std::move(rule));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kFormat, "mock script line " +
                                          std::to_string(line_no) + ": " +
                                          e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "mock script line " + std::to_string(line_no) +
                                ": " + e.what());
    }
  }
  return script;
}

MockScript MockScript::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot read mock script " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromJsonLines(buf.str());
}

std::string MockScript::ToJsonLines() const {
  std::ostringstream os;
  for (const auto& rule : rules) {
    json j;
    j["tag"] = std::string(ToString(rule.tag));
    if (!rule.contains.empty()) j["contains"] = rule.contains;
    if (!rule.excludes.empty()) j["excludes"] = rule.excludes;
    if (rule.responses.size() == 1) {
      j.update(ResponseToJson(rule.responses.front()));
    } else {
      j["responses"] = json::array();
      for (const auto& r : rule.responses) j["responses"].push_back(ResponseToJson(r));
    }
    os << j.dump() << "\n";
  }
  for (const auto& [tag, response] : defaults) {
    json j;
    j["tag"] = std::string(ToString(tag));
    j["default"] = true;
    j.update(ResponseToJson(response));
    os << j.dump() << "\n";
  }
  return os.str();
}

json DefaultPayload(SchemaTag tag, const std::string& prompt) {
  const auto options_block = PromptBlock(prompt, "Options");
  const auto options =
      options_block ? ParseOptionLines(*options_block)
                    : std::vector<std::pair<std::string, std::string>>{};
  switch (tag) {
    case SchemaTag::kPlan:
      return {{"department", "unknown"},
              {"queries", DefaultQueries(prompt)},
              {"reasoning", "default plan"}};
    case SchemaTag::kQueries:
      return {{"queries", DefaultQueries(prompt)}};
    case SchemaTag::kConfidence:
      return {{"sufficiency", 1.0}, {"accuracy", 1.0},
              {"rationale", "default assessment"}};
    case SchemaTag::kDiagnosis: {
      json ranked = json::array();
      if (options.size() >= 3) {
        for (std::size_t i = 0; i < 3; ++i) {
          ranked.push_back({{"condition", options[i].second}, {"rationale", ""}});
        }
      } else {
        for (int i = 1; i <= 3; ++i) {
          ranked.push_back({{"condition", "undetermined condition " + std::to_string(i)},
                            {"rationale", ""}});
        }
      }
      return {{"ranked", ranked}};
    }
    case SchemaTag::kAdoption:
      return {{"adopt", true}, {"justification", "default adoption"}};
    case SchemaTag::kMedication:
      if (!options.empty()) {
        return {{"recommended", json::array({{{"drug", options[0].second}, {"rationale", ""}}})},
                {"selected_option", options[0].first}};
      }
      return {{"recommended", json::array({{{"drug", "no specific medication"}, {"rationale", ""}}})}};
    case SchemaTag::kJudge: {
      std::size_t n = 0;
      for (const auto& line : text::SplitLines(prompt)) {
        if (line.rfind("[doc ", 0) == 0) ++n;
      }
      return {{"scores", std::vector<int>(n, 5)}};
    }
    case SchemaTag::kClassify:
      return {{"label", "Both"}, {"rationale", "default label"}};
  }
  return json::object();
}

MockChatBackend::MockChatBackend(MockScript script)
    : script_(std::move(script)), cursor_(script_.rules.size(), 0) {}

std::string MockChatBackend::Send(const ChatRequest& request) {
  const MockResponse* chosen = nullptr;
  {
    std::lock_guard<std::mutex> lock(mu_);
    calls_.push_back(request);
    for (std::size_t i = 0; i < script_.rules.size(); ++i) {
      const auto& rule = script_.rules[i];
      if (rule.tag != request.schema_tag) continue;
      bool ok = true;
      for (const auto& needle : rule.contains) {
        if (!text::Contains(request.user_prompt, needle)) { ok = false; break; }
      }
      for (const auto& needle : rule.excludes) {
        if (!ok) break;
        if (text::Contains(request.user_prompt, needle)) ok = false;
      }
      if (!ok) continue;
      std::size_t& cur = cursor_[i];
      chosen = &rule.responses[std::min(cur, rule.responses.size() - 1)];
      ++cur;
      break;
    }
    if (chosen == nullptr) {
      auto it = script_.defaults.find(request.schema_tag);
      if (it != script_.defaults.end()) chosen = &it->second;
    }
  }
  if (chosen == nullptr) {
    return DefaultPayload(request.schema_tag, request.user_prompt).dump();
  }
  if (chosen->fail) throw TransportError("mock transport failure");
  if (chosen->raw) return *chosen->raw;
  return chosen->payload.dump();
}

std::vector<ChatRequest> MockChatBackend::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dim must be positive");
}

EmbeddingVector HashEmbedder::EmbedOne(const std::string& input) const {
  EmbeddingVector v;
  v.values.assign(dim_, 0.0f);
  for (const auto& token : text::Tokenize(input)) {
    std::uint64_t state = Fnv1a(token) ^ seed_;
    for (int k = 0; k < kHashesPerToken; ++k) {
      const std::uint64_t h = SplitMix(state);
      v.values[h % dim_] += (h >> 63) ? 1.0f : -1.0f;
    }
  }
  if (v.Norm() == 0.0) {
    std::uint64_t state = Fnv1a(input) ^ seed_;
    v.values[SplitMix(state) % dim_] = 1.0f;
  }
  v.Normalize();
  return v;
}

std::vector<EmbeddingVector> HashEmbedder::EmbedBatch(
    const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(EmbedOne(t));
  return out;
}

double OverlapReranker::Score(const std::string& /*instruction*/,
                              const std::string& query,
                              const std::string& passage) {
  const auto q = text::Tokenize(query);
  if (q.empty()) return 0.0;
  const std::set<std::string> query_set(q.begin(), q.end());
  const auto p = text::Tokenize(passage);
  const std::set<std::string> passage_set(p.begin(), p.end());
  std::size_t hits = 0;
  for (const auto& t : query_set) hits += passage_set.count(t);
  return static_cast<double>(hits) / static_cast<double>(query_set.size());
}

}  // namespace medpair::llm
