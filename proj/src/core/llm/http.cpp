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

#include "core/llm/http.hpp"

#include <httplib.h>

#include "core/common.hpp"

namespace medpair::llm {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

SplitUrl Split(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "endpoint url needs a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  if (path_start == std::string::npos) {
    out.origin = url;
  } else {
    out.origin = url.substr(0, path_start);
    out.prefix = url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  return out;
}

}  // namespace

json PostJson(const HttpEndpoint& endpoint, const std::string& path,
              const json& body) {
  const SplitUrl url = Split(endpoint.base_url);
  httplib::Client client(url.origin);
  client.set_connection_timeout(endpoint.timeout_seconds, 0);
  client.set_read_timeout(endpoint.timeout_seconds, 0);
  client.set_write_timeout(endpoint.timeout_seconds, 0);
  httplib::Headers headers;
  if (!endpoint.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint.api_key);
  }
  auto res = client.Post(url.prefix + path, headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError("POST " + endpoint.base_url + path + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status == 429 || res->status >= 500) {
    throw TransportError("POST " + endpoint.base_url + path + " returned HTTP " +
                         std::to_string(res->status));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::kTransport, "POST " + endpoint.base_url + path +
                                           " returned HTTP " +
                                           std::to_string(res->status) + ": " +
                                           res->body);
  }
  try {
    return json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kTransport,
                std::string("unparsable response body: ") + e.what());
  }
}

std::string HttpChatBackend::Send(const ChatRequest& request) {
  json body = {
      {"model", ep_.model},
      {"temperature", request.temperature},
      {"response_format", {{"type", "json_object"}}},
      {"messages",
       json::array({{{"role", "system"}, {"content", request.system_prompt}},
                    {{"role", "user"}, {"content", request.user_prompt}}})},
  };
  const json reply = PostJson(ep_, "/chat/completions", body);
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kTransport,
                std::string("chat reply missing content: ") + e.what());
  }
}

std::vector<EmbeddingVector> HttpEmbeddingBackend::EmbedBatch(
    const std::vector<std::string>& texts) {
  const json reply =
      PostJson(ep_, "/embeddings", {{"model", ep_.model}, {"input", texts}});
  std::vector<EmbeddingVector> out;
  try {
    const auto& data = reply.at("data");
    out.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      const std::size_t slot =
          data[i].contains("index") ? data[i]["index"].get<std::size_t>() : i;
      if (slot >= out.size()) {
        throw Error(ErrorCode::kEmbedding, "embedding index out of range");
      }
      out[slot].values = data[i].at("embedding").get<std::vector<float>>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kEmbedding,
                std::string("malformed embedding reply: ") + e.what());
  }
  return out;
}

double HttpRerankBackend::Score(const std::string& instruction,
                                const std::string& query,
                                const std::string& passage) {
  const json reply = PostJson(ep_, "/rerank",
                              {{"model", ep_.model},
                               {"instruction", instruction},
                               {"query", query},
                               {"documents", json::array({passage})}});
  try {
    return reply.at("results").at(0).at("relevance_score").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kTransport,
                std::string("malformed rerank reply: ") + e.what());
  }
}

}  // namespace medpair::llm
