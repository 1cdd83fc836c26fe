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

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "httplib.h"

#include "core/common.hpp"
#include "core/llm/client.hpp"
#include "core/llm/http.hpp"

namespace medpair::llm {
namespace {

// OpenAI-style stub on an ephemeral loopback port.
class StubServer {
 public:
  StubServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      ++chat_calls;
      const auto body = json::parse(req.body);
      last_auth = req.get_header_value("Authorization");
      last_chat = body;
      if (fail_first > 0) {
        --fail_first;
        res.status = 503;
        return;
      }
      if (status != 200) {
        res.status = status;
        res.set_content("nope", "text/plain");
        return;
      }
      json reply = {{"choices", {{{"message", {{"content", R"({"adopt": true})"}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    server_.Post("/v1/embeddings", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = json::parse(req.body);
      json data = json::array();
      const auto n = body["input"].size();
      // Reverse order with explicit indexes.
      for (std::size_t i = n; i-- > 0;) {
        data.push_back({{"index", i}, {"embedding", {static_cast<float>(i + 1), 0.0f}}});
      }
      res.set_content(json{{"data", data}}.dump(), "application/json");
    });
    server_.Post("/v1/rerank", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = json::parse(req.body);
      const double score = body["documents"][0] == body["query"] ? 1.0 : 0.25;
      res.set_content(json{{"results", {{{"index", 0}, {"relevance_score", score}}}}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  HttpEndpoint Endpoint() const {
    return {"http://127.0.0.1:" + std::to_string(port_) + "/v1", "stub-model", "", 5};
  }

  std::atomic<int> chat_calls{0};
  std::atomic<int> fail_first{0};
  int status = 200;
  std::string last_auth;
  json last_chat;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(Http, ChatSendsBothMessagesAndBearerToken) {
  StubServer stub;
  auto ep = stub.Endpoint();
  ep.api_key = "sekret";
  HttpChatBackend chat(ep);
  ChatRequest req;
  req.system_prompt = "sys";
  req.user_prompt = "user";
  req.schema_tag = SchemaTag::kAdoption;
  const auto out = Complete(chat, req, {3, 0});
  EXPECT_TRUE(out.payload["adopt"].get<bool>());
  EXPECT_EQ(stub.last_auth, "Bearer sekret");
  EXPECT_EQ(stub.last_chat["model"], "stub-model");
  EXPECT_EQ(stub.last_chat["messages"][0]["content"], "sys");
  EXPECT_EQ(stub.last_chat["messages"][1]["content"], "user");
}

TEST(Http, ServerErrorsAreRetried) {
  StubServer stub;
  stub.fail_first = 2;
  HttpChatBackend chat(stub.Endpoint());
  ChatRequest req;
  req.schema_tag = SchemaTag::kAdoption;
  const auto out = Complete(chat, req, {3, 0});
  EXPECT_EQ(out.attempts, 3);
  EXPECT_EQ(stub.chat_calls.load(), 3);
}

TEST(Http, ClientErrorsAreNotRetried) {
  StubServer stub;
  stub.status = 401;
  HttpChatBackend chat(stub.Endpoint());
  ChatRequest req;
  req.schema_tag = SchemaTag::kAdoption;
  try {
    Complete(chat, req, {3, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
  }
  EXPECT_EQ(stub.chat_calls.load(), 1);
}

TEST(Http, UnreachableHostIsATransportError) {
  HttpChatBackend chat({"http://127.0.0.1:1/v1", "m", "", 1});
  ChatRequest req;
  try {
    Complete(chat, req, {2, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
  }
}

TEST(Http, EmbeddingsHonourReplyIndexes) {
  StubServer stub;
  HttpEmbeddingBackend emb(stub.Endpoint(), 2);
  const auto v = emb.EmbedBatch({"a", "b", "c"});
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].values[0], 1.0f);
  EXPECT_EQ(v[2].values[0], 3.0f);
  // Normalized by the client wrapper.
  EXPECT_NEAR(Embed(emb, {"a"}, {1, 0})[0].Norm(), 1.0, 1e-6);
}

TEST(Http, RerankReadsTheFirstResult) {
  StubServer stub;
  HttpRerankBackend rr(stub.Endpoint());
  EXPECT_DOUBLE_EQ(rr.Score("i", "q", "q"), 1.0);
  EXPECT_DOUBLE_EQ(rr.Score("i", "q", "p"), 0.25);
}

TEST(Http, UrlWithoutSchemeIsRejected) {
  HttpChatBackend chat({"localhost:9/v1", "m", "", 1});
  try {
    chat.Send({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

}  // namespace
}  // namespace medpair::llm
