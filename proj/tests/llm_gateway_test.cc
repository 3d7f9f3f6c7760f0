// Copyright 2026 The Seedforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seedforge/llm_gateway.h"

#include <stdlib.h>

#include <atomic>
#include <chrono>
#include <string>
#include <thread>

#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"
#include "seedforge/common.h"
#include "./test_util.h"

namespace seedforge {
namespace {

MockScriptbook TwoBucketBook() {
  MockScriptbook book;
  book.AddEntry({"cold", {"hello"}, std::nullopt, TemperatureBucket::kGreedy, {"greedy answer"}});
  book.AddEntry({"warm", {"hello"}, std::nullopt, TemperatureBucket::kSampled,
                 {"sampled one", "sampled two", "sampled three"}});
  book.set_default("fallback");
  return book;
}

CompletionRequest Req(std::string prompt, double temperature, uint32_t draw = 0) {
  CompletionRequest r;
  r.prompt = std::move(prompt);
  r.temperature = temperature;
  r.draw_index = draw;
  return r;
}

TEST(MockBackendTest, SameRequestSameText) {
  MockBackend mock(TwoBucketBook());
  auto a = mock.Complete(Req("hello there", 0.9, 4));
  auto b = mock.Complete(Req("hello there", 0.9, 4));
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.backend_id, "mock");
}

TEST(MockBackendTest, TemperatureSelectsBucket) {
  MockBackend mock(TwoBucketBook());
  EXPECT_EQ(mock.Complete(Req("hello", 0.0)).text, "greedy answer");
  std::string warm = mock.Complete(Req("hello", 0.9)).text;
  EXPECT_NE(warm, "greedy answer");
  EXPECT_EQ(warm.rfind("sampled", 0), 0u);
}

TEST(MockBackendTest, DrawIndexRotatesResponses) {
  MockBackend mock(TwoBucketBook());
  EXPECT_EQ(mock.Complete(Req("hello", 0.5, 0)).text, "sampled one");
  EXPECT_EQ(mock.Complete(Req("hello", 0.5, 1)).text, "sampled two");
  EXPECT_EQ(mock.Complete(Req("hello", 0.5, 3)).text, "sampled one");
}

TEST(MockBackendTest, SeedRotationIsDeterministic) {
  MockBackend mock(TwoBucketBook());
  auto with_seed = [&](uint64_t seed, uint32_t draw) {
    auto r = Req("hello", 0.5, draw);
    r.seed = seed;
    return mock.Complete(r).text;
  };
  for (uint32_t d = 0; d < 6; ++d) EXPECT_EQ(with_seed(11, d), with_seed(11, d));
}

TEST(MockBackendTest, UnmatchedPromptGetsDefault) {
  MockBackend mock(TwoBucketBook());
  EXPECT_EQ(mock.Complete(Req("goodbye", 0.0)).text, "fallback");
  MockBackend empty{MockScriptbook()};
  EXPECT_EQ(empty.Complete(Req("anything", 1.0)).text, MockScriptbook::kBuiltinDefault);
}

TEST(MockBackendTest, FingerprintEntryWinsOverSubstring) {
  MockScriptbook book = TwoBucketBook();
  book.AddEntry({"exact", {}, PromptFingerprint("hello"), std::nullopt, {"exact hit"}});
  MockBackend mock(std::move(book));
  EXPECT_EQ(mock.Complete(Req("hello", 0.0)).text, "exact hit");
  EXPECT_EQ(mock.Complete(Req("hello!", 0.0)).text, "greedy answer");
}

TEST(MockBackendTest, ProbeIsHealthy) {
  MockBackend mock(TwoBucketBook());
  HealthReport h = mock.Probe();
  EXPECT_TRUE(h.healthy);
  EXPECT_FALSE(h.backend_id.empty());
}

TEST(CompletionRequestTest, Validation) {
  MockBackend mock(TwoBucketBook());
  EXPECT_THROW(mock.Complete(Req("hello", 2.5)), Error);
  EXPECT_THROW(mock.Complete(Req("hello", -0.1)), Error);
  auto r = Req("hello", 0.0);
  r.max_tokens = 0;
  EXPECT_THROW(mock.Complete(r), Error);
}

TEST(ScriptbookTest, FixtureLoadsAndFencesFiles) {
  MockScriptbook book = testing::FixtureScriptbook();
  const std::string &text = book.Lookup(
      "Generate Python code so that the running result of the code is mini-doc file",
      TemperatureBucket::kSampled, 0, std::nullopt);
  EXPECT_NE(text.find("```python"), std::string::npos);
}

TEST(ScriptbookTest, BadBucketIsConfigError) {
  nlohmann::json j = {{"entries", {{{"name", "x"}, {"bucket", "lukewarm"}, {"responses", {"a"}}}}}};
  try {
    MockScriptbook::FromJson(j);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

// A chat-completions stub on a loopback port.
class StubServer {
 public:
  StubServer() {
    server_.Get(R"(/v1/models/(.+))", [this](const httplib::Request &req, httplib::Response &res) {
      if (req.get_header_value("Authorization") != "Bearer sekrit") {
        res.status = 401;
        return;
      }
      res.set_content(nlohmann::json({{"id", req.matches[1].str()}}).dump(), "application/json");
    });
    server_.Post("/v1/chat/completions", [this](const httplib::Request &req,
                                                httplib::Response &res) {
      ++calls_;
      if (req.get_header_value("Authorization") != "Bearer sekrit") {
        res.status = 401;
        return;
      }
      if (failures_left_ > 0) {
        --failures_left_;
        res.status = 503;
        return;
      }
      auto body = nlohmann::json::parse(req.body);
      std::string prompt = body["messages"][0]["content"];
      nlohmann::json out = {
          {"choices", {{{"message", {{"role", "assistant"}, {"content", "echo: " + prompt}}},
                        {"finish_reason", "stop"}}}}};
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  void FailNext(int n) { failures_left_ = n; }
  int calls() const { return calls_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> failures_left_{0};
  std::atomic<int> calls_{0};
};

RemoteConfig StubConfig(const StubServer &stub, const char *key_env) {
  RemoteConfig cfg;
  cfg.endpoint = stub.endpoint();
  cfg.model = "stub-model";
  cfg.api_key_env = key_env;
  cfg.timeout_secs = 5;
  cfg.max_attempts = 3;
  cfg.initial_backoff = std::chrono::milliseconds(1);
  return cfg;
}

TEST(RemoteBackendTest, UnsetKeyNamesTheVariable) {
  unsetenv("SEEDFORGE_TEST_UNSET_KEY");
  RemoteConfig cfg;
  cfg.api_key_env = "SEEDFORGE_TEST_UNSET_KEY";
  RemoteBackend remote(cfg);
  try {
    remote.Complete(Req("hi", 0.0));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kAuth);
    EXPECT_NE(std::string(e.what()).find("SEEDFORGE_TEST_UNSET_KEY"), std::string::npos);
  }
}

TEST(RemoteBackendTest, CompletesAgainstStub) {
  StubServer stub;
  setenv("SEEDFORGE_TEST_KEY", "sekrit", 1);
  RemoteBackend remote(StubConfig(stub, "SEEDFORGE_TEST_KEY"));
  auto r = remote.Complete(Req("ping", 0.0));
  EXPECT_EQ(r.text, "echo: ping");
  EXPECT_FALSE(r.truncated);
  EXPECT_EQ(r.backend_id, "remote:stub-model");
}

TEST(RemoteBackendTest, RetriesServerErrors) {
  StubServer stub;
  setenv("SEEDFORGE_TEST_KEY", "sekrit", 1);
  RemoteBackend remote(StubConfig(stub, "SEEDFORGE_TEST_KEY"));
  stub.FailNext(2);
  EXPECT_EQ(remote.Complete(Req("again", 0.0)).text, "echo: again");
  EXPECT_EQ(stub.calls(), 3);
  stub.FailNext(3);
  try {
    remote.Complete(Req("again", 0.0));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
  }
}

TEST(RemoteBackendTest, RejectedKeyIsAuthError) {
  StubServer stub;
  setenv("SEEDFORGE_TEST_BAD_KEY", "wrong", 1);
  RemoteBackend remote(StubConfig(stub, "SEEDFORGE_TEST_BAD_KEY"));
  try {
    remote.Complete(Req("ping", 0.0));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kAuth);
  }
  EXPECT_EQ(stub.calls(), 1);
}

TEST(RemoteBackendTest, ProbeEchoesModel) {
  StubServer stub;
  setenv("SEEDFORGE_TEST_KEY", "sekrit", 1);
  RemoteBackend remote(StubConfig(stub, "SEEDFORGE_TEST_KEY"));
  HealthReport h = remote.Probe();
  EXPECT_TRUE(h.healthy) << h.cause;
  EXPECT_EQ(h.model_id, "stub-model");
}

TEST(RemoteBackendTest, ProbeBadEndpointIsUnhealthy) {
  setenv("SEEDFORGE_TEST_KEY", "sekrit", 1);
  RemoteConfig cfg;
  cfg.endpoint = "http://127.0.0.1:1/v1";
  cfg.api_key_env = "SEEDFORGE_TEST_KEY";
  cfg.timeout_secs = 2;
  RemoteBackend remote(cfg);
  HealthReport h = remote.Probe();
  EXPECT_FALSE(h.healthy);
  EXPECT_FALSE(h.cause.empty());
}

TEST(RemoteBackendTest, EndpointWithoutSchemeIsConfigError) {
  RemoteConfig cfg;
  cfg.endpoint = "api.example.com/v1";
  try {
    RemoteBackend remote(cfg);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

}  // namespace
}  // namespace seedforge
