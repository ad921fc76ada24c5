#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "lucy/errors.hpp"
#include "lucy/http_backend.hpp"
#include "lucy/media.hpp"

using namespace lucy;
using nlohmann::json;

namespace {

std::string ok_reply(const std::string& content) {
  return json{{"choices", json::array({json{{"message", json{{"content", content}}}}})}}.dump();
}

class StubServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit StubServer(Handler handler) {
    server_.Post("/v1/chat/completions",
                 [this, handler](const httplib::Request& req, httplib::Response& res) {
                   ++hits_;
                   handler(req, res);
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int hits() const { return hits_.load(); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

HttpBackendConfig config_for(const StubServer& server) {
  HttpBackendConfig c;
  c.base_url = server.url();
  c.model = "test-model";
  c.api_key_env = "LUCY_TEST_API_KEY";
  c.retry.initial_delay_ms = 1;
  return c;
}

class CannedFrames : public FrameProvider {
 public:
  FrameSet extract(const VideoMeta&, const TimePeriod&, Fps) override {
    FrameSet out;
    out.frames = {"\xff\xd8 first frame bytes", "second frame"};
    out.timestamps_s = {0.5, 1.5};
    return out;
  }
};

class BrokenFrames : public FrameProvider {
 public:
  FrameSet extract(const VideoMeta&, const TimePeriod&, Fps) override {
    throw MediaError("decoder refused the file");
  }
};

ClipRequest clip_request() {
  ClipRequest r;
  r.video = {"vid", "/tmp/vid.mp4", 100};
  r.period = {0, 10};
  r.fps = {1, 5};
  r.instruction = "Look closely.";
  return r;
}

}  // namespace

TEST_CASE("text completion posts one user message and unwraps the reply") {
  json seen_body;
  std::string seen_auth = "unset";
  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen_body = json::parse(req.body);
    seen_auth = req.has_header("Authorization") ? req.get_header_value("Authorization") : "";
    res.set_content(ok_reply("the reply text"), "application/json");
  });

  setenv("LUCY_TEST_API_KEY", "sekrit", 1);
  HttpTextBackend with_key(config_for(server));
  unsetenv("LUCY_TEST_API_KEY");

  CHECK(with_key.complete("describe the lobby", DecodeParams{}) == "the reply text");
  CHECK(with_key.calls() == 1);
  CHECK(server.hits() == 1);
  CHECK(seen_auth == "Bearer sekrit");
  CHECK(seen_body.at("model") == "test-model");
  CHECK(seen_body.at("temperature") == 0.0);
  REQUIRE(seen_body.at("messages").size() == 1);
  CHECK(seen_body.at("messages")[0].at("role") == "user");
  CHECK(seen_body.at("messages")[0].at("content") == "describe the lobby");

  // without the environment variable there is no Authorization header at all
  HttpTextBackend without_key(config_for(server));
  CHECK(without_key.complete("x", DecodeParams{}) == "the reply text");
  CHECK(seen_auth == "");
}

TEST_CASE("server errors are retried with backoff until they clear") {
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    static std::atomic<int> n{0};
    if (++n <= 2) {
      res.status = 503;
      res.set_content("overloaded", "text/plain");
    } else {
      res.set_content(ok_reply("eventually fine"), "application/json");
    }
  });
  HttpTextBackend backend(config_for(server));
  CHECK(backend.complete("p", DecodeParams{}) == "eventually fine");
  CHECK(server.hits() == 3);
}

TEST_CASE("persistent server errors exhaust the retry allowance") {
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
    res.set_content("still broken", "text/plain");
  });
  HttpTextBackend backend(config_for(server));
  CHECK_THROWS_WITH_AS(backend.complete("p", DecodeParams{}),
                       "backend kept failing with status 500 after 4 attempts", BackendError);
  CHECK(server.hits() == 4);  // 1 try + 3 retries
}

TEST_CASE("client errors fail immediately without retrying") {
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    res.status = 404;
    res.set_content("no such model", "text/plain");
  });
  HttpTextBackend backend(config_for(server));
  CHECK_THROWS_AS(backend.complete("p", DecodeParams{}), BackendError);
  CHECK(server.hits() == 1);

  try {
    backend.complete("p", DecodeParams{});
  } catch (const BackendError& e) {
    const std::string what = e.what();
    CHECK(what.find("status 404") != std::string::npos);
    CHECK(what.find("no such model") != std::string::npos);
  }
}

TEST_CASE("malformed reply bodies are backend errors") {
  SUBCASE("non-json body") {
    StubServer server([&](const httplib::Request&, httplib::Response& res) {
      res.set_content("<html>oops</html>", "text/html");
    });
    HttpTextBackend backend(config_for(server));
    CHECK_THROWS_WITH_AS(backend.complete("p", DecodeParams{}), "backend returned non-JSON body",
                         BackendError);
  }
  SUBCASE("missing envelope") {
    StubServer server([&](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"choices":[]})", "application/json");
    });
    HttpTextBackend backend(config_for(server));
    CHECK_THROWS_WITH_AS(backend.complete("p", DecodeParams{}),
                         "backend reply missing choices[0].message.content", BackendError);
  }
}

TEST_CASE("unreachable hosts are backend errors") {
  HttpBackendConfig c;
  c.base_url = "http://127.0.0.1:1";  // nothing listens on port 1
  c.model = "m";
  c.connect_timeout_s = 1;
  HttpTextBackend backend(c);
  CHECK_THROWS_AS(backend.complete("p", DecodeParams{}), BackendError);
}

TEST_CASE("caption requests carry the instruction and one image part per frame") {
  json seen_body;
  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen_body = json::parse(req.body);
    res.set_content(ok_reply("a guard waits by the door"), "application/json");
  });
  CannedFrames frames;
  HttpCaptionBackend backend(config_for(server), frames);

  CHECK(backend.caption(clip_request()) == "a guard waits by the door");
  CHECK(backend.calls() == 1);
  CHECK(seen_body.at("temperature") == 0.0);
  const json& content = seen_body.at("messages")[0].at("content");
  REQUIRE(content.is_array());
  REQUIRE(content.size() == 3);
  CHECK(content[0].at("type") == "text");
  CHECK(content[0].at("text") == "Look closely.");
  CHECK(content[1].at("type") == "image_url");
  const std::string url1 = content[1].at("image_url").at("url");
  const std::string url2 = content[2].at("image_url").at("url");
  const std::string prefix = "data:image/jpeg;base64,";
  CHECK(url1 == prefix + base64_encode("\xff\xd8 first frame bytes"));
  CHECK(url2 == prefix + base64_encode("second frame"));
}

TEST_CASE("caption failures surface as caption errors with the clip attached") {
  SUBCASE("frame extraction failure, server never contacted") {
    StubServer server([&](const httplib::Request&, httplib::Response& res) {
      res.set_content(ok_reply("unused"), "application/json");
    });
    BrokenFrames frames;
    HttpCaptionBackend backend(config_for(server), frames);
    try {
      backend.caption(clip_request());
      FAIL("expected CaptionError");
    } catch (const CaptionError& e) {
      CHECK(std::string(e.what()).find("frame extraction failed") != std::string::npos);
      CHECK(std::string(e.what()).find("decoder refused the file") != std::string::npos);
    }
    CHECK(server.hits() == 0);
  }
  SUBCASE("http failure wraps into a caption error") {
    StubServer server([&](const httplib::Request&, httplib::Response& res) {
      res.status = 404;
      res.set_content("gone", "text/plain");
    });
    CannedFrames frames;
    HttpCaptionBackend backend(config_for(server), frames);
    CHECK_THROWS_AS(backend.caption(clip_request()), CaptionError);
  }
  SUBCASE("empty caption text is rejected") {
    StubServer server([&](const httplib::Request&, httplib::Response& res) {
      res.set_content(ok_reply(""), "application/json");
    });
    CannedFrames frames;
    HttpCaptionBackend backend(config_for(server), frames);
    CHECK_THROWS_AS(backend.caption(clip_request()), CaptionError);
  }
}
