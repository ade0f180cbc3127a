#include <atomic>
#include <cstdlib>
#include <fstream>
#include <future>
#include <mutex>
#include <sstream>
#include <thread>

#include "astardec/heuristic/prm_http.hpp"
#include "astardec/policy/http_policy.hpp"
#include "astardec/search/astar.hpp"
#include "doctest.h"
#include "httplib.h"

using namespace astardec;

namespace {

// Local stand-in for an OpenAI-compatible completions server and a PRM
// scoring server. Behaviour is switched per test through the public fields.
class MockServer {
 public:
  MockServer() {
    server_.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const int now = ++active_;
      int seen = max_active_.load();
      while (now > seen && !max_active_.compare_exchange_weak(seen, now)) {
      }
      if (delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      --active_;
      const auto body = nlohmann::json::parse(req.body);
      {
        std::lock_guard lock(mutex_);
        requests.push_back(body);
        headers.push_back(req.get_header_value("Authorization"));
      }
      const int call = ++completion_calls;
      if (call <= fail_first) {
        res.status = fail_status;
        res.set_content("busy", "text/plain");
        return;
      }
      if (garbage) {
        res.set_content("<html>oops</html>", "text/html");
        return;
      }
      const int n = body.value("n", 1);
      nlohmann::json choices = nlohmann::json::array();
      for (int i = 0; i < n; ++i) {
        choices.push_back({{"index", i}, {"text", reply(body, i)}, {"finish_reason", "stop"},
                           {"stop_reason", body.contains("stop") ? nlohmann::json("\n\n## Step") : nlohmann::json()}});
      }
      res.set_content(nlohmann::json{{"choices", choices}, {"usage", {{"completion_tokens", 4 * n}}}}.dump(),
                      "application/json");
    });
    server_.Post("/prm/score", [this](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      {
        std::lock_guard lock(mutex_);
        prm_requests.push_back(body);
      }
      if (prm_missing) {
        res.set_content(R"({"scores": []})", "application/json");
        return;
      }
      const auto steps = body["steps"].size();
      nlohmann::json rewards = nlohmann::json::array();
      for (std::size_t i = 0; i < steps; ++i) rewards.push_back(0.1);
      const std::string last = steps ? body["steps"].back().get<std::string>() : "";
      const bool good = last.find("good") != std::string::npos || last.find("boxed{4}") != std::string::npos;
      rewards.push_back(good ? 0.9 : 0.3);
      res.set_content(nlohmann::json{{"rewards", rewards}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  net::EndpointConfig endpoint(const std::string& suffix = "") const {
    net::EndpointConfig e;
    e.base_url = url() + suffix;
    e.retry.initial_backoff = std::chrono::milliseconds(1);
    e.timeout = std::chrono::seconds(5);
    return e;
  }

  int max_active() const { return max_active_; }

  std::vector<nlohmann::json> requests;
  std::vector<std::string> headers;
  std::vector<nlohmann::json> prm_requests;
  std::atomic<int> completion_calls{0};
  int fail_first = 0;
  int fail_status = 503;
  bool garbage = false;
  bool prm_missing = false;
  int delay_ms = 0;

 private:
  // A tiny "model": two first steps, then a final answer under each.
  static std::string reply(const nlohmann::json& body, int i) {
    const auto prompt = body["prompt"].get<std::string>();
    if (!body.contains("stop")) {
      return "## Step 1: good move\n\nTherefore, the final answer is: $\\boxed{4}$. I hope it is correct.";
    }
    if (prompt.find("## Step 1:") == std::string::npos) {
      return i % 2 == 0 ? "## Step 1: weak move" : "## Step 1: good move";
    }
    return prompt.find("good move") != std::string::npos
               ? "Therefore, the final answer is: $\\boxed{4}$. I hope it is correct."
               : "Therefore, the final answer is: $\\boxed{5}$. I hope it is correct.";
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> active_{0};
  std::atomic<int> max_active_{0};
  std::mutex mutex_;
};

policy::HttpPolicyConfig policy_config(const MockServer& server) {
  policy::HttpPolicyConfig c;
  c.endpoint = server.endpoint();
  c.model = "test-model";
  return c;
}

}  // namespace

TEST_SUITE("http") {

TEST_CASE("one request with n = k carries the sampling parameters") {
  MockServer server;
  policy::HttpPolicy policy(policy_config(server));
  policy::SamplingParams params;
  params.seed = 11;
  auto c = policy.sample("Problem: 2 + 2\n\n", 3, params);
  REQUIRE(server.requests.size() == 1);
  const auto& req = server.requests[0];
  CHECK(req["model"] == "test-model");
  CHECK(req["n"] == 3);
  CHECK(req["temperature"] == 0.8);
  CHECK(req["top_p"] == 1.0);
  CHECK(req["max_tokens"] == 512);
  CHECK(req["stop"] == nlohmann::json::array({"\n\n## Step"}));
  CHECK(req["seed"] == 11);
  CHECK(req["prompt"] == "Problem: 2 + 2\n\n");
  REQUIRE(c.size() == 3);
  CHECK(c[0].text == "## Step 1: weak move\n\n");
  CHECK(c[1].text == "## Step 1: good move\n\n");
  CHECK(c[0].token_count + c[1].token_count + c[2].token_count == 12);
}

TEST_CASE("independent requests send n = 1 each") {
  MockServer server;
  auto cfg = policy_config(server);
  cfg.independent_requests = true;
  policy::HttpPolicy policy(cfg);
  auto c = policy.sample("Problem: x\n\n", 4, {});
  CHECK(c.size() == 4);
  REQUIRE(server.requests.size() == 4);
  for (const auto& r : server.requests) CHECK(r["n"] == 1);
}

TEST_CASE("greedy completion sends no stop markers and segments the reply") {
  MockServer server;
  policy::HttpPolicy policy(policy_config(server));
  auto c = policy.complete("Problem: y\n\n", policy::SamplingParams{}.greedy(), 300);
  REQUIRE(server.requests.size() == 1);
  CHECK_FALSE(server.requests[0].contains("stop"));
  CHECK(server.requests[0]["temperature"] == 0.0);
  CHECK(server.requests[0]["max_tokens"] == 300);
  CHECK(c.reached_eos);
  CHECK(c.steps.size() == 2);
  CHECK(c.token_count == 4);
}

TEST_CASE("server errors are retried with backoff") {
  MockServer server;
  server.fail_first = 2;
  policy::HttpPolicy policy(policy_config(server));
  auto c = policy.sample("Problem: z\n\n", 1, {});
  CHECK(c.size() == 1);
  CHECK(server.completion_calls == 3);
}

TEST_CASE("persistent failures surface as PolicyUnavailable") {
  MockServer server;
  server.fail_first = 100;
  policy::HttpPolicy policy(policy_config(server));
  CHECK_THROWS_AS(policy.sample("Problem: z\n\n", 1, {}), PolicyUnavailable);
  CHECK(server.completion_calls == 3);
}

TEST_CASE("client errors are not retried") {
  MockServer server;
  server.fail_first = 100;
  server.fail_status = 400;
  policy::HttpPolicy policy(policy_config(server));
  CHECK_THROWS_AS(policy.sample("Problem: z\n\n", 1, {}), PolicyUnavailable);
  CHECK(server.completion_calls == 1);
}

TEST_CASE("non-JSON bodies are malformed responses") {
  MockServer server;
  server.garbage = true;
  policy::HttpPolicy policy(policy_config(server));
  CHECK_THROWS_AS(policy.sample("Problem: z\n\n", 1, {}), MalformedResponse);
}

TEST_CASE("unreachable endpoints fail after the retry budget") {
  net::EndpointConfig e;
  e.base_url = "http://127.0.0.1:1";
  e.retry.initial_backoff = std::chrono::milliseconds(1);
  e.timeout = std::chrono::seconds(1);
  policy::HttpPolicy policy({e, "m", "/v1/completions", false});
  CHECK_THROWS_AS(policy.sample("Problem\n\n", 1, {}), PolicyUnavailable);
}

TEST_CASE("the API key comes from the environment") {
  MockServer server;
  ::setenv("ASTARDEC_TEST_KEY", "sekret", 1);
  auto cfg = policy_config(server);
  cfg.endpoint.api_key_env = "ASTARDEC_TEST_KEY";
  policy::HttpPolicy policy(cfg);
  policy.sample("Problem\n\n", 1, {});
  REQUIRE(server.headers.size() == 1);
  CHECK(server.headers[0] == "Bearer sekret");
  ::unsetenv("ASTARDEC_TEST_KEY");
}

TEST_CASE("in-flight requests are bounded") {
  MockServer server;
  server.delay_ms = 30;
  auto cfg = policy_config(server);
  cfg.endpoint.max_in_flight = 2;
  policy::HttpPolicy policy(cfg);
  std::vector<std::future<std::vector<policy::Candidate>>> calls;
  for (int i = 0; i < 6; ++i) {
    calls.push_back(std::async(std::launch::async, [&] { return policy.sample("Problem\n\n", 1, {}); }));
  }
  for (auto& f : calls) CHECK(f.get().size() == 1);
  CHECK(server.max_active() <= 2);
}

TEST_CASE("PRM requests carry the formatted trace and use the last reward") {
  MockServer server;
  heuristic::PrmHttpReward prm({server.endpoint("/prm"), "prm-model", "/score"});
  const heuristic::StepTrace trace{"Solve x^2 = 1.",
                                   {"## Step 1: Factor.\nx^2 - 1 = (x-1)(x+1).\n\n", "## Step 2: Solve.\nx = 1 or x = -1."}};
  CHECK(prm.score(trace) == doctest::Approx(0.3));
  REQUIRE(server.prm_requests.size() == 1);
  std::ifstream in(std::string(ASTARDEC_GOLDEN_DIR) + "/prm_input.txt", std::ios::binary);
  std::stringstream golden;
  golden << in.rdbuf();
  CHECK(server.prm_requests[0]["text"] == golden.str());
  CHECK(server.prm_requests[0]["model"] == "prm-model");
  CHECK(server.prm_requests[0]["problem"] == "Solve x^2 = 1.");
  CHECK(prm.score({"p", {"## Step 1: good\n\n"}}) == doctest::Approx(0.9));
}

TEST_CASE("PRM responses without rewards are unavailable") {
  MockServer server;
  server.prm_missing = true;
  heuristic::PrmHttpReward prm({server.endpoint("/prm"), "", "/score"});
  CHECK_THROWS_AS(prm.score({"p", {"a"}}), RewardUnavailable);
}

TEST_CASE("search runs end to end over HTTP backends") {
  MockServer server;
  policy::HttpPolicy policy(policy_config(server));
  heuristic::PrmHttpReward prm({server.endpoint("/prm"), "prm", "/score"});
  search::DecoderOptions options;
  options.controls.k = 2;
  BudgetLedger ledger;
  auto r = search::AStarDecoder(policy, prm, options).decode("Problem: 2 + 2\n\n", ledger, "2 + 2");
  CHECK(r.termination_reason == search::TerminationReason::goal_popped);
  CHECK(r.completion_text.find("good move") != std::string::npos);
  CHECK(r.completion_text.find("boxed{4}") != std::string::npos);
  CHECK(search::verify_trace(r.events).ok());
  CHECK(ledger.prm_passes() == server.prm_requests.size());
}

}  // TEST_SUITE
