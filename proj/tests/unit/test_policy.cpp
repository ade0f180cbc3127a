#include <fstream>
#include <sstream>

#include "astardec/policy/http_policy.hpp"
#include "astardec/policy/prompt.hpp"
#include "astardec/policy/scripted_policy.hpp"
#include "astardec/policy/segment.hpp"
#include "doctest.h"

using namespace astardec;
using namespace astardec::policy;

namespace {

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(ASTARDEC_GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string join(const std::vector<Thought>& ts) {
  std::string out;
  for (const auto& t : ts) out += t.text;
  return out;
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("segment splits at step headers") {
  auto ts = segment("## Step 1: a\nx\n## Step 2: b\ny");
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].text == "## Step 1: a\nx\n");
  CHECK(ts[1].text == "## Step 2: b\ny");
}

TEST_CASE("segment of empty text is empty") { CHECK(segment("").empty()); }

TEST_CASE("segment flags the final-answer thought") {
  const std::string text =
      "## Step 1: add\n3 + 4 = 7.\n\nTherefore, the final answer is: boxed{7}. I hope it is correct.";
  auto ts = segment(text);
  REQUIRE(ts.size() == 2);
  CHECK(ts[1].text == "Therefore, the final answer is: boxed{7}. I hope it is correct.");
  CHECK(ts.back().contains_eos);
  CHECK_FALSE(ts.front().contains_eos);
}

TEST_CASE("segment ignores things that only look like headers") {
  auto ts = segment("## Step one: not a header\n## Step 2 missing colon\n");
  CHECK(ts.size() == 1);
}

TEST_CASE("segment round-trips arbitrary text") {
  const std::vector<std::string> samples{
      "plain text", "## Step 1:", "\n\n## Step 12: x\n\n## Step 13: y", "Therefore, the final answer is:",
      "a Therefore, the final answer is: b ## Step 3: c", "## Step 1: a## Step 2: b", "   \n\n   "};
  for (const auto& s : samples) CHECK(join(segment(s)) == s);
  Rng rng(42);
  const std::vector<std::string> pieces{"## Step ", "1", "2:", ":", " ", "\n", "x", "Therefore, the final answer is:",
                                        "I hope it is correct."};
  for (int i = 0; i < 500; ++i) {
    std::string s;
    const auto n = rng.uniform_int(0, 12);
    for (std::int64_t j = 0; j < n; ++j) s += pieces[static_cast<std::size_t>(rng.uniform_int(0, 8))];
    CHECK(join(segment(s)) == s);
  }
}

TEST_CASE("thought token counts follow the text") {
  for (const auto& t : segment("## Step 1: a b c\n\n## Step 2: d")) CHECK(t.token_count == count_tokens(t.text));
  CHECK(count_tokens("") == 0);
  CHECK(count_tokens("   ") == 1);
  CHECK(count_tokens("a  b\tc\n") == 3);
}

TEST_CASE("rendered prompt matches the golden file") {
  CHECK(render_cot_prompt("What is 1 + 1?") == read_golden("cot_prompt.txt"));
}

TEST_CASE("rendered prompt contains the problem and the boxed instruction") {
  const auto p = render_cot_prompt("1+1?");
  CHECK(p.find("1+1?") != std::string::npos);
  CHECK(p.find("Therefore, the final answer is: boxed{answer}. I hope it is correct.") != std::string::npos);
  CHECK(p.find("## Step 1: [Concise description]") != std::string::npos);
}

TEST_CASE("two prompts differ only in the problem slot") {
  const auto a = render_cot_prompt("first problem");
  const auto b = render_cot_prompt("another one");
  const std::string head(kCotInstructions);
  CHECK(a.substr(0, head.size()) == b.substr(0, head.size()));
  CHECK(a.substr(head.size()) == "\n\nProblem: first problem\n\n");
  CHECK(b.substr(head.size()) == "\n\nProblem: another one\n\n");
  CHECK_THROWS_AS(render_cot_prompt(""), ConfigError);
}

TEST_CASE("scripted policy returns its entries verbatim") {
  ScriptedPolicy p;
  p.add("prefix", {"## Step 1: A", "## Step 1: B"});
  auto c = p.sample("prefix", 2, {});
  REQUIRE(c.size() == 2);
  CHECK(c[0].text == "## Step 1: A");
  CHECK(c[1].text == "## Step 1: B");
  CHECK(c[0].token_count == 4);
  CHECK(p.sample("prefix", 1, {}).size() == 1);
  CHECK(p.sample("unknown", 3, {}).empty());
}

TEST_CASE("scripted policy is pure") {
  ScriptedPolicy p;
  p.add("x", {"a", "b", "c"});
  SamplingParams s1, s2;
  s1.seed = 1;
  s2.seed = 1;
  CHECK(p.sample("x", 3, s1) == p.sample("x", 3, s2));
}

TEST_CASE("scripted policy loads from json") {
  const auto doc = nlohmann::json::parse(R"({
    "schema_version": 1,
    "entries": [
      {"prefix": "P", "candidates": ["## Step 1: go\n\n", {"text": "done", "eos": true}]},
      {"prefix_hash": ")" + to_hex(fnv1a64("Q")) + R"(", "candidates": ["Therefore, the final answer is: boxed{1}. I hope it is correct."]}
    ]})");
  auto p = ScriptedPolicy::from_json(doc);
  auto c = p.sample("P", 5, {});
  REQUIRE(c.size() == 2);
  CHECK_FALSE(c[0].contains_eos);
  CHECK(c[1].contains_eos);
  CHECK(c[1].finish_reason == FinishReason::eos);
  auto q = p.sample("Q", 1, {});
  REQUIRE(q.size() == 1);
  CHECK(q[0].contains_eos);
  CHECK_THROWS_AS(ScriptedPolicy::from_json(nlohmann::json::parse(R"({"entries": [{"candidates": []}]})")),
                  ConfigError);
}

TEST_CASE("default completion chains single samples") {
  ScriptedPolicy p;
  p.add("P", {"## Step 1: a\n\n"});
  p.add("P## Step 1: a\n\n", {"Therefore, the final answer is: boxed{2}. I hope it is correct."});
  auto c = p.complete("P", {}, 1000);
  CHECK(c.reached_eos);
  CHECK(c.steps.size() == 2);
  CHECK(c.policy_calls == 2);
  CHECK(c.token_count == 4 + 11);
}

TEST_CASE("token allocation splits usage in proportion and sums exactly") {
  CHECK(allocate_tokens(10, {1, 1}) == std::vector<std::uint32_t>{5, 5});
  CHECK(allocate_tokens(7, {3, 1}) == std::vector<std::uint32_t>{5, 2});
  CHECK(allocate_tokens(2, {5, 5, 5}) == std::vector<std::uint32_t>{1, 1, 0});
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::uint32_t> w(static_cast<std::size_t>(rng.uniform_int(1, 10)));
    for (auto& x : w) x = static_cast<std::uint32_t>(rng.uniform_int(0, 50));
    const auto total = static_cast<std::uint64_t>(rng.uniform_int(static_cast<std::int64_t>(w.size()), 2000));
    const auto parts = allocate_tokens(total, w);
    std::uint64_t sum = 0;
    for (auto p : parts) {
      CHECK(p >= 1);
      sum += p;
    }
    CHECK(sum == total);
  }
}

TEST_CASE("completion responses parse into candidates") {
  const auto response = nlohmann::json::parse(R"({
    "choices": [
      {"text": "## Step 1: a b c", "finish_reason": "stop", "stop_reason": "\n\n## Step"},
      {"text": "Therefore, the final answer is: boxed{1}. I hope it is correct.", "finish_reason": "stop"},
      {"text": "## Step 1: x y z w", "finish_reason": "length"},
      {"text": "## Step 1: extra", "finish_reason": "stop"}
    ],
    "usage": {"completion_tokens": 30}})");
  auto c = HttpPolicy::parse_response(response, 3, 512);
  REQUIRE(c.size() == 3);
  CHECK(c[0].finish_reason == FinishReason::stop_marker);
  CHECK_FALSE(c[0].contains_eos);
  CHECK(c[1].contains_eos);
  CHECK(c[1].finish_reason == FinishReason::eos);
  CHECK(c[2].finish_reason == FinishReason::length);
  CHECK(c[0].token_count + c[1].token_count + c[2].token_count == 30);

  auto capped = HttpPolicy::parse_response(response, 3, 4);
  for (const auto& x : capped) CHECK(x.token_count <= 4);
}

TEST_CASE("vLLM style EOS is detected from a null stop reason") {
  const auto response = nlohmann::json::parse(
      R"({"choices": [{"text": "## Step 3: done", "finish_reason": "stop", "stop_reason": null}]})");
  auto c = HttpPolicy::parse_response(response, 1, 512);
  REQUIRE(c.size() == 1);
  CHECK(c[0].contains_eos);
}

TEST_CASE("responses without text are malformed") {
  CHECK_THROWS_AS(HttpPolicy::parse_response(nlohmann::json::parse(R"({"choices": []})"), 1, 8), MalformedResponse);
  CHECK_THROWS_AS(HttpPolicy::parse_response(nlohmann::json::parse(R"({"error": "x"})"), 1, 8), MalformedResponse);
  CHECK_THROWS_AS(HttpPolicy::parse_response(nlohmann::json::parse(R"({"choices": [{"text": ""}]})"), 1, 8),
                  MalformedResponse);
}

}  // TEST_SUITE
