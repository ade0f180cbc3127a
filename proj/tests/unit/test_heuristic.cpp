#include <cmath>
#include <filesystem>
#include <fstream>

#include "astardec/heuristic/prm_http.hpp"
#include "astardec/heuristic/reward.hpp"
#include "doctest.h"

using namespace astardec;
using namespace astardec::heuristic;

namespace {

class Counting : public RewardModel {
 public:
  explicit Counting(double value) : value_(value) {}
  double score(const StepTrace&) override {
    ++calls;
    return value_;
  }
  int calls = 0;

 private:
  double value_;
};

}  // namespace

TEST_SUITE("heuristic") {

TEST_CASE("heuristic is one minus reward") {
  CHECK(heuristic_value(1.0) == 0.0);
  CHECK(heuristic_value(0.0) == 1.0);
  CHECK(heuristic_value(0.85) == doctest::Approx(0.15));
}

TEST_CASE("inverting twice returns the reward and ordering flips") {
  for (int i = 0; i <= 100; ++i) {
    const double r = i / 100.0;
    CHECK(heuristic_value(heuristic_value(r)) == doctest::Approx(r));
    if (i > 0) CHECK(heuristic_value((i - 1) / 100.0) > heuristic_value(r));
  }
}

TEST_CASE("quantized values add and subtract exactly") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double a = quantize(rng.uniform01());
    const double b = quantize(rng.uniform01());
    const double c = quantize(rng.uniform01());
    CHECK((a + b) - b == a);
    CHECK((a - b) + b == a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(std::ldexp(a, 32) == std::floor(std::ldexp(a, 32)));
  }
  CHECK(quantize(0.0) == 0.0);
  CHECK(quantize(1.0) == 1.0);
}

TEST_CASE("constant reward returns its value") {
  ConstantReward c(0.5);
  CHECK(c.score({"anything", {"a", "b"}}) == 0.5);
  CHECK_THROWS_AS(ConstantReward(1.5), ConfigError);
}

TEST_CASE("trace hashes separate problem and step boundaries") {
  CHECK(StepTrace{"p", {"ab"}}.hash() != StepTrace{"p", {"a", "b"}}.hash());
  CHECK(StepTrace{"pa", {"b"}}.hash() != StepTrace{"p", {"ab"}}.hash());
  CHECK(StepTrace{"p", {}}.hash() != StepTrace{"p", {""}}.hash());
  CHECK(StepTrace{"p", {"x"}}.hash() == StepTrace{"p", {"x"}}.hash());
}

TEST_CASE("the cache scores each distinct trace once") {
  Counting model(0.25);
  BudgetLedger ledger;
  RewardCache cache(model, ledger);
  const StepTrace a{"p", {"a"}}, b{"p", {"b"}};
  CHECK(cache.reward(a) == 0.25);
  CHECK(cache.reward(a) == 0.25);
  CHECK(cache.heuristic(b) == 0.75);
  CHECK(model.calls == 2);
  CHECK(ledger.prm_passes() == 2);
  CHECK(cache.size() == 2);
}

TEST_CASE("out-of-range rewards are clamped and NaN is refused") {
  BudgetLedger ledger;
  Counting high(1.7), low(-0.2), nan(std::nan(""));
  CHECK(RewardCache(high, ledger).reward({"p", {}}) == 1.0);
  CHECK(RewardCache(low, ledger).reward({"p", {}}) == 0.0);
  CHECK_THROWS_AS(RewardCache(nan, ledger).reward({"p", {}}), RewardUnavailable);
}

TEST_CASE("table reward looks up by trace and falls back") {
  TableReward t(0.4);
  t.set(StepTrace{"p", {"a"}}, 0.9);
  CHECK(t.score({"p", {"a"}}) == 0.9);
  CHECK(t.score({"p", {"b"}}) == 0.4);

  const auto dir = std::filesystem::temp_directory_path() / "astardec_table_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "table.json";
  {
    std::ofstream out(path);
    out << nlohmann::json{{"schema_version", 1},
                          {"default", 0.1},
                          {"entries",
                           {{{"problem", "p"}, {"steps", {"a"}}, {"reward", 0.7}},
                            {{"trace_hash", to_hex(StepTrace{"q", {}}.hash())}, {"reward", 0.2}}}}};
  }
  auto loaded = TableReward::load(path.string());
  CHECK(loaded.score({"p", {"a"}}) == 0.7);
  CHECK(loaded.score({"q", {}}) == 0.2);
  CHECK(loaded.score({"z", {}}) == 0.1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("PRM input puts steps first and the reward slot last") {
  CHECK(format_prm_input({}) == "<aggregate_reward>");
  CHECK(format_prm_input({"## Step 1: a\n\n\n", "\n\n## Step 2: b  "}) ==
        "## Step 1: a\n\n## Step 2: b\n\n<aggregate_reward>");
  const std::vector<std::string> steps{"## Step 1: x", "## Step 2: y"};
  CHECK(format_prm_input(steps) == format_prm_input(steps));
}

TEST_CASE("PRM responses use the final reward") {
  CHECK(PrmHttpReward::parse_response(nlohmann::json::parse(R"({"rewards": [0.1, 0.2, 0.8]})")) == 0.8);
  CHECK_THROWS_AS(PrmHttpReward::parse_response(nlohmann::json::parse(R"({"rewards": []})")), MalformedResponse);
  CHECK_THROWS_AS(PrmHttpReward::parse_response(nlohmann::json::parse(R"({"rewards": ["x"]})")), MalformedResponse);
}

}  // TEST_SUITE
