#include <atomic>
#include <map>
#include <random>

#include "astardec/baselines/baselines.hpp"
#include "astardec/eval/answer.hpp"
#include "astardec/policy/prompt.hpp"
#include "doctest.h"

using namespace astardec;
using namespace astardec::baselines;

namespace {

std::string final_line(const std::string& answer) {
  return "Therefore, the final answer is: $\\boxed{" + answer + "}$. I hope it is correct.";
}

// The i-th call (in call order) answers answers[i % size]. Use with workers = 1.
class RoundRobinPolicy : public policy::Policy {
 public:
  explicit RoundRobinPolicy(std::vector<std::string> answers) : answers_(std::move(answers)) {}

  std::vector<policy::Candidate> sample(std::string_view, int, const policy::SamplingParams&) override {
    const auto i = calls_++;
    const auto& a = answers_[i % answers_.size()];
    if (a.empty()) return {{"## Step 1: no idea.\n\n", 4, true, policy::FinishReason::eos}};
    const auto text = final_line(a);
    return {{text, count_tokens(text), true, policy::FinishReason::eos}};
  }

  std::size_t calls() const { return calls_; }

 private:
  std::vector<std::string> answers_;
  std::atomic<std::size_t> calls_{0};
};

// Reward looked up from the boxed answer in the last step.
class AnswerReward : public heuristic::RewardModel {
 public:
  explicit AnswerReward(std::map<std::string, double> table) : table_(std::move(table)) {}
  double score(const heuristic::StepTrace& t) override {
    if (t.steps.empty()) return 0.5;
    const auto a = eval::extract_answer(t.steps.back());
    auto it = a ? table_.find(*a) : table_.end();
    return it == table_.end() ? 0.1 : it->second;
  }

 private:
  std::map<std::string, double> table_;
};

std::vector<std::optional<std::string>> norm(std::initializer_list<const char*> xs) {
  std::vector<std::optional<std::string>> out;
  for (const char* x : xs) {
    if (x) out.emplace_back(eval::normalize_answer(x));
    else out.emplace_back(std::nullopt);
  }
  return out;
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("argmax picks the best reward, lowest index on ties") {
  CHECK(argmax_reward({0.2, 0.9, 0.5}) == 1);
  CHECK(argmax_reward({0.7, 0.7}) == 0);
  CHECK(argmax_reward({0.1, 0.3, 0.3}) == 1);

  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r(1 + gen() % 10);
    for (auto& x : r) x = std::round(u(gen) * 4) / 4;
    const auto i = argmax_reward(r);
    for (std::size_t j = 0; j < r.size(); ++j) {
      CHECK(r[i] >= r[j]);
      if (j < i) CHECK(r[j] < r[i]);
    }
  }
}

TEST_CASE("majority vote") {
  auto v = norm({"4", "4", "5"});
  CHECK(v[*majority_vote(v)] == "4");
  v = norm({"1/2", "0.5", "3"});
  CHECK(v[*majority_vote(v)] == "1/2");
  v = norm({"a", "b"});
  CHECK(v[*majority_vote(v)] == "a");
  v = norm({nullptr, "7", nullptr});
  CHECK(*majority_vote(v) == 1);
  CHECK_FALSE(majority_vote(norm({nullptr, nullptr})));
}

TEST_CASE("weights are normalized rewards") {
  auto w = normalize_weights({0.5, 0.5});
  CHECK(w == std::vector<double>{0.5, 0.5});
  w = normalize_weights({0.0, 0.0, 0.0});
  CHECK(w[0] == doctest::Approx(1.0 / 3));
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> r(1 + gen() % 16);
    for (auto& x : r) x = static_cast<double>(gen() % 1000) / 1000.0;
    w = normalize_weights(r);
    double sum = 0;
    for (double x : w) sum += x;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("resampling follows the inverse CDF of the seeded stream") {
  const std::vector<double> weights{0.1, 0.0, 0.6, 0.3};
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    Rng rng(seed);
    const auto got = multinomial_resample(weights, 50, rng);

    std::mt19937_64 ref(seed);
    for (std::size_t n = 0; n < got.size(); ++n) {
      const double u = static_cast<double>(ref() >> 11) / 9007199254740992.0;
      std::size_t expected = 0;
      double acc = 0.0;
      for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) {
          expected = i;
          break;
        }
        expected = i;
      }
      CHECK(got[n] == expected);
      CHECK(weights[got[n]] > 0.0);
    }
  }
}

TEST_CASE("best-of-n keeps the highest scored completion") {
  RoundRobinPolicy policy({"3", "4", "5"});
  AnswerReward reward({{"3", 0.2}, {"4", 0.9}, {"5", 0.5}});
  BaselineOptions o;
  o.n = 3;
  auto r = best_of_n({"p", "What?", "4"}, policy, reward, o);
  CHECK(r.extracted_answer == std::optional<std::string>("4"));
  CHECK(r.correct);
  CHECK(r.ledger.prm_passes == 3);
  CHECK(r.ledger.policy_calls == 3);
  CHECK(r.ledger.generated_tokens == 3 * count_tokens(final_line("4")));
}

TEST_CASE("best-of-n counts one pass per distinct trace") {
  RoundRobinPolicy policy({"3", "3", "5", "3"});
  AnswerReward reward({{"5", 0.8}});
  BaselineOptions o;
  o.n = 4;
  auto r = best_of_n({"p", "What?", "5"}, policy, reward, o);
  CHECK(r.correct);
  CHECK(r.ledger.prm_passes == 2);
}

TEST_CASE("self-consistency returns the majority answer") {
  RoundRobinPolicy policy({"1/2", "0.5", "3"});
  BaselineOptions o;
  o.n = 3;
  auto r = self_consistency({"p", "What?", "0.5"}, policy, o);
  CHECK(r.extracted_answer == std::optional<std::string>("1/2"));
  CHECK(r.correct);
  CHECK(r.ledger.prm_passes == 0);
}

TEST_CASE("self-consistency with no answers is flagged and incorrect") {
  RoundRobinPolicy policy({""});
  BaselineOptions o;
  o.n = 3;
  auto r = self_consistency({"p", "What?", "1"}, policy, o);
  CHECK_FALSE(r.correct);
  CHECK_FALSE(r.extracted_answer);
  CHECK(std::find(r.flags.begin(), r.flags.end(), "unanswered") != r.flags.end());
}

TEST_CASE("a single particle is never resampled away") {
  RoundRobinPolicy policy({"9"});
  heuristic::ConstantReward reward(0.5);
  BaselineOptions o;
  o.n = 1;
  BudgetLedger ledger;
  auto pf = run_particle_filter({"p", "What?", "9"}, policy, reward, o, ledger);
  REQUIRE(pf.rounds.size() == 1);
  CHECK(pf.rounds[0].weights == std::vector<double>{1.0});
  CHECK(pf.rounds[0].resampled == std::vector<std::size_t>{0});
  CHECK(pf.best.finished);
  CHECK(pf.best.text() == final_line("9"));
}

TEST_CASE("equal rewards give equal particle weights") {
  RoundRobinPolicy policy({"1", "2"});
  heuristic::ConstantReward reward(0.5);
  BaselineOptions o;
  o.n = 2;
  BudgetLedger ledger;
  auto pf = run_particle_filter({"p", "What?", "1"}, policy, reward, o, ledger);
  REQUIRE_FALSE(pf.rounds.empty());
  CHECK(pf.rounds[0].weights == std::vector<double>{0.5, 0.5});
  CHECK(pf.ledger.policy_calls == 2);
  CHECK(pf.ledger.prm_passes == 2);
}

TEST_CASE("particle filtering prefers high-reward particles") {
  RoundRobinPolicy policy({"1", "2", "2", "2"});
  AnswerReward reward({{"1", 1.0}, {"2", 0.0}});
  BaselineOptions o;
  o.n = 4;
  auto r = particle_filter({"p", "What?", "1"}, policy, reward, o);
  CHECK(r.correct);
}

TEST_CASE("dead-end particles fall back to the best unfinished one") {
  class Silent : public policy::Policy {
   public:
    std::vector<policy::Candidate> sample(std::string_view, int, const policy::SamplingParams&) override {
      return {};
    }
  } policy;
  heuristic::ConstantReward reward(0.5);
  BaselineOptions o;
  o.n = 2;
  auto r = particle_filter({"p", "What?", "1"}, policy, reward, o);
  CHECK_FALSE(r.correct);
  CHECK(std::find(r.flags.begin(), r.flags.end(), "no_terminal") != r.flags.end());
}

TEST_CASE("pass@1 is a single greedy completion") {
  RoundRobinPolicy policy({"12"});
  auto r = pass_at_1({"p", "What?", "12"}, policy);
  CHECK(r.correct);
  CHECK(r.ledger.policy_calls == 1);
  CHECK(r.ledger.prm_passes == 0);
}

}  // TEST_SUITE
