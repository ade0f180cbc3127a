#include "astardec/baselines/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <numeric>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "astardec/eval/answer.hpp"
#include "astardec/policy/prompt.hpp"
#include "astardec/policy/segment.hpp"

namespace astardec::baselines {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void validate(const BaselineOptions& options) {
  if (options.n < 1) throw ConfigError("baseline: n must be at least 1");
  if (options.token_limit == 0) throw ConfigError("baseline: token_limit must be positive");
  if (options.max_steps < 1) throw ConfigError("baseline: max_steps must be at least 1");
  if (options.workers < 1) throw ConfigError("baseline: workers must be at least 1");
}

std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(base ^ mix64(index + 0x5eedULL));
}

heuristic::StepTrace trace_of(const eval::Problem& problem, const std::vector<Thought>& steps) {
  heuristic::StepTrace trace{problem.statement, {}};
  for (const auto& s : steps) trace.steps.push_back(s.text);
  return trace;
}

// Run fn(i) for i in [0, count) with at most `workers` in flight; results in
// index order.
template <typename Fn>
auto run_indexed(std::size_t count, int workers, Fn fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<T> out;
  out.reserve(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
    return out;
  }
  for (std::size_t start = 0; start < count; start += static_cast<std::size_t>(workers)) {
    const std::size_t stop = std::min(count, start + static_cast<std::size_t>(workers));
    std::vector<std::future<T>> pending;
    for (std::size_t i = start; i < stop; ++i) pending.push_back(std::async(std::launch::async, fn, i));
    for (auto& p : pending) out.push_back(p.get());
  }
  return out;
}

struct Sampled {
  policy::Completion completion;
  std::string text;
};

std::vector<Sampled> sample_completions(const eval::Problem& problem, policy::Policy& policy,
                                        const BaselineOptions& options, BudgetLedger& ledger) {
  const std::string prompt = policy::render_cot_prompt(problem.statement);
  auto samples = run_indexed(static_cast<std::size_t>(options.n), options.workers, [&](std::size_t i) {
    policy::SamplingParams params = options.sampling;
    params.seed = sample_seed(options.seed, i);
    Sampled s;
    s.completion = policy.complete(prompt, params, options.token_limit);
    s.text = s.completion.text();
    return s;
  });
  for (const auto& s : samples) {
    ledger.add_tokens(s.completion.token_count);
    ledger.add_policy_call(s.completion.policy_calls);
  }
  return samples;
}

eval::RunRecord base_record(const eval::Problem& problem, eval::Method method, const BaselineOptions& options) {
  eval::RunRecord r;
  r.problem_id = problem.id;
  r.method = method;
  r.controls = options.to_json();
  r.termination = "completed";
  return r;
}

void flag_completion(eval::RunRecord& r, const policy::Completion& c) {
  if (!c.reached_eos && c.token_limit_reached) r.flags.push_back("token_limit");
}

}  // namespace

nlohmann::json BaselineOptions::to_json() const {
  nlohmann::json j{{"n", n},
                   {"temperature", sampling.temperature},
                   {"top_p", sampling.top_p},
                   {"max_tokens_per_step", sampling.max_tokens_per_step},
                   {"seed", seed},
                   {"token_limit", token_limit},
                   {"max_steps", max_steps}};
  if (global_token_budget) j["global_token_budget"] = *global_token_budget;
  return j;
}

std::size_t argmax_reward(const std::vector<double>& rewards) {
  if (rewards.empty()) throw std::invalid_argument("argmax_reward: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < rewards.size(); ++i) {
    if (rewards[i] > rewards[best]) best = i;
  }
  return best;
}

std::optional<std::size_t> majority_vote(const std::vector<std::optional<std::string>>& normalized) {
  std::unordered_map<std::string, std::size_t> votes;
  std::vector<std::size_t> first_index_order;
  std::unordered_map<std::string, std::size_t> first_seen;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    if (!normalized[i]) continue;
    if (first_seen.emplace(*normalized[i], i).second) first_index_order.push_back(i);
    ++votes[*normalized[i]];
  }
  std::optional<std::size_t> winner;
  std::size_t best_votes = 0;
  for (std::size_t idx : first_index_order) {
    const std::size_t v = votes[*normalized[idx]];
    if (v > best_votes) {
      best_votes = v;
      winner = idx;
    }
  }
  return winner;
}

std::vector<double> normalize_weights(const std::vector<double>& rewards) {
  const double total = std::accumulate(rewards.begin(), rewards.end(), 0.0);
  std::vector<double> w(rewards.size());
  if (rewards.empty()) return w;
  if (!(total > 0.0)) {
    spdlog::debug("particle weights: all rewards zero, using uniform weights");
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(rewards.size()));
    return w;
  }
  for (std::size_t i = 0; i < rewards.size(); ++i) w[i] = rewards[i] / total;
  return w;
}

std::vector<std::size_t> multinomial_resample(const std::vector<double>& weights, std::size_t count, Rng& rng) {
  if (weights.empty()) throw std::invalid_argument("multinomial_resample: no weights");
  std::vector<double> cdf(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cdf.begin());
  const double total = cdf.back();
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
  }
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double u = rng.uniform01() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    out.push_back(std::min(idx, last_positive));
  }
  return out;
}

void score_record(eval::RunRecord& record, const eval::Problem& problem) {
  record.extracted_answer = eval::extract_answer(record.completion_text);
  if (record.extracted_answer) {
    record.normalized_answer = eval::normalize_answer(*record.extracted_answer);
    record.correct = record.normalized_answer == eval::normalize_answer(problem.reference_answer);
  } else {
    record.normalized_answer.clear();
    record.correct = false;
  }
}

eval::RunRecord pass_at_1(const eval::Problem& problem, policy::Policy& policy, const BaselineOptions& options) {
  validate(options);
  const auto start = Clock::now();
  BudgetLedger ledger;
  const std::string prompt = policy::render_cot_prompt(problem.statement);
  const auto completion = policy.complete(prompt, options.sampling.greedy(), options.token_limit);
  ledger.add_tokens(completion.token_count);
  ledger.add_policy_call(completion.policy_calls);

  auto r = base_record(problem, eval::Method::pass_at_1, options);
  r.controls["n"] = 1;
  r.controls["temperature"] = 0.0;
  r.completion_text = completion.text();
  flag_completion(r, completion);
  score_record(r, problem);
  r.ledger = ledger.snapshot();
  r.wall_time_seconds = seconds_since(start);
  return r;
}

eval::RunRecord best_of_n(const eval::Problem& problem, policy::Policy& policy, heuristic::RewardModel& reward,
                          const BaselineOptions& options) {
  validate(options);
  const auto start = Clock::now();
  BudgetLedger ledger;
  auto samples = sample_completions(problem, policy, options, ledger);

  heuristic::RewardCache cache(reward, ledger);
  std::vector<double> rewards;
  rewards.reserve(samples.size());
  for (const auto& s : samples) rewards.push_back(cache.reward(trace_of(problem, policy::segment(s.text))));
  const std::size_t best = argmax_reward(rewards);

  auto r = base_record(problem, eval::Method::best_of_n, options);
  r.completion_text = samples[best].text;
  flag_completion(r, samples[best].completion);
  score_record(r, problem);
  r.ledger = ledger.snapshot();
  r.wall_time_seconds = seconds_since(start);
  return r;
}

eval::RunRecord self_consistency(const eval::Problem& problem, policy::Policy& policy,
                                 const BaselineOptions& options) {
  validate(options);
  const auto start = Clock::now();
  BudgetLedger ledger;
  auto samples = sample_completions(problem, policy, options, ledger);

  std::vector<std::optional<std::string>> answers;
  answers.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto extracted = eval::extract_answer(samples[i].text);
    if (!extracted) {
      spdlog::debug("self-consistency: sample {} of {} has no answer", i, problem.id);
      answers.emplace_back();
      continue;
    }
    answers.emplace_back(eval::normalize_answer(*extracted));
  }
  const auto winner = majority_vote(answers);

  auto r = base_record(problem, eval::Method::self_consistency, options);
  const std::size_t chosen = winner.value_or(0);
  r.completion_text = samples[chosen].text;
  flag_completion(r, samples[chosen].completion);
  if (!winner) r.flags.push_back("unanswered");
  score_record(r, problem);
  r.ledger = ledger.snapshot();
  r.wall_time_seconds = seconds_since(start);
  return r;
}

std::string Particle::text() const {
  std::string out;
  for (const auto& s : steps) out += s.text;
  return out;
}

ParticleFilterResult run_particle_filter(const eval::Problem& problem, policy::Policy& policy,
                                         heuristic::RewardModel& reward, const BaselineOptions& options,
                                         BudgetLedger& ledger) {
  validate(options);
  const std::string prompt = policy::render_cot_prompt(problem.statement);
  const std::size_t n = static_cast<std::size_t>(options.n);
  heuristic::RewardCache cache(reward, ledger);
  Rng rng(mix64(options.seed ^ 0x9a271c1eULL));

  ParticleFilterResult result;
  std::vector<Particle> particles(n);
  std::uint64_t tokens_spent = 0;

  for (int round = 0; round < options.max_steps; ++round) {
    const bool any_live = std::any_of(particles.begin(), particles.end(), [](const Particle& p) { return !p.terminal; });
    if (!any_live) break;
    if (options.global_token_budget && tokens_spent >= *options.global_token_budget) {
      result.budget_exhausted = true;
      break;
    }

    auto steps = run_indexed(n, options.workers, [&](std::size_t i) -> std::vector<policy::Candidate> {
      if (particles[i].terminal) return {};
      policy::SamplingParams params = options.sampling;
      params.seed = sample_seed(options.seed, (static_cast<std::uint64_t>(round) << 32) | i);
      return policy.sample(prompt + particles[i].text(), 1, params);
    });

    for (std::size_t i = 0; i < n; ++i) {
      Particle& p = particles[i];
      if (p.terminal) continue;
      ledger.add_policy_call();
      if (steps[i].empty()) {
        p.terminal = true;
        continue;
      }
      const auto& c = steps[i].front();
      ledger.add_tokens(c.token_count);
      tokens_spent += c.token_count;
      p.steps.push_back(c.as_thought());
      p.token_count += c.token_count;
      if (c.contains_eos) {
        p.terminal = true;
        p.finished = true;
      } else if (p.token_count >= options.token_limit) {
        p.terminal = true;
      }
    }

    ParticleRound info;
    info.rewards.reserve(n);
    for (auto& p : particles) {
      p.reward = cache.reward(trace_of(problem, p.steps));
      info.rewards.push_back(p.reward);
    }
    info.weights = normalize_weights(info.rewards);
    info.resampled = multinomial_resample(info.weights, n, rng);
    std::vector<Particle> next;
    next.reserve(n);
    for (std::size_t idx : info.resampled) next.push_back(particles[idx]);
    particles = std::move(next);
    result.rounds.push_back(std::move(info));
  }

  const Particle* best = nullptr;
  for (const auto& p : particles) {
    if (p.finished && (!best || p.reward > best->reward)) best = &p;
  }
  if (!best) {
    result.no_terminal = true;
    for (const auto& p : particles) {
      if (!best || p.reward > best->reward) best = &p;
    }
  }
  result.best = *best;
  result.ledger = ledger.snapshot();
  return result;
}

eval::RunRecord particle_filter(const eval::Problem& problem, policy::Policy& policy, heuristic::RewardModel& reward,
                                const BaselineOptions& options) {
  const auto start = Clock::now();
  BudgetLedger ledger;
  auto pf = run_particle_filter(problem, policy, reward, options, ledger);

  auto r = base_record(problem, eval::Method::particle_filtering, options);
  r.completion_text = pf.best.text();
  if (pf.budget_exhausted) r.flags.push_back("budget_exhausted");
  if (pf.no_terminal) r.flags.push_back("no_terminal");
  score_record(r, problem);
  r.ledger = ledger.snapshot();
  r.wall_time_seconds = seconds_since(start);
  return r;
}

}  // namespace astardec::baselines
