#include "astardec/eval/benchmark.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "astardec/policy/prompt.hpp"

namespace astardec::eval {
namespace {

using Clock = std::chrono::steady_clock;

nlohmann::json sampling_json(const policy::SamplingParams& p) {
  nlohmann::json j{{"temperature", p.temperature},
                   {"top_p", p.top_p},
                   {"max_tokens_per_step", p.max_tokens_per_step}};
  if (p.seed) j["seed"] = *p.seed;
  return j;
}

RunRecord run_astar(const Problem& problem, const MethodOptions& options, policy::Policy& policy,
                    heuristic::RewardModel& reward, std::vector<search::TraceEvent>* events) {
  BudgetLedger ledger;
  search::AStarDecoder decoder(policy, reward, options.astar);
  auto result = decoder.decode(policy::render_cot_prompt(problem.statement), ledger, problem.statement);

  RunRecord r;
  r.problem_id = problem.id;
  r.method = Method::astar;
  r.controls = options.controls_for(Method::astar);
  r.completion_text = result.completion_text;
  r.termination = std::string(search::to_string(result.termination_reason));
  if (result.fallback) r.flags.push_back("fallback");
  if (result.token_limit_reached) r.flags.push_back("token_limit");
  if (!result.final_state.is_goal) r.flags.push_back("no_goal");
  baselines::score_record(r, problem);
  r.ledger = ledger.snapshot();
  if (events) *events = std::move(result.events);
  return r;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

nlohmann::json MethodOptions::controls_for(Method method) const {
  switch (method) {
    case Method::astar: {
      const auto& c = astar.controls;
      nlohmann::json j{{"k", c.k},
                       {"d_max", c.d_max},
                       {"b_max", c.b_max},
                       {"tau_h", c.tau_h},
                       {"token_limit", c.token_limit}};
      if (c.global_token_budget) j["global_token_budget"] = *c.global_token_budget;
      j.update(sampling_json(astar.sampling));
      return j;
    }
    case Method::pass_at_1: {
      auto j = sampling_json(baseline.sampling.greedy());
      j["token_limit"] = baseline.token_limit;
      return j;
    }
    case Method::best_of_n:
    case Method::self_consistency:
    case Method::particle_filtering:
      return baseline.to_json();
  }
  return nlohmann::json::object();
}

std::uint64_t MethodOptions::budget_for(Method method) const {
  switch (method) {
    case Method::astar:
      return static_cast<std::uint64_t>(astar.controls.k);
    case Method::pass_at_1:
      return 1;
    default:
      return static_cast<std::uint64_t>(baseline.n);
  }
}

RunRecord run_problem(const Problem& problem, Method method, const MethodOptions& options, policy::Policy& policy,
                      heuristic::RewardModel& reward, std::vector<search::TraceEvent>* events) {
  const auto start = Clock::now();
  RunRecord r;
  switch (method) {
    case Method::astar:
      r = run_astar(problem, options, policy, reward, events);
      break;
    case Method::pass_at_1:
      r = baselines::pass_at_1(problem, policy, options.baseline);
      r.controls = options.controls_for(method);
      break;
    case Method::best_of_n:
      r = baselines::best_of_n(problem, policy, reward, options.baseline);
      break;
    case Method::self_consistency:
      r = baselines::self_consistency(problem, policy, options.baseline);
      break;
    case Method::particle_filtering:
      r = baselines::particle_filter(problem, policy, reward, options.baseline);
      break;
  }
  r.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

nlohmann::json to_json(const BenchmarkSummary& s) {
  return {{"schema_version", kSummarySchemaVersion},
          {"method", to_string(s.method)},
          {"budget", s.budget},
          {"n_problems", s.n_problems},
          {"n_correct", s.n_correct},
          {"n_failed", s.n_failed},
          {"accuracy", s.accuracy},
          {"mean_tokens", s.mean_tokens},
          {"mean_prm_passes", s.mean_prm_passes},
          {"mean_policy_calls", s.mean_policy_calls},
          {"controls", s.controls}};
}

BenchmarkSummary summary_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kSummarySchemaVersion) {
      throw ConfigError("summary schema_version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kSummarySchemaVersion) + ")");
    }
    BenchmarkSummary s;
    s.method = method_from_string(j.at("method").get<std::string>());
    s.budget = j.at("budget").get<std::uint64_t>();
    s.n_problems = j.at("n_problems").get<std::size_t>();
    s.n_correct = j.at("n_correct").get<std::size_t>();
    s.n_failed = j.at("n_failed").get<std::size_t>();
    s.accuracy = j.at("accuracy").get<double>();
    s.mean_tokens = j.at("mean_tokens").get<double>();
    s.mean_prm_passes = j.at("mean_prm_passes").get<double>();
    s.mean_policy_calls = j.at("mean_policy_calls").get<double>();
    s.controls = j.value("controls", nlohmann::json::object());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("summary: ") + e.what());
  }
}

BenchmarkSummary load_summary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return summary_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

BenchmarkSummary summarize(const std::vector<RunRecord>& records, Method method, std::uint64_t budget,
                           const nlohmann::json& controls) {
  BenchmarkSummary s;
  s.method = method;
  s.budget = budget;
  s.controls = controls;
  s.n_problems = records.size();
  std::uint64_t tokens = 0;
  std::uint64_t passes = 0;
  std::uint64_t calls = 0;
  for (const auto& r : records) {
    if (r.correct && !r.failed) ++s.n_correct;
    if (r.failed) ++s.n_failed;
    tokens += r.ledger.generated_tokens;
    passes += r.ledger.prm_passes;
    calls += r.ledger.policy_calls;
  }
  if (s.n_problems > 0) {
    const auto n = static_cast<double>(s.n_problems);
    s.accuracy = static_cast<double>(s.n_correct) / n;
    s.mean_tokens = static_cast<double>(tokens) / n;
    s.mean_prm_passes = static_cast<double>(passes) / n;
    s.mean_policy_calls = static_cast<double>(calls) / n;
  }
  return s;
}

std::string sanitize_id(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += safe ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

BenchmarkSummary run_benchmark(const std::vector<Problem>& dataset, Method method, const MethodOptions& options,
                               policy::Policy& policy, heuristic::RewardModel& reward,
                               const BenchmarkConfig& config) {
  if (dataset.empty()) throw EmptyDataset("dataset has no problems");
  if (config.workers < 1) throw ConfigError("workers must be at least 1");
  std::filesystem::create_directories(config.output_dir);
  const auto records_path = config.output_dir / "records.jsonl";
  const auto traces_dir = config.output_dir / "traces";
  if (method == Method::astar) std::filesystem::create_directories(traces_dir);

  std::vector<RunRecord> done;
  if (config.resume && std::filesystem::exists(records_path)) {
    for (auto& r : load_run_records(records_path)) {
      if (r.method == method) done.push_back(std::move(r));
    }
  }
  std::unordered_set<std::string> done_ids;
  for (const auto& r : done) done_ids.insert(r.problem_id);

  std::vector<const Problem*> todo;
  for (const auto& p : dataset) {
    if (!done_ids.contains(p.id)) todo.push_back(&p);
  }
  if (!done.empty()) spdlog::info("resuming: {} of {} problems already recorded", done.size(), dataset.size());

  std::ofstream out(records_path, std::ios::binary | (config.resume ? std::ios::app : std::ios::trunc));
  if (!out) throw ConfigError("cannot write " + records_path.string());

  auto evaluate = [&](const Problem* problem) {
    std::vector<search::TraceEvent> events;
    RunRecord r;
    try {
      r = run_problem(*problem, method, options, policy, reward, method == Method::astar ? &events : nullptr);
    } catch (const PolicyUnavailable& e) {
      r = RunRecord{};
      r.error = e.what();
    } catch (const RewardUnavailable& e) {
      r = RunRecord{};
      r.error = e.what();
    } catch (const MalformedResponse& e) {
      r = RunRecord{};
      r.error = e.what();
    }
    if (!r.error.empty()) {
      spdlog::warn("problem {} failed: {}", problem->id, r.error);
      r.problem_id = problem->id;
      r.method = method;
      r.controls = options.controls_for(method);
      r.failed = true;
      r.termination = "failed";
      r.flags.push_back("failed");
    }
    if (method == Method::astar && !r.failed) {
      const std::string name = sanitize_id(problem->id) + ".jsonl";
      std::ofstream trace_out(traces_dir / name, std::ios::binary | std::ios::trunc);
      search::write_trace(trace_out, events);
      r.trace_ref = "traces/" + name;
    }
    return r;
  };

  const auto workers = static_cast<std::size_t>(config.workers);
  for (std::size_t start = 0; start < todo.size(); start += workers) {
    const std::size_t stop = std::min(todo.size(), start + workers);
    std::vector<RunRecord> batch;
    if (workers == 1) {
      batch.push_back(evaluate(todo[start]));
    } else {
      std::vector<std::future<RunRecord>> pending;
      for (std::size_t i = start; i < stop; ++i) pending.push_back(std::async(std::launch::async, evaluate, todo[i]));
      for (auto& p : pending) batch.push_back(p.get());
    }
    for (auto& r : batch) {
      out << to_json(r).dump() << '\n';
      done.push_back(std::move(r));
    }
    out.flush();
  }

  std::unordered_set<std::string> dataset_ids;
  for (const auto& p : dataset) dataset_ids.insert(p.id);
  std::vector<RunRecord> in_dataset;
  for (auto& r : done) {
    if (dataset_ids.contains(r.problem_id)) in_dataset.push_back(std::move(r));
  }
  auto summary = summarize(in_dataset, method, options.budget_for(method), options.controls_for(method));
  write_json_file(config.output_dir / "summary.json", to_json(summary));
  return summary;
}

}  // namespace astardec::eval
