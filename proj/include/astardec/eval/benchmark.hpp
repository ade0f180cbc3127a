#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "astardec/baselines/baselines.hpp"
#include "astardec/eval/dataset.hpp"
#include "astardec/eval/run_record.hpp"
#include "astardec/heuristic/reward.hpp"
#include "astardec/policy/policy.hpp"
#include "astardec/search/astar.hpp"
#include "json.hpp"

namespace astardec::eval {

inline constexpr int kSummarySchemaVersion = 1;

struct MethodOptions {
  search::DecoderOptions astar;
  baselines::BaselineOptions baseline;

  /// Snapshot of the settings that apply to `method`.
  nlohmann::json controls_for(Method method) const;
  /// The frontier's x parameter: k for A*, n for sampling baselines, 1 for
  /// greedy decoding.
  std::uint64_t budget_for(Method method) const;
};

/// Run one method on one problem. A* traces are returned in `events` when
/// the pointer is non-null.
RunRecord run_problem(const Problem& problem, Method method, const MethodOptions& options,
                      policy::Policy& policy, heuristic::RewardModel& reward,
                      std::vector<search::TraceEvent>* events = nullptr);

struct BenchmarkSummary {
  Method method = Method::astar;
  std::uint64_t budget = 0;
  std::size_t n_problems = 0;
  std::size_t n_correct = 0;
  std::size_t n_failed = 0;
  double accuracy = 0.0;
  double mean_tokens = 0.0;
  double mean_prm_passes = 0.0;
  double mean_policy_calls = 0.0;
  nlohmann::json controls = nlohmann::json::object();

  bool operator==(const BenchmarkSummary&) const = default;
};

nlohmann::json to_json(const BenchmarkSummary& summary);
/// Throws ConfigError on a missing field or a different schema version.
BenchmarkSummary summary_from_json(const nlohmann::json& j);
BenchmarkSummary load_summary(const std::filesystem::path& path);

/// Aggregate over records. Every record counts in the denominator; failed
/// ones count as incorrect.
BenchmarkSummary summarize(const std::vector<RunRecord>& records, Method method, std::uint64_t budget,
                           const nlohmann::json& controls);

struct BenchmarkConfig {
  /// Receives records.jsonl, summary.json and, for A*, traces/<id>.jsonl.
  std::filesystem::path output_dir;
  /// Problems evaluated concurrently.
  int workers = 1;
  /// Keep records already in records.jsonl and skip their problems.
  bool resume = false;
};

/// Evaluate `method` over `dataset`. Records are appended in dataset order
/// through a single writer. Backend failures on a problem are recorded as
/// failed and incorrect. Throws EmptyDataset for an empty dataset.
BenchmarkSummary run_benchmark(const std::vector<Problem>& dataset, Method method, const MethodOptions& options,
                               policy::Policy& policy, heuristic::RewardModel& reward,
                               const BenchmarkConfig& config);

/// File-system safe form of a problem id.
std::string sanitize_id(std::string_view id);

}  // namespace astardec::eval
