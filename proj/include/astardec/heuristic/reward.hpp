#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "astardec/common.hpp"

namespace astardec::heuristic {

/// Problem statement plus the ordered reasoning steps of a partial solution.
struct StepTrace {
  std::string problem;
  std::vector<std::string> steps;

  /// Stable hash over problem and steps; the cache key for scores.
  std::uint64_t hash() const;
};

/// h = 1 - r.
inline double heuristic_value(double reward) { return 1.0 - reward; }

/// Round to the nearest multiple of 2^-32. Sums and differences of such
/// values stay exact in double precision for magnitudes below 2^20, which
/// keeps the search's cost bookkeeping free of rounding.
double quantize(double value);

/// Scores a partial trajectory in [0, 1]. Implementations must be safe to
/// call concurrently.
class RewardModel {
 public:
  virtual ~RewardModel() = default;
  virtual double score(const StepTrace& trace) = 0;
};

class ConstantReward : public RewardModel {
 public:
  explicit ConstantReward(double value);
  double score(const StepTrace&) override { return value_; }

 private:
  double value_;
};

/// Exact reward supplied by a function (toy environments, synthetic tasks).
class OracleReward : public RewardModel {
 public:
  using Fn = std::function<double(const StepTrace&)>;
  explicit OracleReward(Fn fn) : fn_(std::move(fn)) {}
  double score(const StepTrace& trace) override { return fn_(trace); }

 private:
  Fn fn_;
};

/// Oracle backed by a table of trace hash -> reward, with a fallback value.
///
/// File schema (JSON):
///   {"schema_version": 1, "default": 0.5,
///    "entries": [{"problem": "...", "steps": ["..."], "reward": 0.7},
///                {"trace_hash": "<16 hex digits>", "reward": 0.2}]}
class TableReward : public RewardModel {
 public:
  explicit TableReward(double fallback = 0.5) : fallback_(fallback) {}

  static TableReward load(const std::string& path);

  void set(const StepTrace& trace, double reward) { table_[trace.hash()] = reward; }
  void set(std::uint64_t trace_hash, double reward) { table_[trace_hash] = reward; }
  double score(const StepTrace& trace) override;

 private:
  double fallback_;
  std::unordered_map<std::uint64_t, double> table_;
};

/// Memoizing front for a RewardModel. Every distinct trace is scored by the
/// backend once; each first-time score is charged as one reward-model pass.
/// Scores are clamped into [0, 1] (with a warning).
class RewardCache {
 public:
  RewardCache(RewardModel& model, BudgetLedger& ledger) : model_(model), ledger_(ledger) {}

  double reward(const StepTrace& trace);
  double heuristic(const StepTrace& trace) { return heuristic_value(reward(trace)); }

  std::size_t size() const;

 private:
  RewardModel& model_;
  BudgetLedger& ledger_;
  mutable std::mutex mutex_;
  std::unordered_map<std::uint64_t, double> cache_;
};

}  // namespace astardec::heuristic
