#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "astardec/common.hpp"
#include "astardec/heuristic/reward.hpp"
#include "astardec/policy/policy.hpp"
#include "astardec/search/trace.hpp"
#include "astardec/search/types.hpp"

namespace astardec::search {

struct DecoderOptions {
  ScaleControls controls;
  policy::SamplingParams sampling;
  /// Concurrent reward calls per expansion; 1 scores sequentially.
  int scoring_workers = 1;
};

struct SearchResult {
  SearchState final_state;
  std::string completion_text;
  TerminationReason termination_reason = TerminationReason::open_set_exhausted;
  std::uint64_t expanded_count = 0;
  /// States inserted into the search graph, root included.
  std::uint64_t inserted_count = 0;
  std::vector<ExpansionRecord> trace;
  std::vector<TraceEvent> events;
  bool token_limit_reached = false;
  /// final_state was picked by the best-f fallback rather than reached.
  bool fallback = false;
};

struct ExpandOutcome {
  /// Unique candidates in policy order, possibly cut short by the budget.
  std::vector<policy::Candidate> candidates;
  std::uint64_t generated_tokens = 0;
  std::size_t duplicates = 0;
  bool budget_exhausted = false;
};

/// Sample up to k continuations of `state`. Every generated token is charged
/// to the ledger, including duplicates and anything cut by the budget.
/// `tokens_spent` is what the current search already generated.
ExpandOutcome expand(const SearchState& state, std::string_view prompt, policy::Policy& policy,
                     const ScaleControls& controls, const policy::SamplingParams& params,
                     BudgetLedger& ledger, std::uint64_t tokens_spent = 0);

/// True when the scored candidate must be discarded: its depth already holds
/// b_max states, or h > tau_h. A surviving candidate is recorded in the ledger.
bool prune(const SearchState& candidate, const ScaleControls& controls, DepthLedger& depth_ledger);

/// Greedy, unbranched completion of `state` until EOS or the token limit.
/// The returned final state extends `state` (same id) with the new thoughts.
SearchResult rollout(const SearchState& state, std::string_view prompt, policy::Policy& policy,
                     const ScaleControls& controls, const policy::SamplingParams& params,
                     BudgetLedger& ledger, std::uint64_t tokens_spent = 0);

/// Best-first decoding over partial trajectories.
///
/// States are ordered by f = g + h where h = 1 - r(state) and g accumulates
/// max(0, h(parent) - h(child)) along the path. The goal test happens when a
/// state is popped. At depth d_max the popped state is completed by rollout.
class AStarDecoder {
 public:
  AStarDecoder(policy::Policy& policy, heuristic::RewardModel& reward, DecoderOptions options);

  /// `problem` is what the reward model sees as the problem statement; it
  /// defaults to the prompt.
  SearchResult decode(std::string_view prompt, BudgetLedger& ledger, std::string_view problem = {});

  const DecoderOptions& options() const { return options_; }

 private:
  policy::Policy& policy_;
  heuristic::RewardModel& reward_;
  DecoderOptions options_;
};

inline SearchResult astar_decode(std::string_view prompt, policy::Policy& policy,
                                 heuristic::RewardModel& reward, const DecoderOptions& options,
                                 BudgetLedger& ledger) {
  return AStarDecoder(policy, reward, options).decode(prompt, ledger);
}

}  // namespace astardec::search
