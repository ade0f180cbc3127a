#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "astardec/common.hpp"
#include "astardec/eval/dataset.hpp"
#include "astardec/eval/run_record.hpp"
#include "astardec/heuristic/reward.hpp"
#include "astardec/policy/policy.hpp"

namespace astardec::baselines {

struct BaselineOptions {
  /// Samples (best-of-N, self-consistency) or particles.
  int n = 64;
  policy::SamplingParams sampling;
  /// Base seed; sample i uses a seed derived from (seed, i).
  std::uint64_t seed = 0;
  /// Per-completion cap on generated tokens.
  std::uint64_t token_limit = 4096;
  /// Particle filtering: maximum number of extension rounds.
  int max_steps = 40;
  std::optional<std::uint64_t> global_token_budget;
  /// Concurrent completions or particle extensions.
  int workers = 1;

  nlohmann::json to_json() const;
};

/// Index of the largest reward; the lowest index wins ties.
std::size_t argmax_reward(const std::vector<double>& rewards);

/// Index of the first answer carrying the modal value. Missing answers do
/// not vote. Ties go to the value that appeared first. nullopt when no
/// answer is present.
std::optional<std::size_t> majority_vote(const std::vector<std::optional<std::string>>& normalized);

/// w_i = r_i / sum(r). All-zero (or empty-sum) input gives uniform weights.
std::vector<double> normalize_weights(const std::vector<double>& rewards);

/// `count` draws from the categorical distribution `weights` by inverse CDF
/// on Rng::uniform01.
std::vector<std::size_t> multinomial_resample(const std::vector<double>& weights, std::size_t count,
                                              Rng& rng);

/// Greedy chain-of-thought completion.
eval::RunRecord pass_at_1(const eval::Problem& problem, policy::Policy& policy,
                          const BaselineOptions& options = {});

/// Sample n completions, score each full trace, keep the best.
eval::RunRecord best_of_n(const eval::Problem& problem, policy::Policy& policy,
                          heuristic::RewardModel& reward, const BaselineOptions& options = {});

/// Sample n completions and return one carrying the majority answer.
eval::RunRecord self_consistency(const eval::Problem& problem, policy::Policy& policy,
                                 const BaselineOptions& options = {});

struct Particle {
  std::vector<Thought> steps;
  std::uint64_t token_count = 0;
  double reward = 0.0;
  bool terminal = false;
  /// Terminal because it reached EOS (rather than a dead end or the cap).
  bool finished = false;

  std::string text() const;
};

struct ParticleRound {
  std::vector<double> rewards;
  std::vector<double> weights;
  std::vector<std::size_t> resampled;
};

struct ParticleFilterResult {
  Particle best;
  std::vector<ParticleRound> rounds;
  LedgerSnapshot ledger;
  bool budget_exhausted = false;
  /// No particle reached EOS; `best` is the best unfinished one.
  bool no_terminal = false;
};

/// Step-level particle filtering: every round extends each live particle by
/// one step, scores all particles, and resamples n of them in proportion to
/// reward. Finished particles keep their trace across rounds.
ParticleFilterResult run_particle_filter(const eval::Problem& problem, policy::Policy& policy,
                                         heuristic::RewardModel& reward, const BaselineOptions& options,
                                         BudgetLedger& ledger);

eval::RunRecord particle_filter(const eval::Problem& problem, policy::Policy& policy,
                                heuristic::RewardModel& reward, const BaselineOptions& options = {});

/// Fill the answer fields of `record` from its completion text.
void score_record(eval::RunRecord& record, const eval::Problem& problem);

}  // namespace astardec::baselines
