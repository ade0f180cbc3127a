#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "astardec/eval/dataset.hpp"
#include "astardec/heuristic/reward.hpp"
#include "astardec/policy/policy.hpp"

namespace astardec::toyenv {

// Synthetic multi-step arithmetic task used to exercise the decoding methods
// at desk scale. A problem is a start value and a list of operations; every
// reasoning step applies one operation. The simulated policy slips with a
// fixed probability per step, and the reward model scores partial solutions
// from their first mistake, plus bounded noise.

struct ChainOp {
  enum class Kind { add, subtract, multiply };
  Kind kind = Kind::add;
  std::int64_t operand = 1;

  std::int64_t apply(std::int64_t value) const;
  bool operator==(const ChainOp&) const = default;
};

struct ChainProblem {
  std::int64_t start = 0;
  std::vector<ChainOp> ops;

  std::string statement() const;
  std::int64_t answer() const;
  /// Values after each operation.
  std::vector<std::int64_t> trajectory() const;

  /// Recover a problem from any text containing its statement.
  static std::optional<ChainProblem> parse(std::string_view text);
};

struct ChainTaskConfig {
  int min_steps = 6;
  int max_steps = 10;
};

std::vector<ChainProblem> generate_chain_problems(std::size_t count, std::uint64_t seed,
                                                  const ChainTaskConfig& config = {});

/// Dataset rows with ids "chain-<index>".
std::vector<eval::Problem> chain_dataset(const std::vector<ChainProblem>& problems);

/// The (lhs, rhs) values of every "Compute: a op b = c." line in `text`.
struct ChainCalc {
  std::int64_t input;
  std::int64_t result;
};
std::vector<ChainCalc> parse_calcs(std::string_view text);

/// Simulated language model. Each candidate step is correct with probability
/// `step_accuracy`; a wrong step is off by a nonzero amount in [-10, 10] and
/// later steps build on the wrong value. Candidates are a pure function of
/// (prefix, seed, candidate index); temperature 0 drops the seed and index.
class ChainPolicy : public policy::Policy {
 public:
  explicit ChainPolicy(double step_accuracy = 0.6);

  std::vector<policy::Candidate> sample(std::string_view prefix, int k,
                                        const policy::SamplingParams& params) override;

 private:
  double step_accuracy_;
};

/// Noisy process reward. With d computed steps out of L:
///   no mistake:            r = 0.4 + 0.6 d / L
///   first mistake at step e: r = max(0, 0.4 + 0.6 (e - 1) / L - 0.3 - 0.1 (d - e))
/// plus noise uniform in [-noise, noise] derived from the trace hash and
/// seed, clamped to [0, 1].
class ChainReward : public heuristic::RewardModel {
 public:
  ChainReward(double noise = 0.2, std::uint64_t seed = 0);

  static double true_reward(const ChainProblem& problem, const std::vector<ChainCalc>& calcs);
  double score(const heuristic::StepTrace& trace) override;

 private:
  double noise_;
  std::uint64_t seed_;
};

}  // namespace astardec::toyenv
