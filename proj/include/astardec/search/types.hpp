#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "astardec/thought.hpp"

namespace astardec::search {

using StateId = std::uint64_t;

/// A partial trajectory. Immutable once scored.
struct SearchState {
  StateId id = 0;
  std::optional<StateId> parent_id;
  std::vector<Thought> thoughts;
  std::uint32_t depth = 0;
  double g = 0.0;
  double h = 1.0;
  double f = 1.0;
  bool is_goal = false;
  /// Generated tokens along the trajectory (prompt excluded).
  std::uint64_t token_count = 0;
  /// Reached the per-trajectory token limit without EOS; never expanded.
  bool truncated = false;

  std::string text() const;
};

/// Knobs that bound the search.
struct ScaleControls {
  int k = 16;
  int d_max = 40;
  int b_max = 5;
  double tau_h = 1.0;
  std::uint64_t token_limit = 4096;
  std::optional<std::uint64_t> global_token_budget;

  /// Throws ConfigError when a cap is non-positive or tau_h is outside [0, 1].
  void validate() const;
  bool operator==(const ScaleControls&) const = default;
};

/// Number of states inserted per depth level, capped by b_max.
class DepthLedger {
 public:
  int inserted(std::uint32_t depth) const;
  void record(std::uint32_t depth) { ++counts_[depth]; }
  const std::map<std::uint32_t, int>& counts() const { return counts_; }

 private:
  std::map<std::uint32_t, int> counts_;
};

enum class TerminationReason { goal_popped, rollout_at_dmax, open_set_exhausted, budget_exhausted };

std::string_view to_string(TerminationReason reason);
std::optional<TerminationReason> termination_from_string(std::string_view name);

struct ExpansionRecord {
  StateId expanded = 0;
  std::vector<StateId> children;
  std::uint32_t pruned = 0;

  bool operator==(const ExpansionRecord&) const = default;
};

}  // namespace astardec::search
