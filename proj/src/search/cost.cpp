#include "astardec/search/cost.hpp"

#include <string>

#include "astardec/common.hpp"
#include "astardec/search/types.hpp"

namespace astardec::search {

double total_cost(double g, double h) { return g + h; }

double cost_increment(double h_parent, double h_child) {
  return h_child < h_parent ? h_parent - h_child : 0.0;
}

std::string SearchState::text() const {
  std::string out;
  for (const auto& t : thoughts) out += t.text;
  return out;
}

void ScaleControls::validate() const {
  if (k < 1) throw ConfigError("controls.k must be positive");
  if (d_max < 1) throw ConfigError("controls.d_max must be positive");
  if (b_max < 1) throw ConfigError("controls.b_max must be positive");
  if (!(tau_h >= 0.0 && tau_h <= 1.0)) throw ConfigError("controls.tau_h must lie in [0, 1]");
  if (token_limit < 1) throw ConfigError("controls.token_limit must be positive");
  if (global_token_budget && *global_token_budget < 1) {
    throw ConfigError("controls.global_token_budget must be positive");
  }
}

int DepthLedger::inserted(std::uint32_t depth) const {
  auto it = counts_.find(depth);
  return it == counts_.end() ? 0 : it->second;
}

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::goal_popped:
      return "goal_popped";
    case TerminationReason::rollout_at_dmax:
      return "rollout_at_dmax";
    case TerminationReason::open_set_exhausted:
      return "open_set_exhausted";
    case TerminationReason::budget_exhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

std::optional<TerminationReason> termination_from_string(std::string_view name) {
  for (auto r : {TerminationReason::goal_popped, TerminationReason::rollout_at_dmax,
                 TerminationReason::open_set_exhausted, TerminationReason::budget_exhausted}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

}  // namespace astardec::search
