#pragma once

#include <memory>
#include <string>
#include <vector>

#include "astardec/heuristic/reward.hpp"
#include "astardec/net/http_client.hpp"

namespace astardec::heuristic {

inline constexpr std::string_view kAggregateRewardSlot = "<aggregate_reward>";

/// Steps separated by blank lines, aggregate-reward slot last.
std::string format_prm_input(const std::vector<std::string>& steps);

struct PrmHttpConfig {
  net::EndpointConfig endpoint;
  std::string model;
  std::string score_path = "/score";
};

/// Process reward model reached over HTTP.
///
/// Request:  {"model": ..., "problem": ..., "steps": [...], "text": format_prm_input(steps)}
/// Response: {"rewards": [r_1, ..., r_n]}; only the final value is used.
class PrmHttpReward : public RewardModel {
 public:
  explicit PrmHttpReward(PrmHttpConfig config);

  nlohmann::json build_request(const StepTrace& trace) const;
  static double parse_response(const nlohmann::json& response);

  double score(const StepTrace& trace) override;

 private:
  PrmHttpConfig config_;
  std::unique_ptr<net::JsonHttpClient> client_;
};

}  // namespace astardec::heuristic
