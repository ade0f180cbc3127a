#include "astardec/heuristic/prm_http.hpp"

namespace astardec::heuristic {
namespace {

std::string_view trim_trailing(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string_view trim_leading_newlines(std::string_view s) {
  while (!s.empty() && (s.front() == '\n' || s.front() == '\r')) s.remove_prefix(1);
  return s;
}

}  // namespace

std::string format_prm_input(const std::vector<std::string>& steps) {
  std::string out;
  for (const auto& step : steps) {
    out += trim_trailing(trim_leading_newlines(step));
    out += "\n\n";
  }
  out += kAggregateRewardSlot;
  return out;
}

PrmHttpReward::PrmHttpReward(PrmHttpConfig config)
    : config_(std::move(config)), client_(std::make_unique<net::JsonHttpClient>(config_.endpoint)) {}

nlohmann::json PrmHttpReward::build_request(const StepTrace& trace) const {
  nlohmann::json body = {
      {"problem", trace.problem},
      {"steps", trace.steps},
      {"text", format_prm_input(trace.steps)},
  };
  if (!config_.model.empty()) body["model"] = config_.model;
  return body;
}

double PrmHttpReward::parse_response(const nlohmann::json& response) {
  if (!response.is_object() || !response.contains("rewards") || !response["rewards"].is_array() ||
      response["rewards"].empty()) {
    throw MalformedResponse("PRM response has no 'rewards' values");
  }
  const auto& last = response["rewards"].back();
  if (!last.is_number()) throw MalformedResponse("PRM reward is not a number");
  return last.get<double>();
}

double PrmHttpReward::score(const StepTrace& trace) {
  try {
    return parse_response(client_->post(config_.score_path, build_request(trace)));
  } catch (const net::TransportFailure& e) {
    throw RewardUnavailable(e.what());
  } catch (const MalformedResponse& e) {
    throw RewardUnavailable(e.what());
  }
}

}  // namespace astardec::heuristic
