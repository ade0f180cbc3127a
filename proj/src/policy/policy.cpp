#include "astardec/policy/policy.hpp"

namespace astardec::policy {

std::string_view to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::stop_marker:
      return "stop_marker";
    case FinishReason::eos:
      return "eos";
    case FinishReason::length:
      return "length";
  }
  return "unknown";
}

std::string Completion::text() const {
  std::string out;
  for (const auto& step : steps) out += step.text;
  return out;
}

Completion Policy::complete(std::string_view prefix, const SamplingParams& params,
                            std::uint64_t max_tokens) {
  Completion result;
  std::string context(prefix);
  while (result.token_count < max_tokens) {
    auto candidates = sample(context, 1, params);
    ++result.policy_calls;
    if (candidates.empty()) break;
    const Candidate& next = candidates.front();
    context += next.text;
    result.token_count += next.token_count;
    result.steps.push_back(next.as_thought());
    if (next.contains_eos) {
      result.reached_eos = true;
      return result;
    }
  }
  result.token_limit_reached = result.token_count >= max_tokens;
  return result;
}

}  // namespace astardec::policy
