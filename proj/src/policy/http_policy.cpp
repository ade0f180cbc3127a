#include "astardec/policy/http_policy.hpp"

#include <algorithm>
#include <future>
#include <numeric>

#include "astardec/common.hpp"
#include "astardec/policy/segment.hpp"

namespace astardec::policy {

std::vector<std::uint32_t> allocate_tokens(std::uint64_t total,
                                           const std::vector<std::uint32_t>& weights) {
  const std::size_t n = weights.size();
  std::vector<std::uint32_t> parts(n, 0);
  if (n == 0) return parts;
  if (total <= n) {
    for (std::size_t i = 0; i < n && i < total; ++i) parts[i] = 1;
    return parts;
  }
  // Every part gets one token up front, the rest is shared proportionally.
  const std::uint64_t spare = total - n;
  std::uint64_t weight_sum = 0;
  for (auto w : weights) weight_sum += std::max<std::uint32_t>(w, 1);
  std::vector<std::pair<std::uint64_t, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t w = std::max<std::uint32_t>(weights[i], 1);
    const std::uint64_t share = spare * w / weight_sum;
    parts[i] = static_cast<std::uint32_t>(1 + share);
    assigned += share;
    remainders.emplace_back(spare * w % weight_sum, i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; assigned < spare; ++j, ++assigned) ++parts[remainders[j % n].second];
  return parts;
}

HttpPolicy::HttpPolicy(HttpPolicyConfig config)
    : config_(std::move(config)), client_(std::make_unique<net::JsonHttpClient>(config_.endpoint)) {
  if (config_.model.empty()) throw ConfigError("http policy: model is required");
}

nlohmann::json HttpPolicy::build_request(std::string_view prefix, int n, const SamplingParams& params,
                                         std::uint32_t max_tokens, bool with_stop) const {
  nlohmann::json body = {
      {"model", config_.model},
      {"prompt", std::string(prefix)},
      {"n", n},
      {"temperature", params.temperature},
      {"top_p", params.top_p},
      {"max_tokens", max_tokens},
  };
  if (with_stop && !params.stop_markers.empty()) body["stop"] = params.stop_markers;
  if (params.seed) body["seed"] = *params.seed;
  return body;
}

std::vector<Candidate> HttpPolicy::parse_response(const nlohmann::json& response, int k,
                                                  std::uint32_t max_tokens) {
  if (!response.is_object() || !response.contains("choices") || !response["choices"].is_array()) {
    throw MalformedResponse("completions response has no 'choices' array");
  }
  struct Raw {
    std::string text;
    FinishReason reason;
    bool eos;
  };
  std::vector<Raw> raw;
  for (const auto& choice : response["choices"]) {
    if (static_cast<int>(raw.size()) == k) break;
    if (!choice.contains("text") || !choice["text"].is_string()) continue;
    auto text = choice["text"].get<std::string>();
    if (text.empty()) continue;
    const std::string finish = choice.value("finish_reason", std::string("stop"));
    // vLLM-style servers report the matched stop string in stop_reason and
    // null (or a token id) when the model emitted EOS itself.
    bool eos = has_terminal_sentence(text);
    if (finish == "stop" && choice.contains("stop_reason") && !choice["stop_reason"].is_string()) {
      eos = true;
    }
    FinishReason reason = eos                ? FinishReason::eos
                          : finish == "length" ? FinishReason::length
                                               : FinishReason::stop_marker;
    raw.push_back({std::move(text), reason, eos});
  }
  if (raw.empty()) throw MalformedResponse("completions response carried no text");

  std::vector<std::uint32_t> weights;
  for (const auto& r : raw) weights.push_back(count_tokens(r.text));
  std::uint64_t total = 0;
  if (response.contains("usage") && response["usage"].contains("completion_tokens")) {
    total = response["usage"]["completion_tokens"].get<std::uint64_t>();
  } else {
    total = std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
  }
  auto counts = allocate_tokens(std::max<std::uint64_t>(total, raw.size()), weights);

  std::vector<Candidate> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::uint32_t tokens = std::max<std::uint32_t>(1, counts[i]);
    if (max_tokens > 0) tokens = std::min(tokens, max_tokens);
    out.push_back({std::move(raw[i].text), tokens, raw[i].eos, raw[i].reason});
  }
  return out;
}

std::vector<Candidate> HttpPolicy::request(std::string_view prefix, int n, const SamplingParams& params,
                                           std::uint32_t max_tokens, bool with_stop) {
  try {
    auto response = client_->post(config_.completions_path,
                                  build_request(prefix, n, params, max_tokens, with_stop));
    auto candidates = parse_response(response, n, max_tokens);
    const bool step_marker = with_stop && std::find(params.stop_markers.begin(), params.stop_markers.end(),
                                                    kStepStopMarker) != params.stop_markers.end();
    if (step_marker) {
      for (auto& c : candidates) {
        if (c.finish_reason == FinishReason::stop_marker && !c.text.ends_with("\n\n")) c.text += "\n\n";
      }
    }
    return candidates;
  } catch (const net::TransportFailure& e) {
    throw PolicyUnavailable(e.what());
  }
}

std::vector<Candidate> HttpPolicy::sample(std::string_view prefix, int k, const SamplingParams& params) {
  if (k < 1) return {};
  if (prefix.empty()) throw ConfigError("http policy: empty prefix");
  if (!config_.independent_requests || k == 1) {
    return request(prefix, k, params, params.max_tokens_per_step, true);
  }
  std::vector<std::future<std::vector<Candidate>>> pending;
  for (int i = 0; i < k; ++i) {
    SamplingParams p = params;
    if (p.seed) p.seed = mix64(*p.seed + static_cast<std::uint64_t>(i));
    pending.push_back(std::async(std::launch::async, [this, prefix, p] {
      return request(prefix, 1, p, p.max_tokens_per_step, true);
    }));
  }
  std::vector<Candidate> out;
  for (auto& f : pending) {
    for (auto& c : f.get()) out.push_back(std::move(c));
  }
  return out;
}

Completion HttpPolicy::complete(std::string_view prefix, const SamplingParams& params,
                                std::uint64_t max_tokens) {
  Completion result;
  if (max_tokens == 0) {
    result.token_limit_reached = true;
    return result;
  }
  const auto cap = static_cast<std::uint32_t>(std::min<std::uint64_t>(max_tokens, UINT32_MAX));
  auto candidates = request(prefix, 1, params, cap, false);
  result.policy_calls = 1;
  const Candidate& c = candidates.front();
  result.steps = segment(c.text);
  result.token_count = c.token_count;
  result.reached_eos = c.contains_eos;
  if (result.reached_eos && !result.steps.empty()) result.steps.back().contains_eos = true;
  result.token_limit_reached = !result.reached_eos && c.finish_reason == FinishReason::length;
  return result;
}

}  // namespace astardec::policy
