#pragma once

#include <memory>
#include <string>
#include <vector>

#include "astardec/net/http_client.hpp"
#include "astardec/policy/policy.hpp"

namespace astardec::policy {

struct HttpPolicyConfig {
  net::EndpointConfig endpoint;
  std::string model;
  std::string completions_path = "/v1/completions";
  /// Issue k requests with n=1 instead of one request with n=k.
  bool independent_requests = false;
};

/// Policy backed by an OpenAI-compatible text completions endpoint.
///
/// The prefix is sent verbatim as `prompt`. Per-choice token counts come from
/// `usage.completion_tokens`; when n > 1 the total is split across choices in
/// proportion to their whitespace token counts so the parts sum to the total.
/// The server strips the matched stop string, so a step cut at the step
/// marker gets its blank line back; the next continuation then starts at its
/// own header instead of at the marker.
class HttpPolicy : public Policy {
 public:
  explicit HttpPolicy(HttpPolicyConfig config);

  std::vector<Candidate> sample(std::string_view prefix, int k,
                                const SamplingParams& params) override;

  /// Single unbranched request with no stop markers.
  Completion complete(std::string_view prefix, const SamplingParams& params,
                      std::uint64_t max_tokens) override;

  /// Build the request body for a completions call. Exposed for tests.
  nlohmann::json build_request(std::string_view prefix, int n, const SamplingParams& params,
                               std::uint32_t max_tokens, bool with_stop) const;

  /// Turn a completions response into candidates (at most k).
  static std::vector<Candidate> parse_response(const nlohmann::json& response, int k,
                                               std::uint32_t max_tokens);

 private:
  std::vector<Candidate> request(std::string_view prefix, int n, const SamplingParams& params,
                                 std::uint32_t max_tokens, bool with_stop);

  HttpPolicyConfig config_;
  std::unique_ptr<net::JsonHttpClient> client_;
};

/// Split `total` into parts proportional to `weights` (largest remainder), each
/// part at least 1 when total allows. The parts always sum to `total` unless
/// total is smaller than the number of weights.
std::vector<std::uint32_t> allocate_tokens(std::uint64_t total, const std::vector<std::uint32_t>& weights);

}  // namespace astardec::policy
