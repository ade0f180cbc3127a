#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "astardec/thought.hpp"

namespace astardec::policy {

/// Default stop marker for step-granular sampling. Generation halts right
/// before the next step header; the first header of a continuation is never
/// preceded by generated newlines, so it does not trigger the stop.
inline constexpr std::string_view kStepStopMarker = "\n\n## Step";

struct SamplingParams {
  double temperature = 0.8;
  double top_p = 1.0;
  std::uint32_t max_tokens_per_step = 512;
  std::vector<std::string> stop_markers{std::string(kStepStopMarker)};
  std::optional<std::uint64_t> seed;

  /// Copy with temperature 0 (greedy decoding).
  SamplingParams greedy() const {
    SamplingParams p = *this;
    p.temperature = 0.0;
    return p;
  }
};

enum class FinishReason { stop_marker, eos, length };

std::string_view to_string(FinishReason reason);

struct Candidate {
  std::string text;
  std::uint32_t token_count = 0;
  bool contains_eos = false;
  FinishReason finish_reason = FinishReason::stop_marker;

  Thought as_thought() const { return {text, token_count, contains_eos}; }
  bool operator==(const Candidate&) const = default;
};

/// Result of completing a trajectory without branching.
struct Completion {
  std::vector<Thought> steps;
  std::uint64_t token_count = 0;
  std::uint64_t policy_calls = 0;
  bool reached_eos = false;
  bool token_limit_reached = false;

  std::string text() const;
};

/// Source of step-granular continuations.
///
/// Implementations must be safe to call from several threads at once.
class Policy {
 public:
  virtual ~Policy() = default;

  /// Draw up to k single-step continuations of `prefix`.
  virtual std::vector<Candidate> sample(std::string_view prefix, int k,
                                        const SamplingParams& params) = 0;

  /// Extend `prefix` with single continuations until EOS, a dead end, or
  /// until `max_tokens` generated tokens have been reached. The default
  /// implementation chains `sample(prefix, 1, params)` calls.
  virtual Completion complete(std::string_view prefix, const SamplingParams& params,
                              std::uint64_t max_tokens);
};

}  // namespace astardec::policy
