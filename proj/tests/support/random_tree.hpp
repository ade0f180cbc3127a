#pragma once

// Randomized search spaces for property tests. Both classes keep their own
// tallies (tokens emitted, distinct traces scored) so tests can compare the
// library's accounting against an independent count.

#include <atomic>
#include <cstdint>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "astardec/common.hpp"
#include "astardec/heuristic/reward.hpp"
#include "astardec/policy/policy.hpp"

namespace astardec::testing {

struct RandomTreeShape {
  int min_children = 0;
  int max_children = 24;
  double eos_probability = 0.08;
  double duplicate_probability = 0.1;
  int max_words = 12;
};

class RandomTreePolicy : public policy::Policy {
 public:
  RandomTreePolicy(std::uint64_t seed, RandomTreeShape shape = {}) : seed_(seed), shape_(shape) {}

  std::vector<policy::Candidate> sample(std::string_view prefix, int k, const policy::SamplingParams&) override {
    Rng rng(mix64(seed_ ^ fnv1a64(prefix)));
    const auto children = rng.uniform_int(shape_.min_children, shape_.max_children);
    std::vector<policy::Candidate> out;
    for (std::int64_t i = 0; i < children && static_cast<int>(out.size()) < k; ++i) {
      if (!out.empty() && rng.uniform01() < shape_.duplicate_probability) {
        out.push_back(out[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(out.size()) - 1))]);
      } else {
        const auto words = rng.uniform_int(1, shape_.max_words);
        std::string text = "## Step " + std::to_string(i) + ":";
        for (std::int64_t w = 1; w < words; ++w) text += " w" + std::to_string(rng.uniform_int(0, 99));
        text += "\n\n";
        policy::Candidate c;
        c.text = std::move(text);
        c.token_count = static_cast<std::uint32_t>(words + 2);
        c.contains_eos = rng.uniform01() < shape_.eos_probability;
        c.finish_reason = c.contains_eos ? policy::FinishReason::eos : policy::FinishReason::stop_marker;
        out.push_back(std::move(c));
      }
    }
    std::uint64_t sum = 0;
    for (const auto& c : out) sum += c.token_count;
    emitted_tokens_ += sum;
    ++calls_;
    return out;
  }

  std::uint64_t emitted_tokens() const { return emitted_tokens_; }
  std::uint64_t calls() const { return calls_; }

 private:
  std::uint64_t seed_;
  RandomTreeShape shape_;
  std::atomic<std::uint64_t> emitted_tokens_{0};
  std::atomic<std::uint64_t> calls_{0};
};

/// Pseudo-random reward from the trace content, quantized to a coarse grid
/// so ties happen.
class RandomReward : public heuristic::RewardModel {
 public:
  explicit RandomReward(std::uint64_t seed, int levels = 20) : seed_(seed), levels_(levels) {}

  double score(const heuristic::StepTrace& trace) override {
    std::string key = trace.problem;
    for (const auto& s : trace.steps) key += '\x1f' + s;
    {
      std::lock_guard lock(mutex_);
      seen_.insert(key);
      ++calls_;
    }
    const auto bucket = mix64(fnv1a64(key) ^ seed_) % static_cast<std::uint64_t>(levels_ + 1);
    return static_cast<double>(bucket) / levels_;
  }

  std::size_t distinct_traces() const {
    std::lock_guard lock(mutex_);
    return seen_.size();
  }
  std::size_t calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
  }

 private:
  std::uint64_t seed_;
  int levels_;
  mutable std::mutex mutex_;
  std::set<std::string> seen_;
  std::size_t calls_ = 0;
};

}  // namespace astardec::testing
