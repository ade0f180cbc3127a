#pragma once

#include <atomic>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace astardec {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The policy backend failed after exhausting its retry policy.
class PolicyUnavailable : public Error {
 public:
  using Error::Error;
};

/// A backend answered, but the payload had no usable content.
class MalformedResponse : public Error {
 public:
  using Error::Error;
};

/// The reward backend failed after exhausting its retry policy.
class RewardUnavailable : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

class NoGoalReachable : public Error {
 public:
  using Error::Error;
};

class TraceError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Budget accounting
// ---------------------------------------------------------------------------

struct LedgerSnapshot {
  std::uint64_t generated_tokens = 0;
  std::uint64_t policy_calls = 0;
  std::uint64_t prm_passes = 0;

  bool operator==(const LedgerSnapshot&) const = default;
};

/// Monotone counters for generated tokens, policy calls and reward-model
/// passes. Safe for concurrent increments.
class BudgetLedger {
 public:
  BudgetLedger() = default;
  BudgetLedger(const BudgetLedger&) = delete;
  BudgetLedger& operator=(const BudgetLedger&) = delete;

  void add_tokens(std::uint64_t n) { generated_tokens_.fetch_add(n, std::memory_order_relaxed); }
  void add_policy_call(std::uint64_t n = 1) { policy_calls_.fetch_add(n, std::memory_order_relaxed); }
  void add_prm_pass(std::uint64_t n = 1) { prm_passes_.fetch_add(n, std::memory_order_relaxed); }

  std::uint64_t generated_tokens() const { return generated_tokens_.load(std::memory_order_relaxed); }
  std::uint64_t policy_calls() const { return policy_calls_.load(std::memory_order_relaxed); }
  std::uint64_t prm_passes() const { return prm_passes_.load(std::memory_order_relaxed); }

  LedgerSnapshot snapshot() const { return {generated_tokens(), policy_calls(), prm_passes()}; }

 private:
  std::atomic<std::uint64_t> generated_tokens_{0};
  std::atomic<std::uint64_t> policy_calls_{0};
  std::atomic<std::uint64_t> prm_passes_{0};
};

// ---------------------------------------------------------------------------
// Small shared helpers
// ---------------------------------------------------------------------------

/// 64-bit FNV-1a. Stable across platforms; used for cache keys, script
/// lookups and seeded per-prefix randomness.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// splitmix64 finalizer, for combining seeds.
std::uint64_t mix64(std::uint64_t x);

std::string to_hex(std::uint64_t value);

/// Whitespace token count. Non-empty text always counts as at least one token.
std::uint32_t count_tokens(std::string_view text);

/// Uniform double in [0, 1) from a raw 64-bit draw (53 high bits).
inline double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Seeded generator with platform-stable draws (the standard distributions
/// are implementation-defined, the raw engine is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform01() { return unit_interval(engine_()); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

}  // namespace astardec
