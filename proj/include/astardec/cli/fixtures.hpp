#pragma once

#include <filesystem>
#include <vector>

#include "astardec/eval/dataset.hpp"
#include "json.hpp"

namespace astardec::cli {

/// A tiny arithmetic dataset with a hand-written policy script and reward
/// table. Each problem offers two first steps; the greedy (first) one is not
/// always the right one, and the reward table tells them apart.
struct ScriptedFixture {
  std::vector<eval::Problem> dataset;
  /// ScriptedPolicy file document.
  nlohmann::json policy_script;
  /// TableReward file document.
  nlohmann::json reward_table;
};

ScriptedFixture scripted_fixture();

/// Write the fixture tree used by the examples in the README:
///   scripted/  dataset, policy script, reward table, one config per method
///   chain/     synthetic arithmetic-chain dataset and configs
///   toy/       seeded mazes and Countdown instances
///   live/      one problem and configs for OpenAI-compatible endpoints
void write_fixtures(const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace astardec::cli
