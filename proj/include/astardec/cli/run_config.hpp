#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "astardec/eval/benchmark.hpp"
#include "astardec/eval/dataset.hpp"
#include "astardec/heuristic/reward.hpp"
#include "astardec/policy/policy.hpp"
#include "json.hpp"

namespace astardec::cli {

/// Everything `astardec run` needs. See docs/config.md for the file format.
struct RunConfig {
  eval::Method method = eval::Method::astar;
  std::filesystem::path dataset;
  eval::DatasetFormat dataset_format = eval::DatasetFormat::native;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  int workers = 1;
  bool resume = false;
  eval::MethodOptions options;
  /// Backend sections, kept as JSON until the backends are built.
  nlohmann::json policy;
  nlohmann::json reward;
  /// Directory the config was loaded from; backend paths resolve against it.
  std::filesystem::path base_dir;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parse a config document. Relative paths resolve against `base_dir`.
/// Missing sections take the defaults (temperature 0.8, k 16, b_max 5,
/// d_max 40, n 64). Throws ConfigError on a malformed field.
RunConfig run_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Apply the run seed to sampling and baseline options.
void apply_seed(RunConfig& config, std::uint64_t seed);

std::unique_ptr<policy::Policy> make_policy(const nlohmann::json& section, const std::filesystem::path& base_dir);
std::unique_ptr<heuristic::RewardModel> make_reward(const nlohmann::json& section,
                                                    const std::filesystem::path& base_dir, std::uint64_t seed);

}  // namespace astardec::cli
