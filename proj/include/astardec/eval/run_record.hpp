#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "astardec/common.hpp"
#include "json.hpp"

namespace astardec::eval {

enum class Method { astar, best_of_n, self_consistency, particle_filtering, pass_at_1 };

std::string_view to_string(Method method);
/// Throws ConfigError on an unknown name.
Method method_from_string(std::string_view name);

/// Outcome of one method on one problem.
struct RunRecord {
  std::string problem_id;
  Method method = Method::astar;
  /// Method parameters in effect (k, b_max, n, temperature, ...).
  nlohmann::json controls = nlohmann::json::object();
  std::string completion_text;
  std::optional<std::string> extracted_answer;
  std::string normalized_answer;
  bool correct = false;
  LedgerSnapshot ledger;
  /// Path of the search trace relative to the run directory, if any.
  std::optional<std::string> trace_ref;
  /// Termination reason for A*, "completed" otherwise.
  std::string termination;
  /// Problem failed with a backend error; `error` holds the message.
  bool failed = false;
  std::string error;
  /// Result was a fallback, truncated, or unanswered; see `flags`.
  std::vector<std::string> flags;
  double wall_time_seconds = 0.0;

  bool operator==(const RunRecord&) const = default;
};

nlohmann::json to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

void save_run_records(const std::filesystem::path& path, const std::vector<RunRecord>& records);
/// Throws ConfigError naming the line on a corrupt record.
std::vector<RunRecord> load_run_records(const std::filesystem::path& path);

}  // namespace astardec::eval
