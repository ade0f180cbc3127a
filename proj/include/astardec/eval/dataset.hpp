#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace astardec::eval {

struct Problem {
  std::string id;
  std::string statement;
  std::string reference_answer;

  bool operator==(const Problem&) const = default;
};

enum class DatasetFormat {
  native,   ///< {"id", "statement", "reference_answer"}
  math500,  ///< {"unique_id", "problem", "answer"}
  aime,     ///< {"id"|"ID", "problem"|"Problem", "answer"|"Answer"}
};

DatasetFormat dataset_format_from_string(const std::string& name);

Problem problem_from_json(const nlohmann::json& j, DatasetFormat format = DatasetFormat::native);
nlohmann::json to_json(const Problem& p);

/// Line-delimited records. Blank lines are skipped. Throws ConfigError on a
/// malformed line or a duplicate id.
std::vector<Problem> load_dataset(const std::filesystem::path& path,
                                  DatasetFormat format = DatasetFormat::native);
void save_dataset(const std::filesystem::path& path, const std::vector<Problem>& problems);

}  // namespace astardec::eval
