#include "astardec/eval/dataset.hpp"

#include <fstream>
#include <unordered_set>

#include "astardec/common.hpp"

namespace astardec::eval {
namespace {

std::string first_of(const nlohmann::json& j, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    if (!j.contains(key)) continue;
    const auto& v = j[key];
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return v.dump();
  }
  std::string names;
  for (const char* key : keys) names += std::string(names.empty() ? "" : "/") + key;
  throw ConfigError("dataset record is missing field " + names);
}

}  // namespace

DatasetFormat dataset_format_from_string(const std::string& name) {
  if (name == "native" || name.empty()) return DatasetFormat::native;
  if (name == "math500") return DatasetFormat::math500;
  if (name == "aime") return DatasetFormat::aime;
  throw ConfigError("unknown dataset format '" + name + "'");
}

Problem problem_from_json(const nlohmann::json& j, DatasetFormat format) {
  switch (format) {
    case DatasetFormat::native:
      return {first_of(j, {"id"}), first_of(j, {"statement"}), first_of(j, {"reference_answer"})};
    case DatasetFormat::math500:
      return {first_of(j, {"unique_id", "id"}), first_of(j, {"problem"}), first_of(j, {"answer"})};
    case DatasetFormat::aime:
      return {first_of(j, {"id", "ID"}), first_of(j, {"problem", "Problem"}), first_of(j, {"answer", "Answer"})};
  }
  throw ConfigError("unknown dataset format");
}

nlohmann::json to_json(const Problem& p) {
  return {{"id", p.id}, {"statement", p.statement}, {"reference_answer", p.reference_answer}};
}

std::vector<Problem> load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  std::vector<Problem> problems;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Problem p;
    try {
      p = problem_from_json(nlohmann::json::parse(line), format);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!ids.insert(p.id).second) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": duplicate id '" + p.id + "'");
    }
    problems.push_back(std::move(p));
  }
  return problems;
}

void save_dataset(const std::filesystem::path& path, const std::vector<Problem>& problems) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset " + path.string());
  for (const auto& p : problems) out << to_json(p).dump() << '\n';
}

}  // namespace astardec::eval
