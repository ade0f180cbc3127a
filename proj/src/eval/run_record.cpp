#include "astardec/eval/run_record.hpp"

#include <array>
#include <fstream>
#include <utility>

namespace astardec::eval {
namespace {

constexpr std::array<std::pair<Method, std::string_view>, 5> kMethodNames{{
    {Method::astar, "astar"},
    {Method::best_of_n, "best_of_n"},
    {Method::self_consistency, "self_consistency"},
    {Method::particle_filtering, "particle_filtering"},
    {Method::pass_at_1, "pass_at_1"},
}};

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json j;
  j["problem_id"] = r.problem_id;
  j["method"] = to_string(r.method);
  j["controls"] = r.controls;
  j["completion_text"] = r.completion_text;
  j["extracted_answer"] = r.extracted_answer ? nlohmann::json(*r.extracted_answer) : nlohmann::json();
  j["normalized_answer"] = r.normalized_answer;
  j["correct"] = r.correct;
  j["ledger"] = {{"generated_tokens", r.ledger.generated_tokens},
                 {"policy_calls", r.ledger.policy_calls},
                 {"prm_passes", r.ledger.prm_passes}};
  j["trace_ref"] = r.trace_ref ? nlohmann::json(*r.trace_ref) : nlohmann::json();
  j["termination"] = r.termination;
  j["failed"] = r.failed;
  j["error"] = r.error;
  j["flags"] = r.flags;
  j["wall_time_seconds"] = r.wall_time_seconds;
  return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  try {
    RunRecord r;
    r.problem_id = j.at("problem_id").get<std::string>();
    r.method = method_from_string(j.at("method").get<std::string>());
    r.controls = j.value("controls", nlohmann::json::object());
    r.completion_text = j.at("completion_text").get<std::string>();
    if (j.contains("extracted_answer") && !j["extracted_answer"].is_null()) {
      r.extracted_answer = j["extracted_answer"].get<std::string>();
    }
    r.normalized_answer = j.value("normalized_answer", "");
    r.correct = j.at("correct").get<bool>();
    const auto& ledger = j.at("ledger");
    r.ledger.generated_tokens = ledger.at("generated_tokens").get<std::uint64_t>();
    r.ledger.policy_calls = ledger.at("policy_calls").get<std::uint64_t>();
    r.ledger.prm_passes = ledger.at("prm_passes").get<std::uint64_t>();
    if (j.contains("trace_ref") && !j["trace_ref"].is_null()) r.trace_ref = j["trace_ref"].get<std::string>();
    r.termination = j.value("termination", "");
    r.failed = j.value("failed", false);
    r.error = j.value("error", "");
    r.flags = j.value("flags", std::vector<std::string>{});
    r.wall_time_seconds = j.value("wall_time_seconds", 0.0);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("run record: ") + e.what());
  }
}

void save_run_records(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

std::vector<RunRecord> load_run_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::vector<RunRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(run_record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace astardec::eval
