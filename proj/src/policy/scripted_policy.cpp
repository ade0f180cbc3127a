#include "astardec/policy/scripted_policy.hpp"

#include <fstream>

#include "astardec/common.hpp"
#include "astardec/policy/segment.hpp"

namespace astardec::policy {

ScriptedPolicy ScriptedPolicy::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw ConfigError("scripted policy: expected an object with an 'entries' array");
  }
  if (doc.value("schema_version", 1) != 1) {
    throw ConfigError("scripted policy: unsupported schema_version");
  }
  ScriptedPolicy policy;
  for (const auto& item : doc["entries"]) {
    std::uint64_t key = 0;
    if (item.contains("prefix")) {
      key = fnv1a64(item["prefix"].get<std::string>());
    } else if (item.contains("prefix_hash")) {
      key = std::stoull(item["prefix_hash"].get<std::string>(), nullptr, 16);
    } else {
      throw ConfigError("scripted policy: entry needs 'prefix' or 'prefix_hash'");
    }
    std::vector<Entry> entries;
    for (const auto& c : item.at("candidates")) {
      if (c.is_string()) {
        auto text = c.get<std::string>();
        bool eos = has_terminal_sentence(text);
        entries.push_back({std::move(text), eos});
      } else {
        auto text = c.at("text").get<std::string>();
        bool eos = c.value("eos", has_terminal_sentence(text));
        entries.push_back({std::move(text), eos});
      }
    }
    policy.add_entries(key, std::move(entries));
  }
  return policy;
}

ScriptedPolicy ScriptedPolicy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scripted policy: cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scripted policy: " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

void ScriptedPolicy::add(std::string_view prefix, const std::vector<std::string>& candidates) {
  std::vector<Entry> entries;
  entries.reserve(candidates.size());
  for (const auto& text : candidates) entries.push_back({text, has_terminal_sentence(text)});
  add_entries(fnv1a64(prefix), std::move(entries));
}

void ScriptedPolicy::add_entries(std::uint64_t prefix_hash, std::vector<Entry> entries) {
  table_[prefix_hash] = std::move(entries);
}

std::vector<Candidate> ScriptedPolicy::sample(std::string_view prefix, int k,
                                              const SamplingParams& /*params*/) {
  std::vector<Candidate> out;
  auto it = table_.find(fnv1a64(prefix));
  if (it == table_.end() || k <= 0) return out;
  for (const auto& entry : it->second) {
    if (static_cast<int>(out.size()) == k) break;
    if (entry.text.empty()) continue;
    out.push_back({entry.text, count_tokens(entry.text), entry.eos,
                   entry.eos ? FinishReason::eos : FinishReason::stop_marker});
  }
  return out;
}

}  // namespace astardec::policy
