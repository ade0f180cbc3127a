#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "astardec/policy/policy.hpp"
#include "json.hpp"

namespace astardec::policy {

/// Deterministic policy backed by a table of prefix -> candidate list.
///
/// Lookups are keyed by the FNV-1a hash of the exact prefix. Unknown prefixes
/// are dead ends (no candidates). `sample` returns the first k entries in
/// table order; the seed and temperature are ignored.
///
/// File schema (JSON):
///   {"schema_version": 1,
///    "entries": [{"prefix": "...", "candidates": ["...", {"text": "...", "eos": true}]},
///                {"prefix_hash": "<16 hex digits>", "candidates": [...]}]}
/// A plain string candidate is EOS iff it contains the terminal sentence.
class ScriptedPolicy : public Policy {
 public:
  struct Entry {
    std::string text;
    bool eos = false;
  };

  ScriptedPolicy() = default;

  static ScriptedPolicy from_json(const nlohmann::json& doc);
  static ScriptedPolicy load(const std::filesystem::path& path);

  /// Register candidates for an exact prefix. EOS is inferred from the text.
  void add(std::string_view prefix, const std::vector<std::string>& candidates);
  void add_entries(std::uint64_t prefix_hash, std::vector<Entry> entries);

  std::size_t size() const { return table_.size(); }

  std::vector<Candidate> sample(std::string_view prefix, int k,
                                const SamplingParams& params) override;

 private:
  std::unordered_map<std::uint64_t, std::vector<Entry>> table_;
};

}  // namespace astardec::policy
