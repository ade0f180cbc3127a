#include "astardec/heuristic/reward.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <spdlog/spdlog.h>

#include "json.hpp"

namespace astardec::heuristic {

std::uint64_t StepTrace::hash() const {
  std::uint64_t h = fnv1a64(problem);
  for (const auto& step : steps) {
    h = fnv1a64("\x1e", h);
    h = fnv1a64(step, h);
  }
  return h;
}

double quantize(double value) {
  constexpr double kScale = 4294967296.0;  // 2^32
  return std::nearbyint(value * kScale) / kScale;
}

ConstantReward::ConstantReward(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) throw ConfigError("constant reward must lie in [0, 1]");
}

TableReward TableReward::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("reward table: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("reward table: " + path + ": " + e.what());
  }
  if (doc.value("schema_version", 1) != 1) throw ConfigError("reward table: unsupported schema_version");
  TableReward table(doc.value("default", 0.5));
  for (const auto& item : doc.value("entries", nlohmann::json::array())) {
    const double reward = item.at("reward").get<double>();
    if (item.contains("trace_hash")) {
      table.set(std::stoull(item["trace_hash"].get<std::string>(), nullptr, 16), reward);
    } else {
      StepTrace trace{item.at("problem").get<std::string>(),
                      item.at("steps").get<std::vector<std::string>>()};
      table.set(trace, reward);
    }
  }
  return table;
}

double TableReward::score(const StepTrace& trace) {
  auto it = table_.find(trace.hash());
  return it == table_.end() ? fallback_ : it->second;
}

double RewardCache::reward(const StepTrace& trace) {
  const std::uint64_t key = trace.hash();
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  double value = model_.score(trace);
  if (std::isnan(value)) throw RewardUnavailable("reward backend returned NaN");
  if (value < 0.0 || value > 1.0) {
    spdlog::warn("reward {} outside [0, 1]; clamped", value);
    value = std::clamp(value, 0.0, 1.0);
  }
  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.try_emplace(key, value);
  if (inserted) ledger_.add_prm_pass();
  return it->second;
}

std::size_t RewardCache::size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

}  // namespace astardec::heuristic
