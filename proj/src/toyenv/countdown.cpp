#include "astardec/toyenv/countdown.hpp"

#include <sstream>

#include "astardec/common.hpp"

namespace astardec::toyenv {
namespace {

struct Application {
  std::string expression;
  std::int64_t result;
  std::vector<std::int64_t> remaining;
};

std::vector<Application> applications(const std::vector<std::int64_t>& nums) {
  std::vector<Application> out;
  for (std::size_t i = 0; i < nums.size(); ++i) {
    for (std::size_t j = i + 1; j < nums.size(); ++j) {
      const std::int64_t a = nums[i];
      const std::int64_t b = nums[j];
      const std::int64_t hi = std::max(a, b);
      const std::int64_t lo = std::min(a, b);
      std::vector<std::int64_t> rest;
      for (std::size_t m = 0; m < nums.size(); ++m) {
        if (m != i && m != j) rest.push_back(nums[m]);
      }
      auto emit = [&](std::string expr, std::int64_t value) {
        auto remaining = rest;
        remaining.push_back(value);
        out.push_back({std::move(expr), value, std::move(remaining)});
      };
      emit(std::to_string(a) + "+" + std::to_string(b), a + b);
      if (hi - lo > 0) emit(std::to_string(hi) + "-" + std::to_string(lo), hi - lo);
      emit(std::to_string(a) + "*" + std::to_string(b), a * b);
      if (lo > 0 && hi % lo == 0) emit(std::to_string(hi) + "/" + std::to_string(lo), hi / lo);
    }
  }
  return out;
}

bool solvable_from(const std::vector<std::int64_t>& nums, std::int64_t target) {
  for (const auto& app : applications(nums)) {
    if (app.result == target) return true;
    if (solvable_from(app.remaining, target)) return true;
  }
  return false;
}

}  // namespace

void CountdownSpec::validate() const {
  if (numbers.empty()) throw ConfigError("countdown: no numbers");
  for (auto n : numbers) {
    if (n <= 0) throw ConfigError("countdown: numbers must be positive");
  }
  if (target <= 0) throw ConfigError("countdown: target must be positive");
}

nlohmann::json CountdownSpec::to_json() const { return {{"numbers", numbers}, {"target", target}}; }

CountdownSpec CountdownSpec::from_json(const nlohmann::json& j) {
  try {
    CountdownSpec s{j.at("numbers").get<std::vector<std::int64_t>>(), j.at("target").get<std::int64_t>()};
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("countdown: ") + e.what());
  }
}

std::string countdown_prompt(const CountdownSpec& spec) {
  std::string out = "Countdown numbers:";
  for (auto n : spec.numbers) out += " " + std::to_string(n);
  out += "; target " + std::to_string(spec.target) + "\n";
  return out;
}

std::vector<std::int64_t> countdown_available(const CountdownSpec& spec, std::string_view text) {
  const auto pos = text.rfind("(left:");
  if (pos == std::string_view::npos) return spec.numbers;
  const auto close = text.find(')', pos);
  std::istringstream in(std::string(text.substr(pos + 6, close - pos - 6)));
  std::vector<std::int64_t> nums;
  for (std::int64_t n; in >> n;) nums.push_back(n);
  return nums;
}

std::vector<policy::Candidate> countdown_expand(const CountdownSpec& spec,
                                                const std::vector<std::int64_t>& available, int k) {
  std::vector<policy::Candidate> out;
  for (auto& app : applications(available)) {
    if (static_cast<int>(out.size()) >= k) break;
    std::string text = app.expression + "=" + std::to_string(app.result) + " (left:";
    for (auto n : app.remaining) text += " " + std::to_string(n);
    text += ")\n";
    const bool goal = app.result == spec.target;
    out.push_back({text, count_tokens(text), goal,
                   goal ? policy::FinishReason::eos : policy::FinishReason::stop_marker});
  }
  return out;
}

CountdownPolicy::CountdownPolicy(CountdownSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

std::vector<policy::Candidate> CountdownPolicy::sample(std::string_view prefix, int k,
                                                       const policy::SamplingParams& /*params*/) {
  return countdown_expand(spec_, countdown_available(spec_, prefix), k);
}

bool countdown_solvable(const CountdownSpec& spec) {
  spec.validate();
  return solvable_from(spec.numbers, spec.target);
}

}  // namespace astardec::toyenv
