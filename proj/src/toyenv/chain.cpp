#include "astardec/toyenv/chain.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "astardec/common.hpp"
#include "astardec/policy/segment.hpp"

namespace astardec::toyenv {
namespace {

constexpr std::string_view kStartLead = "Start with ";
constexpr std::string_view kOpsLead = ". Apply these operations in order: ";
constexpr std::string_view kQuestion = ". What is the final value?";
constexpr std::string_view kCalcLead = "Compute: ";

constexpr std::array<std::string_view, 8> kFiller{
    "Let us apply the next operation.",
    "We carry the running value forward.",
    "This step follows directly from the previous result.",
    "Keeping track of the current value carefully.",
    "Now we update the running total.",
    "We apply the operation exactly as stated.",
    "Double-check the arithmetic here.",
    "The current value is the result of the previous step.",
};

// Parses an optionally negative integer at `pos`, advancing it.
std::optional<std::int64_t> read_int(std::string_view text, std::size_t& pos) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
  if (ec != std::errc()) return std::nullopt;
  pos = static_cast<std::size_t>(ptr - text.data());
  return value;
}

bool expect(std::string_view text, std::size_t& pos, std::string_view lit) {
  if (text.compare(pos, lit.size(), lit) != 0) return false;
  pos += lit.size();
  return true;
}

std::string op_phrase(const ChainOp& op) {
  switch (op.kind) {
    case ChainOp::Kind::add:
      return "add " + std::to_string(op.operand);
    case ChainOp::Kind::subtract:
      return "subtract " + std::to_string(op.operand);
    case ChainOp::Kind::multiply:
      return "multiply by " + std::to_string(op.operand);
  }
  return {};
}

char op_symbol(const ChainOp& op) {
  switch (op.kind) {
    case ChainOp::Kind::add:
      return '+';
    case ChainOp::Kind::subtract:
      return '-';
    case ChainOp::Kind::multiply:
      return '*';
  }
  return '?';
}

std::optional<ChainOp> parse_op(std::string_view s) {
  ChainOp op;
  std::string_view rest;
  if (s.starts_with("add ")) {
    op.kind = ChainOp::Kind::add;
    rest = s.substr(4);
  } else if (s.starts_with("subtract ")) {
    op.kind = ChainOp::Kind::subtract;
    rest = s.substr(9);
  } else if (s.starts_with("multiply by ")) {
    op.kind = ChainOp::Kind::multiply;
    rest = s.substr(12);
  } else {
    return std::nullopt;
  }
  std::size_t pos = 0;
  auto v = read_int(rest, pos);
  if (!v || pos != rest.size()) return std::nullopt;
  op.operand = *v;
  return op;
}

}  // namespace

std::int64_t ChainOp::apply(std::int64_t value) const {
  switch (kind) {
    case Kind::add:
      return value + operand;
    case Kind::subtract:
      return value - operand;
    case Kind::multiply:
      return value * operand;
  }
  return value;
}

std::string ChainProblem::statement() const {
  std::string out = std::string(kStartLead) + std::to_string(start) + std::string(kOpsLead);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (i) out += ", ";
    out += op_phrase(ops[i]);
  }
  out += kQuestion;
  return out;
}

std::vector<std::int64_t> ChainProblem::trajectory() const {
  std::vector<std::int64_t> values;
  std::int64_t v = start;
  for (const auto& op : ops) values.push_back(v = op.apply(v));
  return values;
}

std::int64_t ChainProblem::answer() const { return ops.empty() ? start : trajectory().back(); }

std::optional<ChainProblem> ChainProblem::parse(std::string_view text) {
  const auto at = text.find(kStartLead);
  if (at == std::string_view::npos) return std::nullopt;
  std::size_t pos = at + kStartLead.size();
  ChainProblem p;
  auto start = read_int(text, pos);
  if (!start || !expect(text, pos, kOpsLead)) return std::nullopt;
  p.start = *start;
  const auto end = text.find(kQuestion, pos);
  if (end == std::string_view::npos) return std::nullopt;
  std::string_view list = text.substr(pos, end - pos);
  while (!list.empty()) {
    const auto comma = list.find(", ");
    auto op = parse_op(list.substr(0, comma));
    if (!op) return std::nullopt;
    p.ops.push_back(*op);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 2);
  }
  if (p.ops.empty()) return std::nullopt;
  return p;
}

std::vector<ChainProblem> generate_chain_problems(std::size_t count, std::uint64_t seed,
                                                  const ChainTaskConfig& config) {
  if (config.min_steps < 1 || config.max_steps < config.min_steps) {
    throw ConfigError("chain task: invalid step range");
  }
  Rng rng(seed);
  std::vector<ChainProblem> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ChainProblem p;
    p.start = rng.uniform_int(2, 20);
    const auto steps = rng.uniform_int(config.min_steps, config.max_steps);
    for (std::int64_t s = 0; s < steps; ++s) {
      ChainOp op;
      switch (rng.uniform_int(0, 2)) {
        case 0:
          op = {ChainOp::Kind::add, rng.uniform_int(1, 20)};
          break;
        case 1:
          op = {ChainOp::Kind::subtract, rng.uniform_int(1, 20)};
          break;
        default:
          op = {ChainOp::Kind::multiply, rng.uniform_int(2, 3)};
          break;
      }
      p.ops.push_back(op);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<eval::Problem> chain_dataset(const std::vector<ChainProblem>& problems) {
  std::vector<eval::Problem> out;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    out.push_back({"chain-" + std::to_string(i), problems[i].statement(),
                   std::to_string(problems[i].answer())});
  }
  return out;
}

std::vector<ChainCalc> parse_calcs(std::string_view text) {
  std::vector<ChainCalc> calcs;
  std::size_t from = 0;
  while ((from = text.find(kCalcLead, from)) != std::string_view::npos) {
    std::size_t pos = from + kCalcLead.size();
    from = pos;
    auto lhs = read_int(text, pos);
    if (!lhs || pos + 3 > text.size() || text[pos] != ' ') continue;
    pos += 3;  // " + "
    auto operand = read_int(text, pos);
    if (!operand || !expect(text, pos, " = ")) continue;
    auto result = read_int(text, pos);
    if (!result) continue;
    calcs.push_back({*lhs, *result});
  }
  return calcs;
}

ChainPolicy::ChainPolicy(double step_accuracy) : step_accuracy_(step_accuracy) {
  if (!(step_accuracy >= 0.0 && step_accuracy <= 1.0)) {
    throw ConfigError("chain policy: step_accuracy must lie in [0, 1]");
  }
}

std::vector<policy::Candidate> ChainPolicy::sample(std::string_view prefix, int k,
                                                   const policy::SamplingParams& params) {
  std::vector<policy::Candidate> out;
  auto problem = ChainProblem::parse(prefix);
  if (!problem) throw MalformedResponse("chain policy: prefix holds no chain problem");
  const auto calcs = parse_calcs(prefix);
  const std::size_t depth = calcs.size();
  if (depth >= problem->ops.size()) return out;
  const std::int64_t current = calcs.empty() ? problem->start : calcs.back().result;
  const ChainOp& op = problem->ops[depth];
  const bool last = depth + 1 == problem->ops.size();
  const std::uint64_t prefix_hash = fnv1a64(prefix);
  const bool greedy = params.temperature <= 0.0;

  for (int i = 0; i < k; ++i) {
    const std::uint64_t seed =
        greedy ? mix64(prefix_hash)
               : mix64(prefix_hash ^ mix64(params.seed.value_or(0)) ^ mix64(0x5eed0000ULL + static_cast<std::uint64_t>(i)));
    Rng rng(seed);
    std::int64_t value = op.apply(current);
    if (rng.uniform01() >= step_accuracy_) {
      std::int64_t delta = rng.uniform_int(1, 10);
      if (rng.uniform01() < 0.5) delta = -delta;
      value += delta;
    }
    std::string title = op_phrase(op);
    title[0] = static_cast<char>(title[0] - 'a' + 'A');
    std::string text = "## Step " + std::to_string(depth + 1) + ": " + title + "\n";
    const auto fillers = rng.uniform_int(1, 5);
    for (std::int64_t f = 0; f < fillers; ++f) {
      text += kFiller[static_cast<std::size_t>(rng.uniform_int(0, kFiller.size() - 1))];
      text += ' ';
    }
    text += std::string(kCalcLead) + std::to_string(current) + " " + op_symbol(op) + " " +
            std::to_string(op.operand) + " = " + std::to_string(value) + ".\n\n";
    if (last) {
      text += std::string(policy::kFinalAnswerLead) + " $\\boxed{" + std::to_string(value) + "}$. " +
              std::string(policy::kTerminalSentence);
    }
    out.push_back({text, count_tokens(text), last,
                   last ? policy::FinishReason::eos : policy::FinishReason::stop_marker});
    if (greedy) break;
  }
  return out;
}

ChainReward::ChainReward(double noise, std::uint64_t seed) : noise_(noise), seed_(seed) {
  if (!(noise >= 0.0 && noise <= 1.0)) throw ConfigError("chain reward: noise must lie in [0, 1]");
}

double ChainReward::true_reward(const ChainProblem& problem, const std::vector<ChainCalc>& calcs) {
  const auto expected = problem.trajectory();
  const double steps = static_cast<double>(expected.size());
  const std::size_t d = std::min(calcs.size(), expected.size());
  std::size_t first_error = 0;  // 1-based, 0 = none
  for (std::size_t i = 0; i < d; ++i) {
    if (calcs[i].result != expected[i]) {
      first_error = i + 1;
      break;
    }
  }
  if (first_error == 0) return 0.4 + 0.6 * static_cast<double>(d) / steps;
  const double e = static_cast<double>(first_error);
  return std::max(0.0, 0.4 + 0.6 * (e - 1.0) / steps - 0.3 - 0.1 * (static_cast<double>(d) - e));
}

double ChainReward::score(const heuristic::StepTrace& trace) {
  auto problem = ChainProblem::parse(trace.problem);
  if (!problem) throw RewardUnavailable("chain reward: trace holds no chain problem");
  std::string joined;
  for (const auto& s : trace.steps) joined += s;
  const double base = true_reward(*problem, parse_calcs(joined));
  const double u = unit_interval(mix64(trace.hash() ^ mix64(seed_ + 0x7e57ULL)));
  return std::clamp(base + noise_ * (2.0 * u - 1.0), 0.0, 1.0);
}

}  // namespace astardec::toyenv
