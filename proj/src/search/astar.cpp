#include "astardec/search/astar.hpp"

#include <algorithm>
#include <future>
#include <unordered_set>

#include "astardec/search/cost.hpp"
#include "astardec/search/open_set.hpp"

namespace astardec::search {
namespace {

std::optional<std::string> prune_reason(const SearchState& candidate, const ScaleControls& controls,
                                        const DepthLedger& depth_ledger) {
  if (depth_ledger.inserted(candidate.depth) >= controls.b_max) return "breadth";
  if (candidate.h > controls.tau_h) return "threshold";
  return std::nullopt;
}

heuristic::StepTrace step_trace(std::string_view problem, const SearchState& state) {
  heuristic::StepTrace trace{std::string(problem), {}};
  trace.steps.reserve(state.thoughts.size());
  for (const auto& t : state.thoughts) trace.steps.push_back(t.text);
  return trace;
}

TraceEvent push_event(const SearchState& s) {
  TraceEvent e;
  e.kind = EventKind::push;
  e.id = s.id;
  e.parent = s.parent_id;
  e.depth = s.depth;
  e.g = s.g;
  e.h = s.h;
  e.f = s.f;
  e.goal = s.is_goal;
  e.truncated = s.truncated;
  return e;
}

// Lexicographic (f, h, id) ordering used for fallbacks.
bool better(const SearchState& a, const SearchState& b) {
  if (a.f != b.f) return a.f < b.f;
  if (a.h != b.h) return a.h < b.h;
  return a.id < b.id;
}

}  // namespace

ExpandOutcome expand(const SearchState& state, std::string_view prompt, policy::Policy& policy,
                     const ScaleControls& controls, const policy::SamplingParams& params,
                     BudgetLedger& ledger, std::uint64_t tokens_spent) {
  ExpandOutcome out;
  const std::string prefix = std::string(prompt) + state.text();
  auto raw = policy.sample(prefix, controls.k, params);
  if (static_cast<int>(raw.size()) > controls.k) raw.resize(static_cast<std::size_t>(controls.k));
  ledger.add_policy_call();
  for (const auto& c : raw) out.generated_tokens += c.token_count;
  ledger.add_tokens(out.generated_tokens);

  std::uint64_t allowance = UINT64_MAX;
  if (controls.global_token_budget) {
    const auto budget = *controls.global_token_budget;
    allowance = budget > tokens_spent ? budget - tokens_spent : 0;
    out.budget_exhausted = tokens_spent + out.generated_tokens >= budget;
  }

  std::unordered_set<std::string> seen;
  std::uint64_t kept_tokens = 0;
  for (auto& c : raw) {
    kept_tokens += c.token_count;
    if (kept_tokens > allowance) break;
    if (!seen.insert(c.text).second) {
      ++out.duplicates;
      continue;
    }
    out.candidates.push_back(std::move(c));
  }
  return out;
}

bool prune(const SearchState& candidate, const ScaleControls& controls, DepthLedger& depth_ledger) {
  if (prune_reason(candidate, controls, depth_ledger)) return true;
  depth_ledger.record(candidate.depth);
  return false;
}

SearchResult rollout(const SearchState& state, std::string_view prompt, policy::Policy& policy,
                     const ScaleControls& controls, const policy::SamplingParams& params,
                     BudgetLedger& ledger, std::uint64_t tokens_spent) {
  SearchResult result;
  result.termination_reason = TerminationReason::rollout_at_dmax;
  result.final_state = state;
  if (!state.is_goal) {
    std::uint64_t max_tokens =
        controls.token_limit > state.token_count ? controls.token_limit - state.token_count : 0;
    if (controls.global_token_budget) {
      const auto budget = *controls.global_token_budget;
      max_tokens = std::min(max_tokens, budget > tokens_spent ? budget - tokens_spent : 0);
    }
    policy::Completion completion;
    if (max_tokens > 0) {
      completion = policy.complete(std::string(prompt) + state.text(), params.greedy(), max_tokens);
    } else {
      completion.token_limit_reached = true;
    }
    ledger.add_policy_call(completion.policy_calls);
    ledger.add_tokens(completion.token_count);

    SearchState& fin = result.final_state;
    for (auto& step : completion.steps) fin.thoughts.push_back(std::move(step));
    fin.depth = static_cast<std::uint32_t>(fin.thoughts.size());
    fin.token_count += completion.token_count;
    fin.is_goal = !fin.thoughts.empty() && fin.thoughts.back().contains_eos;
    fin.truncated = !fin.is_goal && completion.token_limit_reached;
    result.token_limit_reached = fin.truncated;
  }
  result.completion_text = result.final_state.text();
  return result;
}

AStarDecoder::AStarDecoder(policy::Policy& policy, heuristic::RewardModel& reward, DecoderOptions options)
    : policy_(policy), reward_(reward), options_(std::move(options)) {
  options_.controls.validate();
}

SearchResult AStarDecoder::decode(std::string_view prompt, BudgetLedger& ledger, std::string_view problem) {
  if (prompt.empty()) throw ConfigError("astar decode: empty prompt");
  if (problem.empty()) problem = prompt;
  const ScaleControls& controls = options_.controls;

  heuristic::RewardCache cache(reward_, ledger);
  std::vector<SearchState> graph;
  OpenSet open;
  DepthLedger depth_ledger;
  SearchResult result;
  std::uint64_t tokens_spent = 0;

  auto& events = result.events;
  TraceEvent begin;
  begin.kind = EventKind::begin;
  begin.controls = controls;
  events.push_back(begin);

  auto score = [&](const SearchState& s) {
    return heuristic::quantize(cache.heuristic(step_trace(problem, s)));
  };

  {
    SearchState root;
    try {
      root.h = score(root);
    } catch (const RewardUnavailable&) {
      root.h = 1.0;
    } catch (const MalformedResponse&) {
      root.h = 1.0;
    }
    root.f = total_cost(root.g, root.h);
    graph.push_back(root);
    events.push_back(push_event(root));
    open.push(root.f, root.h, 0);
  }

  auto finish = [&](TerminationReason reason, SearchState final_state) {
    result.termination_reason = reason;
    result.final_state = std::move(final_state);
    if (result.completion_text.empty()) result.completion_text = result.final_state.text();
    result.inserted_count = graph.size();
    TraceEvent end;
    end.kind = EventKind::end;
    end.reason = std::string(to_string(reason));
    end.expanded = result.expanded_count;
    end.inserted = graph.size();
    end.id = result.final_state.id;
    events.push_back(end);
    return std::move(result);
  };

  auto fallback = [&](TerminationReason reason) {
    const SearchState* best_goal = nullptr;
    const SearchState* best_any = nullptr;
    for (const auto& s : graph) {
      if (s.is_goal && (!best_goal || better(s, *best_goal))) best_goal = &s;
      if (!best_any || better(s, *best_any)) best_any = &s;
    }
    result.fallback = true;
    SearchState chosen = best_goal ? *best_goal : *best_any;
    result.token_limit_reached = chosen.truncated;
    return finish(reason, std::move(chosen));
  };

  while (!open.empty()) {
    const auto entry = open.pop();
    const SearchState current = graph[entry.payload];

    TraceEvent pop;
    pop.kind = EventKind::pop;
    pop.id = current.id;
    pop.depth = current.depth;
    pop.g = current.g;
    pop.h = current.h;
    pop.f = current.f;
    events.push_back(pop);

    if (current.is_goal) return finish(TerminationReason::goal_popped, current);

    if (current.depth >= static_cast<std::uint32_t>(controls.d_max)) {
      auto rolled = rollout(current, prompt, policy_, controls, options_.sampling, ledger, tokens_spent);
      result.token_limit_reached = rolled.token_limit_reached;
      result.completion_text = rolled.completion_text;
      return finish(TerminationReason::rollout_at_dmax, std::move(rolled.final_state));
    }

    if (controls.global_token_budget && tokens_spent >= *controls.global_token_budget) {
      return fallback(TerminationReason::budget_exhausted);
    }

    auto expansion = expand(current, prompt, policy_, controls, options_.sampling, ledger, tokens_spent);
    tokens_spent += expansion.generated_tokens;
    ++result.expanded_count;

    std::vector<SearchState> children;
    children.reserve(expansion.candidates.size());
    for (const auto& c : expansion.candidates) {
      SearchState child;
      child.parent_id = current.id;
      child.thoughts = current.thoughts;
      child.thoughts.push_back(c.as_thought());
      child.depth = current.depth + 1;
      child.token_count = current.token_count + c.token_count;
      child.is_goal = c.contains_eos;
      child.truncated = !child.is_goal && child.token_count >= controls.token_limit;
      children.push_back(std::move(child));
    }

    if (options_.scoring_workers > 1 && children.size() > 1) {
      const auto workers = static_cast<std::size_t>(options_.scoring_workers);
      for (std::size_t start = 0; start < children.size(); start += workers) {
        const std::size_t stop = std::min(children.size(), start + workers);
        std::vector<std::future<double>> pending;
        for (std::size_t i = start; i < stop; ++i) {
          pending.push_back(std::async(std::launch::async, score, std::cref(children[i])));
        }
        for (std::size_t i = start; i < stop; ++i) children[i].h = pending[i - start].get();
      }
    } else {
      for (auto& child : children) child.h = score(child);
    }

    ExpansionRecord record{current.id, {}, 0};
    for (auto& child : children) {
      if (auto reason = prune_reason(child, controls, depth_ledger)) {
        TraceEvent e;
        e.kind = EventKind::prune;
        e.parent = current.id;
        e.depth = child.depth;
        e.h = child.h;
        e.reason = *reason;
        events.push_back(e);
        ++record.pruned;
        continue;
      }
      depth_ledger.record(child.depth);
      child.g = current.g + cost_increment(current.h, child.h);
      child.f = total_cost(child.g, child.h);
      child.id = graph.size();
      record.children.push_back(child.id);
      events.push_back(push_event(child));
      if (!child.truncated) open.push(child.f, child.h, graph.size());
      graph.push_back(std::move(child));
    }
    result.trace.push_back(std::move(record));

    if (expansion.budget_exhausted) return fallback(TerminationReason::budget_exhausted);
  }
  return fallback(TerminationReason::open_set_exhausted);
}

}  // namespace astardec::search
