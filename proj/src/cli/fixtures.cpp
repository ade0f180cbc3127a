#include "astardec/cli/fixtures.hpp"

#include <fstream>
#include <string>

#include "astardec/common.hpp"
#include "astardec/policy/prompt.hpp"
#include "astardec/toyenv/chain.hpp"
#include "astardec/toyenv/countdown.hpp"
#include "astardec/toyenv/maze.hpp"

namespace astardec::cli {
namespace {

struct Branch {
  std::string step;
  double step_reward;
  std::string final;
  double final_reward;
};

struct ScriptedProblem {
  eval::Problem problem;
  std::vector<Branch> branches;
};

std::string final_line(const std::string& answer) {
  return "Therefore, the final answer is: $\\boxed{" + answer + "}$. I hope it is correct.";
}

std::vector<ScriptedProblem> scripted_problems() {
  return {
      {{"add-1", "What is 1 + 1?", "2"},
       {{"## Step 1: Add the numbers.\n1 + 1 = 2.\n\n", 0.8, final_line("2"), 0.95},
        {"## Step 1: Count on.\nOne more than one is three.\n\n", 0.3, final_line("3"), 0.1}}},
      {{"frac-1", "Simplify 2/4.", "\\frac{1}{2}"},
       {{"## Step 1: Divide top and bottom by 2.\n2/4 = 1/2 = 0.5.\n\n", 0.85, final_line("0.5"), 0.9},
        {"## Step 1: Divide 4 by 2.\n4 / 2 = 2.\n\n", 0.2, final_line("2"), 0.05}}},
      {{"mul-1", "What is 3 * 4?", "12"},
       {{"## Step 1: Add 3 and 4.\n3 + 4 = 7.\n\n", 0.25, final_line("7"), 0.1},
        {"## Step 1: Multiply.\n3 * 4 = 12.\n\n", 0.9, final_line("12"), 0.97}}},
      {{"sub-1", "What is 10 - 3?", "7"},
       {{"## Step 1: Subtract.\n10 - 3 = 6.\n\n", 0.4, final_line("6"), 0.2},
        {"## Step 1: Count back three from ten.\n10, 9, 8, 7.\n\n", 0.7, final_line("7"), 0.8}}},
  };
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json config(const std::string& method, const std::string& dataset, const std::string& output,
                      nlohmann::json policy, nlohmann::json reward) {
  nlohmann::json c{{"method", method},
                   {"dataset", dataset},
                   {"output_dir", output},
                   {"seed", 0},
                   {"workers", 1},
                   {"controls", {{"k", 16}, {"d_max", 40}, {"b_max", 5}, {"tau_h", 1.0}, {"token_limit", 4096}}},
                   {"sampling", {{"temperature", 0.8}, {"top_p", 1.0}, {"max_tokens_per_step", 512}}},
                   {"baseline", {{"n", 64}, {"max_steps", 40}}},
                   {"policy", std::move(policy)}};
  if (!reward.is_null()) c["reward"] = std::move(reward);
  return c;
}

std::string dataset_text(const std::vector<eval::Problem>& problems) {
  std::string out;
  for (const auto& p : problems) out += eval::to_json(p).dump() + "\n";
  return out;
}

}  // namespace

ScriptedFixture scripted_fixture() {
  ScriptedFixture f;
  f.policy_script = {{"schema_version", 1}, {"entries", nlohmann::json::array()}};
  f.reward_table = {{"schema_version", 1}, {"default", 0.5}, {"entries", nlohmann::json::array()}};
  for (const auto& sp : scripted_problems()) {
    f.dataset.push_back(sp.problem);
    const std::string prompt = policy::render_cot_prompt(sp.problem.statement);
    nlohmann::json first_steps = nlohmann::json::array();
    for (const auto& b : sp.branches) {
      first_steps.push_back(b.step);
      f.policy_script["entries"].push_back({{"prefix", prompt + b.step}, {"candidates", {b.final}}});
      f.reward_table["entries"].push_back(
          {{"problem", sp.problem.statement}, {"steps", {b.step}}, {"reward", b.step_reward}});
      f.reward_table["entries"].push_back(
          {{"problem", sp.problem.statement}, {"steps", {b.step, b.final}}, {"reward", b.final_reward}});
    }
    f.policy_script["entries"].push_back({{"prefix", prompt}, {"candidates", first_steps}});
    f.reward_table["entries"].push_back(
        {{"problem", sp.problem.statement}, {"steps", nlohmann::json::array()}, {"reward", 0.5}});
  }
  return f;
}

void write_fixtures(const std::filesystem::path& dir, std::uint64_t seed) {
  const auto scripted = scripted_fixture();
  write_text(dir / "scripted" / "dataset.jsonl", dataset_text(scripted.dataset));
  write_json(dir / "scripted" / "policy.json", scripted.policy_script);
  write_json(dir / "scripted" / "reward.json", scripted.reward_table);
  const nlohmann::json scripted_policy{{"backend", "scripted"}, {"script", "policy.json"}};
  const nlohmann::json table_reward{{"backend", "table"}, {"path", "reward.json"}};
  for (const std::string method : {"astar", "best_of_n", "self_consistency", "particle_filtering", "pass_at_1"}) {
    auto c = config(method, "dataset.jsonl", "../../runs/scripted-" + method, scripted_policy, table_reward);
    c["baseline"]["n"] = 4;
    write_json(dir / "scripted" / (method + ".json"), c);
  }

  const auto chain = toyenv::generate_chain_problems(50, seed);
  write_text(dir / "chain" / "dataset.jsonl", dataset_text(toyenv::chain_dataset(chain)));
  const nlohmann::json chain_policy{{"backend", "chain"}, {"step_accuracy", 0.6}};
  const nlohmann::json chain_reward{{"backend", "chain"}, {"noise", 0.2}};
  write_json(dir / "chain" / "astar.json",
             config("astar", "dataset.jsonl", "../../runs/chain-astar", chain_policy, chain_reward));
  for (int n : {4, 16, 64}) {
    auto c = config("best_of_n", "dataset.jsonl", "../../runs/chain-best_of_n-" + std::to_string(n), chain_policy,
                    chain_reward);
    c["baseline"]["n"] = n;
    write_json(dir / "chain" / ("best_of_n_" + std::to_string(n) + ".json"), c);
  }

  nlohmann::json mazes = nlohmann::json::array();
  for (std::uint64_t i = 0; i < 10; ++i) mazes.push_back(toyenv::generate_maze(seed + i).to_json());
  write_json(dir / "toy" / "mazes.json", {{"schema_version", 1}, {"mazes", mazes}});
  nlohmann::json countdown = nlohmann::json::array();
  for (const auto& spec : {toyenv::CountdownSpec{{2, 3}, 6}, toyenv::CountdownSpec{{1, 1}, 3},
                           toyenv::CountdownSpec{{4, 7, 25, 3}, 103}, toyenv::CountdownSpec{{2, 5, 6}, 17}}) {
    countdown.push_back(spec.to_json());
  }
  write_json(dir / "toy" / "countdown.json", {{"schema_version", 1}, {"instances", countdown}});

  const std::vector<eval::Problem> live{
      {"live-1", "What is the smallest positive integer $n$ such that $3n \\equiv 1 \\pmod{7}$?", "5"}};
  write_text(dir / "live" / "dataset.jsonl", dataset_text(live));
  const nlohmann::json http_policy{{"backend", "http"},
                                   {"base_url", "http://localhost:8000"},
                                   {"model", "Qwen/Qwen2.5-1.5B-Instruct"},
                                   {"api_key_env", "OPENAI_API_KEY"}};
  const nlohmann::json prm_reward{{"backend", "prm_http"},
                                  {"base_url", "http://localhost:8001"},
                                  {"model", "Qwen/Qwen2.5-Math-PRM-7B"},
                                  {"api_key_env", "PRM_API_KEY"}};
  write_json(dir / "live" / "astar.json",
             config("astar", "dataset.jsonl", "../../runs/live-astar", http_policy, prm_reward));
  write_json(dir / "live" / "pass_at_1.json",
             config("pass_at_1", "dataset.jsonl", "../../runs/live-pass_at_1", http_policy, nullptr));
}

}  // namespace astardec::cli
