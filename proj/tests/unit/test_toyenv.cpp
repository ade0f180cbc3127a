#include <deque>

#include "astardec/search/astar.hpp"
#include "astardec/toyenv/chain.hpp"
#include "astardec/toyenv/countdown.hpp"
#include "astardec/toyenv/maze.hpp"
#include "doctest.h"

using namespace astardec;
using namespace astardec::toyenv;

namespace {

MazeSpec open_maze(int w, int h) {
  MazeSpec m;
  m.width = w;
  m.height = h;
  m.start = {0, 0};
  m.goal = {h - 1, w - 1};
  return m;
}

search::DecoderOptions maze_options(const MazeSpec& m) {
  search::DecoderOptions o;
  o.controls.k = 4;
  o.controls.b_max = 1 << 20;
  o.controls.d_max = m.width * m.height;
  o.controls.tau_h = 1.0;
  o.controls.token_limit = 1 << 20;
  return o;
}

// Plain BFS written independently of the library's helpers.
int bfs_length(const MazeSpec& m) {
  std::vector<std::vector<int>> d(m.height, std::vector<int>(m.width, -1));
  std::deque<Cell> q{m.start};
  d[m.start.row][m.start.col] = 0;
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    const Cell next[] = {{c.row - 1, c.col}, {c.row, c.col + 1}, {c.row + 1, c.col}, {c.row, c.col - 1}};
    for (const Cell n : next) {
      if (n.row < 0 || n.col < 0 || n.row >= m.height || n.col >= m.width) continue;
      if (m.walls.count(n) || d[n.row][n.col] >= 0) continue;
      d[n.row][n.col] = d[c.row][c.col] + 1;
      q.push_back(n);
    }
  }
  return d[m.goal.row][m.goal.col];
}

}  // namespace

TEST_SUITE("toyenv") {

TEST_CASE("maze moves are the open neighbours") {
  auto m = open_maze(3, 3);
  MazePolicy policy(m);
  CHECK(policy.moves({1, 1}, 8).size() == 4);
  CHECK(policy.moves({0, 0}, 8).size() == 2);
  m.walls = {{0, 1}, {1, 0}};
  m.goal = {2, 2};
  CHECK(MazePolicy(m).moves({0, 0}, 8).empty());
  CHECK(policy.moves({1, 1}, 3).size() == 3);
}

TEST_CASE("a move onto the goal carries EOS") {
  MazePolicy policy(open_maze(2, 1));
  const auto moves = policy.moves({0, 0}, 4);
  REQUIRE(moves.size() == 1);
  CHECK(moves[0].contains_eos);
  CHECK(moves[0].text == "move E -> (0,1) goal\n");
  CHECK(last_move_target("x\nmove S -> (3,12)\n") == Cell{3, 12});
}

TEST_CASE("oracle reward is one minus the normalized distance") {
  MazeOracleReward oracle(open_maze(5, 5));
  CHECK(oracle.max_distance() == 8);
  CHECK(oracle.reward_at({0, 0}) == 0.0);
  CHECK(oracle.reward_at({2, 2}) == 0.5);
  CHECK(oracle.reward_at({4, 4}) == 1.0);
}

TEST_CASE("unreachable goals score zero everywhere") {
  auto m = open_maze(3, 1);
  m.walls = {{0, 1}};
  MazeOracleReward oracle(m);
  CHECK_FALSE(oracle.goal_reachable());
  CHECK(oracle.reward_at({0, 2}) == 0.0);
  CHECK_THROWS_AS(brute_force_shortest(m), NoGoalReachable);
}

TEST_CASE("brute force on tiny mazes") {
  CHECK(brute_force_shortest(open_maze(2, 1)).length == 1);
  const auto p = brute_force_shortest(open_maze(5, 5));
  CHECK(p.length == 8);
  CHECK(p.cells.size() == 9);
  CHECK(p.cells.front() == Cell{0, 0});
  CHECK(p.cells.back() == Cell{4, 4});
}

TEST_CASE("generated mazes are solvable and round-trip") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto m = generate_maze(seed, 15);
    CHECK(m.width <= 15);
    CHECK(m.height <= 15);
    CHECK(bfs_length(m) > 0);
    const auto back = MazeSpec::from_json(m.to_json());
    CHECK(back.walls == m.walls);
    CHECK(back.start == m.start);
    CHECK(back.goal == m.goal);
  }
  CHECK(generate_maze(5).walls == generate_maze(5).walls);
}

TEST_CASE("A* over a seeded maze finds a shortest path") {
  for (std::uint64_t seed : {3ULL, 7ULL, 21ULL}) {
    auto m = generate_maze(seed, 9);
    MazePolicy policy(m);
    MazeOracleReward oracle(m);
    BudgetLedger ledger;
    const auto r = search::astar_decode(maze_prompt(m), policy, oracle, maze_options(m), ledger);
    CHECK(r.termination_reason == search::TerminationReason::goal_popped);
    CHECK(static_cast<int>(r.final_state.depth) == bfs_length(m));
    CHECK(last_move_target(r.completion_text) == m.goal);
  }
}

TEST_CASE("countdown expansions") {
  CountdownSpec spec{{2, 3}, 6};
  const auto all = countdown_expand(spec, spec.numbers, 16);
  REQUIRE(all.size() == 3);
  CHECK(all[0].text == "2+3=5 (left: 5)\n");
  CHECK(all[1].text == "3-2=1 (left: 1)\n");
  CHECK(all[2].text == "2*3=6 (left: 6)\n");
  CHECK(all[2].contains_eos);
  CHECK_FALSE(all[0].contains_eos);
  CHECK(countdown_expand(spec, spec.numbers, 2).size() == 2);
  CHECK(countdown_available(spec, "1+1=2 (left: 4 2)\n") == std::vector<std::int64_t>{4, 2});
  CHECK(countdown_available(spec, "") == spec.numbers);
}

TEST_CASE("A* solves countdown or exhausts the open set") {
  search::DecoderOptions o;
  o.controls.k = 16;
  o.controls.b_max = 1000;
  o.controls.d_max = 5;
  heuristic::ConstantReward reward(0.5);
  {
    CountdownSpec spec{{2, 3}, 6};
    CountdownPolicy policy(spec);
    BudgetLedger ledger;
    const auto r = search::astar_decode(countdown_prompt(spec), policy, reward, o, ledger);
    CHECK(r.termination_reason == search::TerminationReason::goal_popped);
    CHECK(r.completion_text.find("=6 ") != std::string::npos);
  }
  {
    CountdownSpec spec{{1, 1}, 3};
    CountdownPolicy policy(spec);
    BudgetLedger ledger;
    const auto r = search::astar_decode(countdown_prompt(spec), policy, reward, o, ledger);
    CHECK(r.termination_reason == search::TerminationReason::open_set_exhausted);
    CHECK(r.fallback);
    CHECK_FALSE(r.final_state.is_goal);
  }
}

TEST_CASE("A* reaches a goal exactly on solvable countdown instances") {
  search::DecoderOptions o;
  o.controls.k = 64;
  o.controls.b_max = 1 << 20;
  o.controls.d_max = 4;
  heuristic::ConstantReward reward(0.5);
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    CountdownSpec spec;
    for (int i = 0; i < 3; ++i) spec.numbers.push_back(rng.uniform_int(1, 9));
    spec.target = rng.uniform_int(1, 40);
    CountdownPolicy policy(spec);
    BudgetLedger ledger;
    const auto r = search::astar_decode(countdown_prompt(spec), policy, reward, o, ledger);
    INFO("numbers " << spec.numbers[0] << " " << spec.numbers[1] << " " << spec.numbers[2] << " target "
                    << spec.target);
    CHECK(r.final_state.is_goal == countdown_solvable(spec));
  }
}

TEST_CASE("chain problems parse back from their statement") {
  const auto problems = generate_chain_problems(20, 5);
  for (const auto& p : problems) {
    const auto back = ChainProblem::parse("prefix " + p.statement() + " suffix");
    REQUIRE(back);
    CHECK(back->start == p.start);
    CHECK(back->ops == p.ops);
    CHECK(p.trajectory().back() == p.answer());
    CHECK(p.ops.size() >= 6);
    CHECK(p.ops.size() <= 10);
  }
  const auto ds = chain_dataset(problems);
  CHECK(ds[3].id == "chain-3");
  CHECK(ds[3].reference_answer == std::to_string(problems[3].answer()));
}

TEST_CASE("a perfect chain policy completes correctly") {
  ChainProblem p{5, {{ChainOp::Kind::add, 3}, {ChainOp::Kind::multiply, 2}, {ChainOp::Kind::subtract, 4}}};
  CHECK(p.answer() == 12);
  ChainPolicy policy(1.0);
  policy::SamplingParams params;
  const auto c = policy.complete(p.statement() + "\n\n", params, 10000);
  CHECK(c.reached_eos);
  CHECK(c.steps.size() == 3);
  const auto calcs = parse_calcs(c.text());
  REQUIRE(calcs.size() == 3);
  CHECK(calcs[0].input == 5);
  CHECK(calcs[0].result == 8);
  CHECK(calcs[2].result == 12);
  CHECK(ChainReward::true_reward(p, calcs) == doctest::Approx(1.0));
  CHECK(ChainReward::true_reward(p, {}) == doctest::Approx(0.4));
}

TEST_CASE("chain reward penalizes the first mistake") {
  ChainProblem p{1, {{ChainOp::Kind::add, 1}, {ChainOp::Kind::add, 1}, {ChainOp::Kind::add, 1}, {ChainOp::Kind::add, 1}}};
  // mistake at step 2 of 4, three steps computed
  const std::vector<ChainCalc> calcs{{1, 2}, {2, 9}, {9, 10}};
  CHECK(ChainReward::true_reward(p, calcs) == doctest::Approx(0.4 + 0.6 * 1 / 4 - 0.3 - 0.1));
}

}  // TEST_SUITE
