#include "astardec/toyenv/maze.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <deque>

#include "astardec/common.hpp"
#include "astardec/search/cost.hpp"

namespace astardec::toyenv {
namespace {

struct Direction {
  char name;
  int drow;
  int dcol;
};

constexpr std::array<Direction, 4> kDirections{{{'N', -1, 0}, {'E', 0, 1}, {'S', 1, 0}, {'W', 0, -1}}};

std::string cell_text(Cell c) { return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")"; }

}  // namespace

void MazeSpec::validate() const {
  if (width < 1 || height < 1) throw ConfigError("maze: width and height must be positive");
  if (start == goal) throw ConfigError("maze: start equals goal");
  if (!is_open(start)) throw ConfigError("maze: start is outside the grid or a wall");
  if (!is_open(goal)) throw ConfigError("maze: goal is outside the grid or a wall");
}

nlohmann::json MazeSpec::to_json() const {
  nlohmann::json walls_json = nlohmann::json::array();
  for (const auto& w : walls) walls_json.push_back({w.row, w.col});
  return {{"width", width},
          {"height", height},
          {"walls", walls_json},
          {"start", {start.row, start.col}},
          {"goal", {goal.row, goal.col}}};
}

MazeSpec MazeSpec::from_json(const nlohmann::json& j) {
  try {
    MazeSpec m;
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    for (const auto& w : j.value("walls", nlohmann::json::array())) {
      m.walls.insert({w.at(0).get<int>(), w.at(1).get<int>()});
    }
    m.start = {j.at("start").at(0).get<int>(), j.at("start").at(1).get<int>()};
    m.goal = {j.at("goal").at(0).get<int>(), j.at("goal").at(1).get<int>()};
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("maze: ") + e.what());
  }
}

MazeSpec generate_maze(std::uint64_t seed, int max_side, double wall_density) {
  if (max_side < 2) throw ConfigError("maze: max_side must be at least 2");
  Rng rng(seed);
  for (;;) {
    MazeSpec m;
    m.width = static_cast<int>(rng.uniform_int(2, max_side));
    m.height = static_cast<int>(rng.uniform_int(2, max_side));
    for (int r = 0; r < m.height; ++r) {
      for (int c = 0; c < m.width; ++c) {
        if (rng.uniform01() < wall_density) m.walls.insert({r, c});
      }
    }
    std::vector<Cell> open;
    for (int r = 0; r < m.height; ++r) {
      for (int c = 0; c < m.width; ++c) {
        if (m.is_open({r, c})) open.push_back({r, c});
      }
    }
    if (open.size() < 2) continue;
    m.start = open[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(open.size()) - 1))];
    m.goal = open[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(open.size()) - 1))];
    if (m.start == m.goal) continue;
    if (bfs_distances(m, m.start)[static_cast<std::size_t>(m.goal.row)][static_cast<std::size_t>(m.goal.col)] < 0) {
      continue;
    }
    return m;
  }
}

std::vector<std::vector<int>> bfs_distances(const MazeSpec& maze, Cell from) {
  std::vector<std::vector<int>> dist(static_cast<std::size_t>(maze.height),
                                     std::vector<int>(static_cast<std::size_t>(maze.width), -1));
  if (!maze.is_open(from)) return dist;
  std::deque<Cell> queue{from};
  dist[static_cast<std::size_t>(from.row)][static_cast<std::size_t>(from.col)] = 0;
  while (!queue.empty()) {
    const Cell cur = queue.front();
    queue.pop_front();
    const int d = dist[static_cast<std::size_t>(cur.row)][static_cast<std::size_t>(cur.col)];
    for (const auto& dir : kDirections) {
      const Cell next{cur.row + dir.drow, cur.col + dir.dcol};
      if (!maze.is_open(next)) continue;
      int& nd = dist[static_cast<std::size_t>(next.row)][static_cast<std::size_t>(next.col)];
      if (nd >= 0) continue;
      nd = d + 1;
      queue.push_back(next);
    }
  }
  return dist;
}

std::string maze_prompt(const MazeSpec& maze) {
  std::string out = "Maze " + std::to_string(maze.width) + "x" + std::to_string(maze.height) +
                    ", start " + cell_text(maze.start) + ", goal " + cell_text(maze.goal) + ". Walls:";
  for (const auto& w : maze.walls) out += " " + cell_text(w);
  out += "\n";
  return out;
}

std::optional<Cell> last_move_target(std::string_view text) {
  const auto pos = text.rfind("-> (");
  if (pos == std::string_view::npos) return std::nullopt;
  Cell c;
  const std::string tail(text.substr(pos + 4, 32));
  if (std::sscanf(tail.c_str(), "%d,%d)", &c.row, &c.col) != 2) return std::nullopt;
  return c;
}

MazePolicy::MazePolicy(MazeSpec maze) : maze_(std::move(maze)) { maze_.validate(); }

std::vector<policy::Candidate> MazePolicy::moves(Cell from, int k) const {
  std::vector<policy::Candidate> out;
  for (const auto& dir : kDirections) {
    if (static_cast<int>(out.size()) >= k) break;
    const Cell next{from.row + dir.drow, from.col + dir.dcol};
    if (!maze_.is_open(next)) continue;
    const bool at_goal = next == maze_.goal;
    std::string text = std::string("move ") + dir.name + " -> " + cell_text(next);
    text += at_goal ? " goal\n" : "\n";
    out.push_back({text, count_tokens(text), at_goal,
                   at_goal ? policy::FinishReason::eos : policy::FinishReason::stop_marker});
  }
  return out;
}

std::vector<policy::Candidate> MazePolicy::sample(std::string_view prefix, int k,
                                                  const policy::SamplingParams& /*params*/) {
  return moves(last_move_target(prefix).value_or(maze_.start), k);
}

MazeOracleReward::MazeOracleReward(MazeSpec maze) : maze_(std::move(maze)) {
  maze_.validate();
  to_goal_ = bfs_distances(maze_, maze_.goal);
  for (const auto& row : to_goal_) {
    for (int d : row) max_distance_ = std::max(max_distance_, d);
  }
  reachable_ = to_goal_[static_cast<std::size_t>(maze_.start.row)][static_cast<std::size_t>(maze_.start.col)] >= 0;
}

double MazeOracleReward::reward_at(Cell cell) const {
  if (!reachable_ || !maze_.in_bounds(cell)) return 0.0;
  const int d = to_goal_[static_cast<std::size_t>(cell.row)][static_cast<std::size_t>(cell.col)];
  if (d < 0) return 0.0;
  return 1.0 - static_cast<double>(d) / static_cast<double>(max_distance_);
}

double MazeOracleReward::score(const heuristic::StepTrace& trace) {
  Cell cell = maze_.start;
  if (!trace.steps.empty()) {
    if (auto c = last_move_target(trace.steps.back())) cell = *c;
  }
  return reward_at(cell);
}

ShortestPath brute_force_shortest(const MazeSpec& maze) {
  maze.validate();
  const auto dist = bfs_distances(maze, maze.start);
  const auto at = [&](Cell c) { return dist[static_cast<std::size_t>(c.row)][static_cast<std::size_t>(c.col)]; };
  if (at(maze.goal) < 0) throw NoGoalReachable("maze: goal unreachable from start");

  ShortestPath result;
  result.length = at(maze.goal);
  // Walk back from the goal along strictly decreasing distances.
  Cell cur = maze.goal;
  result.cells.push_back(cur);
  while (cur != maze.start) {
    for (const auto& dir : kDirections) {
      const Cell prev{cur.row + dir.drow, cur.col + dir.dcol};
      if (maze.is_open(prev) && at(prev) == at(cur) - 1) {
        cur = prev;
        break;
      }
    }
    result.cells.push_back(cur);
  }
  std::reverse(result.cells.begin(), result.cells.end());

  MazeOracleReward oracle(maze);
  for (std::size_t i = 1; i < result.cells.size(); ++i) {
    const double h_prev = heuristic::quantize(heuristic::heuristic_value(oracle.reward_at(result.cells[i - 1])));
    const double h_next = heuristic::quantize(heuristic::heuristic_value(oracle.reward_at(result.cells[i])));
    result.cost += search::cost_increment(h_prev, h_next);
  }
  return result;
}

}  // namespace astardec::toyenv
