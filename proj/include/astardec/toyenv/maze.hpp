#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "astardec/heuristic/reward.hpp"
#include "astardec/policy/policy.hpp"
#include "json.hpp"

namespace astardec::toyenv {

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

struct MazeSpec {
  int width = 1;
  int height = 1;
  std::set<Cell> walls;
  Cell start;
  Cell goal;

  bool in_bounds(Cell c) const { return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width; }
  bool is_open(Cell c) const { return in_bounds(c) && !walls.count(c); }
  /// Throws ConfigError unless start != goal and both are open cells.
  void validate() const;

  nlohmann::json to_json() const;
  static MazeSpec from_json(const nlohmann::json& j);
};

/// Random maze with sides in [2, max_side] and the given wall density.
/// Regenerates until the goal is reachable from the start.
MazeSpec generate_maze(std::uint64_t seed, int max_side = 15, double wall_density = 0.3);

/// BFS distances from `from`, indexed [row][col]; -1 marks unreachable cells.
std::vector<std::vector<int>> bfs_distances(const MazeSpec& maze, Cell from);

std::string maze_prompt(const MazeSpec& maze);

/// Cell named by the last move in `text` ("... -> (r,c)"), if any.
std::optional<Cell> last_move_target(std::string_view text);

/// Legal moves from a cell as textual thoughts, in N, E, S, W order. A move
/// onto the goal carries EOS.
class MazePolicy : public policy::Policy {
 public:
  explicit MazePolicy(MazeSpec maze);

  std::vector<policy::Candidate> moves(Cell from, int k) const;
  std::vector<policy::Candidate> sample(std::string_view prefix, int k,
                                        const policy::SamplingParams& params) override;

  const MazeSpec& maze() const { return maze_; }

 private:
  MazeSpec maze_;
};

/// r = 1 - d(cell, goal) / D, where d is the BFS distance and D the largest
/// finite distance to the goal on the grid. If the start cannot reach the
/// goal every state scores 0.
class MazeOracleReward : public heuristic::RewardModel {
 public:
  explicit MazeOracleReward(MazeSpec maze);

  double reward_at(Cell cell) const;
  bool goal_reachable() const { return reachable_; }
  int max_distance() const { return max_distance_; }

  /// Scores the cell named by the last step (the start when there is none).
  double score(const heuristic::StepTrace& trace) override;

 private:
  MazeSpec maze_;
  std::vector<std::vector<int>> to_goal_;
  int max_distance_ = 0;
  bool reachable_ = false;
};

struct ShortestPath {
  std::vector<Cell> cells;  ///< start .. goal inclusive
  int length = 0;           ///< number of moves
  /// Path cost under the search's step-cost rule with the oracle heuristic.
  double cost = 0.0;
};

/// Exhaustive BFS over the maze graph. Throws NoGoalReachable.
ShortestPath brute_force_shortest(const MazeSpec& maze);

}  // namespace astardec::toyenv
