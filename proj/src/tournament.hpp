#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "game.hpp"
#include "minimax.hpp"
#include "rng.hpp"
#include "uct.hpp"

namespace searchlab {

// A contestant: what it searches with and how many nodes it may touch per
// move decision (0 = unlimited). UCT counts stored-node expansions, one per
// iteration; minimax counts every state its search visits.
struct PlayerSpec {
  enum class Kind { Uct, MinimaxRollout, MinimaxHeuristic, Random };
  Kind kind = Kind::Random;
  UctConfig uct;                    // Uct
  int depth = 4;                    // Minimax*
  LeafEvaluator leaf = LeafEvaluator::rollout();  // MinimaxHeuristic
  std::uint64_t budget = 0;

  static PlayerSpec uct_player(UctConfig cfg, std::uint64_t budget) {
    PlayerSpec p;
    p.kind = Kind::Uct;
    p.uct = std::move(cfg);
    p.budget = budget;
    return p;
  }
  static PlayerSpec minimax_rollout(int depth, std::uint64_t budget = 0) {
    PlayerSpec p;
    p.kind = Kind::MinimaxRollout;
    p.depth = depth;
    p.budget = budget;
    return p;
  }
  static PlayerSpec minimax_heuristic(int depth, LeafEvaluator leaf,
                                      std::uint64_t budget = 0) {
    PlayerSpec p;
    p.kind = Kind::MinimaxHeuristic;
    p.depth = depth;
    p.leaf = std::move(leaf);
    p.budget = budget;
    return p;
  }
  static PlayerSpec random_player() { return PlayerSpec{}; }
};

struct GameRecord {
  bool a_first = true;  // A made the first move from the given root
  int outcome = 0;      // +1 A won, 0 draw, -1 A lost
  std::vector<Action> moves;
  std::uint64_t nodes_a = 0;  // nodes spent across A's move decisions
  std::uint64_t nodes_b = 0;
};

struct MatchResult {
  std::vector<GameRecord> games;
  int wins_a = 0;
  int draws = 0;
  int wins_b = 0;
  double success_a = 0.0;  // wins + draws/2; success_a + success_b == m
  double success_b = 0.0;
};

// Plays one game from `root`, the two specs alternating moves, A taking the
// side to move at the root when a_first. Fails with a budget-too-small error
// when a player's budget cannot cover one evaluation of each legal move.
GameRecord play_game(const std::shared_ptr<const Game>& game,
                     const PlayerSpec& a, const PlayerSpec& b,
                     const GameState& root, bool a_first, RngStream& rng);

// m games (even), alternating who moves first. When opening_plies > 0, each
// consecutive pair of games shares one random opening of that many plies,
// played once with each spec moving first.
MatchResult run_match(const std::shared_ptr<const Game>& game,
                      const PlayerSpec& a, const PlayerSpec& b, int m,
                      RngStream& rng, int opening_plies = 0);

}  // namespace searchlab
