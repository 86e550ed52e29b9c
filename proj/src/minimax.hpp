#pragma once

#include <functional>
#include <vector>

#include "game.hpp"

namespace searchlab {

// Leaf evaluation for depth-limited search. Terminal states always use their
// exact reward regardless of the evaluator.
struct LeafEvaluator {
  enum class Kind {
    Rollout,    // one uniform-random playout from the leaf
    Heuristic,  // static evaluation, Max's perspective, in [-1, +1]
    Zero,       // flat 0 (terminal rewards only)
  };
  Kind kind = Kind::Rollout;
  std::function<double(const Game&, const GameState&)> heuristic;

  static LeafEvaluator rollout() { return {Kind::Rollout, nullptr}; }
  static LeafEvaluator zero() { return {Kind::Zero, nullptr}; }
  static LeafEvaluator heuristic_fn(
      std::function<double(const Game&, const GameState&)> f) {
    return {Kind::Heuristic, std::move(f)};
  }
};

struct SearchReport {
  double value = 0.0;      // minimax value, Max's perspective
  Action best_action = 0;  // optimal for the mover; ties broken uniformly
  std::uint64_t nodes = 0; // states the recursion or evaluator touched
  std::vector<Action> actions;        // root actions, in legal order
  std::vector<double> action_values;  // child values, Max's perspective
};

// Depth-k minimax from `s`. No pruning by default, so `nodes` reflects the
// full game-tree census; `alpha_beta` prunes for speed and must not be used
// where node counts matter (with the rollout evaluator it also changes which
// random playouts are drawn).
SearchReport minimax(const Game& game, const GameState& s, int depth,
                     const LeafEvaluator& eval, RngStream& rng,
                     bool alpha_beta = false);

// Both sides play depth-k minimax with rollout leaves until the game ends;
// returns the terminal reward from Max's perspective.
double mmk_playout(const Game& game, GameState s, int depth, RngStream& rng);

}  // namespace searchlab
