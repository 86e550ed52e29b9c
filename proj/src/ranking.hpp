#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "game.hpp"
#include "minimax.hpp"
#include "rng.hpp"

namespace searchlab {

// How playout-based move scoring drives each playout.
struct PlayoutPolicySpec {
  enum class Kind { Random, Minimax };
  Kind kind = Kind::Random;
  int depth = 2;  // Minimax only

  static PlayoutPolicySpec random() { return {Kind::Random, 0}; }
  static PlayoutPolicySpec minimax(int depth) {
    return {Kind::Minimax, depth};
  }
};

// One of three ways to score the children of a position.
struct RankEvaluator {
  enum class Kind { MinimaxValue, PlayoutMean, RawHeuristic };
  Kind kind = Kind::MinimaxValue;

  // MinimaxValue: depth-k search from the position; each move is scored by
  // its child's exact (k-1)-deep value.
  int depth = 4;
  LeafEvaluator leaf = LeafEvaluator::rollout();

  // PlayoutMean: average terminal reward of n playouts per child.
  PlayoutPolicySpec policy = PlayoutPolicySpec::random();
  int n_playouts = 100;

  // RawHeuristic: static evaluation of each child, no lookahead.
  std::function<double(const Game&, const GameState&)> heuristic;

  static RankEvaluator minimax_value(int depth,
                                     LeafEvaluator leaf = LeafEvaluator::rollout()) {
    RankEvaluator ev;
    ev.kind = Kind::MinimaxValue;
    ev.depth = depth;
    ev.leaf = std::move(leaf);
    return ev;
  }
  static RankEvaluator playout_mean(PlayoutPolicySpec policy,
                                    int n_playouts = 100) {
    RankEvaluator ev;
    ev.kind = Kind::PlayoutMean;
    ev.policy = policy;
    ev.n_playouts = n_playouts;
    return ev;
  }
  static RankEvaluator raw_heuristic(
      std::function<double(const Game&, const GameState&)> fn) {
    RankEvaluator ev;
    ev.kind = Kind::RawHeuristic;
    ev.heuristic = std::move(fn);
    return ev;
  }
};

struct MoveRank {
  Action action;
  double score;  // mover's perspective, higher is better
  int rank;      // 1 = best; ties share the smallest rank in their cluster
};

// Moves listed in legal-action order.
struct MoveRanking {
  std::vector<MoveRank> moves;
  double eps_tie = 0.0;
};

// Competition ranks over descending scores, treating scores within eps_tie
// of their cluster's best as tied. A cluster's rank is 1 plus the number of
// moves in strictly better clusters.
std::vector<int> competition_ranks(std::span<const double> scores,
                                   double eps_tie);

// Scores every legal move of a non-terminal state from the mover's
// perspective and assigns eps-tie competition ranks.
MoveRanking rank_moves(const Game& g, const GameState& s,
                       const RankEvaluator& ev, double eps_tie,
                       RngStream& rng);

// Spearman correlation of two rankings over the same move set, with tied
// ranks replaced by mid-ranks on both sides first. Empty when either ranking
// is a total tie (zero rank variance).
std::optional<double> rank_correlation(const MoveRanking& a,
                                       const MoveRanking& b);

struct SoftTrapReport {
  GameState state;              // the position the trap was found in
  Action trap_move;             // the move that walks into it
  double delta;                 // required gain threshold
  int k;                        // opponent-move horizon
  double gain;                  // guaranteed opponent h-gain after trap_move
  std::vector<Action> witness;  // trap_move, then one forcing line
};

// Looks for a move after which the opponent can force, within k of their own
// moves and against any defense, a heuristic swing of at least delta in
// their favor (h is from the first player's perspective; the swing is
// measured relative to the pre-move state). The decision is by exhaustive
// adversarial search where the opponent maximizes and the mover minimizes
// the best swing reached anywhere along the line. Returns the first
// qualifying move in legal-action order, or nothing.
std::optional<SoftTrapReport> detect_soft_trap(
    const Game& g, const GameState& s,
    const std::function<double(const Game&, const GameState&)>& h,
    double delta, int k);

}  // namespace searchlab
