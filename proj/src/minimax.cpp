#include "minimax.hpp"

#include <limits>

namespace searchlab {

namespace {

struct MmContext {
  const Game& game;
  const LeafEvaluator& eval;
  RngStream& rng;
  bool prune;
  std::uint64_t nodes = 0;
  std::vector<std::vector<Action>> bufs;  // one scratch list per depth

  std::vector<Action>& buf(int depth) {
    if (static_cast<int>(bufs.size()) <= depth) bufs.resize(depth + 1);
    return bufs[depth];
  }

  double leaf(const GameState& s) {
    switch (eval.kind) {
      case LeafEvaluator::Kind::Rollout: return random_playout(game, s, rng);
      case LeafEvaluator::Kind::Heuristic: return eval.heuristic(game, s);
      case LeafEvaluator::Kind::Zero: return 0.0;
    }
    return 0.0;
  }

  double value(const GameState& s, int depth, double alpha, double beta) {
    ++nodes;
    if (game.is_terminal(s)) return game.terminal_reward(s);
    if (depth == 0) return leaf(s);
    std::vector<Action>& moves = buf(depth);
    game.legal_actions(s, moves);
    bool maxing = game.to_move(s) == Player::Max;
    double best = maxing ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < moves.size(); ++i) {
      double v = value(game.apply_action(s, moves[i]), depth - 1, alpha, beta);
      if (maxing) {
        best = std::max(best, v);
        if (prune) {
          alpha = std::max(alpha, best);
          if (alpha >= beta) break;
        }
      } else {
        best = std::min(best, v);
        if (prune) {
          beta = std::min(beta, best);
          if (beta <= alpha) break;
        }
      }
    }
    return best;
  }
};

}  // namespace

SearchReport minimax(const Game& game, const GameState& s, int depth,
                     const LeafEvaluator& eval, RngStream& rng,
                     bool alpha_beta) {
  require(depth >= 1, ErrorCode::InvalidArgument,
          "minimax: depth must be at least 1");
  if (eval.kind == LeafEvaluator::Kind::Heuristic)
    require(static_cast<bool>(eval.heuristic), ErrorCode::InvalidArgument,
            "minimax: heuristic evaluator without a function");
  require(!game.is_terminal(s), ErrorCode::InvalidArgument,
          "minimax: search from a terminal state");

  MmContext ctx{game, eval, rng, alpha_beta, 0, {}};
  ++ctx.nodes;  // the root itself

  SearchReport rep;
  game.legal_actions(s, rep.actions);
  const double inf = std::numeric_limits<double>::infinity();
  rep.action_values.reserve(rep.actions.size());
  for (Action a : rep.actions)
    rep.action_values.push_back(
        ctx.value(game.apply_action(s, a), depth - 1, -inf, inf));
  rep.nodes = ctx.nodes;

  bool maxing = game.to_move(s) == Player::Max;
  double best = rep.action_values[0];
  for (double v : rep.action_values) best = maxing ? std::max(best, v) : std::min(best, v);
  rep.value = best;

  int ties = 0;
  for (double v : rep.action_values)
    if (v == best) ++ties;
  int k = ties > 1 ? rng.next_int(ties) : 0;
  for (std::size_t i = 0; i < rep.actions.size(); ++i) {
    if (rep.action_values[i] == best && k-- == 0) {
      rep.best_action = rep.actions[i];
      break;
    }
  }
  return rep;
}

double mmk_playout(const Game& game, GameState s, int depth, RngStream& rng) {
  while (!game.is_terminal(s)) {
    SearchReport rep = minimax(game, s, depth, LeafEvaluator::rollout(), rng);
    s = game.apply_action(s, rep.best_action);
  }
  return game.terminal_reward(s);
}

}  // namespace searchlab
