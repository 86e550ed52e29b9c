#include "tournament.hpp"

#include <algorithm>

#include "errors.hpp"

namespace searchlab {

namespace {

// One move decision; returns the chosen action and adds to the node tally.
Action choose_move(const std::shared_ptr<const Game>& game,
                   const PlayerSpec& spec, const GameState& s, RngStream& rng,
                   std::uint64_t& nodes) {
  std::vector<Action> legal = game->legal_actions(s);
  switch (spec.kind) {
    case PlayerSpec::Kind::Random:
      return legal[rng.next_int(static_cast<int>(legal.size()))];
    case PlayerSpec::Kind::Uct: {
      UctConfig cfg = spec.uct;
      cfg.seed = rng.next_u64();
      std::uint64_t iters = cfg.max_iterations;
      if (spec.budget > 0) iters = std::min<std::uint64_t>(iters, spec.budget);
      require(iters >= legal.size(), ErrorCode::BudgetTooSmall,
              "tournament: budget below the number of legal moves");
      UctSearch search(game, s, cfg);
      search.run(static_cast<std::int64_t>(iters));
      nodes += search.stored_nodes();
      return search.recommend_move();
    }
    case PlayerSpec::Kind::MinimaxRollout:
    case PlayerSpec::Kind::MinimaxHeuristic: {
      const LeafEvaluator& leaf = spec.kind == PlayerSpec::Kind::MinimaxRollout
                                      ? LeafEvaluator::rollout()
                                      : spec.leaf;
      SearchReport rep = minimax(*game, s, spec.depth, leaf, rng, false);
      require(spec.budget == 0 || rep.nodes <= spec.budget,
              ErrorCode::BudgetTooSmall,
              "tournament: depth-" + std::to_string(spec.depth) +
                  " search needs more nodes than the budget allows");
      nodes += rep.nodes;
      return rep.best_action;
    }
  }
  fail(ErrorCode::InvalidArgument, "tournament: unknown player kind");
}

}  // namespace

GameRecord play_game(const std::shared_ptr<const Game>& game,
                     const PlayerSpec& a, const PlayerSpec& b,
                     const GameState& root, bool a_first, RngStream& rng) {
  require(game != nullptr, ErrorCode::InvalidArgument, "tournament: no game");
  require(!game->is_terminal(root), ErrorCode::InvalidArgument,
          "tournament: game starts at a terminal state");

  Player side_a = a_first ? game->to_move(root) : opponent(game->to_move(root));
  GameRecord rec;
  rec.a_first = a_first;

  GameState s = root;
  while (!game->is_terminal(s)) {
    bool a_to_move = game->to_move(s) == side_a;
    const PlayerSpec& spec = a_to_move ? a : b;
    std::uint64_t& nodes = a_to_move ? rec.nodes_a : rec.nodes_b;
    Action m = choose_move(game, spec, s, rng, nodes);
    rec.moves.push_back(m);
    s = game->apply_action(s, m);
  }

  double r = game->terminal_reward(s);
  double ra = side_a == Player::Max ? r : -r;
  rec.outcome = ra > 0 ? 1 : ra < 0 ? -1 : 0;
  return rec;
}

MatchResult run_match(const std::shared_ptr<const Game>& game,
                      const PlayerSpec& a, const PlayerSpec& b, int m,
                      RngStream& rng, int opening_plies) {
  require(m >= 2 && m % 2 == 0, ErrorCode::InvalidArgument,
          "tournament: m must be even and at least 2");
  require(opening_plies >= 0, ErrorCode::InvalidArgument,
          "tournament: opening length must be >= 0");

  MatchResult out;
  out.games.reserve(m);
  for (int i = 0; i < m; ++i) {
    // Both games of a pair share the opening walk and differ only in who
    // moves first.
    RngStream opening_rng = rng.split(hash_combine(0x6f70656eULL, i / 2));
    GameState root = game->initial_state();
    for (int p = 0; p < opening_plies && !game->is_terminal(root); ++p) {
      std::vector<Action> legal = game->legal_actions(root);
      root = game->apply_action(
          root, legal[opening_rng.next_int(static_cast<int>(legal.size()))]);
    }
    RngStream game_rng = rng.split(hash_combine(0x67616d65ULL, i));
    GameRecord rec = play_game(game, a, b, root, i % 2 == 0, game_rng);
    if (rec.outcome > 0)
      ++out.wins_a;
    else if (rec.outcome < 0)
      ++out.wins_b;
    else
      ++out.draws;
    out.games.push_back(std::move(rec));
  }
  out.success_a = out.wins_a + 0.5 * out.draws;
  out.success_b = out.wins_b + 0.5 * out.draws;
  return out;
}

}  // namespace searchlab
