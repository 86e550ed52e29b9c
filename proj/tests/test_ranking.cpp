#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"
#include "game.hpp"
#include "helpers.hpp"
#include "ranking.hpp"
#include "synthetic.hpp"

using namespace searchlab;
using namespace searchlab::testhelpers;

namespace {

MoveRanking ranking_of(std::vector<int> ranks) {
  MoveRanking r;
  for (std::size_t i = 0; i < ranks.size(); ++i)
    r.moves.push_back({static_cast<Action>(i), 0.0, ranks[i]});
  return r;
}

double raw_h(const Game& g, const GameState& s) {
  return static_cast<const ConnectGame&>(g).heuristic(s);
}

}  // namespace

TEST_CASE("competition ranks cluster near-ties and skip after each cluster") {
  std::vector<double> scores = {0.9, 0.895, 0.5};
  CHECK(competition_ranks(scores, 0.01) == std::vector<int>{1, 1, 3});
  CHECK(competition_ranks(scores, 0.0) == std::vector<int>{1, 2, 3});
  std::vector<double> tie = {0.5, 0.5, 0.5};
  CHECK(competition_ranks(tie, 0.0) == std::vector<int>{1, 1, 1});
  // The cluster head anchors the tolerance: 0.98 is within 0.015 of 0.99
  // but not of 1.0, so it starts a new cluster.
  std::vector<double> chain = {1.0, 0.99, 0.98, 0.5};
  CHECK(competition_ranks(chain, 0.015) == std::vector<int>{1, 1, 3, 4});
  // Order of input does not matter beyond stable sorting.
  std::vector<double> shuffled = {0.5, 0.9, 0.895};
  CHECK(competition_ranks(shuffled, 0.01) == std::vector<int>{3, 1, 1});
  CHECK_THROWS_AS(competition_ranks(scores, -0.1), Error);
}

TEST_CASE("move ranking scores from the mover's perspective") {
  // Node 1 is a Min node (ply 1): the best move reaches the lowest value.
  FixtureSpec spec;
  spec.children = {{1, 2}, {3, 4}, {}, {}, {}};
  spec.reward = {0, 0, 0, 0, 0};
  spec.value = {0, 1, -0.5, -1, 1};
  FixtureGame game(spec);
  GameState min_node = game.apply_action(game.initial_state(), 0);
  RngStream rng(1);
  auto ev = RankEvaluator::raw_heuristic(
      [](const Game& g, const GameState& s) {
        return static_cast<const FixtureGame&>(g).value_at(s);
      });
  MoveRanking r = rank_moves(game, min_node, ev, 0.0, rng);
  REQUIRE(r.moves.size() == 2);
  CHECK(r.moves[0].rank == 1);  // action 0 reaches value -1, best for Min
  CHECK(r.moves[1].rank == 2);
  CHECK(r.moves[0].score == 1.0);   // sign-flipped to the mover's view
  CHECK(r.moves[1].score == -1.0);
}

TEST_CASE("full-depth value ranking puts the winning move first") {
  DualSpec spec;
  spec.depth = 8;
  spec.max_criticals = {0, 2};
  spec.min_criticals = {1, 3};
  spec.seed = 2;
  DualGame game(spec);
  RngStream rng(3);
  MoveRanking byvalue = rank_moves(
      game, game.initial_state(),
      RankEvaluator::minimax_value(8, LeafEvaluator::zero()), 0.0, rng);
  REQUIRE(byvalue.moves.size() == 2);
  CHECK(byvalue.moves[0].rank == 1);
  CHECK(byvalue.moves[1].rank == 2);
  CHECK(byvalue.moves[0].score == 1.0);
  CHECK(byvalue.moves[1].score == -1.0);

  MoveRanking byplayout = rank_moves(
      game, game.initial_state(),
      RankEvaluator::playout_mean(PlayoutPolicySpec::random(), 200), 0.01,
      rng);
  CHECK(byplayout.moves[0].rank == 1);
  CHECK(byplayout.moves[1].rank == 2);
}

TEST_CASE("rank ordering is invariant under positive affine rescaling") {
  ConnectGame game;
  RngStream stream(4);
  for (int trial = 0; trial < 6; ++trial) {
    GameState s = game.initial_state();
    for (int ply = 0; ply < 4 + static_cast<int>(stream.next_int(4)); ++ply) {
      if (game.is_terminal(s)) break;
      auto acts = game.legal_actions(s);
      s = game.apply_action(
          s, acts[static_cast<std::size_t>(
              stream.next_int(static_cast<int>(acts.size())))]);
    }
    if (game.is_terminal(s)) continue;
    RngStream r1(5), r2(5);
    MoveRanking plain =
        rank_moves(game, s, RankEvaluator::raw_heuristic(raw_h), 0.02, r1);
    MoveRanking scaled = rank_moves(
        game, s,
        RankEvaluator::raw_heuristic([](const Game& g, const GameState& x) {
          return 2.5 * raw_h(g, x) + 0.7;
        }),
        0.05, r2);
    REQUIRE(plain.moves.size() == scaled.moves.size());
    for (std::size_t i = 0; i < plain.moves.size(); ++i)
      CHECK(plain.moves[i].rank == scaled.moves[i].rank);
  }
}

TEST_CASE("rank moves validates its inputs") {
  ConnectGame game;
  RngStream rng(6);
  GameState won = game.state_from_drops({0, 1, 0, 1, 0});
  CHECK_THROWS_AS(rank_moves(game, won, RankEvaluator::raw_heuristic(raw_h),
                             0.0, rng),
                  Error);
  RankEvaluator no_playouts =
      RankEvaluator::playout_mean(PlayoutPolicySpec::random(), 0);
  CHECK_THROWS_AS(
      rank_moves(game, game.initial_state(), no_playouts, 0.0, rng), Error);
  RankEvaluator no_fn;
  no_fn.kind = RankEvaluator::Kind::RawHeuristic;
  CHECK_THROWS_AS(rank_moves(game, game.initial_state(), no_fn, 0.0, rng),
                  Error);
}

TEST_CASE("rank correlation handles ties, reversals and permutations") {
  MoveRanking a = ranking_of({1, 2, 3, 4});
  CHECK(*rank_correlation(a, a) == 1.0);

  MoveRanking near = ranking_of({1, 2, 4, 3});
  CHECK(std::abs(*rank_correlation(a, near) - 0.8) < 1e-12);
  CHECK(std::abs(*rank_correlation(near, a) - 0.8) < 1e-12);

  MoveRanking reversed = ranking_of({4, 3, 2, 1});
  CHECK(std::abs(*rank_correlation(a, reversed) + 1.0) < 1e-12);

  // b stores the same actions in a different order; matching is by action.
  MoveRanking permuted;
  permuted.moves = {{3, 0.0, 3}, {2, 0.0, 4}, {1, 0.0, 2}, {0, 0.0, 1}};
  CHECK(std::abs(*rank_correlation(a, permuted) - 0.8) < 1e-12);

  MoveRanking flat = ranking_of({1, 1, 1, 1});
  CHECK(!rank_correlation(a, flat).has_value());

  // Tied block against a strict order: mid-ranks give 1.5 / sqrt(3).
  MoveRanking tied3 = ranking_of({1, 1, 3});
  MoveRanking strict3 = ranking_of({1, 2, 3});
  CHECK(std::abs(*rank_correlation(tied3, strict3) - 1.5 / std::sqrt(3.0)) <
        1e-12);

  CHECK_THROWS_AS(rank_correlation(a, tied3), Error);
  MoveRanking other_actions;
  other_actions.moves = {{7, 0.0, 1}, {8, 0.0, 2}, {9, 0.0, 3}, {10, 0.0, 4}};
  CHECK_THROWS_AS(rank_correlation(a, other_actions), Error);
}

TEST_CASE("soft trap detection finds the forced heuristic swing") {
  FixtureSpec spec;
  spec.children = {{1, 2}, {3, 4}, {5, 6}, {}, {}, {}, {}};
  spec.reward = {0, 0, 0, 0, 0, 0, 0};
  spec.value = {0, 1, -0.5, -1, 1, -5, 2};
  FixtureGame game(spec);
  auto h = [](const Game& g, const GameState& s) {
    return static_cast<const FixtureGame&>(g).value_at(s);
  };
  GameState root = game.initial_state();

  auto trap = detect_soft_trap(game, root, h, 4.0, 1);
  REQUIRE(trap.has_value());
  CHECK(trap->trap_move == 1);
  CHECK(trap->gain == 5.0);
  CHECK(trap->delta == 4.0);
  CHECK(trap->witness == std::vector<Action>{1, 0});

  // Nothing reaches a swing of six.
  CHECK(!detect_soft_trap(game, root, h, 6.0, 1).has_value());

  CHECK_THROWS_AS(detect_soft_trap(game, root, h, 0.0, 1), Error);
  CHECK_THROWS_AS(detect_soft_trap(game, root, h, 4.0, 0), Error);
  GameState leaf = game.apply_action(game.apply_action(root, 0), 0);
  CHECK_THROWS_AS(detect_soft_trap(game, leaf, h, 4.0, 1), Error);
}

TEST_CASE("an exact evaluator flags the value-losing move as a trap") {
  DualSpec spec;
  spec.depth = 8;
  spec.max_criticals = {0, 2};
  spec.min_criticals = {1, 3};
  spec.seed = 7;
  DualGame game(spec);
  auto h = [](const Game& g, const GameState& s) {
    return brute_value(g, s);
  };
  GameState root = game.initial_state();
  auto trap = detect_soft_trap(game, root, h, 1.0, 4);
  REQUIRE(trap.has_value());
  CHECK(trap->trap_move == 1);  // entering the defender's winning subtree
  CHECK(trap->gain == 2.0);
  CHECK(trap->witness == std::vector<Action>{1});
  // A swing beyond the value range is impossible.
  CHECK(!detect_soft_trap(game, root, h, 2.5, 4).has_value());
}

TEST_CASE("trap witnesses replay to a state that realizes the swing") {
  ConnectGame game;
  RngStream stream(8);
  int found = 0;
  for (int trial = 0; trial < 8; ++trial) {
    GameState s = game.initial_state();
    for (int ply = 0; ply < 4 + static_cast<int>(stream.next_int(5)); ++ply) {
      if (game.is_terminal(s)) break;
      auto acts = game.legal_actions(s);
      s = game.apply_action(
          s, acts[static_cast<std::size_t>(
              stream.next_int(static_cast<int>(acts.size())))]);
    }
    if (game.is_terminal(s)) continue;
    auto trap = detect_soft_trap(game, s, raw_h, 0.35, 1);
    if (!trap.has_value()) continue;
    ++found;
    CHECK(trap->gain >= 0.35);
    REQUIRE(!trap->witness.empty());
    CHECK(trap->witness.front() == trap->trap_move);
    double sign =
        opponent(game.to_move(s)) == Player::Max ? 1.0 : -1.0;
    double base = raw_h(game, s);
    GameState x = s;
    for (Action a : trap->witness) x = game.apply_action(x, a);
    CHECK(sign * (raw_h(game, x) - base) >= 0.35 - 1e-12);
  }
  MESSAGE("positions with a trap: ", found);
}
