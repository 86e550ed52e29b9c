#include <algorithm>
#include <cmath>
#include <memory>

#include "doctest.h"
#include "game.hpp"
#include "helpers.hpp"
#include "minimax.hpp"
#include "synthetic.hpp"

using namespace searchlab;
using namespace searchlab::testhelpers;

TEST_CASE("search spanning the whole tree reproduces the exhaustive value") {
  for (std::uint64_t tree_seed : {7ull, 8ull}) {
    RandomLeafGame game(4, tree_seed);
    GameState root = game.initial_state();
    RngStream rng(1);
    SearchReport rep = minimax(game, root, 4, LeafEvaluator::zero(), rng);
    CHECK(rep.value == brute_value(game, root));
    auto optimal = brute_optimal_actions(game, root);
    CHECK(std::count(optimal.begin(), optimal.end(), rep.best_action) == 1);
    REQUIRE(rep.actions.size() == 2);
    for (std::size_t i = 0; i < rep.actions.size(); ++i) {
      GameState child = game.apply_action(root, rep.actions[i]);
      CHECK(rep.action_values[i] == brute_value(game, child));
    }
  }
}

TEST_CASE("node census on a uniform binary tree is 2^(k+1) - 1") {
  KStepSpec spec;
  spec.depth = 12;
  spec.critical_depths = {2};
  spec.correct_actions = {0};
  spec.seed = 5;
  KStepGame game(spec);
  GameState root = game.initial_state();
  for (int k = 1; k <= 5; ++k) {
    RngStream rng(2);
    SearchReport rep = minimax(game, root, k, LeafEvaluator::zero(), rng);
    CHECK(rep.nodes == (std::uint64_t{2} << k) - 1);
    // Rollout leaves do not change the census: playout states are the
    // evaluator's business, not the recursion's.
    RngStream rng2(3);
    SearchReport rep2 = minimax(game, root, k, LeafEvaluator::rollout(), rng2);
    CHECK(rep2.nodes == rep.nodes);
  }
}

TEST_CASE("alpha-beta keeps exact values and can only shrink the census") {
  RandomLeafGame game(6, 11);
  GameState root = game.initial_state();
  RngStream r1(4), r2(4);
  SearchReport plain = minimax(game, root, 6, LeafEvaluator::zero(), r1);
  SearchReport pruned =
      minimax(game, root, 6, LeafEvaluator::zero(), r2, true);
  CHECK(pruned.value == plain.value);
  REQUIRE(pruned.action_values.size() == plain.action_values.size());
  for (std::size_t i = 0; i < plain.action_values.size(); ++i)
    CHECK(pruned.action_values[i] == plain.action_values[i]);
  CHECK(pruned.nodes <= plain.nodes);
}

TEST_CASE("terminal states return their reward and stop the recursion") {
  ConnectGame game;
  // Three stones of the first player already stacked after one more drop in
  // column 0; the win is one ply away.
  GameState s = game.state_from_drops({0, 1, 0, 1});
  RngStream rng(6);
  SearchReport rep = minimax(game, s, 3, LeafEvaluator::zero(), rng);
  CHECK(rep.value == 1.0);
  CHECK(rep.best_action == 0);
}

TEST_CASE("invalid searches are rejected") {
  ConnectGame game;
  GameState root = game.initial_state();
  RngStream rng(7);
  CHECK_THROWS_AS(minimax(game, root, 0, LeafEvaluator::zero(), rng), Error);
  LeafEvaluator broken;
  broken.kind = LeafEvaluator::Kind::Heuristic;
  CHECK_THROWS_AS(minimax(game, root, 2, broken, rng), Error);
  GameState won = game.state_from_drops({0, 1, 0, 1, 0});
  CHECK_THROWS_AS(minimax(game, won, 2, LeafEvaluator::zero(), rng), Error);
}

TEST_CASE("implanted strategies within the horizon are found") {
  RngStream rng(8);

  KStepSpec ks;
  ks.depth = 8;
  ks.critical_depths = {0, 2};
  ks.correct_actions = {0, 0};
  ks.seed = 9;
  KStepGame kstep(ks);
  SearchReport rep =
      minimax(kstep, kstep.initial_state(), 8, LeafEvaluator::zero(), rng);
  CHECK(rep.value == 1.0);
  CHECK(rep.best_action == 0);

  DualSpec ds;
  ds.depth = 8;
  ds.max_criticals = {0, 2};
  ds.min_criticals = {1, 3};
  ds.seed = 10;
  DualGame dual(ds);
  rep = minimax(dual, dual.initial_state(), 8, LeafEvaluator::zero(), rng);
  CHECK(rep.value == 1.0);
  CHECK(rep.best_action == 0);

  ScenarioSpec ss;
  ss.kind = 'B';
  ss.subtree_depth = 4;
  ss.p = 0.5;
  ss.q = 0.25;
  ss.seed = 11;
  ScenarioGame scen(ss);
  GameState root = scen.initial_state();
  rep = minimax(scen, root, 7, LeafEvaluator::zero(), rng);
  CHECK(rep.value == brute_value(scen, root));
  CHECK(rep.value == 1.0);
  CHECK(rep.best_action == 0);
}

TEST_CASE("rollout leaves are reproducible under a fixed stream") {
  ConnectGame game;
  GameState root = game.initial_state();
  RngStream r1(12), r2(12);
  SearchReport a = minimax(game, root, 2, LeafEvaluator::rollout(), r1);
  SearchReport b = minimax(game, root, 2, LeafEvaluator::rollout(), r2);
  CHECK(a.value == b.value);
  CHECK(a.best_action == b.best_action);
  CHECK(a.nodes == b.nodes);
  CHECK(a.action_values == b.action_values);
}

TEST_CASE("heuristic leaves pass the static evaluation through") {
  ConnectGame game;
  GameState root = game.initial_state();
  auto h = [](const Game& g, const GameState& s) {
    const auto& board = static_cast<const ConnectGame&>(g);
    return normalize_heuristic(board.heuristic(s), board.heuristic_scale());
  };
  RngStream rng(13);
  SearchReport rep =
      minimax(game, root, 1, LeafEvaluator::heuristic_fn(h), rng);
  double best = -2.0;
  for (Action a : game.legal_actions(root))
    best = std::max(best, h(game, game.apply_action(root, a)));
  CHECK(rep.value == best);
}

TEST_CASE("full-depth playouts finish the game and are reproducible") {
  ConnectGame game;
  RngStream r1(14), r2(14);
  double a = mmk_playout(game, game.initial_state(), 2, r1);
  double b = mmk_playout(game, game.initial_state(), 2, r2);
  CHECK(a == b);
  CHECK((a == -1.0 || a == 0.0 || a == 1.0));

  RandomLeafGame tree(6, 15);
  RngStream r3(16);
  double c = mmk_playout(tree, tree.initial_state(), 3, r3);
  CHECK((c == -1.0 || c == 0.0 || c == 1.0));
}
