#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "game.hpp"
#include "helpers.hpp"
#include "synthetic.hpp"
#include "uct.hpp"

using namespace searchlab;
using namespace searchlab::testhelpers;

namespace {

std::shared_ptr<const Game> random_leaf_tree(int depth, std::uint64_t seed) {
  return std::make_shared<RandomLeafGame>(depth, seed);
}

UctConfig ucb_config(std::uint64_t seed) {
  UctConfig cfg;
  cfg.variant = UctConfig::Variant::Ucb1;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("ucb pick weighs exploration against the mean for both players") {
  RngStream rng(0);
  // n_s = 10, c = 0.4: bounds are 0.4*sqrt(ln 10 / 6) and 0.4*sqrt(ln 10 / 4).
  std::vector<ArmStats> arms = {{6, 0.5}, {4, 0.4}};
  CHECK(ucb_pick(arms, 10, Player::Max, 0.4, false, rng) == 0);
  CHECK(ucb_pick(arms, 10, Player::Min, 0.4, false, rng) == 1);
  // With no exploration term the pick is purely greedy for both sides.
  CHECK(ucb_pick(arms, 10, Player::Max, 0.0, false, rng) == 0);
  CHECK(ucb_pick(arms, 10, Player::Min, 0.0, false, rng) == 1);
}

TEST_CASE("ucb pick takes the first unvisited arm before comparing bounds") {
  RngStream rng(1);
  std::vector<ArmStats> arms = {{3, 0.9}, {0, 0.0}, {0, 0.0}};
  CHECK(ucb_pick(arms, 3, Player::Max, 0.4, false, rng) == 1);
  arms[1].n = 1;
  CHECK(ucb_pick(arms, 4, Player::Max, 0.4, false, rng) == 2);
}

TEST_CASE("ucb pick rejects an empty arm list") {
  RngStream rng(2);
  std::vector<ArmStats> arms;
  CHECK_THROWS_AS(ucb_pick(arms, 1, Player::Max, 0.4, false, rng), Error);
}

TEST_CASE("ucb choice is invariant under joint positive scaling of q and c") {
  RngStream gen(42);
  for (int trial = 0; trial < 200; ++trial) {
    int k = 2 + static_cast<int>(gen.next_int(4));
    std::vector<ArmStats> arms(static_cast<std::size_t>(k));
    std::int64_t total = 0;
    for (auto& a : arms) {
      a.n = 1 + static_cast<std::int64_t>(gen.next_int(20));
      a.q = gen.next_double() * 2.0 - 1.0;
      total += a.n;
    }
    for (double s : {0.5, 2.0, 7.0}) {
      std::vector<ArmStats> scaled = arms;
      for (auto& a : scaled) a.q *= s;
      for (Player who : {Player::Max, Player::Min}) {
        RngStream r1(7), r2(7);
        CHECK(ucb_pick(arms, total, who, 0.4, false, r1) ==
              ucb_pick(scaled, total, who, 0.4 * s, false, r2));
      }
    }
  }
}

TEST_CASE("epsilon greedy visits arms evenly until their means separate") {
  RngStream rng(3);
  // One arm unvisited: it is next in the round regardless of the others.
  std::vector<ArmStats> arms = {{2, 0.9}, {0, 0.0}, {1, -0.5}};
  CHECK(epsilon_greedy_pick(arms, Player::Max, 0.1, rng) == 1);
  // All means equal: least-visited arm, lowest index on ties.
  arms = {{2, 0.5}, {1, 0.5}, {1, 0.5}};
  CHECK(epsilon_greedy_pick(arms, Player::Max, 0.1, rng) == 1);
  arms = {{1, 0.5}, {1, 0.5}, {1, 0.5}};
  CHECK(epsilon_greedy_pick(arms, Player::Max, 0.1, rng) == 0);
}

TEST_CASE("epsilon zero always exploits and epsilon one always explores") {
  std::vector<ArmStats> arms = {{5, 0.9}, {5, 0.1}, {5, -0.2}};
  RngStream rng(4);
  for (int i = 0; i < 200; ++i) {
    CHECK(epsilon_greedy_pick(arms, Player::Max, 0.0, rng) == 0);
    CHECK(epsilon_greedy_pick(arms, Player::Min, 0.0, rng) == 2);
    CHECK(epsilon_greedy_pick(arms, Player::Max, 1.0, rng) != 0);
    CHECK(epsilon_greedy_pick(arms, Player::Min, 1.0, rng) != 2);
  }
}

TEST_CASE("iteration count equals the sum of root arm visits") {
  auto game = random_leaf_tree(4, 17);
  UctSearch search(game, game->initial_state(), ucb_config(5));
  search.run(500);
  CHECK(search.iterations() == 500);
  std::int64_t total = 0;
  for (const auto& arm : search.root_arms()) {
    CHECK(arm.n > 0);
    CHECK(arm.q >= -1.0);
    CHECK(arm.q <= 1.0);
    total += arm.n;
  }
  CHECK(total == 500);
}

TEST_CASE("root value and arm means reproduce the episode rewards exactly") {
  auto game = random_leaf_tree(5, 23);
  UctSearch search(game, game->initial_state(), ucb_config(6));
  double total = 0.0;
  std::vector<double> sum_by_action(2, 0.0);
  std::vector<std::int64_t> n_by_action(2, 0);
  for (int t = 0; t < 2000; ++t) {
    double reward = search.run_iteration();
    CHECK((reward == -1.0 || reward == 0.0 || reward == 1.0));
    total += reward;
    auto a = static_cast<std::size_t>(search.last_root_action());
    sum_by_action[a] += reward;
    n_by_action[a] += 1;
  }
  CHECK(std::abs(search.root_value() - total / 2000.0) < 1e-9);
  for (const auto& arm : search.root_arms()) {
    auto a = static_cast<std::size_t>(arm.action);
    CHECK(arm.n == n_by_action[a]);
    CHECK(std::abs(arm.q - sum_by_action[a] / static_cast<double>(arm.n)) <
          1e-9);
  }
}

TEST_CASE("the tree grows one node per iteration until episodes re-reach "
          "stored terminals, and eventually holds the whole game") {
  auto game = random_leaf_tree(4, 29);
  const std::int64_t full = 2 + 4 + 8 + 16;  // non-root nodes of the tree
  // A high exploration constant keeps arm visits near-balanced, so every
  // edge is traversed well within the iteration budget.  At the default 0.4
  // an arm trailing by the full reward gap is starved essentially forever.
  UctConfig cfg = ucb_config(7);
  cfg.exploration = 5.0;
  UctSearch search(game, game->initial_state(), cfg);
  CHECK(search.stored_nodes() == 0);
  std::int64_t prev = 0;
  bool stalled = false;
  for (int t = 1; t <= 5000; ++t) {
    search.run_iteration();
    std::int64_t stored = search.stored_nodes();
    CHECK(stored - prev >= 0);
    CHECK(stored - prev <= 1);
    CHECK(stored <= full);
    if (stored == prev) stalled = true;
    if (!stalled) CHECK(stored == std::min<std::int64_t>(t, full));
    prev = stored;
  }
  CHECK(search.stored_nodes() == full);
}

TEST_CASE("first two episodes on a sure-win shape score +1 then -1") {
  ScenarioSpec spec;
  spec.kind = 'A';
  spec.subtree_depth = 7;
  spec.p = 0.0;
  spec.seed = 31;
  for (auto variant :
       {UctConfig::Variant::Ucb1, UctConfig::Variant::EpsilonGreedy}) {
    auto game = std::make_shared<ScenarioGame>(spec);
    UctConfig cfg = ucb_config(8);
    cfg.variant = variant;
    UctSearch search(game, game->initial_state(), cfg);
    CHECK(search.run_iteration() == 1.0);
    CHECK(search.root_value() == 1.0);
    CHECK(search.run_iteration() == -1.0);
    CHECK(search.root_value() == 0.0);
  }
}

TEST_CASE("ucb search converges to the game value on small trees") {
  struct Case {
    int depth;
    std::uint64_t tree_seed;
  };
  for (Case c : {Case{4, 101}, Case{6, 202}, Case{7, 303}}) {
    auto game = random_leaf_tree(c.depth, c.tree_seed);
    double truth = brute_value(*game, game->initial_state());
    auto optimal = brute_optimal_actions(*game, game->initial_state());
    UctSearch search(game, game->initial_state(), ucb_config(c.tree_seed + 1));
    search.run(200000);
    CAPTURE(c.depth);
    CHECK(std::abs(search.root_value() - truth) <= 0.1);
    CHECK(std::count(optimal.begin(), optimal.end(), search.recommend_move()) ==
          1);
  }
}

TEST_CASE("epsilon greedy search with decay converges on small trees") {
  for (int depth : {4, 6}) {
    auto game = random_leaf_tree(depth, 404);
    double truth = brute_value(*game, game->initial_state());
    auto optimal = brute_optimal_actions(*game, game->initial_state());
    UctConfig cfg = ucb_config(9);
    cfg.variant = UctConfig::Variant::EpsilonGreedy;
    cfg.epsilon = 0.2;
    cfg.epsilon_decay = true;
    UctSearch search(game, game->initial_state(), cfg);
    search.run(200000);
    CAPTURE(depth);
    CHECK(std::abs(search.root_value() - truth) <= 0.1);
    CHECK(std::count(optimal.begin(), optimal.end(), search.recommend_move()) ==
          1);
  }
}

TEST_CASE("heuristic leaf evaluation runs no playouts") {
  auto game = std::make_shared<ConnectGame>();
  UctConfig cfg = ucb_config(10);
  cfg.default_policy = UctConfig::Policy::Heuristic;
  cfg.heuristic = [](const Game& g, const GameState& s) {
    const auto& board = static_cast<const ConnectGame&>(g);
    return normalize_heuristic(board.heuristic(s), board.heuristic_scale());
  };
  UctSearch search(game, game->initial_state(), cfg);
  search.run(500);
  CHECK(search.playouts_run() == 0);
  CHECK(search.root_value() >= -1.0);
  CHECK(search.root_value() <= 1.0);

  UctSearch rollout(game, game->initial_state(), ucb_config(10));
  rollout.run(500);
  CHECK(rollout.playouts_run() >= 1);
  CHECK(rollout.playouts_run() <= 500);
}

TEST_CASE("recommendation is the most visited move, means break ties") {
  DualSpec spec;
  spec.depth = 8;
  spec.max_criticals = {0, 2};
  spec.min_criticals = {1, 3};
  spec.seed = 37;
  auto game = std::make_shared<DualGame>(spec);
  UctSearch search(game, game->initial_state(), ucb_config(11));
  search.run(20000);
  auto arms = search.root_arms();
  std::size_t best = 0;
  for (std::size_t i = 1; i < arms.size(); ++i)
    if (arms[i].n > arms[best].n ||
        (arms[i].n == arms[best].n && arms[i].q > arms[best].q))
      best = i;
  CHECK(search.recommend_move() == arms[best].action);
  // Max's winning reply sits under action 0 here, and the search finds it.
  CHECK(search.recommend_move() == 0);
}

TEST_CASE("invalid configurations and premature queries are rejected") {
  auto game = random_leaf_tree(4, 53);
  GameState root = game->initial_state();

  UctConfig bad = ucb_config(12);
  bad.exploration = -0.1;
  CHECK_THROWS_AS(UctSearch(game, root, bad), Error);

  bad = ucb_config(12);
  bad.epsilon = 1.5;
  CHECK_THROWS_AS(UctSearch(game, root, bad), Error);

  bad = ucb_config(12);
  bad.default_policy = UctConfig::Policy::Heuristic;
  CHECK_THROWS_AS(UctSearch(game, root, bad), Error);

  UctSearch fresh(game, root, ucb_config(12));
  CHECK_THROWS_AS(fresh.root_value(), Error);
  CHECK_THROWS_AS(fresh.recommend_move(), Error);
  CHECK_THROWS_AS(fresh.last_root_action(), Error);

  // A terminal root cannot host an iteration.
  GameState leaf = root;
  while (!game->is_terminal(leaf))
    leaf = game->apply_action(leaf, game->legal_actions(leaf)[0]);
  UctSearch at_leaf(game, leaf, ucb_config(12));
  CHECK_THROWS_AS(at_leaf.run_iteration(), Error);
}
