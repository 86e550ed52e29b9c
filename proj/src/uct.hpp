#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "game.hpp"

namespace searchlab {

// Per-action statistics of one stored node, as seen by selection rules.
struct ArmStats {
  std::int64_t n = 0;  // visits through this action
  double q = 0.0;      // running mean of episode rewards (Max's perspective)
};

// UCB1 selection. Unvisited actions come first (lowest index). Otherwise Max
// picks the largest q + c*sqrt(ln(n_s)/n), Min the smallest
// q - c*sqrt(ln(n_s)/n). Ties go to the lowest index, or uniformly at random
// when random_tie is set.
int ucb_pick(std::span<const ArmStats> arms, std::int64_t n_s, Player who,
             double c, bool random_tie, RngStream& rng);

// Round-based epsilon-greedy selection: while any child is unvisited or all
// values are tied, children are visited in repeating rounds; afterwards an
// optimal child is chosen with probability 1-eps and a sub-optimal one with
// probability eps, uniformly within each class.
int epsilon_greedy_pick(std::span<const ArmStats> arms, Player who, double eps,
                        RngStream& rng);

struct UctConfig {
  enum class Variant { Ucb1, EpsilonGreedy };
  enum class Policy { RandomPlayout, Heuristic };

  Variant variant = Variant::Ucb1;
  double exploration = 0.4;  // c in the confidence bound
  double epsilon = 0.1;      // epsilon-greedy only
  // When set, epsilon shrinks inversely with node visits instead of staying
  // constant: eps * min(1, arity / n_s).
  bool epsilon_decay = false;
  Policy default_policy = Policy::RandomPlayout;
  // Leaf evaluation for Policy::Heuristic; must return values in [-1, +1]
  // from Max's perspective.
  std::function<double(const Game&, const GameState&)> heuristic;
  bool random_tie_break = false;
  std::uint64_t seed = 0;
  std::int64_t max_iterations = 200000;
};

// Incrementally grown search tree. The root is stored up front; every
// iteration selects a path from the root, stores the first state not yet in
// the tree (one new node per iteration), evaluates it with the default
// policy (or its exact reward when terminal), and backs the result up the
// path with averaging updates. Episodes that re-reach a stored terminal node
// back up its exact reward without growing the tree.
class UctSearch {
 public:
  UctSearch(std::shared_ptr<const Game> game, const GameState& root,
            UctConfig cfg);

  double run_iteration();        // returns the episode reward
  void run(std::int64_t iterations);

  std::int64_t iterations() const { return t_; }
  std::int64_t stored_nodes() const;  // expansion count; the root is not counted
  std::int64_t playouts_run() const { return playouts_; }

  // Visit-weighted mean of the root action values; equals the mean of all
  // episode rewards. Requires at least one completed iteration.
  double root_value() const;

  // Most-visited root action; ties by higher value, then lowest index.
  Action recommend_move() const;

  struct RootArm {
    Action action;
    std::int64_t n;
    double q;
  };
  std::vector<RootArm> root_arms() const;

  // Root action taken by the most recent iteration.
  Action last_root_action() const;

  const UctConfig& config() const { return cfg_; }
  const GameState& root_state() const;

 private:
  struct Edge {
    double q = 0.0;
    std::int64_t n = 0;
    std::int32_t child = -1;
  };
  struct Node {
    GameState state;
    std::int64_t n = 0;         // equals the sum of its edge visit counts
    std::int32_t first_edge = 0;
    std::int16_t arity = 0;
    bool terminal = false;
  };

  std::int32_t create_node(const GameState& s);
  int select_edge(const Node& nd);
  double evaluate_fresh(const GameState& s);

  std::shared_ptr<const Game> game_;
  UctConfig cfg_;
  RngStream rng_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<Action> edge_actions_;
  std::vector<std::pair<std::int32_t, std::int32_t>> path_;  // (node, edge)
  std::vector<Action> scratch_actions_;
  std::int64_t t_ = 0;
  std::int64_t playouts_ = 0;
  std::int32_t last_root_edge_ = -1;
};

}  // namespace searchlab
