#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "game.hpp"

namespace searchlab {

// Complete binary game tree whose state is the move path from the root
// (bit i of words[0] = action taken at ply i). Leaves sit at a fixed depth
// and carry values in {-1, 0, +1} derived lazily from the spec seed, so a
// tree of any depth costs O(1) to build and O(visited nodes) to search.
class PathTreeGame : public Game {
 public:
  explicit PathTreeGame(int depth);

  using Game::legal_actions;
  GameState initial_state() const override;
  void legal_actions(const GameState& s, std::vector<Action>& out) const override;
  GameState apply_action(const GameState& s, Action a) const override;
  bool is_terminal(const GameState& s) const override;
  double terminal_reward(const GameState& s) const override;
  int max_game_length() const override { return depth_; }

  int depth() const { return depth_; }

  // Value of the leaf reached by the given root-to-leaf action path.
  virtual double leaf_value_at(std::uint64_t path) const = 0;

 protected:
  int depth_;
};

// Tree with an implanted winning strategy for Max: at every critical depth
// (all even, Max to move) there is one correct action; taking all of them
// guarantees a +1 leaf, any deviation leads to a leaf drawn uniformly from
// {-1, 0, +1} as a deterministic function of (seed, path).
struct KStepSpec {
  int depth = 20;                      // even; leaves at this ply
  std::vector<int> critical_depths;    // strictly increasing, even, < depth
  std::vector<int> correct_actions;    // one of {0,1} per critical depth
  std::uint64_t seed = 0;
};

class KStepGame final : public PathTreeGame {
 public:
  explicit KStepGame(KStepSpec spec);
  std::string name() const override;
  double leaf_value_at(std::uint64_t path) const override;
  const KStepSpec& spec() const { return spec_; }

 private:
  KStepSpec spec_;
  std::uint64_t critical_mask_ = 0;
  std::uint64_t correct_bits_ = 0;
  std::uint64_t draw_seed_;
};

// Tree holding one winning strategy per player. Moving left at the root
// enters subtree A where Max wins by also moving left at depth x2; moving
// right enters subtree B where Min wins by moving left at depths y1 and y2.
// Leaves off both strategies are drawn with mean `leaf_mean_a` in A (uniform
// over {-1,0,+1} when 0) and mean `leaf_mean_b` in B (two-point on {-1,+1}).
struct DualSpec {
  int depth = 20;                          // even
  std::array<int, 2> max_criticals{0, 2};  // {0, x2}; x2 even in [2, depth-2]
  std::array<int, 2> min_criticals{1, 3};  // odd, increasing, in [1, depth-1]
  double leaf_mean_a = 0.0;
  double leaf_mean_b = 0.5;
  std::uint64_t seed = 0;
};

class DualGame final : public PathTreeGame {
 public:
  explicit DualGame(DualSpec spec);
  std::string name() const override;
  double leaf_value_at(std::uint64_t path) const override;
  const DualSpec& spec() const { return spec_; }

 private:
  DualSpec spec_;
  std::uint64_t draw_seed_;
};

// Two fixed shapes used to study greedy exploitation at the root.
//
// Kind A: Max at the root; the left subtree has all-(+1) leaves, the right
// subtree has exactly floor(p * N) leaves labeled +1 (rank-ordered by leaf
// hash so the fraction is exact), the rest -1. Total depth subtree_depth+1.
//
// Kind B: Max holds a two-step winning strategy with critical moves at
// levels 0 and 2; each level-2 node roots a kind-A tree with fraction p, and
// the right subtree of the root has a fraction q of +1 leaves. Total depth
// subtree_depth+3.
struct ScenarioSpec {
  char kind = 'A';  // 'A' or 'B'
  int subtree_depth = 8;
  double p = 0.5;
  double q = 0.5;  // kind B only
  std::uint64_t seed = 0;
};

class ScenarioGame final : public PathTreeGame {
 public:
  explicit ScenarioGame(ScenarioSpec spec);
  std::string name() const override;
  double leaf_value_at(std::uint64_t path) const override;
  const ScenarioSpec& spec() const { return spec_; }

 private:
  struct Region {
    std::uint64_t prefix;  // path bits identifying the region
    int prefix_len;
    bool constant;      // all leaves +1
    bool any_plus;      // false when floor(frac*N) == 0
    std::array<std::uint64_t, 2> threshold;  // k-th smallest (hash, path)
  };

  const Region& region_of(std::uint64_t path) const;
  static Region make_region(std::uint64_t prefix, int prefix_len, int depth,
                            double frac, std::uint64_t draw_seed);

  ScenarioSpec spec_;
  std::uint64_t draw_seed_;
  std::vector<Region> regions_;
};

std::shared_ptr<PathTreeGame> build_kstep_tree(const KStepSpec& spec);
std::shared_ptr<PathTreeGame> build_dual_tree(const DualSpec& spec);
std::shared_ptr<PathTreeGame> build_scenario_tree(const ScenarioSpec& spec);

}  // namespace searchlab
