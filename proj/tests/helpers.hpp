#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "game.hpp"
#include "rng.hpp"
#include "synthetic.hpp"

namespace searchlab::testhelpers {

// Exhaustive game-value reference, written against the public Game interface
// only, so engine searches can be checked against something independent.
inline double brute_value(const Game& g, const GameState& s) {
  if (g.is_terminal(s)) return g.terminal_reward(s);
  bool maxing = g.to_move(s) == Player::Max;
  double best = maxing ? -2.0 : 2.0;
  for (Action a : g.legal_actions(s)) {
    double v = brute_value(g, g.apply_action(s, a));
    best = maxing ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

inline Action brute_best_action(const Game& g, const GameState& s) {
  bool maxing = g.to_move(s) == Player::Max;
  std::vector<Action> legal = g.legal_actions(s);
  Action best_a = legal.front();
  double best = maxing ? -2.0 : 2.0;
  for (Action a : legal) {
    double v = brute_value(g, g.apply_action(s, a));
    if (maxing ? v > best : v < best) {
      best = v;
      best_a = a;
    }
  }
  return best_a;
}

inline std::vector<Action> brute_optimal_actions(const Game& g,
                                                 const GameState& s) {
  bool maxing = g.to_move(s) == Player::Max;
  std::vector<Action> legal = g.legal_actions(s);
  std::vector<double> vals;
  double best = maxing ? -2.0 : 2.0;
  for (Action a : legal) {
    double v = brute_value(g, g.apply_action(s, a));
    vals.push_back(v);
    best = maxing ? std::max(best, v) : std::min(best, v);
  }
  std::vector<Action> out;
  for (std::size_t i = 0; i < legal.size(); ++i)
    if (vals[i] == best) out.push_back(legal[i]);
  return out;
}

// Complete binary tree of a given depth with per-path pseudorandom terminal
// leaves in {-1, 0, +1}; no implanted structure at all.
class RandomLeafGame final : public PathTreeGame {
 public:
  RandomLeafGame(int depth, std::uint64_t seed)
      : PathTreeGame(depth), seed_(seed) {}
  std::string name() const override { return "random_leaf"; }
  double leaf_value_at(std::uint64_t path) const override {
    return static_cast<double>(
        static_cast<int>(derive_seed(seed_, {path}) % 3) - 1);
  }

 private:
  std::uint64_t seed_;
};

// Hand-built game over an explicit node table: children lists define the
// shape, terminal nodes carry rewards, every node may carry a static value
// for evaluator tests. State word 0 holds the node id.
struct FixtureSpec {
  std::vector<std::vector<int>> children;  // empty list = terminal node
  std::vector<double> reward;              // used at terminal nodes
  std::vector<double> value;               // static evaluation per node
};

class FixtureGame final : public Game {
 public:
  explicit FixtureGame(FixtureSpec spec) : spec_(std::move(spec)) {}

  using Game::legal_actions;
  GameState initial_state() const override {
    GameState s;
    s.words[0] = 0;
    s.ply = 0;
    return tag(s);
  }
  void legal_actions(const GameState& s,
                     std::vector<Action>& out) const override {
    out.clear();
    for (std::size_t i = 0; i < kids(s).size(); ++i)
      out.push_back(static_cast<Action>(i));
  }
  GameState apply_action(const GameState& s, Action a) const override {
    const std::vector<int>& ch = kids(s);
    require(a >= 0 && static_cast<std::size_t>(a) < ch.size(),
            ErrorCode::IllegalAction, "fixture: action out of range");
    GameState t = s;
    t.words[0] = static_cast<std::uint64_t>(ch[static_cast<std::size_t>(a)]);
    t.ply = s.ply + 1;
    return tag(t);
  }
  bool is_terminal(const GameState& s) const override {
    return kids(s).empty();
  }
  double terminal_reward(const GameState& s) const override {
    require(is_terminal(s), ErrorCode::NotTerminal,
            "fixture: reward of a live node");
    return spec_.reward[node(s)];
  }
  int max_game_length() const override {
    return static_cast<int>(spec_.children.size());
  }
  std::string name() const override { return "fixture"; }

  double value_at(const GameState& s) const { return spec_.value[node(s)]; }

 private:
  std::size_t node(const GameState& s) const {
    return static_cast<std::size_t>(s.words[0]);
  }
  const std::vector<int>& kids(const GameState& s) const {
    require(node(s) < spec_.children.size(), ErrorCode::WrongGame,
            "fixture: unknown node");
    return spec_.children[node(s)];
  }
  FixtureSpec spec_;
};

}  // namespace searchlab::testhelpers
