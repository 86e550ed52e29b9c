#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace searchlab {

enum class Player : std::uint8_t { Max = 0, Min = 1 };

inline Player opponent(Player p) {
  return p == Player::Max ? Player::Min : Player::Max;
}

// Move identifier. Within a state the legal actions are reported in a fixed
// order; indices into that order are how searches address them.
using Action = std::int32_t;

// Compact value-type state. `words` is game-defined packed data (a move path
// for tree games, bitboards for the board game). `game_id` ties the state to
// the instance that produced it so cross-game misuse is caught early.
struct GameState {
  std::array<std::uint64_t, 2> words{0, 0};
  std::uint32_t ply = 0;
  std::uint16_t game_id = 0;

  bool operator==(const GameState&) const = default;
};

// Two-player zero-sum alternating game. Max moves at even ply, Min at odd
// ply; rewards are from Max's perspective in [-1, +1].
class Game {
 public:
  Game();
  virtual ~Game() = default;

  virtual GameState initial_state() const = 0;
  virtual void legal_actions(const GameState& s, std::vector<Action>& out) const = 0;
  virtual GameState apply_action(const GameState& s, Action a) const = 0;
  virtual bool is_terminal(const GameState& s) const = 0;
  virtual double terminal_reward(const GameState& s) const = 0;

  // Upper bound on plies from the initial state; playout buffers rely on it.
  virtual int max_game_length() const = 0;

  virtual std::string name() const = 0;

  std::vector<Action> legal_actions(const GameState& s) const {
    std::vector<Action> v;
    legal_actions(s, v);
    return v;
  }

  Player to_move(const GameState& s) const {
    return (s.ply & 1) ? Player::Min : Player::Max;
  }

  std::uint16_t id() const { return id_; }

 protected:
  void check_owned(const GameState& s) const {
    require(s.game_id == id_, ErrorCode::WrongGame,
            name() + ": state belongs to a different game instance");
  }
  GameState tag(GameState s) const {
    s.game_id = id_;
    return s;
  }

 private:
  std::uint16_t id_;
};

// Uniform-random moves to the end of the game; returns the terminal reward.
// A terminal start returns its reward without touching the stream.
double random_playout(const Game& game, GameState s, RngStream& rng);

// Drop-in-a-column connection game on a cols x rows board; first player to
// line up `connect` stones in any direction wins. Defaults give a compact
// 5x4, connect-3 board that still has real tactics. Actions are column
// indices; a full column is illegal.
class ConnectGame final : public Game {
 public:
  ConnectGame(int cols = 5, int rows = 4, int connect = 3);

  using Game::legal_actions;
  GameState initial_state() const override;
  void legal_actions(const GameState& s, std::vector<Action>& out) const override;
  GameState apply_action(const GameState& s, Action a) const override;
  bool is_terminal(const GameState& s) const override;
  double terminal_reward(const GameState& s) const override;
  int max_game_length() const override { return cols_ * rows_; }
  std::string name() const override;

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  int connect() const { return connect_; }

  // Board evaluation in raw heuristic units, Max minus Min:
  //   0.1 * (center column stone differential)
  // + 0.3 * (open (connect-1)-in-a-row differential)
  // Antisymmetric under color swap and invariant under horizontal mirror.
  double heuristic(const GameState& s) const;

  // Saturation scale used when normalizing `heuristic` values; chosen above
  // anything observed in play on the default board.
  double heuristic_scale() const { return 3.0; }

  // Replay helper: apply a sequence of column drops from the empty board.
  GameState state_from_drops(const std::vector<int>& cols) const;

  // Board symmetries, exposed for property checks and position generators.
  GameState mirror(const GameState& s) const;
  GameState swap_colors(const GameState& s) const;

 private:
  int cols_, rows_, connect_;
  int stride_;  // bits per column (rows + 1, top bit is a sentinel)

  std::uint64_t board(const GameState& s, int side) const;
  bool has_line(std::uint64_t bb) const;
  int height(const GameState& s, int c) const;
};

// Clamped rescale of a raw heuristic value to [-1, +1]: raw / h_max, clipped.
double normalize_heuristic(double raw, double h_max);

}  // namespace searchlab
