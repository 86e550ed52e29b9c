#include "game.hpp"

#include <atomic>
#include <bit>

namespace searchlab {

namespace {
std::atomic<std::uint16_t> g_next_game_id{1};
}

Game::Game() : id_(g_next_game_id.fetch_add(1, std::memory_order_relaxed)) {}

double random_playout(const Game& game, GameState s, RngStream& rng) {
  thread_local std::vector<Action> moves;
  while (!game.is_terminal(s)) {
    game.legal_actions(s, moves);
    s = game.apply_action(s, moves[rng.next_int(static_cast<int>(moves.size()))]);
  }
  return game.terminal_reward(s);
}

double normalize_heuristic(double raw, double h_max) {
  require(h_max > 0.0, ErrorCode::InvalidArgument,
          "normalize_heuristic: h_max must be positive");
  double v = raw / h_max;
  if (v > 1.0) return 1.0;
  if (v < -1.0) return -1.0;
  return v;
}

ConnectGame::ConnectGame(int cols, int rows, int connect)
    : cols_(cols), rows_(rows), connect_(connect), stride_(rows + 1) {
  require(cols >= 1 && rows >= 1, ErrorCode::InvalidArgument,
          "ConnectGame: board must be at least 1x1");
  require(connect >= 2, ErrorCode::InvalidArgument,
          "ConnectGame: connect must be at least 2");
  require(connect <= std::max(cols, rows), ErrorCode::InvalidArgument,
          "ConnectGame: connect does not fit on the board");
  require(cols * stride_ <= 64, ErrorCode::InvalidArgument,
          "ConnectGame: board too large for the packed representation");
}

std::string ConnectGame::name() const {
  return "connect" + std::to_string(connect_) + "-" + std::to_string(cols_) +
         "x" + std::to_string(rows_);
}

GameState ConnectGame::initial_state() const { return tag(GameState{}); }

std::uint64_t ConnectGame::board(const GameState& s, int side) const {
  return s.words[side];
}

int ConnectGame::height(const GameState& s, int c) const {
  std::uint64_t col_mask = ((1ULL << rows_) - 1) << (c * stride_);
  return std::popcount((s.words[0] | s.words[1]) & col_mask);
}

void ConnectGame::legal_actions(const GameState& s, std::vector<Action>& out) const {
  check_owned(s);
  out.clear();
  if (is_terminal(s)) return;
  for (int c = 0; c < cols_; ++c)
    if (height(s, c) < rows_) out.push_back(c);
}

GameState ConnectGame::apply_action(const GameState& s, Action a) const {
  check_owned(s);
  require(!is_terminal(s), ErrorCode::IllegalAction,
          "ConnectGame: move on a finished game");
  require(a >= 0 && a < cols_, ErrorCode::IllegalAction,
          "ConnectGame: no such column");
  int h = height(s, a);
  require(h < rows_, ErrorCode::IllegalAction, "ConnectGame: column is full");
  GameState n = s;
  int side = static_cast<int>(to_move(s));
  n.words[side] |= 1ULL << (a * stride_ + h);
  n.ply = s.ply + 1;
  return n;
}

bool ConnectGame::has_line(std::uint64_t bb) const {
  // Direction steps in bit offsets; the sentinel bit atop every column keeps
  // vertical and diagonal shifts from bleeding across columns.
  const int dirs[4] = {1, stride_, stride_ + 1, stride_ - 1};
  for (int d : dirs) {
    std::uint64_t x = bb;
    for (int i = 1; i < connect_ && x; ++i) x &= bb >> (d * i);
    if (x) return true;
  }
  return false;
}

bool ConnectGame::is_terminal(const GameState& s) const {
  check_owned(s);
  if (has_line(s.words[0]) || has_line(s.words[1])) return true;
  return static_cast<int>(s.ply) >= cols_ * rows_;
}

double ConnectGame::terminal_reward(const GameState& s) const {
  check_owned(s);
  if (has_line(s.words[0])) return 1.0;
  if (has_line(s.words[1])) return -1.0;
  require(static_cast<int>(s.ply) >= cols_ * rows_, ErrorCode::NotTerminal,
          "ConnectGame: reward of a non-terminal state");
  return 0.0;
}

double ConnectGame::heuristic(const GameState& s) const {
  check_owned(s);
  std::uint64_t bb[2] = {s.words[0], s.words[1]};

  // Stones in the center column(s); both middle columns when cols is even.
  std::uint64_t center = 0;
  if (cols_ % 2 == 1) {
    center = ((1ULL << rows_) - 1) << ((cols_ / 2) * stride_);
  } else {
    center = (((1ULL << rows_) - 1) << ((cols_ / 2 - 1) * stride_)) |
             (((1ULL << rows_) - 1) << ((cols_ / 2) * stride_));
  }
  double center_diff = std::popcount(bb[0] & center) - std::popcount(bb[1] & center);

  // Open near-lines: windows of `connect` cells holding connect-1 own stones
  // and one empty cell.
  int open[2] = {0, 0};
  const int steps[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};  // (dc, dr)
  for (int c = 0; c < cols_; ++c) {
    for (int r = 0; r < rows_; ++r) {
      for (auto& st : steps) {
        int ec = c + st[0] * (connect_ - 1);
        int er = r + st[1] * (connect_ - 1);
        if (ec < 0 || ec >= cols_ || er < 0 || er >= rows_) continue;
        std::uint64_t m = 0;
        for (int i = 0; i < connect_; ++i)
          m |= 1ULL << ((c + st[0] * i) * stride_ + (r + st[1] * i));
        for (int side = 0; side < 2; ++side) {
          if ((bb[1 - side] & m) == 0 &&
              std::popcount(bb[side] & m) == connect_ - 1)
            ++open[side];
        }
      }
    }
  }
  return 0.1 * center_diff + 0.3 * (open[0] - open[1]);
}

GameState ConnectGame::state_from_drops(const std::vector<int>& cols) const {
  GameState s = initial_state();
  for (int c : cols) s = apply_action(s, c);
  return s;
}

GameState ConnectGame::mirror(const GameState& s) const {
  check_owned(s);
  GameState n = s;
  n.words = {0, 0};
  std::uint64_t col_bits = (1ULL << rows_) - 1;
  for (int side = 0; side < 2; ++side)
    for (int c = 0; c < cols_; ++c) {
      std::uint64_t col = (s.words[side] >> (c * stride_)) & col_bits;
      n.words[side] |= col << ((cols_ - 1 - c) * stride_);
    }
  return n;
}

GameState ConnectGame::swap_colors(const GameState& s) const {
  check_owned(s);
  GameState n = s;
  std::swap(n.words[0], n.words[1]);
  return n;
}

}  // namespace searchlab
