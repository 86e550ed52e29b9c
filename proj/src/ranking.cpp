#include "ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "errors.hpp"

namespace searchlab {

std::vector<int> competition_ranks(std::span<const double> scores,
                                   double eps_tie) {
  require(eps_tie >= 0.0, ErrorCode::InvalidArgument,
          "ranks: eps_tie must be >= 0");
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return scores[i] > scores[j]; });

  std::vector<int> ranks(scores.size(), 0);
  std::size_t i = 0;
  while (i < order.size()) {
    double head = scores[order[i]];
    std::size_t j = i;
    while (j < order.size() && head - scores[order[j]] <= eps_tie) ++j;
    for (std::size_t m = i; m < j; ++m)
      ranks[order[m]] = static_cast<int>(i) + 1;
    i = j;
  }
  return ranks;
}

MoveRanking rank_moves(const Game& g, const GameState& s,
                       const RankEvaluator& ev, double eps_tie,
                       RngStream& rng) {
  require(!g.is_terminal(s), ErrorCode::InvalidArgument,
          "rank_moves: terminal state has no moves to rank");
  std::vector<Action> actions = g.legal_actions(s);
  double sign = g.to_move(s) == Player::Max ? 1.0 : -1.0;

  std::vector<double> scores;
  scores.reserve(actions.size());
  switch (ev.kind) {
    case RankEvaluator::Kind::MinimaxValue: {
      SearchReport rep = minimax(g, s, ev.depth, ev.leaf, rng, true);
      for (double v : rep.action_values) scores.push_back(sign * v);
      break;
    }
    case RankEvaluator::Kind::PlayoutMean: {
      require(ev.n_playouts >= 1, ErrorCode::InvalidArgument,
              "rank_moves: need at least one playout per move");
      for (Action a : actions) {
        GameState child = g.apply_action(s, a);
        double sum = 0.0;
        for (int p = 0; p < ev.n_playouts; ++p) {
          sum += ev.policy.kind == PlayoutPolicySpec::Kind::Random
                     ? random_playout(g, child, rng)
                     : mmk_playout(g, child, ev.policy.depth, rng);
        }
        scores.push_back(sign * sum / ev.n_playouts);
      }
      break;
    }
    case RankEvaluator::Kind::RawHeuristic: {
      require(static_cast<bool>(ev.heuristic), ErrorCode::InvalidArgument,
              "rank_moves: raw-heuristic evaluator without a function");
      for (Action a : actions)
        scores.push_back(sign * ev.heuristic(g, g.apply_action(s, a)));
      break;
    }
  }

  std::vector<int> ranks = competition_ranks(scores, eps_tie);
  MoveRanking out;
  out.eps_tie = eps_tie;
  out.moves.reserve(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i)
    out.moves.push_back({actions[i], scores[i], ranks[i]});
  return out;
}

namespace {

// Competition ranks -> mid-ranks: a tied block starting at sorted position p
// with m members averages to p + (m-1)/2.
std::vector<double> mid_ranks(const MoveRanking& r) {
  std::vector<double> out(r.moves.size());
  for (std::size_t i = 0; i < r.moves.size(); ++i) {
    int rank = r.moves[i].rank;
    int block = 0;
    for (const MoveRank& m : r.moves)
      if (m.rank == rank) ++block;
    out[i] = rank + (block - 1) / 2.0;
  }
  return out;
}

}  // namespace

std::optional<double> rank_correlation(const MoveRanking& a,
                                       const MoveRanking& b) {
  require(a.moves.size() == b.moves.size() && !a.moves.empty(),
          ErrorCode::InvalidArgument,
          "rank_correlation: rankings cover different move sets");

  // Match b's entries to a's by action.
  std::vector<std::size_t> b_index(a.moves.size());
  for (std::size_t i = 0; i < a.moves.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < b.moves.size(); ++j) {
      if (b.moves[j].action == a.moves[i].action) {
        b_index[i] = j;
        found = true;
        break;
      }
    }
    require(found, ErrorCode::InvalidArgument,
            "rank_correlation: rankings cover different move sets");
  }

  std::vector<double> ra = mid_ranks(a);
  std::vector<double> rb = mid_ranks(b);
  std::size_t n = a.moves.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += ra[i];
    mb += rb[b_index[i]];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = ra[i] - ma;
    double db = rb[b_index[i]] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

namespace {

struct TrapSearch {
  const Game& g;
  const std::function<double(const Game&, const GameState&)>& h;
  double base;  // h at the pre-move state
  double sign;  // +1 when the opponent is the first player, else -1

  double swing(const GameState& x) const { return sign * (h(g, x) - base); }

  // Best swing the opponent can force from x, banking the value of every
  // state reached along the way. o_left counts remaining opponent moves.
  double value(const GameState& x, int o_left, bool opp_turn) const {
    double banked = swing(x);
    if (g.is_terminal(x) || (opp_turn && o_left == 0)) return banked;
    std::vector<Action> moves = g.legal_actions(x);
    double best = opp_turn ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (Action a : moves) {
      double v = value(g.apply_action(x, a), opp_turn ? o_left - 1 : o_left,
                       !opp_turn);
      best = opp_turn ? std::max(best, v) : std::min(best, v);
    }
    return std::max(banked, best);
  }

  // One forcing line: the opponent follows its best continuation, the mover
  // its best defense, until the banked swing reaches delta.
  void witness_line(GameState x, int o_left, bool opp_turn, double delta,
                    std::vector<Action>& out) const {
    for (;;) {
      if (swing(x) >= delta || g.is_terminal(x)) return;
      if (opp_turn && o_left == 0) return;
      std::vector<Action> moves = g.legal_actions(x);
      int pick = 0;
      double best = opp_turn ? -std::numeric_limits<double>::infinity()
                             : std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < moves.size(); ++i) {
        double v = value(g.apply_action(x, moves[i]),
                         opp_turn ? o_left - 1 : o_left, !opp_turn);
        bool better = opp_turn ? v > best : v < best;
        if (better) {
          best = v;
          pick = static_cast<int>(i);
        }
      }
      out.push_back(moves[pick]);
      x = g.apply_action(x, moves[pick]);
      if (opp_turn) --o_left;
      opp_turn = !opp_turn;
    }
  }
};

}  // namespace

std::optional<SoftTrapReport> detect_soft_trap(
    const Game& g, const GameState& s,
    const std::function<double(const Game&, const GameState&)>& h,
    double delta, int k) {
  require(!g.is_terminal(s), ErrorCode::InvalidArgument,
          "soft trap: terminal state has no moves");
  require(delta > 0.0, ErrorCode::InvalidArgument,
          "soft trap: delta must be positive");
  require(k >= 1, ErrorCode::InvalidArgument,
          "soft trap: horizon must be at least one opponent move");
  require(static_cast<bool>(h), ErrorCode::InvalidArgument,
          "soft trap: missing evaluator");

  Player rival = opponent(g.to_move(s));
  TrapSearch search{g, h, h(g, s), rival == Player::Max ? 1.0 : -1.0};

  for (Action m : g.legal_actions(s)) {
    GameState after = g.apply_action(s, m);
    double v = search.value(after, k, true);
    if (v >= delta) {
      SoftTrapReport rep;
      rep.state = s;
      rep.trap_move = m;
      rep.delta = delta;
      rep.k = k;
      rep.gain = v;
      rep.witness.push_back(m);
      search.witness_line(after, k, true, delta, rep.witness);
      return rep;
    }
  }
  return std::nullopt;
}

}  // namespace searchlab
