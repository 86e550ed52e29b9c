#include "uct.hpp"

#include <cmath>

namespace searchlab {

namespace {

// Uniformly pick one index i in [0, arms.size()) with pred(i) true; `count`
// is the number of such indices.
template <typename Pred>
int pick_uniform(int count, int size, RngStream& rng, Pred pred) {
  int k = rng.next_int(count);
  for (int i = 0; i < size; ++i)
    if (pred(i) && k-- == 0) return i;
  return size - 1;  // unreachable
}

}  // namespace

int ucb_pick(std::span<const ArmStats> arms, std::int64_t n_s, Player who,
             double c, bool random_tie, RngStream& rng) {
  require(!arms.empty(), ErrorCode::InvalidArgument, "ucb_pick: no actions");
  for (std::size_t i = 0; i < arms.size(); ++i)
    if (arms[i].n == 0) return static_cast<int>(i);

  double log_n = std::log(static_cast<double>(n_s));
  double sign = who == Player::Max ? 1.0 : -1.0;
  double best = 0.0;
  int best_i = -1, tie_count = 0;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    double bound = c * std::sqrt(log_n / static_cast<double>(arms[i].n));
    // Max maximizes q + bound; Min minimizes q - bound. Both reduce to
    // maximizing sign*q + bound.
    double score = sign * arms[i].q + bound;
    if (best_i < 0 || score > best) {
      best = score;
      best_i = static_cast<int>(i);
      tie_count = 1;
    } else if (score == best) {
      ++tie_count;
    }
  }
  if (tie_count > 1 && random_tie) {
    double target = best;
    std::size_t n = arms.size();
    return pick_uniform(tie_count, static_cast<int>(n), rng, [&](int i) {
      double bound = c * std::sqrt(log_n / static_cast<double>(arms[i].n));
      return sign * arms[i].q + bound == target;
    });
  }
  return best_i;
}

int epsilon_greedy_pick(std::span<const ArmStats> arms, Player who, double eps,
                        RngStream& rng) {
  require(!arms.empty(), ErrorCode::InvalidArgument,
          "epsilon_greedy_pick: no actions");
  bool any_unvisited = false, all_equal = true;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (arms[i].n == 0) any_unvisited = true;
    if (arms[i].q != arms[0].q) all_equal = false;
  }
  if (any_unvisited || all_equal) {
    // Round phase: visit children evenly, in index order within a round.
    int best_i = 0;
    for (std::size_t i = 1; i < arms.size(); ++i)
      if (arms[i].n < arms[best_i].n) best_i = static_cast<int>(i);
    return best_i;
  }

  double sign = who == Player::Max ? 1.0 : -1.0;
  double best = sign * arms[0].q;
  for (std::size_t i = 1; i < arms.size(); ++i)
    best = std::max(best, sign * arms[i].q);
  int optimal = 0;
  for (std::size_t i = 0; i < arms.size(); ++i)
    if (sign * arms[i].q == best) ++optimal;
  int sub = static_cast<int>(arms.size()) - optimal;

  bool pick_optimal = sub == 0 || rng.next_double() >= eps;
  int count = pick_optimal ? optimal : sub;
  return pick_uniform(count, static_cast<int>(arms.size()), rng, [&](int i) {
    return (sign * arms[i].q == best) == pick_optimal;
  });
}

// ---------------------------------------------------------------------------

UctSearch::UctSearch(std::shared_ptr<const Game> game, const GameState& root,
                     UctConfig cfg)
    : game_(std::move(game)), cfg_(std::move(cfg)), rng_(cfg_.seed) {
  require(game_ != nullptr, ErrorCode::InvalidArgument, "UctSearch: no game");
  require(cfg_.exploration >= 0.0, ErrorCode::InvalidArgument,
          "UctSearch: exploration constant must be >= 0");
  require(cfg_.epsilon >= 0.0 && cfg_.epsilon <= 1.0, ErrorCode::InvalidArgument,
          "UctSearch: epsilon must be in [0, 1]");
  if (cfg_.default_policy == UctConfig::Policy::Heuristic)
    require(static_cast<bool>(cfg_.heuristic), ErrorCode::InvalidArgument,
            "UctSearch: heuristic policy requires a heuristic function");
  create_node(root);
}

std::int32_t UctSearch::create_node(const GameState& s) {
  Node nd;
  nd.state = s;
  nd.terminal = game_->is_terminal(s);
  nd.first_edge = static_cast<std::int32_t>(edges_.size());
  if (!nd.terminal) {
    game_->legal_actions(s, scratch_actions_);
    nd.arity = static_cast<std::int16_t>(scratch_actions_.size());
    for (Action a : scratch_actions_) {
      edges_.emplace_back();
      edge_actions_.push_back(a);
    }
  }
  nodes_.push_back(nd);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int64_t UctSearch::stored_nodes() const {
  return static_cast<std::int64_t>(nodes_.size()) - 1;
}

const GameState& UctSearch::root_state() const { return nodes_[0].state; }

int UctSearch::select_edge(const Node& nd) {
  ArmStats arms[64];
  int arity = nd.arity;
  for (int i = 0; i < arity; ++i) {
    const Edge& e = edges_[nd.first_edge + i];
    arms[i] = {e.n, e.q};
  }
  std::span<const ArmStats> view(arms, static_cast<std::size_t>(arity));
  Player who = game_->to_move(nd.state);
  if (cfg_.variant == UctConfig::Variant::Ucb1)
    return ucb_pick(view, nd.n, who, cfg_.exploration, cfg_.random_tie_break,
                    rng_);
  double eps = cfg_.epsilon;
  if (cfg_.epsilon_decay && nd.n > arity)
    eps = cfg_.epsilon * static_cast<double>(arity) / static_cast<double>(nd.n);
  return epsilon_greedy_pick(view, who, eps, rng_);
}

double UctSearch::evaluate_fresh(const GameState& s) {
  if (cfg_.default_policy == UctConfig::Policy::RandomPlayout) {
    ++playouts_;
    return random_playout(*game_, s, rng_);
  }
  return cfg_.heuristic(*game_, s);
}

double UctSearch::run_iteration() {
  require(!nodes_[0].terminal, ErrorCode::InvalidArgument,
          "UctSearch: root state is terminal");
  path_.clear();
  std::int32_t cur = 0;
  double reward = 0.0;
  for (;;) {
    if (nodes_[cur].terminal) {
      reward = game_->terminal_reward(nodes_[cur].state);
      break;
    }
    int ei = select_edge(nodes_[cur]);
    path_.push_back({cur, ei});
    std::int32_t eidx = nodes_[cur].first_edge + ei;
    std::int32_t child = edges_[eidx].child;
    if (child >= 0) {
      cur = child;
      continue;
    }
    GameState next = game_->apply_action(nodes_[cur].state, edge_actions_[eidx]);
    child = create_node(next);  // may reallocate nodes_/edges_
    edges_[eidx].child = child;
    reward = nodes_[child].terminal ? game_->terminal_reward(next)
                                    : evaluate_fresh(next);
    break;
  }
  for (auto [ni, ei] : path_) {
    Node& nd = nodes_[ni];
    Edge& e = edges_[nd.first_edge + ei];
    nd.n += 1;
    e.n += 1;
    e.q += (reward - e.q) / static_cast<double>(e.n);
  }
  last_root_edge_ = path_.empty() ? -1 : path_.front().second;
  ++t_;
  return reward;
}

void UctSearch::run(std::int64_t iterations) {
  for (std::int64_t i = 0; i < iterations; ++i) run_iteration();
}

double UctSearch::root_value() const {
  require(t_ > 0, ErrorCode::InvalidArgument,
          "UctSearch: root value before any iteration");
  const Node& root = nodes_[0];
  double num = 0.0;
  std::int64_t den = 0;
  for (int i = 0; i < root.arity; ++i) {
    const Edge& e = edges_[root.first_edge + i];
    num += static_cast<double>(e.n) * e.q;
    den += e.n;
  }
  return num / static_cast<double>(den);
}

Action UctSearch::recommend_move() const {
  require(t_ > 0, ErrorCode::InvalidArgument,
          "UctSearch: recommendation before any iteration");
  const Node& root = nodes_[0];
  int best = 0;
  for (int i = 1; i < root.arity; ++i) {
    const Edge& e = edges_[root.first_edge + i];
    const Edge& b = edges_[root.first_edge + best];
    if (e.n > b.n || (e.n == b.n && e.q > b.q)) best = i;
  }
  return edge_actions_[root.first_edge + best];
}

std::vector<UctSearch::RootArm> UctSearch::root_arms() const {
  const Node& root = nodes_[0];
  std::vector<RootArm> out;
  out.reserve(root.arity);
  for (int i = 0; i < root.arity; ++i) {
    const Edge& e = edges_[root.first_edge + i];
    out.push_back({edge_actions_[root.first_edge + i], e.n, e.q});
  }
  return out;
}

Action UctSearch::last_root_action() const {
  require(last_root_edge_ >= 0, ErrorCode::InvalidArgument,
          "UctSearch: no iteration has run");
  return edge_actions_[nodes_[0].first_edge + last_root_edge_];
}

}  // namespace searchlab
