#include "config.hpp"

#include <fstream>
#include <sstream>

namespace searchlab {

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::Config, std::string("config: invalid JSON: ") + e.what());
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Config,
          "config: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

const Json& config_at(const Json& j, const std::string& key) {
  require(j.is_object(), ErrorCode::Config,
          "config: expected an object holding field '" + key + "'");
  auto it = j.find(key);
  require(it != j.end(), ErrorCode::Config,
          "config: missing field '" + key + "'");
  return *it;
}

namespace {

// Constructor validation failures become config errors: they were caused by
// the document being read.
template <typename Fn>
auto as_config_error(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    fail(ErrorCode::Config, std::string("config: ") + e.what());
  }
}

}  // namespace

KStepSpec kstep_from_json(const Json& j) {
  KStepSpec s;
  s.depth = config_get_or<int>(j, "depth", s.depth);
  s.critical_depths = config_get<std::vector<int>>(j, "critical_depths");
  s.correct_actions =
      config_get_or<std::vector<int>>(j, "correct_actions",
                                      std::vector<int>(s.critical_depths.size(), 0));
  s.seed = config_get_or<std::uint64_t>(j, "seed", 0);
  return s;
}

Json kstep_to_json(const KStepSpec& s) {
  return Json{{"kind", "kstep"},
              {"depth", s.depth},
              {"critical_depths", s.critical_depths},
              {"correct_actions", s.correct_actions},
              {"seed", s.seed}};
}

DualSpec dual_from_json(const Json& j) {
  DualSpec s;
  s.depth = config_get_or<int>(j, "depth", s.depth);
  auto maxc = config_get_or<std::vector<int>>(
      j, "max_criticals", {s.max_criticals[0], s.max_criticals[1]});
  auto minc = config_get_or<std::vector<int>>(
      j, "min_criticals", {s.min_criticals[0], s.min_criticals[1]});
  require(maxc.size() == 2 && minc.size() == 2, ErrorCode::Config,
          "config: field 'max_criticals'/'min_criticals' must list two depths");
  s.max_criticals = {maxc[0], maxc[1]};
  s.min_criticals = {minc[0], minc[1]};
  s.leaf_mean_a = config_get_or<double>(j, "leaf_mean_a", s.leaf_mean_a);
  s.leaf_mean_b = config_get_or<double>(j, "leaf_mean_b", s.leaf_mean_b);
  s.seed = config_get_or<std::uint64_t>(j, "seed", 0);
  return s;
}

Json dual_to_json(const DualSpec& s) {
  return Json{{"kind", "dual"},
              {"depth", s.depth},
              {"max_criticals", {s.max_criticals[0], s.max_criticals[1]}},
              {"min_criticals", {s.min_criticals[0], s.min_criticals[1]}},
              {"leaf_mean_a", s.leaf_mean_a},
              {"leaf_mean_b", s.leaf_mean_b},
              {"seed", s.seed}};
}

ScenarioSpec scenario_from_json(const Json& j) {
  ScenarioSpec s;
  std::string shape = config_get_or<std::string>(j, "shape", "A");
  require(shape == "A" || shape == "B", ErrorCode::Config,
          "config: field 'shape' must be \"A\" or \"B\"");
  s.kind = shape[0];
  s.subtree_depth = config_get_or<int>(j, "subtree_depth", s.subtree_depth);
  s.p = config_get_or<double>(j, "p", s.p);
  s.q = config_get_or<double>(j, "q", s.q);
  s.seed = config_get_or<std::uint64_t>(j, "seed", 0);
  return s;
}

Json scenario_to_json(const ScenarioSpec& s) {
  return Json{{"kind", "scenario"},
              {"shape", std::string(1, s.kind)},
              {"subtree_depth", s.subtree_depth},
              {"p", s.p},
              {"q", s.q},
              {"seed", s.seed}};
}

std::shared_ptr<const Game> make_game(const Json& spec) {
  std::string kind = config_get<std::string>(spec, "kind");
  return as_config_error([&]() -> std::shared_ptr<const Game> {
    if (kind == "builtin") {
      return std::make_shared<ConnectGame>(
          config_get_or<int>(spec, "cols", 5),
          config_get_or<int>(spec, "rows", 4),
          config_get_or<int>(spec, "connect", 3));
    }
    if (kind == "kstep") return build_kstep_tree(kstep_from_json(spec));
    if (kind == "dual") return build_dual_tree(dual_from_json(spec));
    if (kind == "scenario") return build_scenario_tree(scenario_from_json(spec));
    fail(ErrorCode::Config, "config: unknown game kind '" + kind + "'");
  });
}

Json game_to_json(const Game& game) {
  if (auto* cg = dynamic_cast<const ConnectGame*>(&game)) {
    return Json{{"kind", "builtin"},
                {"cols", cg->cols()},
                {"rows", cg->rows()},
                {"connect", cg->connect()}};
  }
  if (auto* ks = dynamic_cast<const KStepGame*>(&game))
    return kstep_to_json(ks->spec());
  if (auto* du = dynamic_cast<const DualGame*>(&game))
    return dual_to_json(du->spec());
  if (auto* sc = dynamic_cast<const ScenarioGame*>(&game))
    return scenario_to_json(sc->spec());
  fail(ErrorCode::InvalidArgument,
       "config: game '" + game.name() + "' has no serialized form");
}

std::function<double(const Game&, const GameState&)> normalized_heuristic_fn(
    const Game& game) {
  require(dynamic_cast<const ConnectGame*>(&game) != nullptr,
          ErrorCode::Config,
          "config: game '" + game.name() + "' has no static evaluation");
  return [](const Game& g, const GameState& s) {
    const auto& cg = dynamic_cast<const ConnectGame&>(g);
    return normalize_heuristic(cg.heuristic(s), cg.heuristic_scale());
  };
}

UctConfig uct_from_json(const Json& j, const Game* game) {
  UctConfig cfg;
  std::string variant = config_get_or<std::string>(j, "variant", "ucb1");
  if (variant == "ucb1") {
    cfg.variant = UctConfig::Variant::Ucb1;
  } else if (variant == "epsilon_greedy") {
    cfg.variant = UctConfig::Variant::EpsilonGreedy;
  } else {
    fail(ErrorCode::Config, "config: unknown field 'variant' value '" + variant + "'");
  }
  cfg.exploration = config_get_or<double>(j, "exploration", cfg.exploration);
  cfg.epsilon = config_get_or<double>(j, "epsilon", cfg.epsilon);
  cfg.epsilon_decay = config_get_or<bool>(j, "epsilon_decay", cfg.epsilon_decay);
  std::string policy =
      config_get_or<std::string>(j, "default_policy", "random_playout");
  if (policy == "random_playout") {
    cfg.default_policy = UctConfig::Policy::RandomPlayout;
  } else if (policy == "heuristic") {
    cfg.default_policy = UctConfig::Policy::Heuristic;
    if (game != nullptr) cfg.heuristic = normalized_heuristic_fn(*game);
  } else {
    fail(ErrorCode::Config,
         "config: unknown field 'default_policy' value '" + policy + "'");
  }
  cfg.random_tie_break =
      config_get_or<bool>(j, "random_tie_break", cfg.random_tie_break);
  cfg.seed = config_get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.max_iterations =
      config_get_or<std::int64_t>(j, "max_iterations", cfg.max_iterations);
  return cfg;
}

Json uct_to_json(const UctConfig& cfg) {
  return Json{
      {"variant",
       cfg.variant == UctConfig::Variant::Ucb1 ? "ucb1" : "epsilon_greedy"},
      {"exploration", cfg.exploration},
      {"epsilon", cfg.epsilon},
      {"epsilon_decay", cfg.epsilon_decay},
      {"default_policy", cfg.default_policy == UctConfig::Policy::RandomPlayout
                             ? "random_playout"
                             : "heuristic"},
      {"random_tie_break", cfg.random_tie_break},
      {"seed", cfg.seed},
      {"max_iterations", cfg.max_iterations}};
}

PlayerSpec player_from_json(const Json& j, const Game* game) {
  std::string kind = config_get<std::string>(j, "kind");
  std::uint64_t budget = config_get_or<std::uint64_t>(j, "budget", 0);
  if (kind == "random") return PlayerSpec::random_player();
  if (kind == "uct") {
    Json sub = j.contains("uct") ? config_at(j, "uct") : Json::object();
    return PlayerSpec::uct_player(uct_from_json(sub, game), budget);
  }
  if (kind == "minimax_rollout") {
    return PlayerSpec::minimax_rollout(config_get<int>(j, "depth"), budget);
  }
  if (kind == "minimax_heuristic") {
    require(game != nullptr, ErrorCode::Config,
            "config: heuristic player needs a game to evaluate");
    return PlayerSpec::minimax_heuristic(
        config_get<int>(j, "depth"),
        LeafEvaluator::heuristic_fn(normalized_heuristic_fn(*game)), budget);
  }
  fail(ErrorCode::Config, "config: unknown player kind '" + kind + "'");
}

Json player_to_json(const PlayerSpec& p) {
  switch (p.kind) {
    case PlayerSpec::Kind::Random: return Json{{"kind", "random"}};
    case PlayerSpec::Kind::Uct:
      return Json{{"kind", "uct"}, {"budget", p.budget}, {"uct", uct_to_json(p.uct)}};
    case PlayerSpec::Kind::MinimaxRollout:
      return Json{{"kind", "minimax_rollout"}, {"depth", p.depth}, {"budget", p.budget}};
    case PlayerSpec::Kind::MinimaxHeuristic:
      return Json{{"kind", "minimax_heuristic"}, {"depth", p.depth}, {"budget", p.budget}};
  }
  fail(ErrorCode::InvalidArgument, "config: unknown player kind");
}

std::string player_label(const PlayerSpec& p) {
  switch (p.kind) {
    case PlayerSpec::Kind::Random: return "random";
    case PlayerSpec::Kind::Uct: {
      std::string label = p.uct.variant == UctConfig::Variant::Ucb1
                              ? "uct"
                              : "uct_eps";
      if (p.budget > 0) label += "_b" + std::to_string(p.budget);
      return label;
    }
    case PlayerSpec::Kind::MinimaxRollout:
      return "mm" + std::to_string(p.depth) + "r";
    case PlayerSpec::Kind::MinimaxHeuristic:
      return "mm" + std::to_string(p.depth) + "h";
  }
  return "unknown";
}

RankEvaluator evaluator_from_json(const Json& j, const Game* game) {
  std::string kind = config_get<std::string>(j, "kind");
  if (kind == "minimax_value") {
    std::string leaf = config_get_or<std::string>(j, "leaf", "heuristic");
    LeafEvaluator ev;
    if (leaf == "heuristic") {
      require(game != nullptr, ErrorCode::Config,
              "config: heuristic leaves need a game to evaluate");
      ev = LeafEvaluator::heuristic_fn(normalized_heuristic_fn(*game));
    } else if (leaf == "rollout") {
      ev = LeafEvaluator::rollout();
    } else if (leaf == "zero") {
      ev = LeafEvaluator::zero();
    } else {
      fail(ErrorCode::Config, "config: unknown field 'leaf' value '" + leaf + "'");
    }
    return RankEvaluator::minimax_value(config_get<int>(j, "depth"), std::move(ev));
  }
  if (kind == "playout_mean") {
    std::string policy = config_get_or<std::string>(j, "policy", "random");
    PlayoutPolicySpec ps = PlayoutPolicySpec::random();
    if (policy == "minimax") {
      ps = PlayoutPolicySpec::minimax(config_get_or<int>(j, "policy_depth", 2));
    } else {
      require(policy == "random", ErrorCode::Config,
              "config: unknown field 'policy' value '" + policy + "'");
    }
    return RankEvaluator::playout_mean(ps,
                                       config_get_or<int>(j, "n_playouts", 100));
  }
  if (kind == "raw_heuristic") {
    require(game != nullptr, ErrorCode::Config,
            "config: raw-heuristic evaluator needs a game");
    return RankEvaluator::raw_heuristic(normalized_heuristic_fn(*game));
  }
  fail(ErrorCode::Config, "config: unknown evaluator kind '" + kind + "'");
}

}  // namespace searchlab
