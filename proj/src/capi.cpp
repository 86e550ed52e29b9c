#include "searchlab.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "analysis.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "game.hpp"
#include "minimax.hpp"
#include "uct.hpp"

using namespace searchlab;

struct sl_game {
  std::shared_ptr<const Game> game;
};

struct sl_state {
  GameState state;
};

struct sl_uct {
  std::shared_ptr<const Game> game;  // keeps the search's game alive
  std::unique_ptr<UctSearch> search;
};

namespace {

thread_local std::string t_last_error = "";

template <typename Fn>
sl_status guarded(Fn&& fn) {
  try {
    fn();
    return SL_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return static_cast<sl_status>(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return SL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return SL_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return SL_ERR_INTERNAL;
  }
}

void need(bool ok, const char* what) {
  require(ok, ErrorCode::InvalidArgument, what);
}

LeafEvaluator leaf_from_name(const Game& g, const char* name) {
  need(name != nullptr, "leaf name is null");
  std::string kind = name;
  if (kind == "rollout") return LeafEvaluator::rollout();
  if (kind == "zero") return LeafEvaluator::zero();
  if (kind == "heuristic")
    return LeafEvaluator::heuristic_fn(normalized_heuristic_fn(g));
  fail(ErrorCode::InvalidArgument,
       "leaf must be \"rollout\", \"heuristic\", or \"zero\"");
}

}  // namespace

extern "C" {

const char* sl_last_error(void) { return t_last_error.c_str(); }

/* ---- games ----------------------------------------------------------- */

sl_status sl_game_create(const char* spec_json, sl_game** out) {
  return guarded([&] {
    need(spec_json && out, "sl_game_create: null argument");
    auto g = std::make_unique<sl_game>();
    g->game = make_game(parse_json(spec_json));
    *out = g.release();
  });
}

void sl_game_destroy(sl_game* game) { delete game; }

sl_status sl_game_name(const sl_game* game, char* buf, size_t cap) {
  return guarded([&] {
    need(game && buf && cap > 0, "sl_game_name: null argument");
    std::string name = game->game->name();
    size_t n = std::min(cap - 1, name.size());
    std::memcpy(buf, name.data(), n);
    buf[n] = '\0';
  });
}

/* ---- states ---------------------------------------------------------- */

sl_status sl_state_initial(const sl_game* game, sl_state** out) {
  return guarded([&] {
    need(game && out, "sl_state_initial: null argument");
    *out = new sl_state{game->game->initial_state()};
  });
}

sl_status sl_state_clone(const sl_state* state, sl_state** out) {
  return guarded([&] {
    need(state && out, "sl_state_clone: null argument");
    *out = new sl_state{state->state};
  });
}

void sl_state_destroy(sl_state* state) { delete state; }

sl_status sl_state_apply(const sl_game* game, sl_state* state,
                         int32_t action) {
  return guarded([&] {
    need(game && state, "sl_state_apply: null argument");
    state->state = game->game->apply_action(state->state, action);
  });
}

sl_status sl_state_legal_actions(const sl_game* game, const sl_state* state,
                                 int32_t* buf, size_t cap, size_t* n_out) {
  return guarded([&] {
    need(game && state && n_out, "sl_state_legal_actions: null argument");
    need(buf != nullptr || cap == 0,
         "sl_state_legal_actions: null buffer with nonzero capacity");
    std::vector<Action> legal = game->game->legal_actions(state->state);
    *n_out = legal.size();
    size_t n = std::min(cap, legal.size());
    for (size_t i = 0; i < n; ++i) buf[i] = legal[i];
  });
}

sl_status sl_state_is_terminal(const sl_game* game, const sl_state* state,
                               int32_t* out) {
  return guarded([&] {
    need(game && state && out, "sl_state_is_terminal: null argument");
    *out = game->game->is_terminal(state->state) ? 1 : 0;
  });
}

sl_status sl_state_terminal_reward(const sl_game* game, const sl_state* state,
                                   double* out) {
  return guarded([&] {
    need(game && state && out, "sl_state_terminal_reward: null argument");
    *out = game->game->terminal_reward(state->state);
  });
}

sl_status sl_state_to_move(const sl_game* game, const sl_state* state,
                           int32_t* out) {
  return guarded([&] {
    need(game && state && out, "sl_state_to_move: null argument");
    *out = game->game->to_move(state->state) == Player::Max ? 0 : 1;
  });
}

sl_status sl_state_ply(const sl_state* state, uint32_t* out) {
  return guarded([&] {
    need(state && out, "sl_state_ply: null argument");
    *out = state->state.ply;
  });
}

/* ---- Monte Carlo tree search ----------------------------------------- */

sl_status sl_uct_create(const sl_game* game, const sl_state* root,
                        const char* config_json, sl_uct** out) {
  return guarded([&] {
    need(game && root && config_json && out, "sl_uct_create: null argument");
    UctConfig cfg = uct_from_json(parse_json(config_json), game->game.get());
    auto u = std::make_unique<sl_uct>();
    u->game = game->game;
    u->search = std::make_unique<UctSearch>(u->game, root->state, cfg);
    *out = u.release();
  });
}

void sl_uct_destroy(sl_uct* search) { delete search; }

sl_status sl_uct_run(sl_uct* search, int64_t iterations) {
  return guarded([&] {
    need(search != nullptr, "sl_uct_run: null argument");
    search->search->run(iterations);
  });
}

sl_status sl_uct_root_value(const sl_uct* search, double* out) {
  return guarded([&] {
    need(search && out, "sl_uct_root_value: null argument");
    *out = search->search->root_value();
  });
}

sl_status sl_uct_recommend(const sl_uct* search, int32_t* out) {
  return guarded([&] {
    need(search && out, "sl_uct_recommend: null argument");
    *out = search->search->recommend_move();
  });
}

sl_status sl_uct_iterations(const sl_uct* search, int64_t* out) {
  return guarded([&] {
    need(search && out, "sl_uct_iterations: null argument");
    *out = search->search->iterations();
  });
}

sl_status sl_uct_stored_nodes(const sl_uct* search, int64_t* out) {
  return guarded([&] {
    need(search && out, "sl_uct_stored_nodes: null argument");
    *out = search->search->stored_nodes();
  });
}

/* ---- depth-limited search --------------------------------------------- */

sl_status sl_minimax(const sl_game* game, const sl_state* state, int depth,
                     const char* leaf, uint64_t seed, int use_pruning,
                     double* value_out, int32_t* best_action_out,
                     uint64_t* nodes_out) {
  return guarded([&] {
    need(game && state, "sl_minimax: null argument");
    LeafEvaluator ev = leaf_from_name(*game->game, leaf);
    RngStream rng(seed);
    SearchReport rep = minimax(*game->game, state->state, depth, ev, rng,
                               use_pruning != 0);
    if (value_out) *value_out = rep.value;
    if (best_action_out) *best_action_out = rep.best_action;
    if (nodes_out) *nodes_out = rep.nodes;
  });
}

/* ---- closed-form running-time models ---------------------------------- */

sl_status sl_model_two_step(int d1, int d2, double a, double b, double C,
                            double* out) {
  return guarded([&] {
    need(out != nullptr, "sl_model_two_step: null output");
    *out = model_two_step(d1, d2, a, b, C);
  });
}

sl_status sl_model_k_step(const int* gaps, size_t n, double a, double b,
                          double C, double* out) {
  return guarded([&] {
    need(gaps && out, "sl_model_k_step: null argument");
    *out = model_k_step(std::span<const int>(gaps, n), a, b, C);
  });
}

sl_status sl_catch_up_visits(double value, int64_t iterations, double tau,
                             double* out) {
  return guarded([&] {
    need(out != nullptr, "sl_catch_up_visits: null output");
    *out = catch_up_visits(value, iterations, tau);
  });
}

sl_status sl_catch_up_visits_int(double value, int64_t iterations, double tau,
                                 int64_t* out) {
  return guarded([&] {
    need(out != nullptr, "sl_catch_up_visits_int: null output");
    *out = catch_up_visits_int(value, iterations, tau);
  });
}

sl_status sl_scenario_a_visits(double p, double epsilon, double tau,
                               double* out) {
  return guarded([&] {
    need(out != nullptr, "sl_scenario_a_visits: null output");
    *out = scenario_a_visits(p, epsilon, tau);
  });
}

sl_status sl_scenario_b_total(double p, double q, double epsilon,
                              double catchup, double* out) {
  return guarded([&] {
    need(out != nullptr, "sl_scenario_b_total: null output");
    *out = scenario_b_total(p, q, epsilon, catchup);
  });
}

sl_status sl_tau_convergence_point(const double* trace, size_t n, double tau,
                                   int64_t* out) {
  return guarded([&] {
    need(trace && out, "sl_tau_convergence_point: null argument");
    std::optional<std::int64_t> t =
        tau_convergence_point(std::span<const double>(trace, n), tau);
    *out = t.value_or(0);
  });
}

sl_status sl_fit_runtime_model(const int* d1, const int* d2,
                               const double* mean, size_t n, double* a_out,
                               double* b_out, double* C_out, double* rms_out) {
  return guarded([&] {
    need(d1 && d2 && mean && a_out && b_out && C_out,
         "sl_fit_runtime_model: null argument");
    std::vector<Observation> obs(n);
    for (size_t i = 0; i < n; ++i) obs[i] = {d1[i], d2[i], mean[i]};
    FitResult fit = fit_runtime_model(obs);
    *a_out = fit.a;
    *b_out = fit.b;
    *C_out = fit.C;
    if (rms_out) *rms_out = fit.rms;
  });
}

/* ---- experiments ------------------------------------------------------ */

sl_status sl_run_experiment(const char* command, const char* config_json,
                            const char* out_dir, int jobs,
                            int use_seed_override, uint64_t seed_override,
                            char** summary_json_out) {
  return guarded([&] {
    need(command && config_json && out_dir && summary_json_out,
         "sl_run_experiment: null argument");
    std::optional<std::uint64_t> seed;
    if (use_seed_override) seed = seed_override;
    ExperimentOutcome outcome = run_experiment(
        command, parse_json(config_json), out_dir, jobs, seed);
    std::string text = outcome.summary.dump();
    char* copy = static_cast<char*>(::operator new(text.size() + 1));
    std::memcpy(copy, text.c_str(), text.size() + 1);
    *summary_json_out = copy;
  });
}

void sl_string_free(char* s) { ::operator delete(s); }

}  // extern "C"
