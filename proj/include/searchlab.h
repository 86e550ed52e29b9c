#ifndef SEARCHLAB_H
#define SEARCHLAB_H

/* C interface to the searchlab engine.
 *
 * Every function returns an sl_status; 0 means success and any other value
 * identifies the failure class. After a failing call, sl_last_error() holds
 * a human-readable message for the calling thread until its next failure.
 * Objects come out of _create functions as opaque handles and are released
 * with the matching _destroy; destroy functions ignore NULL.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SEARCHLAB_API __declspec(dllexport)
#else
#define SEARCHLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t sl_status;

enum {
  SL_OK = 0,
  SL_ERR_INVALID_ARGUMENT = 1, /* bad parameter or spec field */
  SL_ERR_ILLEGAL_ACTION = 2,   /* action not legal in the given state */
  SL_ERR_NOT_TERMINAL = 3,     /* terminal-only query on a live state */
  SL_ERR_WRONG_GAME = 4,       /* state belongs to another game instance */
  SL_ERR_CONFIG = 5,           /* malformed or inconsistent JSON config */
  SL_ERR_IO = 6,               /* filesystem failure */
  SL_ERR_UNDEFINED = 7,        /* result undefined for these inputs */
  SL_ERR_BUDGET_TOO_SMALL = 8, /* budget below one evaluation per move */
  SL_ERR_INTERNAL = 100        /* unexpected failure; see sl_last_error() */
};

/* Message for this thread's most recent failing call; never NULL. */
SEARCHLAB_API const char* sl_last_error(void);

typedef struct sl_game sl_game;
typedef struct sl_state sl_state;
typedef struct sl_uct sl_uct;

/* ---- games ----------------------------------------------------------- */

/* Builds a game from a JSON spec, e.g. {"kind":"builtin"} for the board
 * game or {"kind":"kstep","depth":20,"critical_depths":[4,8],"seed":1}. */
SEARCHLAB_API sl_status sl_game_create(const char* spec_json, sl_game** out);
SEARCHLAB_API void sl_game_destroy(sl_game* game);

/* Copies the game's display name into buf (NUL-terminated, truncating). */
SEARCHLAB_API sl_status sl_game_name(const sl_game* game, char* buf,
                                     size_t cap);

/* ---- states ---------------------------------------------------------- */

SEARCHLAB_API sl_status sl_state_initial(const sl_game* game, sl_state** out);
SEARCHLAB_API sl_status sl_state_clone(const sl_state* state, sl_state** out);
SEARCHLAB_API void sl_state_destroy(sl_state* state);

/* Applies one action in place. */
SEARCHLAB_API sl_status sl_state_apply(const sl_game* game, sl_state* state,
                                       int32_t action);

/* Writes up to cap legal actions into buf and the true count into n_out.
 * buf may be NULL when cap is 0 (count-only query). */
SEARCHLAB_API sl_status sl_state_legal_actions(const sl_game* game,
                                               const sl_state* state,
                                               int32_t* buf, size_t cap,
                                               size_t* n_out);

SEARCHLAB_API sl_status sl_state_is_terminal(const sl_game* game,
                                             const sl_state* state,
                                             int32_t* out);

/* Reward from the first player's perspective; fails on a live state. */
SEARCHLAB_API sl_status sl_state_terminal_reward(const sl_game* game,
                                                 const sl_state* state,
                                                 double* out);

/* 0 when the maximizing (first) player moves, 1 otherwise. */
SEARCHLAB_API sl_status sl_state_to_move(const sl_game* game,
                                         const sl_state* state, int32_t* out);

SEARCHLAB_API sl_status sl_state_ply(const sl_state* state, uint32_t* out);

/* ---- Monte Carlo tree search ----------------------------------------- */

/* config_json mirrors the "uct" config object, e.g.
 * {"variant":"ucb1","exploration":0.4,"seed":7}. Pass "{}" for defaults. */
SEARCHLAB_API sl_status sl_uct_create(const sl_game* game,
                                      const sl_state* root,
                                      const char* config_json, sl_uct** out);
SEARCHLAB_API void sl_uct_destroy(sl_uct* search);

SEARCHLAB_API sl_status sl_uct_run(sl_uct* search, int64_t iterations);
SEARCHLAB_API sl_status sl_uct_root_value(const sl_uct* search, double* out);
SEARCHLAB_API sl_status sl_uct_recommend(const sl_uct* search, int32_t* out);
SEARCHLAB_API sl_status sl_uct_iterations(const sl_uct* search, int64_t* out);
SEARCHLAB_API sl_status sl_uct_stored_nodes(const sl_uct* search,
                                            int64_t* out);

/* ---- depth-limited search --------------------------------------------- */

/* leaf is "rollout", "heuristic", or "zero". Unpruned search when
 * use_pruning is 0, so nodes_out is the full census. Any of the three
 * output pointers may be NULL. */
SEARCHLAB_API sl_status sl_minimax(const sl_game* game, const sl_state* state,
                                   int depth, const char* leaf, uint64_t seed,
                                   int use_pruning, double* value_out,
                                   int32_t* best_action_out,
                                   uint64_t* nodes_out);

/* ---- closed-form running-time models ---------------------------------- */

SEARCHLAB_API sl_status sl_model_two_step(int d1, int d2, double a, double b,
                                          double C, double* out);
SEARCHLAB_API sl_status sl_model_k_step(const int* gaps, size_t n, double a,
                                        double b, double C, double* out);
SEARCHLAB_API sl_status sl_catch_up_visits(double value, int64_t iterations,
                                           double tau, double* out);
SEARCHLAB_API sl_status sl_catch_up_visits_int(double value,
                                               int64_t iterations, double tau,
                                               int64_t* out);
SEARCHLAB_API sl_status sl_scenario_a_visits(double p, double epsilon,
                                             double tau, double* out);
SEARCHLAB_API sl_status sl_scenario_b_total(double p, double q, double epsilon,
                                            double catchup, double* out);

/* First index t (1-based) from which the trace stays >= tau; 0 when it
 * never does. Fails on an empty trace. */
SEARCHLAB_API sl_status sl_tau_convergence_point(const double* trace, size_t n,
                                                 double tau, int64_t* out);

/* Least-squares fit of the two-step model to (d1, d2, mean) observations.
 * Needs at least four distinct (d1, d2) pairs. rms_out may be NULL. */
SEARCHLAB_API sl_status sl_fit_runtime_model(const int* d1, const int* d2,
                                             const double* mean, size_t n,
                                             double* a_out, double* b_out,
                                             double* C_out, double* rms_out);

/* ---- experiments ------------------------------------------------------ */

/* Runs one named experiment command (converge-sweep, scenario-compare,
 * model-fit, tournament, rank-corr, trap-scan) from a JSON config, writing
 * result files under out_dir. jobs <= 0 selects the hardware thread count.
 * When use_seed_override is nonzero, seed_override replaces the config's
 * "seed". On success *summary_json_out is a NUL-terminated JSON summary the
 * caller releases with sl_string_free. */
SEARCHLAB_API sl_status sl_run_experiment(const char* command,
                                          const char* config_json,
                                          const char* out_dir, int jobs,
                                          int use_seed_override,
                                          uint64_t seed_override,
                                          char** summary_json_out);

SEARCHLAB_API void sl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SEARCHLAB_H */
