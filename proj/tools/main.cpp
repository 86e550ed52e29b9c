// Command line driver. All engine work goes through the public C API in
// searchlab.h; this file only parses arguments, reads the config file, and
// reports results.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "searchlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  int jobs = 1;
  std::string seed;  // optional; decimal uint64
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path,
                  "JSON config file for this command")
      ->required();
  cmd->add_option("-o,--out", args.out_dir,
                  "directory for result files (default: out)");
  cmd->add_option("-j,--jobs", args.jobs,
                  "worker threads; 0 = all hardware threads (default: 1)");
  cmd->add_option("-s,--seed", args.seed,
                  "master seed, overriding the config's \"seed\" field");
}

int run_command(const char* name, const CommonArgs& args) {
  std::ifstream in(args.config_path, std::ios::binary);
  if (!in.good()) {
    std::fprintf(stderr, "error: cannot open config file '%s'\n",
                 args.config_path.c_str());
    return kExitConfig;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string config = buf.str();

  int use_override = 0;
  uint64_t seed_override = 0;
  if (!args.seed.empty()) {
    try {
      size_t used = 0;
      seed_override = std::stoull(args.seed, &used);
      if (used != args.seed.size()) throw std::invalid_argument(args.seed);
    } catch (const std::exception&) {
      std::fprintf(stderr, "error: --seed must be a decimal integer\n");
      return kExitConfig;
    }
    use_override = 1;
  }

  char* summary = nullptr;
  sl_status st =
      sl_run_experiment(name, config.c_str(), args.out_dir.c_str(), args.jobs,
                        use_override, seed_override, &summary);
  if (st != SL_OK) {
    std::fprintf(stderr, "error: %s\n", sl_last_error());
    return st == SL_ERR_CONFIG ? kExitConfig : kExitRuntime;
  }
  std::printf("%s\n", summary);
  sl_string_free(summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "searchlab: sample-based vs depth-limited game tree search, measured "
      "on synthetic trees and a small board game"};
  app.require_subcommand(1);

  CommonArgs args;

  CLI::App* converge = app.add_subcommand(
      "converge-sweep",
      "Sweep tree difficulty and record when the root value trace settles "
      "above tau.\n"
      "Config: tree_kind \"kstep\" (grids d1, d2) or \"dual\" (grids x2, "
      "y2), depth,\n"
      "reps, tau, max_iterations, uct{...}, dump_traces.\n"
      "Writes converge_kstep.csv: d1, d2, mean_t (mean settle iteration "
      "over converged\n"
      "runs), stddev, non_converged; or converge_dual.csv: x2, y2, "
      "favorable_count,\n"
      "unfavorable_count, mean_t_favorable, mean_t_unfavorable, "
      "non_converged,\n"
      "mean_share_right (mean fraction of iterations entering the right "
      "root subtree).");
  add_common(converge, args);

  CLI::App* scenario = app.add_subcommand(
      "scenario-compare",
      "Compare predicted and simulated settle times for the two fixed root "
      "shapes.\n"
      "Config: shape \"A\" or \"B\", subtree_depth, grids p, epsilon (and q "
      "for B), tau,\n"
      "reps, max_iterations, catchup, uct{...}.\n"
      "Writes scenario_a.csv: p, epsilon, predicted, simulated_mean, ratio "
      "(simulated /\n"
      "predicted), non_converged; scenario_b.csv adds a q column.");
  add_common(scenario, args);

  CLI::App* fit = app.add_subcommand(
      "model-fit",
      "Fit the two-step running-time model to observed mean settle times.\n"
      "Config: observations [{d1, d2, mean}, ...] or input_csv (a "
      "converge_kstep.csv).\n"
      "Writes model_fit.json: a, b, C, rms, residuals, n.");
  add_common(fit, args);

  CLI::App* tournament = app.add_subcommand(
      "tournament",
      "Play an even-length match between two configured players, first "
      "move\n"
      "alternating; paired games share any random opening.\n"
      "Config: game{...}, player_a{...}, player_b{...}, m, opening_plies.\n"
      "Writes match.csv: player_a, player_b, budget_a, budget_b, m, "
      "success_a,\n"
      "success_b (wins + draws/2), wins, draws, losses (all from A's side); "
      "and\n"
      "games.jsonl, one record per game.");
  add_common(tournament, args);

  CLI::App* rank = app.add_subcommand(
      "rank-corr",
      "Rank moves with candidate evaluators against a reference on sampled\n"
      "positions and report rank correlations.\n"
      "Config: game{...}, positions, min_ply, max_ply, eps_tie, "
      "reference{...},\n"
      "candidates [{...}, ...].\n"
      "Writes rank_scatter.csv: position, candidate, move, rank_ref, "
      "rank_cand; and\n"
      "rank_summary.csv: candidate, n_defined, n_undefined, mean_rho "
      "(undefined means\n"
      "one side ranked every move equal).");
  add_common(rank, args);

  CLI::App* trap = app.add_subcommand(
      "trap-scan",
      "Scan sampled positions for moves that look good now but concede at "
      "least\n"
      "delta of evaluation within k replies.\n"
      "Config: game{...}, positions, min_ply, max_ply, delta, k, h{...}.\n"
      "Writes traps.jsonl: one record per position with the trap move and "
      "its\n"
      "forced witness line when one exists.");
  add_common(trap, args);

  CLI11_PARSE(app, argc, argv);

  if (converge->parsed()) return run_command("converge-sweep", args);
  if (scenario->parsed()) return run_command("scenario-compare", args);
  if (fit->parsed()) return run_command("model-fit", args);
  if (tournament->parsed()) return run_command("tournament", args);
  if (rank->parsed()) return run_command("rank-corr", args);
  if (trap->parsed()) return run_command("trap-scan", args);
  return kExitConfig;
}
