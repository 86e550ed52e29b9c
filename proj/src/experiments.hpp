#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace searchlab {

struct ExperimentOutcome {
  std::vector<std::filesystem::path> outputs;
  Json summary;
};

// Runs one named experiment (converge-sweep, scenario-compare, model-fit,
// tournament, rank-corr, trap-scan) from its JSON config. Result files are
// written atomically under out_dir; a failing run leaves nothing at the
// final paths. Every emitted number is a deterministic function of (config,
// seed), regardless of the worker count.
ExperimentOutcome run_experiment(
    const std::string& command, const Json& config,
    const std::filesystem::path& out_dir, int jobs = 1,
    std::optional<std::uint64_t> seed_override = std::nullopt);

// Stable text form used for every number in emitted CSV files.
std::string format_double(double v);

// Runs fn(i) for i in [0, n) on up to `jobs` worker threads (<= 0 picks the
// hardware thread count). Rethrows the first task failure after joining.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn);

// Writes content to path via a temp file and rename, creating parent
// directories as needed.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// One search run on a synthetic tree, reduced to what the sweeps report.
struct ConvergenceRun {
  std::optional<std::int64_t> t_star;  // 1-based; empty when not converged
  bool preference_resolved = false;    // both root arms tried, values differ
  bool favorable = false;  // first resolved preference picked action 0
  // Fraction of iterations entering root arm 1 within the first t_star
  // iterations; measured over the whole run when it never converged. The
  // window matters: after convergence play concentrates on the settled arm,
  // which would dilute the quantity the sweeps compare across cells.
  double share_right = 0.0;
  double final_value = 0.0;
};

// Runs `iterations` search iterations from the tree's root and evaluates the
// tau-convergence point of the root-value trace. The trace itself (v(t) per
// iteration) is handed out when trace_out is given.
ConvergenceRun run_convergence(const std::shared_ptr<const Game>& tree,
                               const UctConfig& cfg, std::int64_t iterations,
                               double tau, bool classify_preference,
                               std::vector<double>* trace_out = nullptr);

}  // namespace searchlab
