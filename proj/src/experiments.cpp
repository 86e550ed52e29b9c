#include "experiments.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "analysis.hpp"

namespace searchlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& content) {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::Io,
            "experiment: cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    require(out.good(), ErrorCode::Io,
            "experiment: short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  require(!ec, ErrorCode::Io,
          "experiment: cannot move results to '" + path.string() + "'");
}

void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t workers =
      jobs > 0 ? static_cast<std::size_t>(jobs)
               : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n || abort.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        abort.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

ConvergenceRun run_convergence(const std::shared_ptr<const Game>& tree,
                               const UctConfig& cfg, std::int64_t iterations,
                               double tau, bool classify_preference,
                               std::vector<double>* trace_out) {
  require(iterations >= 1, ErrorCode::InvalidArgument,
          "experiment: need at least one iteration");
  UctSearch search(tree, tree->initial_state(), cfg);
  std::vector<double> trace(static_cast<std::size_t>(iterations));
  std::vector<std::int64_t> right_cum(static_cast<std::size_t>(iterations));
  ConvergenceRun out;
  std::int64_t right = 0;
  for (std::int64_t t = 0; t < iterations; ++t) {
    search.run_iteration();
    trace[static_cast<std::size_t>(t)] = search.root_value();
    if (search.last_root_action() == 1) ++right;
    right_cum[static_cast<std::size_t>(t)] = right;
    if (classify_preference && !out.preference_resolved) {
      std::vector<UctSearch::RootArm> arms = search.root_arms();
      if (arms.size() >= 2 && arms[0].n > 0 && arms[1].n > 0 &&
          arms[0].q != arms[1].q) {
        out.preference_resolved = true;
        out.favorable = arms[0].q > arms[1].q;
      }
    }
  }
  out.t_star = tau_convergence_point(trace, tau);
  out.final_value = trace.back();
  std::int64_t window = out.t_star ? *out.t_star : iterations;
  out.share_right = static_cast<double>(right_cum[window - 1]) /
                    static_cast<double>(window);
  if (trace_out) *trace_out = std::move(trace);
  return out;
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? std::numeric_limits<double>::quiet_NaN()
                    : s / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

std::string trace_csv(const std::vector<double>& trace) {
  std::string out = "t,v_t\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    out += std::to_string(t + 1);
    out += ',';
    out += format_double(trace[t]);
    out += '\n';
  }
  return out;
}

// ---- converge-sweep ------------------------------------------------------

ExperimentOutcome sweep_kstep(const Json& cfg,
                              const std::filesystem::path& out_dir, int jobs,
                              std::uint64_t master) {
  int depth = config_get_or<int>(cfg, "depth", 20);
  std::vector<int> d1s = config_get<std::vector<int>>(cfg, "d1");
  std::vector<int> d2s = config_get<std::vector<int>>(cfg, "d2");
  int reps = config_get_or<int>(cfg, "reps", 100);
  double tau = config_get_or<double>(cfg, "tau", 0.7);
  auto T = config_get_or<std::int64_t>(cfg, "max_iterations", 131072);
  int dump = config_get_or<int>(cfg, "dump_traces", 0);
  require(reps >= 1, ErrorCode::Config, "config: field 'reps' must be >= 1");
  UctConfig base = uct_from_json(
      cfg.contains("uct") ? config_at(cfg, "uct") : Json::object(), nullptr);

  struct Cell {
    int d1, d2;
  };
  std::vector<Cell> cells;
  for (int d1 : d1s)
    for (int d2 : d2s) cells.push_back({d1, d2});
  std::vector<std::vector<ConvergenceRun>> runs(
      cells.size(), std::vector<ConvergenceRun>(reps));
  std::vector<std::filesystem::path> outputs;
  std::mutex outputs_mu;

  parallel_for(cells.size() * static_cast<std::size_t>(reps), jobs,
               [&](std::size_t idx) {
                 std::size_t ci = idx / reps;
                 int rep = static_cast<int>(idx % reps);
                 Cell c = cells[ci];
                 KStepSpec spec;
                 spec.depth = depth;
                 spec.critical_depths = {c.d1, c.d2};
                 spec.correct_actions = {0, 0};
                 spec.seed = derive_seed(
                     master, {1, static_cast<std::uint64_t>(c.d1),
                              static_cast<std::uint64_t>(c.d2),
                              static_cast<std::uint64_t>(rep)});
                 UctConfig uc = base;
                 uc.seed = derive_seed(
                     master, {2, static_cast<std::uint64_t>(c.d1),
                              static_cast<std::uint64_t>(c.d2),
                              static_cast<std::uint64_t>(rep)});
                 std::vector<double> trace;
                 runs[ci][rep] =
                     run_convergence(build_kstep_tree(spec), uc, T, tau, false,
                                     rep < dump ? &trace : nullptr);
                 if (rep < dump) {
                   std::filesystem::path p =
                       out_dir / ("trace_d1_" + std::to_string(c.d1) + "_d2_" +
                                  std::to_string(c.d2) + "_rep_" +
                                  std::to_string(rep) + ".csv");
                   atomic_write(p, trace_csv(trace));
                   std::lock_guard<std::mutex> lock(outputs_mu);
                   outputs.push_back(p);
                 }
               });

  std::string csv = "d1,d2,mean_t,stddev,non_converged\n";
  Json cells_json = Json::array();
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<double> ts;
    int misses = 0;
    for (const ConvergenceRun& r : runs[ci]) {
      if (r.t_star)
        ts.push_back(static_cast<double>(*r.t_star));
      else
        ++misses;
    }
    double m = mean_of(ts), sd = stddev_of(ts);
    csv += std::to_string(cells[ci].d1) + ',' + std::to_string(cells[ci].d2) +
           ',' + format_double(m) + ',' + format_double(sd) + ',' +
           std::to_string(misses) + '\n';
    cells_json.push_back(Json{{"d1", cells[ci].d1},
                              {"d2", cells[ci].d2},
                              {"mean_t", m},
                              {"stddev", sd},
                              {"non_converged", misses},
                              {"reps", reps}});
  }
  std::filesystem::path csv_path = out_dir / "converge_kstep.csv";
  atomic_write(csv_path, csv);
  outputs.insert(outputs.begin(), csv_path);
  return {std::move(outputs),
          Json{{"command", "converge-sweep"},
               {"tree_kind", "kstep"},
               {"cells", cells_json}}};
}

ExperimentOutcome sweep_dual(const Json& cfg,
                             const std::filesystem::path& out_dir, int jobs,
                             std::uint64_t master) {
  int depth = config_get_or<int>(cfg, "depth", 20);
  std::vector<int> x2s = config_get<std::vector<int>>(cfg, "x2");
  std::vector<int> y2s = config_get<std::vector<int>>(cfg, "y2");
  int y1 = config_get_or<int>(cfg, "y1", 1);
  int reps = config_get_or<int>(cfg, "reps", 100);
  double tau = config_get_or<double>(cfg, "tau", 0.7);
  auto T = config_get_or<std::int64_t>(cfg, "max_iterations", 131072);
  double mean_a = config_get_or<double>(cfg, "leaf_mean_a", 0.0);
  double mean_b = config_get_or<double>(cfg, "leaf_mean_b", 0.5);
  require(reps >= 1, ErrorCode::Config, "config: field 'reps' must be >= 1");
  UctConfig base = uct_from_json(
      cfg.contains("uct") ? config_at(cfg, "uct") : Json::object(), nullptr);

  struct Cell {
    int x2, y2;
  };
  std::vector<Cell> cells;
  for (int x2 : x2s)
    for (int y2 : y2s) cells.push_back({x2, y2});
  std::vector<std::vector<ConvergenceRun>> runs(
      cells.size(), std::vector<ConvergenceRun>(reps));

  parallel_for(cells.size() * static_cast<std::size_t>(reps), jobs,
               [&](std::size_t idx) {
                 std::size_t ci = idx / reps;
                 int rep = static_cast<int>(idx % reps);
                 Cell c = cells[ci];
                 DualSpec spec;
                 spec.depth = depth;
                 spec.max_criticals = {0, c.x2};
                 spec.min_criticals = {y1, c.y2};
                 spec.leaf_mean_a = mean_a;
                 spec.leaf_mean_b = mean_b;
                 spec.seed = derive_seed(
                     master, {3, static_cast<std::uint64_t>(c.x2),
                              static_cast<std::uint64_t>(c.y2),
                              static_cast<std::uint64_t>(rep)});
                 UctConfig uc = base;
                 uc.seed = derive_seed(
                     master, {4, static_cast<std::uint64_t>(c.x2),
                              static_cast<std::uint64_t>(c.y2),
                              static_cast<std::uint64_t>(rep)});
                 runs[ci][rep] =
                     run_convergence(build_dual_tree(spec), uc, T, tau, true);
               });

  std::string csv =
      "x2,y2,favorable_count,unfavorable_count,mean_t_favorable,"
      "mean_t_unfavorable,non_converged,mean_share_right\n";
  Json cells_json = Json::array();
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<double> fav, unfav, shares;
    int misses = 0;
    int n_fav = 0, n_unfav = 0;
    for (const ConvergenceRun& r : runs[ci]) {
      shares.push_back(r.share_right);
      if (r.preference_resolved) (r.favorable ? n_fav : n_unfav) += 1;
      if (!r.t_star) {
        ++misses;
        continue;
      }
      if (!r.preference_resolved) continue;
      (r.favorable ? fav : unfav).push_back(static_cast<double>(*r.t_star));
    }
    double mf = mean_of(fav), mu = mean_of(unfav), ms = mean_of(shares);
    csv += std::to_string(cells[ci].x2) + ',' + std::to_string(cells[ci].y2) +
           ',' + std::to_string(n_fav) + ',' + std::to_string(n_unfav) + ',' +
           format_double(mf) + ',' + format_double(mu) + ',' +
           std::to_string(misses) + ',' + format_double(ms) + '\n';
    cells_json.push_back(Json{{"x2", cells[ci].x2},
                              {"y2", cells[ci].y2},
                              {"favorable_count", n_fav},
                              {"unfavorable_count", n_unfav},
                              {"mean_t_favorable", mf},
                              {"mean_t_unfavorable", mu},
                              {"non_converged", misses},
                              {"mean_share_right", ms},
                              {"reps", reps}});
  }
  std::filesystem::path csv_path = out_dir / "converge_dual.csv";
  atomic_write(csv_path, csv);
  return {{csv_path},
          Json{{"command", "converge-sweep"},
               {"tree_kind", "dual"},
               {"cells", cells_json}}};
}

ExperimentOutcome cmd_converge_sweep(const Json& cfg,
                                     const std::filesystem::path& out_dir,
                                     int jobs, std::uint64_t master) {
  std::string kind = config_get_or<std::string>(cfg, "tree_kind", "kstep");
  if (kind == "kstep") return sweep_kstep(cfg, out_dir, jobs, master);
  if (kind == "dual") return sweep_dual(cfg, out_dir, jobs, master);
  fail(ErrorCode::Config, "config: unknown field 'tree_kind' value '" + kind + "'");
}

// ---- scenario-compare ----------------------------------------------------

ExperimentOutcome cmd_scenario_compare(const Json& cfg,
                                       const std::filesystem::path& out_dir,
                                       int jobs, std::uint64_t master) {
  std::string shape = config_get_or<std::string>(cfg, "shape", "A");
  require(shape == "A" || shape == "B", ErrorCode::Config,
          "config: field 'shape' must be \"A\" or \"B\"");
  int subtree_depth = config_get_or<int>(cfg, "subtree_depth", 8);
  std::vector<double> ps = config_get<std::vector<double>>(cfg, "p");
  std::vector<double> eps_grid = config_get<std::vector<double>>(cfg, "epsilon");
  std::vector<double> qs =
      shape == "B" ? config_get<std::vector<double>>(cfg, "q")
                   : std::vector<double>{0.0};
  int reps = config_get_or<int>(cfg, "reps", 1000);
  double tau = config_get_or<double>(cfg, "tau", 0.7);
  auto T = config_get_or<std::int64_t>(cfg, "max_iterations", 4096);
  double catchup = config_get_or<double>(cfg, "catchup", 10.0);
  require(reps >= 1, ErrorCode::Config, "config: field 'reps' must be >= 1");
  UctConfig base = uct_from_json(
      cfg.contains("uct") ? config_at(cfg, "uct") : Json::object(), nullptr);
  base.variant = UctConfig::Variant::EpsilonGreedy;

  struct Cell {
    double p, q, eps;
    double predicted;
  };
  std::vector<Cell> cells;
  for (double p : ps)
    for (double q : qs)
      for (double e : eps_grid) {
        double predicted = shape == "A"
                               ? scenario_a_visits(p, e, tau)
                               : scenario_b_total(p, q, e, catchup);
        cells.push_back({p, q, e, predicted});
      }
  std::vector<std::vector<std::optional<std::int64_t>>> runs(
      cells.size(), std::vector<std::optional<std::int64_t>>(reps));

  parallel_for(
      cells.size() * static_cast<std::size_t>(reps), jobs,
      [&](std::size_t idx) {
        std::size_t ci = idx / reps;
        int rep = static_cast<int>(idx % reps);
        Cell c = cells[ci];
        ScenarioSpec spec;
        spec.kind = shape[0];
        spec.subtree_depth = subtree_depth;
        spec.p = c.p;
        spec.q = c.q;
        spec.seed =
            derive_seed(master, {5, bits(c.p), bits(c.q), bits(c.eps),
                                 static_cast<std::uint64_t>(rep)});
        UctConfig uc = base;
        uc.epsilon = c.eps;
        uc.seed = derive_seed(master, {6, bits(c.p), bits(c.q), bits(c.eps),
                                       static_cast<std::uint64_t>(rep)});
        runs[ci][rep] =
            run_convergence(build_scenario_tree(spec), uc, T, tau, false)
                .t_star;
      });

  std::string csv = shape == "A"
                        ? "p,epsilon,predicted,simulated_mean,ratio,"
                          "non_converged\n"
                        : "p,q,epsilon,predicted,simulated_mean,ratio,"
                          "non_converged\n";
  Json cells_json = Json::array();
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<double> ts;
    int misses = 0;
    for (const std::optional<std::int64_t>& t : runs[ci]) {
      if (t)
        ts.push_back(static_cast<double>(*t));
      else
        ++misses;
    }
    double m = mean_of(ts);
    double ratio = m / cells[ci].predicted;
    csv += format_double(cells[ci].p) + ',';
    if (shape == "B") csv += format_double(cells[ci].q) + ',';
    csv += format_double(cells[ci].eps) + ',' +
           format_double(cells[ci].predicted) + ',' + format_double(m) + ',' +
           format_double(ratio) + ',' + std::to_string(misses) + '\n';
    Json cell{{"p", cells[ci].p},
              {"epsilon", cells[ci].eps},
              {"predicted", cells[ci].predicted},
              {"simulated_mean", m},
              {"ratio", ratio},
              {"non_converged", misses},
              {"reps", reps}};
    if (shape == "B") cell["q"] = cells[ci].q;
    cells_json.push_back(cell);
  }
  std::filesystem::path csv_path =
      out_dir / (shape == "A" ? "scenario_a.csv" : "scenario_b.csv");
  atomic_write(csv_path, csv);
  return {{csv_path},
          Json{{"command", "scenario-compare"},
               {"shape", shape},
               {"cells", cells_json}}};
}

// ---- model-fit -------------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Observation> observations_from_csv(const std::filesystem::path& p) {
  std::ifstream in(p);
  require(in.good(), ErrorCode::Config,
          "config: cannot open input_csv '" + p.string() + "'");
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::Config,
          "config: input_csv is empty");
  std::vector<std::string> header = split_csv_line(line);
  int c_d1 = -1, c_d2 = -1, c_mean = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "d1") c_d1 = static_cast<int>(i);
    if (header[i] == "d2") c_d2 = static_cast<int>(i);
    if (header[i] == "mean_t") c_mean = static_cast<int>(i);
  }
  require(c_d1 >= 0 && c_d2 >= 0 && c_mean >= 0, ErrorCode::Config,
          "config: input_csv needs columns d1, d2, mean_t");
  std::vector<Observation> obs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv_line(line);
    if (static_cast<int>(f.size()) <= std::max({c_d1, c_d2, c_mean})) continue;
    double m = std::strtod(f[c_mean].c_str(), nullptr);
    if (!(m > 0.0) || !std::isfinite(m)) continue;
    obs.push_back({std::stoi(f[c_d1]), std::stoi(f[c_d2]), m});
  }
  return obs;
}

ExperimentOutcome cmd_model_fit(const Json& cfg,
                                const std::filesystem::path& out_dir) {
  std::vector<Observation> obs;
  if (cfg.contains("observations")) {
    for (const Json& o : config_at(cfg, "observations")) {
      obs.push_back({config_get<int>(o, "d1"), config_get<int>(o, "d2"),
                     config_get<double>(o, "mean")});
    }
  } else if (cfg.contains("input_csv")) {
    obs = observations_from_csv(config_get<std::string>(cfg, "input_csv"));
  } else {
    fail(ErrorCode::Config,
         "config: model-fit needs field 'observations' or 'input_csv'");
  }
  FitResult fit = [&] {
    try {
      return fit_runtime_model(obs);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidArgument)
        fail(ErrorCode::Config, std::string("config: ") + e.what());
      throw;
    }
  }();
  Json report{{"a", fit.a},         {"b", fit.b},
              {"C", fit.C},         {"rms", fit.rms},
              {"residuals", fit.residuals},
              {"n", obs.size()}};
  std::filesystem::path out = out_dir / "model_fit.json";
  atomic_write(out, report.dump(2) + "\n");
  Json summary = report;
  summary["command"] = "model-fit";
  return {{out}, summary};
}

// ---- tournament ------------------------------------------------------------

ExperimentOutcome cmd_tournament(const Json& cfg,
                                 const std::filesystem::path& out_dir,
                                 std::uint64_t master) {
  Json game_spec = cfg.contains("game") ? config_at(cfg, "game")
                                        : Json{{"kind", "builtin"}};
  std::shared_ptr<const Game> game = make_game(game_spec);
  PlayerSpec pa = player_from_json(config_at(cfg, "player_a"), game.get());
  PlayerSpec pb = player_from_json(config_at(cfg, "player_b"), game.get());
  int m = config_get_or<int>(cfg, "m", 100);
  int opening = config_get_or<int>(cfg, "opening_plies", 0);

  RngStream rng(derive_seed(master, {7}));
  MatchResult res = [&] {
    try {
      return run_match(game, pa, pb, m, rng, opening);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidArgument)
        fail(ErrorCode::Config, std::string("config: ") + e.what());
      throw;
    }
  }();

  std::string la = player_label(pa), lb = player_label(pb);
  std::string csv =
      "player_a,player_b,budget_a,budget_b,m,success_a,success_b,wins,draws,"
      "losses\n";
  csv += la + ',' + lb + ',' + std::to_string(pa.budget) + ',' +
         std::to_string(pb.budget) + ',' + std::to_string(m) + ',' +
         format_double(res.success_a) + ',' + format_double(res.success_b) +
         ',' + std::to_string(res.wins_a) + ',' + std::to_string(res.draws) +
         ',' + std::to_string(res.wins_b) + '\n';
  std::filesystem::path csv_path = out_dir / "match.csv";
  atomic_write(csv_path, csv);

  std::string jsonl;
  for (std::size_t i = 0; i < res.games.size(); ++i) {
    const GameRecord& g = res.games[i];
    jsonl += Json{{"index", i},
                  {"a_first", g.a_first},
                  {"outcome", g.outcome},
                  {"moves", g.moves},
                  {"nodes_a", g.nodes_a},
                  {"nodes_b", g.nodes_b}}
                 .dump();
    jsonl += '\n';
  }
  std::filesystem::path jsonl_path = out_dir / "games.jsonl";
  atomic_write(jsonl_path, jsonl);

  Json summary{{"command", "tournament"}, {"player_a", la},
               {"player_b", lb},          {"m", m},
               {"success_a", res.success_a}, {"success_b", res.success_b},
               {"wins", res.wins_a},      {"draws", res.draws},
               {"losses", res.wins_b}};
  return {{csv_path, jsonl_path}, summary};
}

// ---- position sampling (rank-corr, trap-scan) ------------------------------

struct SampledPosition {
  GameState state;
  std::vector<Action> path;
};

SampledPosition sample_position(const Game& g, std::uint64_t master,
                                std::uint64_t tag, int index, int min_ply,
                                int max_ply) {
  require(min_ply >= 0 && max_ply >= min_ply, ErrorCode::Config,
          "config: need 0 <= min_ply <= max_ply");
  int span = max_ply - min_ply + 1;
  int target = min_ply + index % span;
  for (std::uint64_t attempt = 0; attempt < 200; ++attempt) {
    RngStream rng(derive_seed(
        master, {tag, static_cast<std::uint64_t>(index), attempt}));
    SampledPosition pos{g.initial_state(), {}};
    bool alive = true;
    for (int p = 0; p < target; ++p) {
      if (g.is_terminal(pos.state)) {
        alive = false;
        break;
      }
      std::vector<Action> legal = g.legal_actions(pos.state);
      Action a = legal[rng.next_int(static_cast<int>(legal.size()))];
      pos.path.push_back(a);
      pos.state = g.apply_action(pos.state, a);
    }
    if (!alive || g.is_terminal(pos.state)) continue;
    if (g.legal_actions(pos.state).size() < 2) continue;
    return pos;
  }
  fail(ErrorCode::InvalidArgument,
       "experiment: could not sample a live position after 200 attempts");
}

// ---- rank-corr -------------------------------------------------------------

ExperimentOutcome cmd_rank_corr(const Json& cfg,
                                const std::filesystem::path& out_dir, int jobs,
                                std::uint64_t master) {
  Json game_spec = cfg.contains("game") ? config_at(cfg, "game")
                                        : Json{{"kind", "builtin"}};
  std::shared_ptr<const Game> game = make_game(game_spec);
  int positions = config_get_or<int>(cfg, "positions", 50);
  int min_ply = config_get_or<int>(cfg, "min_ply", 4);
  int max_ply = config_get_or<int>(cfg, "max_ply", 11);
  double eps_tie = config_get_or<double>(cfg, "eps_tie", 0.01);
  require(positions >= 1, ErrorCode::Config,
          "config: field 'positions' must be >= 1");

  Json ref_spec = cfg.contains("reference")
                      ? config_at(cfg, "reference")
                      : Json{{"kind", "minimax_value"}, {"depth", 8}};
  RankEvaluator reference = evaluator_from_json(ref_spec, game.get());

  const Json& cand_list = config_at(cfg, "candidates");
  require(cand_list.is_array() && !cand_list.empty(), ErrorCode::Config,
          "config: field 'candidates' must be a non-empty array");
  std::vector<RankEvaluator> candidates;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < cand_list.size(); ++i) {
    candidates.push_back(evaluator_from_json(cand_list[i], game.get()));
    labels.push_back(config_get_or<std::string>(
        cand_list[i], "label",
        config_get<std::string>(cand_list[i], "kind") + "_" +
            std::to_string(i)));
  }

  struct PositionResult {
    std::vector<Action> path;
    MoveRanking ref;
    std::vector<MoveRanking> cand;
    std::vector<std::optional<double>> rho;
  };
  std::vector<PositionResult> results(positions);

  parallel_for(static_cast<std::size_t>(positions), jobs, [&](std::size_t i) {
    SampledPosition pos = sample_position(*game, master, 8,
                                          static_cast<int>(i), min_ply, max_ply);
    PositionResult& r = results[i];
    r.path = pos.path;
    RngStream ref_rng(derive_seed(master, {9, i}));
    r.ref = rank_moves(*game, pos.state, reference, eps_tie, ref_rng);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      RngStream cand_rng(derive_seed(master, {10, i, c}));
      r.cand.push_back(
          rank_moves(*game, pos.state, candidates[c], eps_tie, cand_rng));
      r.rho.push_back(rank_correlation(r.ref, r.cand.back()));
    }
  });

  std::string scatter = "position,candidate,move,rank_ref,rank_cand\n";
  for (int i = 0; i < positions; ++i) {
    const PositionResult& r = results[i];
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      for (std::size_t mi = 0; mi < r.ref.moves.size(); ++mi) {
        scatter += std::to_string(i) + ',' + labels[c] + ',' +
                   std::to_string(r.ref.moves[mi].action) + ',' +
                   std::to_string(r.ref.moves[mi].rank) + ',' +
                   std::to_string(r.cand[c].moves[mi].rank) + '\n';
      }
    }
  }
  std::filesystem::path scatter_path = out_dir / "rank_scatter.csv";
  atomic_write(scatter_path, scatter);

  std::string summary_csv = "candidate,n_defined,n_undefined,mean_rho\n";
  Json cand_json = Json::array();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    std::vector<double> rhos;
    int undefined = 0;
    for (const PositionResult& r : results) {
      if (r.rho[c])
        rhos.push_back(*r.rho[c]);
      else
        ++undefined;
    }
    double m = mean_of(rhos);
    summary_csv += labels[c] + ',' + std::to_string(rhos.size()) + ',' +
                   std::to_string(undefined) + ',' + format_double(m) + '\n';
    cand_json.push_back(Json{{"candidate", labels[c]},
                             {"n_defined", rhos.size()},
                             {"n_undefined", undefined},
                             {"mean_rho", m}});
  }
  std::filesystem::path summary_path = out_dir / "rank_summary.csv";
  atomic_write(summary_path, summary_csv);

  return {{scatter_path, summary_path},
          Json{{"command", "rank-corr"},
               {"positions", positions},
               {"candidates", cand_json}}};
}

// ---- trap-scan -------------------------------------------------------------

ExperimentOutcome cmd_trap_scan(const Json& cfg,
                                const std::filesystem::path& out_dir, int jobs,
                                std::uint64_t master) {
  Json game_spec = cfg.contains("game") ? config_at(cfg, "game")
                                        : Json{{"kind", "builtin"}};
  std::shared_ptr<const Game> game = make_game(game_spec);
  int positions = config_get_or<int>(cfg, "positions", 50);
  int min_ply = config_get_or<int>(cfg, "min_ply", 2);
  int max_ply = config_get_or<int>(cfg, "max_ply", 9);
  double delta = config_get_or<double>(cfg, "delta", 0.5);
  int k = config_get_or<int>(cfg, "k", 3);
  require(positions >= 1, ErrorCode::Config,
          "config: field 'positions' must be >= 1");

  Json h_spec = cfg.contains("h") ? config_at(cfg, "h")
                                  : Json{{"kind", "heuristic"}};
  std::string h_kind = config_get<std::string>(h_spec, "kind");
  std::function<double(const Game&, const GameState&)> h;
  if (h_kind == "heuristic") {
    auto base = normalized_heuristic_fn(*game);
    h = [base](const Game& g, const GameState& s) {
      return g.is_terminal(s) ? g.terminal_reward(s) : base(g, s);
    };
  } else if (h_kind == "minimax") {
    int h_depth = config_get_or<int>(h_spec, "depth", 4);
    std::string leaf_kind = config_get_or<std::string>(h_spec, "leaf", "zero");
    LeafEvaluator leaf;
    if (leaf_kind == "heuristic") {
      leaf = LeafEvaluator::heuristic_fn(normalized_heuristic_fn(*game));
    } else if (leaf_kind == "zero") {
      leaf = LeafEvaluator::zero();
    } else {
      fail(ErrorCode::Config,
           "config: field 'leaf' must be \"heuristic\" or \"zero\" for a "
           "minimax evaluator");
    }
    h = [h_depth, leaf](const Game& g, const GameState& s) {
      if (g.is_terminal(s)) return g.terminal_reward(s);
      RngStream rng(0);  // value is tie-break independent
      return minimax(g, s, h_depth, leaf, rng, true).value;
    };
  } else {
    fail(ErrorCode::Config, "config: unknown field 'h' kind '" + h_kind + "'");
  }

  struct Row {
    std::vector<Action> path;
    std::optional<SoftTrapReport> report;
  };
  std::vector<Row> rows(positions);
  parallel_for(static_cast<std::size_t>(positions), jobs, [&](std::size_t i) {
    SampledPosition pos = sample_position(*game, master, 11,
                                          static_cast<int>(i), min_ply, max_ply);
    rows[i].path = pos.path;
    rows[i].report = detect_soft_trap(*game, pos.state, h, delta, k);
  });

  std::string jsonl;
  int found = 0;
  for (int i = 0; i < positions; ++i) {
    Json row{{"position", i}, {"path", rows[i].path}};
    if (rows[i].report) {
      ++found;
      row["trap"] = true;
      row["trap_move"] = rows[i].report->trap_move;
      row["gain"] = rows[i].report->gain;
      row["witness"] = rows[i].report->witness;
    } else {
      row["trap"] = false;
    }
    jsonl += row.dump();
    jsonl += '\n';
  }
  std::filesystem::path out = out_dir / "traps.jsonl";
  atomic_write(out, jsonl);
  return {{out},
          Json{{"command", "trap-scan"},
               {"positions", positions},
               {"delta", delta},
               {"k", k},
               {"traps_found", found}}};
}

}  // namespace

ExperimentOutcome run_experiment(const std::string& command, const Json& config,
                                 const std::filesystem::path& out_dir,
                                 int jobs,
                                 std::optional<std::uint64_t> seed_override) {
  require(config.is_object(), ErrorCode::Config,
          "config: document must be a JSON object");
  std::uint64_t master = seed_override
                             ? *seed_override
                             : config_get_or<std::uint64_t>(config, "seed", 0);
  if (command == "converge-sweep")
    return cmd_converge_sweep(config, out_dir, jobs, master);
  if (command == "scenario-compare")
    return cmd_scenario_compare(config, out_dir, jobs, master);
  if (command == "model-fit") return cmd_model_fit(config, out_dir);
  if (command == "tournament") return cmd_tournament(config, out_dir, master);
  if (command == "rank-corr") return cmd_rank_corr(config, out_dir, jobs, master);
  if (command == "trap-scan") return cmd_trap_scan(config, out_dir, jobs, master);
  fail(ErrorCode::Config, "config: unknown command '" + command + "'");
}

}  // namespace searchlab
