// Drives the installed command line binary as a subprocess. The path comes
// in through the SEARCHLAB_CLI_PATH compile definition.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(SEARCHLAB_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[512];
  while (size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "searchlab_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  fs::path p = dir / "config.json";
  std::ofstream out(p, std::ios::binary);
  out << text;
  REQUIRE(out.good());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

const char* kTinySweep =
    R"({"depth":8,"d1":[2],"d2":[4],"reps":2,"tau":0.7,"max_iterations":128,"seed":5})";

}  // namespace

TEST_CASE("help text names every subcommand") {
  RunResult top = run_cli("--help");
  CHECK(top.exit_code == 0);
  for (const char* sub : {"converge-sweep", "scenario-compare", "model-fit",
                          "tournament", "rank-corr", "trap-scan"})
    CHECK(top.output.find(sub) != std::string::npos);

  RunResult fit = run_cli("model-fit --help");
  CHECK(fit.exit_code == 0);
  CHECK(fit.output.find("model_fit.json") != std::string::npos);
  CHECK(fit.output.find("observations") != std::string::npos);
}

TEST_CASE("model fitting runs end to end from the shell") {
  fs::path dir = fresh_dir("cli_fit");
  fs::path cfg = write_config(
      dir,
      R"({"observations":[
        {"d1":2,"d2":6,"mean":15.9738},{"d1":2,"d2":10,"mean":67.83913122},
        {"d1":4,"d2":8,"mean":33.7014},{"d1":4,"d2":12,"mean":137.43206244},
        {"d1":6,"d2":10,"mean":71.559306},{"d1":6,"d2":14,"mean":279.02063088}]})");
  RunResult r = run_cli("model-fit -c " + cfg.string() + " -o " +
                        (dir / "out").string());
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"C\"") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "model_fit.json"));
}

TEST_CASE("runs repeat byte for byte and move with the seed flag") {
  fs::path dir = fresh_dir("cli_seed");
  fs::path cfg = write_config(dir, kTinySweep);

  RunResult a = run_cli("converge-sweep -c " + cfg.string() + " -o " +
                        (dir / "a").string());
  RunResult b = run_cli("converge-sweep -c " + cfg.string() + " -o " +
                        (dir / "b").string());
  CAPTURE(a.output);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  std::string csv_a = slurp(dir / "a" / "converge_kstep.csv");
  CHECK(csv_a == slurp(dir / "b" / "converge_kstep.csv"));

  RunResult c = run_cli("converge-sweep -c " + cfg.string() + " -o " +
                        (dir / "c").string() + " -s 99");
  REQUIRE(c.exit_code == 0);
  CHECK(csv_a != slurp(dir / "c" / "converge_kstep.csv"));
}

TEST_CASE("config problems exit with the config code and write nothing") {
  fs::path dir = fresh_dir("cli_bad");

  fs::path broken = write_config(dir, "{oops");
  RunResult r = run_cli("converge-sweep -c " + broken.string() + " -o " +
                        (dir / "out").string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error:") != std::string::npos);
  CHECK(!fs::exists(dir / "out" / "converge_kstep.csv"));

  RunResult missing = run_cli("converge-sweep -c " +
                              (dir / "nope.json").string());
  CHECK(missing.exit_code == 1);

  fs::path cfg = write_config(dir, kTinySweep);
  RunResult bad_seed = run_cli("converge-sweep -c " + cfg.string() + " -o " +
                               (dir / "out2").string() + " -s 12monkeys");
  CHECK(bad_seed.exit_code == 1);
  CHECK(bad_seed.output.find("decimal") != std::string::npos);
}

TEST_CASE("argument parsing rejects incomplete invocations") {
  CHECK(run_cli("").exit_code != 0);          // a subcommand is required
  CHECK(run_cli("model-fit").exit_code != 0); // --config is required
  CHECK(run_cli("frobnicate").exit_code != 0);
}
