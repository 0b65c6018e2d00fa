// Drives the installed command-line binary as a black box: exit codes,
// stdout JSON, and the seed environment fallback.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

#ifndef TSSORT_CLI_PATH
#define TSSORT_CLI_PATH "tssort"
#endif

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "tssort_cli_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = std::string(TSSORT_CLI_PATH) + " " + args;
  cmd += stdout_file.empty() ? " >/dev/null" : " >" + stdout_file;
  cmd += " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help") == 0);
  CHECK(run("generate --out /tmp/x --no-such-flag 1") == 1);
  CHECK(run("") == 1);  // subcommand required
  CHECK(run("sortability --data a.csv --truth b.json --mode bogus") != 0);
}

TEST_CASE("data errors exit with 2") {
  TempDir dir;
  CHECK(run("sortability --data " + dir.file("missing.csv") + " --truth " +
            dir.file("missing.json")) == 2);
  std::ofstream bad(dir.file("bad.csv"));
  bad << "a,b\n1,oops\n2,3\n";
  bad.close();
  CHECK(run("fit --data " + dir.file("bad.csv") + " --out " + dir.file("est.json")) == 2);
}

TEST_CASE("generate then sortability, fit, evaluate end to end") {
  TempDir dir;
  std::string out = (dir.path / "ds").string();
  REQUIRE(run("generate --d 6 --dc 2 --dl 0.5 --tau-max 1 --n 400 --seed 11 --out " + out) == 0);
  CHECK(fs::exists(fs::path(out) / "truth.json"));
  CHECK(fs::exists(fs::path(out) / "panel_0.csv"));

  std::string report = dir.file("report.json");
  REQUIRE(run("sortability --data " + out + "/panel_0.csv --truth " + out +
                  "/truth.json --criterion var --mode admissible",
              report) == 0);
  std::string json = slurp(report);
  CHECK(json.find("\"criterion\":\"variance\"") != std::string::npos);
  CHECK(json.find("\"score\":") != std::string::npos);

  REQUIRE(run("fit --data " + out + "/panel_0.csv --method varsortnregress --tau-max 1 --out " +
              dir.file("est.json")) == 0);
  std::string eval = dir.file("eval.json");
  REQUIRE(run("evaluate --est " + dir.file("est.json") + " --truth " + out +
                  "/truth.json --mode overall",
              eval) == 0);
  CHECK(slurp(eval).find("\"f1\":") != std::string::npos);

  // summary-mode evaluation against a 0/1 CSV truth
  std::ofstream sum(dir.file("truth.csv"));
  sum << "0,1,0,0,0,0\n0,0,0,0,0,0\n0,0,0,0,0,0\n0,0,0,0,0,0\n0,0,0,0,0,0\n0,0,0,0,0,0\n";
  sum.close();
  CHECK(run("evaluate --est " + dir.file("est.json") + " --truth " + dir.file("truth.csv") +
            " --mode summary") == 0);
  CHECK(run("evaluate --est " + dir.file("est.json") + " --truth " + dir.file("truth.csv") +
            " --mode overall") == 1);  // CSV truth only supports summary mode
}

TEST_CASE("strict dynotears non-convergence exits with 3") {
  TempDir dir;
  // near-duplicate columns with a budget too tight to satisfy the constraint
  std::ofstream csv(dir.file("hard.csv"));
  csv << "a,b\n";
  unsigned state = 12345;
  auto noise = [&]() {  // rough uniform in [-0.5, 0.5], summed for a bell shape
    double sum = 0;
    for (int k = 0; k < 4; ++k) {
      state = state * 1103515245u + 12345u;
      sum += static_cast<double>((state >> 16) & 0x7fff) / 32768.0 - 0.5;
    }
    return sum;
  };
  for (int t = 0; t < 400; ++t) {
    double a = noise();
    csv << a << "," << a + 1e-6 * noise() << "\n";
  }
  csv.close();
  std::string flags = " --method dynotears --tau-max 0 --max-outer 3 --h-tol 1e-12 --rho-max 1e4";
  CHECK(run("fit --data " + dir.file("hard.csv") + flags + " --strict --out " +
            dir.file("est.json")) == 3);
  // without --strict the best iterate is still written and the exit is clean
  CHECK(run("fit --data " + dir.file("hard.csv") + flags + " --out " + dir.file("est2.json")) ==
        0);
  CHECK(slurp(dir.file("est2.json")).find("\"converged\": false") != std::string::npos);
}

TEST_CASE("TSSORT_SEED environment variable acts as the seed fallback") {
  TempDir dir;
  std::string out_a = (dir.path / "env_a").string();
  std::string out_b = (dir.path / "env_b").string();
  std::string out_c = (dir.path / "flag").string();
  std::string base = "generate --d 5 --dc 1.5 --dl 0.5 --tau-max 1 --n 100 --out ";
  auto run_env = [&](const std::string& args) {
    std::string cmd = "TSSORT_SEED=21 " + std::string(TSSORT_CLI_PATH) + " " + args +
                      " >/dev/null 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  REQUIRE(run_env(base + out_a) == 0);
  REQUIRE(run_env(base + out_b) == 0);
  REQUIRE(run(base + out_c + " --seed 21") == 0);
  CHECK(slurp(out_a + "/panel_0.csv") == slurp(out_b + "/panel_0.csv"));
  CHECK(slurp(out_a + "/panel_0.csv") == slurp(out_c + "/panel_0.csv"));
}

TEST_CASE("bench subcommands write their result files") {
  TempDir dir;
  std::string grid_out = (dir.path / "grid").string();
  REQUIRE(run("bench-grid --d 5 --degrees 0 1 --trials 2 --n 150 --burn-in 150 --tau-max 1 "
              "--seed 3 --jobs 1 --out " +
              grid_out) == 0);
  CHECK(fs::exists(fs::path(grid_out) / "cells.csv"));
  CHECK(fs::exists(fs::path(grid_out) / "grid_variance.csv"));

  std::string scaling_out = (dir.path / "scaling").string();
  REQUIRE(run("bench-scaling --d-list 5 --graphs-per-d 3 --n 150 --burn-in 150 --dc 1.5 "
              "--dl 0.5 --tau-max 1 --seed 3 --jobs 1 --out " +
              scaling_out) == 0);
  CHECK(fs::exists(fs::path(scaling_out) / "scaling_table.csv"));
  CHECK(fs::exists(fs::path(scaling_out) / "summary.json"));
}
