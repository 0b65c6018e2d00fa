// Exercises the shared-library surface only: opaque handles, status codes,
// and the file formats, without touching internal headers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "tssort/tssort.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "tssort_capi_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("version and seed derivation") {
  CHECK(std::string(tssort_version()) == "0.1.0");
  CHECK(tssort_derive_seed(1, 2) != tssort_derive_seed(1, 3));
  CHECK(tssort_derive_seed(1, 2) == tssort_derive_seed(1, 2));
}

TEST_CASE("null arguments are rejected with TSSORT_E_INVALID") {
  CHECK(tssort_graph_generate(nullptr, 0, nullptr) == TSSORT_E_INVALID);
  CHECK(tssort_panel_load_csv(nullptr, nullptr) == TSSORT_E_INVALID);
  CHECK(std::strlen(tssort_last_error()) > 0);
}

TEST_CASE("generate, simulate, save, reload round trip") {
  TempDir dir;
  tssort_gen_config gen;
  tssort_gen_config_init(&gen);
  gen.d = 6;
  gen.contemp_degree = 2.0;
  gen.lag_degree = 0.5;
  gen.tau_max = 2;

  tssort_graph* graph = nullptr;
  uint64_t seed = 0;
  for (; seed < 200; ++seed) {
    REQUIRE(tssort_graph_generate(&gen, tssort_derive_seed(5, seed), &graph) == TSSORT_OK);
    int32_t stable = 0;
    REQUIRE(tssort_graph_is_stable(graph, &stable) == TSSORT_OK);
    if (stable) break;
    tssort_graph_free(graph);
    graph = nullptr;
  }
  REQUIRE(graph != nullptr);

  int32_t d = 0, tau = 0;
  REQUIRE(tssort_graph_dims(graph, &d, &tau) == TSSORT_OK);
  CHECK(d == 6);
  CHECK(tau == 2);

  REQUIRE(tssort_graph_save_json(graph, dir.file("g.json").c_str()) == TSSORT_OK);
  tssort_graph* loaded = nullptr;
  REQUIRE(tssort_graph_load_json(dir.file("g.json").c_str(), &loaded) == TSSORT_OK);
  int32_t acyclic = 0;
  REQUIRE(tssort_graph_wc_acyclic(loaded, &acyclic) == TSSORT_OK);
  CHECK(acyclic == 1);

  tssort_sim_config sim;
  tssort_sim_config_init(&sim);
  sim.n = 300;
  tssort_panel* panel = nullptr;
  REQUIRE(tssort_simulate(graph, &sim, 99, &panel) == TSSORT_OK);
  int64_t rows = 0;
  int32_t cols = 0;
  REQUIRE(tssort_panel_dims(panel, &rows, &cols) == TSSORT_OK);
  CHECK(rows == 300);
  CHECK(cols == 6);

  REQUIRE(tssort_panel_save_csv(panel, dir.file("p.csv").c_str()) == TSSORT_OK);
  tssort_panel* reloaded = nullptr;
  REQUIRE(tssort_panel_load_csv(dir.file("p.csv").c_str(), &reloaded) == TSSORT_OK);
  REQUIRE(tssort_panel_save_csv(reloaded, dir.file("p2.csv").c_str()) == TSSORT_OK);
  CHECK(slurp(dir.file("p.csv")) == slurp(dir.file("p2.csv")));

  // determinism: same seed, same bytes
  tssort_panel* again = nullptr;
  REQUIRE(tssort_simulate(graph, &sim, 99, &again) == TSSORT_OK);
  REQUIRE(tssort_panel_save_csv(again, dir.file("p3.csv").c_str()) == TSSORT_OK);
  CHECK(slurp(dir.file("p.csv")) == slurp(dir.file("p3.csv")));

  tssort_panel_free(again);
  tssort_panel_free(reloaded);
  tssort_panel_free(panel);
  tssort_graph_free(loaded);
  tssort_graph_free(graph);
}

TEST_CASE("sortability report through the C surface") {
  TempDir dir;
  // worked example: A -> B, B <-> C, D -> C with criteria 1, 2, 3, 2.5
  std::ofstream csv(dir.file("s.csv"));
  csv << "0,1,0,0\n0,0,1,0\n0,1,0,0\n0,0,1,0\n";
  csv.close();
  std::ofstream panel(dir.file("p.csv"));
  panel << "A,B,C,D\n";
  // two rows around zero mean with per-column spread 1, 2, 3, 2.5
  panel << "1,2,3,2.5\n-1,-2,-3,-2.5\n0,0,0,0\n0,0,0,0\n";
  panel.close();

  tssort_summary* summary = nullptr;
  REQUIRE(tssort_summary_load_csv(dir.file("s.csv").c_str(), &summary) == TSSORT_OK);
  int32_t d = 0;
  REQUIRE(tssort_summary_dims(summary, &d) == TSSORT_OK);
  CHECK(d == 4);
  tssort_panel* p = nullptr;
  REQUIRE(tssort_panel_load_csv(dir.file("p.csv").c_str(), &p) == TSSORT_OK);

  tssort_sortability_report report;
  REQUIRE(tssort_sortability(p, summary, TSSORT_CRI_VARIANCE, TSSORT_MODE_ADMISSIBLE, 0,
                             &report) == TSSORT_OK);
  CHECK(report.score == 0.75);
  CHECK(report.pairs_total == 4);
  REQUIRE(tssort_sortability(p, summary, TSSORT_CRI_VARIANCE, TSSORT_MODE_ALL_CONNECTED, 0,
                             &report) == TSSORT_OK);
  CHECK(report.score == 4.0 / 6.0);

  char* json = nullptr;
  REQUIRE(tssort_sortability_report_json(&report, &json) == TSSORT_OK);
  CHECK(std::string(json).find("\"mode\":\"all_connected\"") != std::string::npos);
  tssort_string_free(json);

  tssort_panel_free(p);
  tssort_summary_free(summary);
}

TEST_CASE("empty pair set surfaces as TSSORT_E_NO_PAIRS") {
  TempDir dir;
  std::ofstream csv(dir.file("empty.csv"));
  csv << "0,0\n0,0\n";
  csv.close();
  std::ofstream panel(dir.file("p.csv"));
  panel << "a,b\n1,2\n2,1\n3,4\n";
  panel.close();
  tssort_summary* s = nullptr;
  tssort_panel* p = nullptr;
  REQUIRE(tssort_summary_load_csv(dir.file("empty.csv").c_str(), &s) == TSSORT_OK);
  REQUIRE(tssort_panel_load_csv(dir.file("p.csv").c_str(), &p) == TSSORT_OK);
  tssort_sortability_report report;
  CHECK(tssort_sortability(p, s, TSSORT_CRI_VARIANCE, TSSORT_MODE_ADMISSIBLE, 0, &report) ==
        TSSORT_E_NO_PAIRS);
  tssort_panel_free(p);
  tssort_summary_free(s);
}

TEST_CASE("file errors carry distinct status codes") {
  TempDir dir;
  tssort_panel* p = nullptr;
  CHECK(tssort_panel_load_csv(dir.file("missing.csv").c_str(), &p) == TSSORT_E_IO);
  std::ofstream bad(dir.file("bad.csv"));
  bad << "a,b\n1,x\n2,3\n";
  bad.close();
  CHECK(tssort_panel_load_csv(dir.file("bad.csv").c_str(), &p) == TSSORT_E_PARSE);
  tssort_graph* g = nullptr;
  std::ofstream badj(dir.file("bad.json"));
  badj << "{";
  badj.close();
  CHECK(tssort_graph_load_json(dir.file("bad.json").c_str(), &g) == TSSORT_E_PARSE);
}

TEST_CASE("fit and evaluate through the C surface") {
  TempDir dir;
  tssort_gen_config gen;
  tssort_gen_config_init(&gen);
  gen.d = 5;
  gen.contemp_degree = 2.0;
  gen.lag_degree = 0.5;
  gen.tau_max = 1;

  tssort_graph* truth = nullptr;
  for (uint64_t seed = 0;; ++seed) {
    REQUIRE(seed < 500);
    REQUIRE(tssort_graph_generate(&gen, tssort_derive_seed(11, seed), &truth) == TSSORT_OK);
    int32_t stable = 0;
    REQUIRE(tssort_graph_is_stable(truth, &stable) == TSSORT_OK);
    if (stable) break;
    tssort_graph_free(truth);
  }
  tssort_sim_config sim;
  tssort_sim_config_init(&sim);
  sim.n = 1500;
  tssort_panel* panel = nullptr;
  REQUIRE(tssort_simulate(truth, &sim, 3, &panel) == TSSORT_OK);

  tssort_graph* est = nullptr;
  REQUIRE(tssort_fit_sortnregress(panel, 1, TSSORT_ORDER_VARIANCE, 0, &est) == TSSORT_OK);
  tssort_eval_report report;
  REQUIRE(tssort_evaluate(est, 0.1, truth, 0.0, TSSORT_EVAL_OVERALL, &report) == TSSORT_OK);
  CHECK(report.f1 >= 0.0);
  CHECK(report.f1 <= 1.0);
  REQUIRE(tssort_evaluate(truth, 0.0, truth, 0.0, TSSORT_EVAL_OVERALL, &report) == TSSORT_OK);
  CHECK(report.f1 == 1.0);

  // summary-mode comparison against a summary handle
  tssort_summary* truth_summary = nullptr;
  REQUIRE(tssort_summary_from_graph(truth, TSSORT_SCOPE_ALL, &truth_summary) == TSSORT_OK);
  REQUIRE(tssort_evaluate_vs_summary(truth, 0.0, truth_summary, &report) == TSSORT_OK);
  CHECK(report.f1 == 1.0);
  CHECK(report.mode == TSSORT_EVAL_SUMMARY);

  char* json = nullptr;
  REQUIRE(tssort_eval_report_json(&report, &json) == TSSORT_OK);
  CHECK(std::string(json).find("\"f1\":1") != std::string::npos);
  tssort_string_free(json);

  tssort_dyno_config dyno;
  tssort_dyno_config_init(&dyno);
  CHECK(dyno.lambda1 == 0.05);
  CHECK(dyno.lambda2 == 0.05);
  CHECK(dyno.threshold == 0.1);
  tssort_graph* dyn_est = nullptr;
  tssort_dyno_result dyn_info;
  REQUIRE(tssort_fit_dynotears(panel, 1, &dyno, &dyn_est, &dyn_info) == TSSORT_OK);
  CHECK(dyn_info.converged == 1);
  REQUIRE(tssort_graph_save_json(dyn_est, dir.file("est.json").c_str()) == TSSORT_OK);
  std::string est_json = slurp(dir.file("est.json"));
  CHECK(est_json.find("\"method\": \"dynotears\"") != std::string::npos);
  CHECK(est_json.find("\"convergence\"") != std::string::npos);

  tssort_graph_free(dyn_est);
  tssort_summary_free(truth_summary);
  tssort_graph_free(est);
  tssort_panel_free(panel);
  tssort_graph_free(truth);
}

TEST_CASE("standardize through the C surface") {
  TempDir dir;
  std::ofstream csv(dir.file("p.csv"));
  csv << "a,b\n1,10\n2,20\n3,40\n4,80\n";
  csv.close();
  tssort_panel* p = nullptr;
  REQUIRE(tssort_panel_load_csv(dir.file("p.csv").c_str(), &p) == TSSORT_OK);
  tssort_panel* s = nullptr;
  REQUIRE(tssort_panel_standardize(p, &s) == TSSORT_OK);
  REQUIRE(tssort_panel_save_csv(s, dir.file("s.csv").c_str()) == TSSORT_OK);
  tssort_panel_free(s);
  tssort_panel_free(p);
}

TEST_CASE("bench entry points write deterministic files") {
  TempDir dir;
  tssort_binned_config cfg;
  tssort_binned_config_init(&cfg);
  cfg.gen.d = 6;
  cfg.gen.contemp_degree = 2.0;
  cfg.gen.lag_degree = 0.5;
  cfg.gen.tau_max = 1;
  cfg.n = 200;
  cfg.burn_in = 200;
  cfg.noise_low = 0.5;
  cfg.noise_high = 2.0;
  double edges[3] = {0.0, 0.5, 1.0};
  cfg.bin_edges = edges;
  cfg.n_bins = 2;
  cfg.m = 2;
  const char* methods[1] = {"randomregress"};
  cfg.methods = methods;
  cfg.n_methods = 1;
  cfg.base_seed = 5;
  cfg.jobs = 1;
  REQUIRE(tssort_bench_binned(&cfg, dir.file("out1").c_str()) == TSSORT_OK);
  cfg.jobs = 2;
  REQUIRE(tssort_bench_binned(&cfg, dir.file("out2").c_str()) == TSSORT_OK);
  CHECK(slurp(dir.file("out1") + "/trials.csv") == slurp(dir.file("out2") + "/trials.csv"));
  CHECK(slurp(dir.file("out1") + "/summary.json") == slurp(dir.file("out2") + "/summary.json"));
  CHECK(!slurp(dir.file("out1") + "/trials.csv").empty());

  tssort_scaling_config scal;
  tssort_scaling_config_init(&scal);
  int32_t ds[1] = {5};
  scal.d_list = ds;
  scal.n_d = 1;
  scal.graphs_per_d = 3;
  scal.n = 150;
  scal.burn_in = 150;
  scal.contemp_degree = 1.5;
  scal.lag_degree = 0.5;
  scal.tau_max = 1;
  REQUIRE(tssort_bench_scaling(&scal, dir.file("scal").c_str()) == TSSORT_OK);
  CHECK(!slurp(dir.file("scal") + "/scaling_table.csv").empty());

  tssort_grid_config grid;
  tssort_grid_config_init(&grid);
  grid.d = 5;
  double degrees[2] = {0.0, 1.0};
  grid.degrees = degrees;
  grid.n_degrees = 2;
  grid.trials = 2;
  grid.n = 150;
  grid.burn_in = 150;
  grid.tau_max = 1;
  REQUIRE(tssort_bench_grid(&grid, dir.file("grid").c_str()) == TSSORT_OK);
  CHECK(!slurp(dir.file("grid") + "/cells.csv").empty());
}
