// Command-line front end; talks to the core exclusively through the C API in
// tssort/tssort.h. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 dynotears did not converge and --strict was given.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tssort/tssort.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNotConverged = 3;

int data_error(int status) {
  std::fprintf(stderr, "error: %s (status %d)\n", tssort_last_error(), status);
  return kExitData;
}

void echo(const std::string& key, const std::string& value) {
  std::fprintf(stderr, "# %s = %s\n", key.c_str(), value.c_str());
}
void echo(const std::string& key, double value) {
  std::fprintf(stderr, "# %s = %.17g\n", key.c_str(), value);
}
void echo(const std::string& key, int64_t value) {
  std::fprintf(stderr, "# %s = %" PRId64 "\n", key.c_str(), value);
}
void echo_seed(uint64_t seed) {
  std::fprintf(stderr, "# seed = %" PRIu64 "\n", seed);
}

struct GraphHandle {
  tssort_graph* g = nullptr;
  ~GraphHandle() { tssort_graph_free(g); }
};
struct PanelHandle {
  tssort_panel* p = nullptr;
  ~PanelHandle() { tssort_panel_free(p); }
};
struct SummaryHandle {
  tssort_summary* s = nullptr;
  ~SummaryHandle() { tssort_summary_free(s); }
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int parse_pair_mode(const std::string& name, int& out) {
  if (name == "admissible") {
    out = TSSORT_MODE_ADMISSIBLE;
    return 0;
  }
  if (name == "all_connected" || name == "all") {
    out = TSSORT_MODE_ALL_CONNECTED;
    return 0;
  }
  std::fprintf(stderr, "error: unknown pair mode '%s'\n", name.c_str());
  return kExitUsage;
}

int parse_criterion(const std::string& name, int& out) {
  if (name == "var" || name == "variance") {
    out = TSSORT_CRI_VARIANCE;
    return 0;
  }
  if (name == "r2") {
    out = TSSORT_CRI_R2;
    return 0;
  }
  std::fprintf(stderr, "error: unknown criterion '%s'\n", name.c_str());
  return kExitUsage;
}

// Loads a summary-graph truth from either a graph JSON or a 0/1 CSV.
int load_summary_any(const std::string& path, int scope, SummaryHandle& out,
                     GraphHandle* graph_out) {
  if (ends_with(path, ".json")) {
    GraphHandle g;
    int rc = tssort_graph_load_json(path.c_str(), &g.g);
    if (rc != TSSORT_OK) return data_error(rc);
    int32_t acyclic = 1;
    tssort_graph_wc_acyclic(g.g, &acyclic);
    if (!acyclic)
      std::fprintf(stderr, "warning: %s: contemporaneous slice is cyclic\n", path.c_str());
    rc = tssort_summary_from_graph(g.g, scope, &out.s);
    if (rc != TSSORT_OK) return data_error(rc);
    if (graph_out) {
      graph_out->g = g.g;
      g.g = nullptr;
    }
    return 0;
  }
  int rc = tssort_summary_load_csv(path.c_str(), &out.s);
  if (rc != TSSORT_OK) return data_error(rc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tssort: sortability measurement and structure-learning baselines "
               "for multivariate time series"};
  app.require_subcommand(1);

  // ---------------------------------------------------------------- generate
  auto* generate = app.add_subcommand(
      "generate", "Sample a random stable ts-graph and simulated panels");
  struct {
    int32_t d = 10;
    double dc = 4.0, dl = 1.0, delta = 1.1;
    int32_t tau_max = 3;
    int64_t n = 500, burn_in = 1000;
    double noise_std = 1.0;
    double contemp_low = 0.5, contemp_high = 2.0;
    double lag_low = 0.3, lag_high = 0.5;
    int32_t realizations = 1;
    uint64_t seed = 0;
    std::string out;
    int32_t max_attempts = 1000;
  } gen;
  generate->add_option("--d", gen.d, "node count");
  generate->add_option("--dc", gen.dc, "expected contemporaneous mean degree");
  generate->add_option("--dl", gen.dl, "expected per-lag mean degree");
  generate->add_option("--tau-max", gen.tau_max, "maximal lag");
  generate->add_option("--delta", gen.delta, "lag weight decay (> 1)");
  generate->add_option("--n", gen.n, "samples per realization");
  generate->add_option("--burn-in", gen.burn_in, "discarded start-up steps");
  generate->add_option("--noise-std", gen.noise_std, "noise standard deviation");
  generate->add_option("--contemp-low", gen.contemp_low, "contemporaneous |coefficient| lower bound");
  generate->add_option("--contemp-high", gen.contemp_high, "contemporaneous |coefficient| upper bound");
  generate->add_option("--lag-low", gen.lag_low, "lag-1 |coefficient| lower bound");
  generate->add_option("--lag-high", gen.lag_high, "lag-1 |coefficient| upper bound");
  generate->add_option("--m", gen.realizations, "realizations to simulate");
  generate->add_option("--seed", gen.seed, "base seed")->envname("TSSORT_SEED");
  generate->add_option("--max-attempts", gen.max_attempts, "stable-draw attempts");
  generate->add_option("--out", gen.out, "output directory")->required();

  // -------------------------------------------------------------- sortability
  auto* sortability = app.add_subcommand(
      "sortability", "Measure sortability of a panel against a ground-truth graph");
  struct {
    std::string data, truth;
    std::string criterion = "var";
    std::string mode = "admissible";
    std::string scope = "all";
    int32_t tau_max = -1;
  } sort_opt;
  sortability->add_option("--data", sort_opt.data, "panel CSV")->required();
  sortability->add_option("--truth", sort_opt.truth, "truth graph JSON or summary CSV")
      ->required();
  sortability->add_option("--criterion", sort_opt.criterion, "var | r2");
  sortability->add_option("--mode", sort_opt.mode, "admissible | all_connected | path_weighted");
  sortability->add_option("--scope", sort_opt.scope,
                          "edges considered from a JSON truth: all | contemp | lagged");
  sortability->add_option("--tau-max", sort_opt.tau_max,
                          "lag depth for the r2 criterion (default: truth's tau_max)");

  // --------------------------------------------------------------------- fit
  auto* fit = app.add_subcommand("fit", "Estimate a ts-graph from a panel");
  struct {
    std::string data, out;
    std::string method = "varsortnregress";
    int32_t tau_max = 3;
    uint64_t seed = 0;
    bool standardize = false;
    bool strict = false;
    double lambda1 = 0.05, lambda2 = 0.05, threshold = 0.1;
    int32_t max_outer = 100;
    double h_tol = 1e-8, rho_max = 1e16;
  } fit_opt;
  fit->add_option("--data", fit_opt.data, "panel CSV")->required();
  fit->add_option("--method", fit_opt.method,
                  "varsortnregress | r2sortnregress | randomregress | varsortnregress_rev | "
                  "dynotears");
  fit->add_option("--tau-max", fit_opt.tau_max, "maximal lag");
  fit->add_option("--seed", fit_opt.seed, "seed (randomregress order)")->envname("TSSORT_SEED");
  fit->add_flag("--standardize", fit_opt.standardize, "standardize the panel first");
  fit->add_flag("--strict", fit_opt.strict, "exit 3 when dynotears does not converge");
  fit->add_option("--lambda1", fit_opt.lambda1, "l1 weight on W_c (dynotears)");
  fit->add_option("--lambda2", fit_opt.lambda2, "l1 weight on W_l (dynotears)");
  fit->add_option("--threshold", fit_opt.threshold, "post-hoc weight cutoff (dynotears)");
  fit->add_option("--max-outer", fit_opt.max_outer, "augmented-Lagrangian iterations");
  fit->add_option("--h-tol", fit_opt.h_tol, "acyclicity tolerance");
  fit->add_option("--rho-max", fit_opt.rho_max, "penalty cap");
  fit->add_option("--out", fit_opt.out, "estimated graph JSON")->required();

  // ---------------------------------------------------------------- evaluate
  auto* evaluate = app.add_subcommand("evaluate", "F1 of an estimate against a truth");
  struct {
    std::string est, truth;
    std::string mode = "overall";
    double threshold = 0.1;
    double truth_threshold = 1e-12;
  } eval_opt;
  evaluate->add_option("--est", eval_opt.est, "estimated graph JSON")->required();
  evaluate->add_option("--truth", eval_opt.truth, "truth graph JSON or summary CSV")->required();
  evaluate->add_option("--mode", eval_opt.mode, "overall | contemp | lagged | summary");
  evaluate->add_option("--threshold", eval_opt.threshold, "binarization cutoff for the estimate");
  evaluate->add_option("--truth-threshold", eval_opt.truth_threshold,
                       "binarization cutoff for the truth");

  // ------------------------------------------------------------- bench-binned
  auto* binned = app.add_subcommand(
      "bench-binned", "Benchmark methods on datasets rejection-sampled into sortability bins");
  struct {
    int32_t d = 10;
    double dc = 4.0, dl = 1.0, delta = 1.1;
    int32_t tau_max = 3;
    int64_t n = 500, burn_in = 1000;
    double noise_low = 1.0, noise_high = 1.0;
    std::vector<double> bins = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    int32_t m = 30;
    std::string criterion = "var";
    std::string mode = "admissible";
    std::vector<std::string> methods = {"varsortnregress", "r2sortnregress", "randomregress"};
    int64_t max_attempts = 0;
    uint64_t seed = 0;
    int32_t jobs = 0;
    double threshold = 0.1;
    double lambda1 = 0.05, lambda2 = 0.05;
    std::string out;
  } bb;
  binned->add_option("--d", bb.d, "node count");
  binned->add_option("--dc", bb.dc, "contemporaneous mean degree");
  binned->add_option("--dl", bb.dl, "per-lag mean degree");
  binned->add_option("--tau-max", bb.tau_max, "maximal lag");
  binned->add_option("--delta", bb.delta, "lag weight decay");
  binned->add_option("--n", bb.n, "samples per dataset");
  binned->add_option("--burn-in", bb.burn_in, "discarded start-up steps");
  binned->add_option("--noise-low", bb.noise_low, "per-node noise std lower bound");
  binned->add_option("--noise-high", bb.noise_high, "per-node noise std upper bound");
  binned->add_option("--bins", bb.bins, "bin edges covering [0,1]")->expected(-1);
  binned->add_option("--m", bb.m, "datasets per bin");
  binned->add_option("--criterion", bb.criterion, "var | r2");
  binned->add_option("--mode", bb.mode, "pair set for binning: admissible | all_connected");
  binned->add_option("--methods", bb.methods, "methods to run")->expected(-1);
  binned->add_option("--max-attempts", bb.max_attempts, "attempt cap per bin (0 = 200*m)");
  binned->add_option("--seed", bb.seed, "base seed")->envname("TSSORT_SEED");
  binned->add_option("--jobs", bb.jobs, "worker threads (0 = all cores)");
  binned->add_option("--threshold", bb.threshold, "binarization cutoff for estimates");
  binned->add_option("--lambda1", bb.lambda1, "dynotears l1 on W_c");
  binned->add_option("--lambda2", bb.lambda2, "dynotears l1 on W_l");
  binned->add_option("--out", bb.out, "output directory")->required();

  // --------------------------------------------------------------- bench-grid
  auto* grid = app.add_subcommand("bench-grid",
                                  "Mean sortability over a (d_c, d_l) degree grid");
  struct {
    int32_t d = 10;
    std::vector<double> degrees = {0, 0.5, 1, 2, 3, 4, 6, 8};
    int32_t trials = 30;
    int64_t n = 500, burn_in = 1000;
    double noise_low = 0.5, noise_high = 2.0;
    int32_t tau_max = 3;
    double delta = 1.1;
    double contemp_low = 0.33, contemp_high = 0.55;
    double lag_low = 0.3, lag_high = 0.5;
    std::string mode = "all_connected";
    uint64_t seed = 0;
    int32_t jobs = 0;
    std::string out;
  } gr;
  grid->add_option("--d", gr.d, "node count");
  grid->add_option("--degrees", gr.degrees, "degree values for d_c and d_l")->expected(-1);
  grid->add_option("--trials", gr.trials, "datasets per grid cell");
  grid->add_option("--n", gr.n, "samples per dataset");
  grid->add_option("--burn-in", gr.burn_in, "discarded start-up steps");
  grid->add_option("--noise-low", gr.noise_low, "per-node noise std lower bound");
  grid->add_option("--noise-high", gr.noise_high, "per-node noise std upper bound");
  grid->add_option("--contemp-low", gr.contemp_low, "contemporaneous |coefficient| lower bound");
  grid->add_option("--contemp-high", gr.contemp_high, "contemporaneous |coefficient| upper bound");
  grid->add_option("--lag-low", gr.lag_low, "lag-1 |coefficient| lower bound");
  grid->add_option("--lag-high", gr.lag_high, "lag-1 |coefficient| upper bound");
  grid->add_option("--mode", gr.mode, "pair set: admissible | all_connected");
  grid->add_option("--tau-max", gr.tau_max, "maximal lag");
  grid->add_option("--delta", gr.delta, "lag weight decay");
  grid->add_option("--seed", gr.seed, "base seed")->envname("TSSORT_SEED");
  grid->add_option("--jobs", gr.jobs, "worker threads (0 = all cores)");
  grid->add_option("--out", gr.out, "output directory")->required();

  // ------------------------------------------------------------ bench-scaling
  auto* scaling = app.add_subcommand(
      "bench-scaling", "Sortability statistics per node count (contemp/lagged/overall)");
  struct {
    std::vector<int32_t> d_list = {10};
    int32_t graphs_per_d = 100;
    int64_t n = 500, burn_in = 1000;
    double noise_low = 0.5, noise_high = 2.0;
    double dc = 4.0, dl = 1.0, delta = 1.1;
    int32_t tau_max = 3;
    double contemp_low = 0.33, contemp_high = 0.55;
    double lag_low = 0.3, lag_high = 0.5;
    std::string mode = "all_connected";
    uint64_t seed = 0;
    int32_t jobs = 0;
    std::string out;
  } sc;
  scaling->add_option("--d-list", sc.d_list, "node counts")->expected(-1);
  scaling->add_option("--graphs-per-d", sc.graphs_per_d, "graphs per node count");
  scaling->add_option("--n", sc.n, "samples per graph");
  scaling->add_option("--burn-in", sc.burn_in, "discarded start-up steps");
  scaling->add_option("--noise-low", sc.noise_low, "per-node noise std lower bound");
  scaling->add_option("--noise-high", sc.noise_high, "per-node noise std upper bound");
  scaling->add_option("--contemp-low", sc.contemp_low, "contemporaneous |coefficient| lower bound");
  scaling->add_option("--contemp-high", sc.contemp_high, "contemporaneous |coefficient| upper bound");
  scaling->add_option("--lag-low", sc.lag_low, "lag-1 |coefficient| lower bound");
  scaling->add_option("--lag-high", sc.lag_high, "lag-1 |coefficient| upper bound");
  scaling->add_option("--mode", sc.mode, "pair set: admissible | all_connected");
  scaling->add_option("--dc", sc.dc, "contemporaneous mean degree");
  scaling->add_option("--dl", sc.dl, "per-lag mean degree");
  scaling->add_option("--delta", sc.delta, "lag weight decay");
  scaling->add_option("--tau-max", sc.tau_max, "maximal lag");
  scaling->add_option("--seed", sc.seed, "base seed")->envname("TSSORT_SEED");
  scaling->add_option("--jobs", sc.jobs, "worker threads (0 = all cores)");
  scaling->add_option("--out", sc.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);  // prints the message or help text
    return rc == 0 ? 0 : kExitUsage;
  }

  if (generate->parsed()) {
    echo("command", "generate");
    echo("d", static_cast<int64_t>(gen.d));
    echo("dc", gen.dc);
    echo("dl", gen.dl);
    echo("tau_max", static_cast<int64_t>(gen.tau_max));
    echo("delta", gen.delta);
    echo("n", gen.n);
    echo("burn_in", gen.burn_in);
    echo("noise_std", gen.noise_std);
    echo("m", static_cast<int64_t>(gen.realizations));
    echo("out", gen.out);
    echo_seed(gen.seed);

    tssort_gen_config cfg;
    tssort_gen_config_init(&cfg);
    cfg.d = gen.d;
    cfg.contemp_degree = gen.dc;
    cfg.lag_degree = gen.dl;
    cfg.tau_max = gen.tau_max;
    cfg.weight_decay = gen.delta;
    cfg.contemp_low = gen.contemp_low;
    cfg.contemp_high = gen.contemp_high;
    cfg.lag_low = gen.lag_low;
    cfg.lag_high = gen.lag_high;

    GraphHandle graph;
    int attempt = 0;
    for (; attempt < gen.max_attempts; ++attempt) {
      GraphHandle candidate;
      int rc = tssort_graph_generate(&cfg, tssort_derive_seed(gen.seed, attempt), &candidate.g);
      if (rc != TSSORT_OK) return data_error(rc);
      int32_t stable = 0;
      rc = tssort_graph_is_stable(candidate.g, &stable);
      if (rc != TSSORT_OK) return data_error(rc);
      if (stable) {
        graph.g = candidate.g;
        candidate.g = nullptr;
        break;
      }
    }
    if (!graph.g) {
      std::fprintf(stderr, "error: no stable graph in %d attempts\n", gen.max_attempts);
      return kExitData;
    }
    std::fprintf(stderr, "# stable draw found at attempt %d\n", attempt);

    std::error_code ec;
    std::filesystem::create_directories(gen.out, ec);
    std::string truth_path = gen.out + "/truth.json";
    int rc = tssort_graph_save_json(graph.g, truth_path.c_str());
    if (rc != TSSORT_OK) return data_error(rc);

    tssort_sim_config sim;
    tssort_sim_config_init(&sim);
    sim.n = gen.n;
    sim.burn_in = gen.burn_in;
    sim.noise_std = gen.noise_std;
    for (int32_t k = 0; k < gen.realizations; ++k) {
      PanelHandle panel;
      uint64_t panel_seed = tssort_derive_seed(gen.seed, 0x70000000ULL + static_cast<uint64_t>(k));
      rc = tssort_simulate(graph.g, &sim, panel_seed, &panel.p);
      if (rc != TSSORT_OK) return data_error(rc);
      std::string panel_path = gen.out + "/panel_" + std::to_string(k) + ".csv";
      rc = tssort_panel_save_csv(panel.p, panel_path.c_str());
      if (rc != TSSORT_OK) return data_error(rc);
    }
    std::fprintf(stderr, "# wrote %s and %d panel(s)\n", truth_path.c_str(), gen.realizations);
    return 0;
  }

  if (sortability->parsed()) {
    echo("command", "sortability");
    echo("data", sort_opt.data);
    echo("truth", sort_opt.truth);
    echo("criterion", sort_opt.criterion);
    echo("mode", sort_opt.mode);
    echo("scope", sort_opt.scope);

    int criterion = 0;
    if (int rc = parse_criterion(sort_opt.criterion, criterion)) return rc;
    int mode;
    if (sort_opt.mode == "admissible")
      mode = TSSORT_MODE_ADMISSIBLE;
    else if (sort_opt.mode == "all_connected" || sort_opt.mode == "all")
      mode = TSSORT_MODE_ALL_CONNECTED;
    else if (sort_opt.mode == "path_weighted" || sort_opt.mode == "path")
      mode = TSSORT_MODE_PATH_WEIGHTED;
    else {
      std::fprintf(stderr, "error: unknown mode '%s'\n", sort_opt.mode.c_str());
      return kExitUsage;
    }
    int scope;
    if (sort_opt.scope == "all")
      scope = TSSORT_SCOPE_ALL;
    else if (sort_opt.scope == "contemp")
      scope = TSSORT_SCOPE_CONTEMP;
    else if (sort_opt.scope == "lagged")
      scope = TSSORT_SCOPE_LAGGED;
    else {
      std::fprintf(stderr, "error: unknown scope '%s'\n", sort_opt.scope.c_str());
      return kExitUsage;
    }

    PanelHandle panel;
    int rc = tssort_panel_load_csv(sort_opt.data.c_str(), &panel.p);
    if (rc != TSSORT_OK) return data_error(rc);

    SummaryHandle summary;
    GraphHandle truth;
    if (int code = load_summary_any(sort_opt.truth, scope, summary, &truth)) return code;

    int32_t tau_max = sort_opt.tau_max;
    if (tau_max < 0) {
      tau_max = 0;
      if (truth.g) tssort_graph_dims(truth.g, nullptr, &tau_max);
    }
    echo("tau_max", static_cast<int64_t>(tau_max));

    tssort_sortability_report report;
    rc = tssort_sortability(panel.p, summary.s, criterion, mode, tau_max, &report);
    if (rc != TSSORT_OK) return data_error(rc);
    char* json = nullptr;
    rc = tssort_sortability_report_json(&report, &json);
    if (rc != TSSORT_OK) return data_error(rc);
    std::printf("%s\n", json);
    tssort_string_free(json);
    return 0;
  }

  if (fit->parsed()) {
    echo("command", "fit");
    echo("data", fit_opt.data);
    echo("method", fit_opt.method);
    echo("tau_max", static_cast<int64_t>(fit_opt.tau_max));
    echo("standardize", static_cast<int64_t>(fit_opt.standardize ? 1 : 0));
    echo_seed(fit_opt.seed);

    PanelHandle panel;
    int rc = tssort_panel_load_csv(fit_opt.data.c_str(), &panel.p);
    if (rc != TSSORT_OK) return data_error(rc);
    if (fit_opt.standardize) {
      PanelHandle std_panel;
      rc = tssort_panel_standardize(panel.p, &std_panel.p);
      if (rc != TSSORT_OK) return data_error(rc);
      std::swap(panel.p, std_panel.p);
    }

    GraphHandle est;
    bool not_converged = false;
    if (fit_opt.method == "dynotears") {
      echo("lambda1", fit_opt.lambda1);
      echo("lambda2", fit_opt.lambda2);
      echo("threshold", fit_opt.threshold);
      tssort_dyno_config cfg;
      tssort_dyno_config_init(&cfg);
      cfg.lambda1 = fit_opt.lambda1;
      cfg.lambda2 = fit_opt.lambda2;
      cfg.threshold = fit_opt.threshold;
      cfg.max_outer = fit_opt.max_outer;
      cfg.h_tol = fit_opt.h_tol;
      cfg.rho_max = fit_opt.rho_max;
      tssort_dyno_result info;
      rc = tssort_fit_dynotears(panel.p, fit_opt.tau_max, &cfg, &est.g, &info);
      if (rc != TSSORT_OK) return data_error(rc);
      std::fprintf(stderr, "# h = %.17g, outer_iterations = %d, converged = %d\n", info.h_value,
                   info.outer_iterations, info.converged);
      not_converged = info.converged == 0;
    } else {
      int order;
      if (fit_opt.method == "varsortnregress")
        order = TSSORT_ORDER_VARIANCE;
      else if (fit_opt.method == "r2sortnregress")
        order = TSSORT_ORDER_R2;
      else if (fit_opt.method == "randomregress")
        order = TSSORT_ORDER_RANDOM;
      else if (fit_opt.method == "varsortnregress_rev")
        order = TSSORT_ORDER_VARIANCE_REVERSED;
      else {
        std::fprintf(stderr, "error: unknown method '%s'\n", fit_opt.method.c_str());
        return kExitUsage;
      }
      rc = tssort_fit_sortnregress(panel.p, fit_opt.tau_max, order, fit_opt.seed, &est.g);
      if (rc != TSSORT_OK) return data_error(rc);
    }
    rc = tssort_graph_save_json(est.g, fit_opt.out.c_str());
    if (rc != TSSORT_OK) return data_error(rc);
    std::fprintf(stderr, "# wrote %s\n", fit_opt.out.c_str());
    if (not_converged && fit_opt.strict) {
      std::fprintf(stderr, "error: dynotears did not converge (--strict)\n");
      return kExitNotConverged;
    }
    return 0;
  }

  if (evaluate->parsed()) {
    echo("command", "evaluate");
    echo("est", eval_opt.est);
    echo("truth", eval_opt.truth);
    echo("mode", eval_opt.mode);
    echo("threshold", eval_opt.threshold);

    GraphHandle est;
    int rc = tssort_graph_load_json(eval_opt.est.c_str(), &est.g);
    if (rc != TSSORT_OK) return data_error(rc);

    tssort_eval_report report;
    if (ends_with(eval_opt.truth, ".json")) {
      int mode;
      if (eval_opt.mode == "overall")
        mode = TSSORT_EVAL_OVERALL;
      else if (eval_opt.mode == "contemp")
        mode = TSSORT_EVAL_CONTEMP;
      else if (eval_opt.mode == "lagged")
        mode = TSSORT_EVAL_LAGGED;
      else if (eval_opt.mode == "summary")
        mode = TSSORT_EVAL_SUMMARY;
      else {
        std::fprintf(stderr, "error: unknown mode '%s'\n", eval_opt.mode.c_str());
        return kExitUsage;
      }
      GraphHandle truth;
      rc = tssort_graph_load_json(eval_opt.truth.c_str(), &truth.g);
      if (rc != TSSORT_OK) return data_error(rc);
      rc = tssort_evaluate(est.g, eval_opt.threshold, truth.g, eval_opt.truth_threshold, mode,
                           &report);
      if (rc != TSSORT_OK) return data_error(rc);
    } else {
      if (eval_opt.mode != "summary") {
        std::fprintf(stderr, "error: CSV truth supports only --mode summary\n");
        return kExitUsage;
      }
      SummaryHandle truth;
      rc = tssort_summary_load_csv(eval_opt.truth.c_str(), &truth.s);
      if (rc != TSSORT_OK) return data_error(rc);
      rc = tssort_evaluate_vs_summary(est.g, eval_opt.threshold, truth.s, &report);
      if (rc != TSSORT_OK) return data_error(rc);
    }
    char* json = nullptr;
    rc = tssort_eval_report_json(&report, &json);
    if (rc != TSSORT_OK) return data_error(rc);
    std::printf("%s\n", json);
    tssort_string_free(json);
    return 0;
  }

  if (binned->parsed()) {
    echo("command", "bench-binned");
    echo("d", static_cast<int64_t>(bb.d));
    echo("dc", bb.dc);
    echo("dl", bb.dl);
    echo("tau_max", static_cast<int64_t>(bb.tau_max));
    echo("delta", bb.delta);
    echo("n", bb.n);
    echo("noise_low", bb.noise_low);
    echo("noise_high", bb.noise_high);
    echo("m", static_cast<int64_t>(bb.m));
    echo("criterion", bb.criterion);
    {
      std::string methods_joined;
      for (const std::string& m : bb.methods) {
        if (!methods_joined.empty()) methods_joined += ",";
        methods_joined += m;
      }
      echo("methods", methods_joined);
    }
    echo("jobs", static_cast<int64_t>(bb.jobs));
    echo("out", bb.out);
    echo_seed(bb.seed);

    int criterion = 0;
    if (int rc = parse_criterion(bb.criterion, criterion)) return rc;

    tssort_binned_config cfg;
    tssort_binned_config_init(&cfg);
    cfg.gen.d = bb.d;
    cfg.gen.contemp_degree = bb.dc;
    cfg.gen.lag_degree = bb.dl;
    cfg.gen.tau_max = bb.tau_max;
    cfg.gen.weight_decay = bb.delta;
    cfg.n = bb.n;
    cfg.burn_in = bb.burn_in;
    cfg.noise_low = bb.noise_low;
    cfg.noise_high = bb.noise_high;
    cfg.bin_edges = bb.bins.data();
    cfg.n_bins = static_cast<int32_t>(bb.bins.size()) - 1;
    cfg.m = bb.m;
    cfg.criterion = criterion;
    if (int rc = parse_pair_mode(bb.mode, cfg.pair_mode)) return rc;
    std::vector<const char*> method_ptrs;
    for (const std::string& m : bb.methods) method_ptrs.push_back(m.c_str());
    cfg.methods = method_ptrs.data();
    cfg.n_methods = static_cast<int32_t>(method_ptrs.size());
    cfg.max_attempts_per_bin = bb.max_attempts;
    cfg.base_seed = bb.seed;
    cfg.jobs = bb.jobs > 0 ? bb.jobs : static_cast<int32_t>(std::thread::hardware_concurrency());
    cfg.eval_threshold = bb.threshold;
    cfg.dyno.lambda1 = bb.lambda1;
    cfg.dyno.lambda2 = bb.lambda2;
    cfg.dyno.threshold = bb.threshold;

    int rc = tssort_bench_binned(&cfg, bb.out.c_str());
    if (rc != TSSORT_OK) return data_error(rc);
    std::fprintf(stderr, "# wrote %s/trials.csv and %s/summary.json\n", bb.out.c_str(),
                 bb.out.c_str());
    return 0;
  }

  if (grid->parsed()) {
    echo("command", "bench-grid");
    echo("d", static_cast<int64_t>(gr.d));
    echo("trials", static_cast<int64_t>(gr.trials));
    echo("n", gr.n);
    echo("tau_max", static_cast<int64_t>(gr.tau_max));
    echo("delta", gr.delta);
    echo("jobs", static_cast<int64_t>(gr.jobs));
    echo("out", gr.out);
    echo_seed(gr.seed);

    tssort_grid_config cfg;
    tssort_grid_config_init(&cfg);
    cfg.d = gr.d;
    cfg.degrees = gr.degrees.data();
    cfg.n_degrees = static_cast<int32_t>(gr.degrees.size());
    cfg.trials = gr.trials;
    cfg.n = gr.n;
    cfg.burn_in = gr.burn_in;
    cfg.noise_low = gr.noise_low;
    cfg.noise_high = gr.noise_high;
    cfg.tau_max = gr.tau_max;
    cfg.weight_decay = gr.delta;
    cfg.contemp_low = gr.contemp_low;
    cfg.contemp_high = gr.contemp_high;
    cfg.lag_low = gr.lag_low;
    cfg.lag_high = gr.lag_high;
    if (int rc = parse_pair_mode(gr.mode, cfg.pair_mode)) return rc;
    cfg.base_seed = gr.seed;
    cfg.jobs = gr.jobs > 0 ? gr.jobs : static_cast<int32_t>(std::thread::hardware_concurrency());

    int rc = tssort_bench_grid(&cfg, gr.out.c_str());
    if (rc != TSSORT_OK) return data_error(rc);
    std::fprintf(stderr, "# wrote %s/cells.csv\n", gr.out.c_str());
    return 0;
  }

  if (scaling->parsed()) {
    echo("command", "bench-scaling");
    echo("graphs_per_d", static_cast<int64_t>(sc.graphs_per_d));
    echo("n", sc.n);
    echo("dc", sc.dc);
    echo("dl", sc.dl);
    echo("tau_max", static_cast<int64_t>(sc.tau_max));
    echo("delta", sc.delta);
    echo("jobs", static_cast<int64_t>(sc.jobs));
    echo("out", sc.out);
    echo_seed(sc.seed);

    tssort_scaling_config cfg;
    tssort_scaling_config_init(&cfg);
    cfg.d_list = sc.d_list.data();
    cfg.n_d = static_cast<int32_t>(sc.d_list.size());
    cfg.graphs_per_d = sc.graphs_per_d;
    cfg.n = sc.n;
    cfg.burn_in = sc.burn_in;
    cfg.noise_low = sc.noise_low;
    cfg.noise_high = sc.noise_high;
    cfg.contemp_degree = sc.dc;
    cfg.lag_degree = sc.dl;
    cfg.tau_max = sc.tau_max;
    cfg.weight_decay = sc.delta;
    cfg.contemp_low = sc.contemp_low;
    cfg.contemp_high = sc.contemp_high;
    cfg.lag_low = sc.lag_low;
    cfg.lag_high = sc.lag_high;
    if (int rc = parse_pair_mode(sc.mode, cfg.pair_mode)) return rc;
    cfg.base_seed = sc.seed;
    cfg.jobs = sc.jobs > 0 ? sc.jobs : static_cast<int32_t>(std::thread::hardware_concurrency());

    int rc = tssort_bench_scaling(&cfg, sc.out.c_str());
    if (rc != TSSORT_OK) return data_error(rc);
    std::fprintf(stderr, "# wrote %s/scaling_table.csv\n", sc.out.c_str());
    return 0;
  }

  return kExitUsage;
}
