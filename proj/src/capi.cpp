#include "tssort/tssort.h"

#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "common.hpp"
#include "datasets.hpp"
#include "harness.hpp"

struct tssort_graph {
  tssort::WeightedTsGraph g;
  std::string method;
  std::optional<tssort::ConvergenceMeta> convergence;
  bool loaded_external = false;  // loaded graphs use the 1e-12 nonzero rule
  bool wc_acyclic = true;
};

struct tssort_summary {
  tssort::SummaryGraph s;
};

struct tssort_panel {
  tssort::Panel p;
};

namespace {

thread_local std::string g_last_error;

int status_of(tssort::Errc code) {
  using tssort::Errc;
  switch (code) {
    case Errc::invalid_argument: return TSSORT_E_INVALID;
    case Errc::io_error: return TSSORT_E_IO;
    case Errc::parse_error: return TSSORT_E_PARSE;
    case Errc::domain_error: return TSSORT_E_DOMAIN;
    case Errc::no_admissible_pairs: return TSSORT_E_NO_PAIRS;
    case Errc::unstable: return TSSORT_E_UNSTABLE;
    case Errc::not_converged: return TSSORT_E_NOT_CONVERGED;
    case Errc::internal: return TSSORT_E_INTERNAL;
  }
  return TSSORT_E_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return TSSORT_OK;
  } catch (const tssort::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TSSORT_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TSSORT_E_INTERNAL;
  }
}

int invalid(const char* msg) {
  g_last_error = msg;
  return TSSORT_E_INVALID;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tssort::Criterion to_criterion(int c) {
  if (c == TSSORT_CRI_VARIANCE) return tssort::Criterion::Variance;
  if (c == TSSORT_CRI_R2) return tssort::Criterion::R2;
  tssort::fail(tssort::Errc::invalid_argument, "unknown criterion id");
}

tssort::PairMode to_pair_mode(int m) {
  switch (m) {
    case TSSORT_MODE_ADMISSIBLE: return tssort::PairMode::Admissible;
    case TSSORT_MODE_ALL_CONNECTED: return tssort::PairMode::AllConnected;
    case TSSORT_MODE_PATH_WEIGHTED: return tssort::PairMode::PathWeighted;
  }
  tssort::fail(tssort::Errc::invalid_argument, "unknown pair mode id");
}

tssort::EdgeScope to_scope(int s) {
  switch (s) {
    case TSSORT_SCOPE_ALL: return tssort::EdgeScope::All;
    case TSSORT_SCOPE_CONTEMP: return tssort::EdgeScope::Contemporaneous;
    case TSSORT_SCOPE_LAGGED: return tssort::EdgeScope::Lagged;
  }
  tssort::fail(tssort::Errc::invalid_argument, "unknown scope id");
}

tssort::EvalMode to_eval_mode(int m) {
  switch (m) {
    case TSSORT_EVAL_OVERALL: return tssort::EvalMode::Overall;
    case TSSORT_EVAL_CONTEMP: return tssort::EvalMode::Contemp;
    case TSSORT_EVAL_LAGGED: return tssort::EvalMode::Lagged;
    case TSSORT_EVAL_SUMMARY: return tssort::EvalMode::Summary;
  }
  tssort::fail(tssort::Errc::invalid_argument, "unknown eval mode id");
}

tssort::OrderKind to_order(int o) {
  switch (o) {
    case TSSORT_ORDER_VARIANCE: return tssort::OrderKind::Variance;
    case TSSORT_ORDER_R2: return tssort::OrderKind::R2;
    case TSSORT_ORDER_RANDOM: return tssort::OrderKind::Random;
    case TSSORT_ORDER_VARIANCE_REVERSED: return tssort::OrderKind::VarianceReversed;
  }
  tssort::fail(tssort::Errc::invalid_argument, "unknown order id");
}

tssort::GraphGenConfig to_gen_config(const tssort_gen_config& c) {
  tssort::GraphGenConfig cfg;
  cfg.d = c.d;
  cfg.contemp_degree = c.contemp_degree;
  cfg.lag_degree = c.lag_degree;
  cfg.tau_max = c.tau_max;
  cfg.weight_decay = c.weight_decay;
  cfg.contemp_low = c.contemp_low;
  cfg.contemp_high = c.contemp_high;
  cfg.lag_low = c.lag_low;
  cfg.lag_high = c.lag_high;
  return cfg;
}

tssort::DynoConfig to_dyno_config(const tssort_dyno_config& c) {
  tssort::DynoConfig cfg;
  cfg.lambda1 = c.lambda1;
  cfg.lambda2 = c.lambda2;
  cfg.threshold = c.threshold;
  cfg.max_outer = c.max_outer;
  cfg.h_tol = c.h_tol;
  cfg.rho_max = c.rho_max;
  return cfg;
}

}  // namespace

extern "C" {

const char* tssort_version(void) { return "0.1.0"; }

const char* tssort_last_error(void) { return g_last_error.c_str(); }

void tssort_string_free(char* s) { delete[] s; }

uint64_t tssort_derive_seed(uint64_t base, uint64_t stream) {
  return tssort::derive_seed(base, stream);
}

void tssort_gen_config_init(tssort_gen_config* cfg) {
  if (!cfg) return;
  tssort::GraphGenConfig d;
  *cfg = {d.d,          d.contemp_degree, d.lag_degree, d.tau_max, d.weight_decay,
          d.contemp_low, d.contemp_high,  d.lag_low,    d.lag_high};
}

int tssort_graph_generate(const tssort_gen_config* cfg, uint64_t seed, tssort_graph** out) {
  if (!cfg || !out) return invalid("null argument");
  return guarded([&] {
    tssort::Rng rng(seed);
    auto handle = std::make_unique<tssort_graph>();
    handle->g = tssort::generate_er_tsgraph(to_gen_config(*cfg), rng);
    *out = handle.release();
  });
}

int tssort_graph_load_json(const char* path, tssort_graph** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    tssort::GraphFile gf = tssort::load_graph_json(path);
    auto handle = std::make_unique<tssort_graph>();
    handle->g = std::move(gf.graph);
    handle->method = std::move(gf.method);
    handle->convergence = gf.convergence;
    handle->loaded_external = true;
    handle->wc_acyclic = gf.wc_acyclic;
    *out = handle.release();
  });
}

int tssort_graph_save_json(const tssort_graph* g, const char* path) {
  if (!g || !path) return invalid("null argument");
  return guarded([&] {
    tssort::GraphFile gf;
    gf.graph = g->g;
    gf.method = g->method;
    gf.convergence = g->convergence;
    tssort::save_graph_json(gf, path);
  });
}

int tssort_graph_dims(const tssort_graph* g, int32_t* d, int32_t* tau_max) {
  if (!g) return invalid("null argument");
  if (d) *d = g->g.d;
  if (tau_max) *tau_max = g->g.tau_max;
  return TSSORT_OK;
}

int tssort_graph_is_stable(const tssort_graph* g, int32_t* stable) {
  if (!g || !stable) return invalid("null argument");
  return guarded([&] { *stable = tssort::is_stable(g->g) ? 1 : 0; });
}

int tssort_graph_wc_acyclic(const tssort_graph* g, int32_t* acyclic) {
  if (!g || !acyclic) return invalid("null argument");
  *acyclic = g->wc_acyclic ? 1 : 0;
  return TSSORT_OK;
}

void tssort_graph_free(tssort_graph* g) { delete g; }

int tssort_summary_from_graph(const tssort_graph* g, int scope, tssort_summary** out) {
  if (!g || !out) return invalid("null argument");
  return guarded([&] {
    double tol = g->loaded_external ? 1e-12 : 0.0;
    auto handle = std::make_unique<tssort_summary>();
    handle->s = tssort::summary_of(g->g, to_scope(scope), tol);
    *out = handle.release();
  });
}

int tssort_summary_load_csv(const char* path, tssort_summary** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    auto handle = std::make_unique<tssort_summary>();
    handle->s = tssort::load_summary_csv(path);
    *out = handle.release();
  });
}

int tssort_summary_save_csv(const tssort_summary* s, const char* path) {
  if (!s || !path) return invalid("null argument");
  return guarded([&] { tssort::save_summary_csv(s->s, path); });
}

int tssort_summary_dims(const tssort_summary* s, int32_t* d) {
  if (!s || !d) return invalid("null argument");
  *d = s->s.d;
  return TSSORT_OK;
}

void tssort_summary_free(tssort_summary* s) { delete s; }

void tssort_sim_config_init(tssort_sim_config* cfg) {
  if (!cfg) return;
  cfg->n = 500;
  cfg->burn_in = 1000;
  cfg->noise_std = 1.0;
  cfg->noise_std_per_node = nullptr;
}

int tssort_simulate(const tssort_graph* g, const tssort_sim_config* cfg, uint64_t seed,
                    tssort_panel** out) {
  if (!g || !cfg || !out) return invalid("null argument");
  return guarded([&] {
    tssort::SimConfig sim;
    sim.n = cfg->n;
    sim.burn_in = cfg->burn_in;
    if (cfg->noise_std_per_node)
      sim.noise_std.assign(cfg->noise_std_per_node, cfg->noise_std_per_node + g->g.d);
    else
      sim.noise_std.assign(static_cast<size_t>(g->g.d), cfg->noise_std);
    tssort::Rng rng(seed);
    auto handle = std::make_unique<tssort_panel>();
    handle->p = tssort::simulate(g->g, sim, rng);
    *out = handle.release();
  });
}

int tssort_panel_load_csv(const char* path, tssort_panel** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    auto handle = std::make_unique<tssort_panel>();
    handle->p = tssort::load_panel_csv(path);
    *out = handle.release();
  });
}

int tssort_panel_save_csv(const tssort_panel* p, const char* path) {
  if (!p || !path) return invalid("null argument");
  return guarded([&] { tssort::save_panel_csv(p->p, path); });
}

int tssort_panel_dims(const tssort_panel* p, int64_t* rows, int32_t* cols) {
  if (!p) return invalid("null argument");
  if (rows) *rows = p->p.rows();
  if (cols) *cols = p->p.cols();
  return TSSORT_OK;
}

int tssort_panel_standardize(const tssort_panel* p, tssort_panel** out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    auto handle = std::make_unique<tssort_panel>();
    handle->p = tssort::standardize(p->p);
    *out = handle.release();
  });
}

void tssort_panel_free(tssort_panel* p) { delete p; }

int tssort_sortability(const tssort_panel* p, const tssort_summary* s, int criterion, int mode,
                       int32_t tau_max, tssort_sortability_report* out) {
  if (!p || !s || !out) return invalid("null argument");
  return guarded([&] {
    tssort::Criterion cri_kind = to_criterion(criterion);
    tssort::CriterionVector cri = cri_kind == tssort::Criterion::Variance
                                      ? tssort::marginal_variance(p->p)
                                      : tssort::r2_scores(p->p, tau_max);
    tssort::SortabilityReport rep =
        tssort::sortability_score(cri, s->s, to_pair_mode(mode));
    out->score = rep.score;
    out->pairs_total = rep.pairs_total;
    out->pairs_increasing = rep.pairs_increasing;
    out->pairs_tied = rep.pairs_tied;
    out->criterion = criterion;
    out->mode = mode;
  });
}

int tssort_sortability_report_json(const tssort_sortability_report* r, char** json_out) {
  if (!r || !json_out) return invalid("null argument");
  return guarded([&] {
    tssort::SortabilityReport rep;
    rep.score = r->score;
    rep.pairs_total = r->pairs_total;
    rep.pairs_increasing = r->pairs_increasing;
    rep.pairs_tied = r->pairs_tied;
    rep.mode = to_pair_mode(r->mode);
    *json_out = copy_string(tssort::report_json(rep, to_criterion(r->criterion)));
  });
}

void tssort_dyno_config_init(tssort_dyno_config* cfg) {
  if (!cfg) return;
  tssort::DynoConfig d;
  cfg->lambda1 = d.lambda1;
  cfg->lambda2 = d.lambda2;
  cfg->threshold = d.threshold;
  cfg->max_outer = d.max_outer;
  cfg->h_tol = d.h_tol;
  cfg->rho_max = d.rho_max;
}

int tssort_fit_sortnregress(const tssort_panel* p, int32_t tau_max, int order, uint64_t seed,
                            tssort_graph** out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    tssort::OrderStrategy strategy{to_order(order), seed};
    tssort::EstimatedTsGraph est = tssort::sortnregress_ts(p->p, tau_max, strategy);
    auto handle = std::make_unique<tssort_graph>();
    handle->g = std::move(est.graph);
    handle->method = std::move(est.method);
    *out = handle.release();
  });
}

int tssort_fit_dynotears(const tssort_panel* p, int32_t tau_max, const tssort_dyno_config* cfg,
                         tssort_graph** out, tssort_dyno_result* result) {
  if (!p || !cfg || !out) return invalid("null argument");
  return guarded([&] {
    tssort::DynoResult res = tssort::fit_dynotears(p->p, tau_max, to_dyno_config(*cfg));
    auto handle = std::make_unique<tssort_graph>();
    handle->g = std::move(res.est.graph);
    handle->method = res.est.method;
    handle->convergence =
        tssort::ConvergenceMeta{res.h_value, res.outer_iterations, res.converged};
    *out = handle.release();
    if (result) {
      result->h_value = res.h_value;
      result->outer_iterations = res.outer_iterations;
      result->converged = res.converged ? 1 : 0;
    }
  });
}

int tssort_evaluate(const tssort_graph* est, double est_threshold, const tssort_graph* truth,
                    double truth_threshold, int mode, tssort_eval_report* out) {
  if (!est || !truth || !out) return invalid("null argument");
  return guarded([&] {
    tssort::BinaryStack est_bin = tssort::binarize(est->g, est_threshold);
    tssort::BinaryStack truth_bin = tssort::binarize(truth->g, truth_threshold);
    tssort::EvalReport rep = tssort::evaluate(est_bin, truth_bin, to_eval_mode(mode));
    out->tp = rep.tp;
    out->fp = rep.fp;
    out->fn = rep.fn;
    out->f1 = rep.f1;
    out->mode = mode;
  });
}

int tssort_evaluate_vs_summary(const tssort_graph* est, double est_threshold,
                               const tssort_summary* truth, tssort_eval_report* out) {
  if (!est || !truth || !out) return invalid("null argument");
  return guarded([&] {
    tssort::BinaryStack est_bin = tssort::binarize(est->g, est_threshold);
    tssort::BoolMat truth_mat(truth->s.d, truth->s.d);
    for (int i = 0; i < truth->s.d; ++i)
      for (int j = 0; j < truth->s.d; ++j) truth_mat(i, j) = truth->s.edge(i, j);
    tssort::EvalReport rep =
        tssort::evaluate(est_bin, tssort::BinaryStack{truth_mat}, tssort::EvalMode::Summary);
    out->tp = rep.tp;
    out->fp = rep.fp;
    out->fn = rep.fn;
    out->f1 = rep.f1;
    out->mode = TSSORT_EVAL_SUMMARY;
  });
}

int tssort_eval_report_json(const tssort_eval_report* r, char** json_out) {
  if (!r || !json_out) return invalid("null argument");
  return guarded([&] {
    tssort::EvalReport rep;
    rep.tp = r->tp;
    rep.fp = r->fp;
    rep.fn = r->fn;
    rep.f1 = r->f1;
    rep.mode = to_eval_mode(r->mode);
    *json_out = copy_string(tssort::eval_report_json(rep));
  });
}

void tssort_scaling_config_init(tssort_scaling_config* cfg) {
  if (!cfg) return;
  tssort::ScalingConfig d;
  cfg->d_list = nullptr;
  cfg->n_d = 0;
  cfg->graphs_per_d = d.graphs_per_d;
  cfg->n = d.n;
  cfg->burn_in = d.burn_in;
  cfg->noise_low = d.noise_low;
  cfg->noise_high = d.noise_high;
  cfg->contemp_degree = d.contemp_degree;
  cfg->lag_degree = d.lag_degree;
  cfg->tau_max = d.tau_max;
  cfg->weight_decay = d.weight_decay;
  cfg->contemp_low = d.contemp_low;
  cfg->contemp_high = d.contemp_high;
  cfg->lag_low = d.lag_low;
  cfg->lag_high = d.lag_high;
  cfg->pair_mode = TSSORT_MODE_ALL_CONNECTED;
  cfg->base_seed = d.base_seed;
  cfg->jobs = d.jobs;
}

void tssort_grid_config_init(tssort_grid_config* cfg) {
  if (!cfg) return;
  tssort::GridConfig d;
  cfg->d = d.d;
  cfg->degrees = nullptr;
  cfg->n_degrees = 0;
  cfg->trials = d.trials;
  cfg->n = d.n;
  cfg->burn_in = d.burn_in;
  cfg->noise_low = d.noise_low;
  cfg->noise_high = d.noise_high;
  cfg->tau_max = d.tau_max;
  cfg->weight_decay = d.weight_decay;
  cfg->contemp_low = d.contemp_low;
  cfg->contemp_high = d.contemp_high;
  cfg->lag_low = d.lag_low;
  cfg->lag_high = d.lag_high;
  cfg->pair_mode = TSSORT_MODE_ALL_CONNECTED;
  cfg->base_seed = d.base_seed;
  cfg->jobs = d.jobs;
}

void tssort_binned_config_init(tssort_binned_config* cfg) {
  if (!cfg) return;
  tssort::BinnedBenchConfig d;
  tssort_gen_config_init(&cfg->gen);
  cfg->n = d.n;
  cfg->burn_in = d.burn_in;
  cfg->noise_low = d.noise_low;
  cfg->noise_high = d.noise_high;
  cfg->bin_edges = nullptr;
  cfg->n_bins = 0;
  cfg->m = d.m;
  cfg->criterion = TSSORT_CRI_VARIANCE;
  cfg->pair_mode = TSSORT_MODE_ADMISSIBLE;
  cfg->methods = nullptr;
  cfg->n_methods = 0;
  cfg->max_attempts_per_bin = d.max_attempts_per_bin;
  cfg->base_seed = d.base_seed;
  cfg->jobs = d.jobs;
  cfg->eval_threshold = d.eval_threshold;
  tssort_dyno_config_init(&cfg->dyno);
}

int tssort_bench_scaling(const tssort_scaling_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return invalid("null argument");
  if (!cfg->d_list || cfg->n_d < 1) return invalid("d_list must not be empty");
  return guarded([&] {
    tssort::ScalingConfig c;
    c.d_list.assign(cfg->d_list, cfg->d_list + cfg->n_d);
    c.graphs_per_d = cfg->graphs_per_d;
    c.n = cfg->n;
    c.burn_in = cfg->burn_in;
    c.noise_low = cfg->noise_low;
    c.noise_high = cfg->noise_high;
    c.contemp_degree = cfg->contemp_degree;
    c.lag_degree = cfg->lag_degree;
    c.tau_max = cfg->tau_max;
    c.weight_decay = cfg->weight_decay;
    c.contemp_low = cfg->contemp_low;
    c.contemp_high = cfg->contemp_high;
    c.lag_low = cfg->lag_low;
    c.lag_high = cfg->lag_high;
    c.mode = to_pair_mode(cfg->pair_mode);
    c.base_seed = cfg->base_seed;
    c.jobs = cfg->jobs;
    tssort::ScalingResult result = tssort::node_scaling_study(c);
    tssort::write_scaling_result(result, c, out_dir);
  });
}

int tssort_bench_grid(const tssort_grid_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return invalid("null argument");
  if (!cfg->degrees || cfg->n_degrees < 1) return invalid("degree list must not be empty");
  return guarded([&] {
    tssort::GridConfig c;
    c.d = cfg->d;
    c.degrees.assign(cfg->degrees, cfg->degrees + cfg->n_degrees);
    c.trials = cfg->trials;
    c.n = cfg->n;
    c.burn_in = cfg->burn_in;
    c.noise_low = cfg->noise_low;
    c.noise_high = cfg->noise_high;
    c.tau_max = cfg->tau_max;
    c.weight_decay = cfg->weight_decay;
    c.contemp_low = cfg->contemp_low;
    c.contemp_high = cfg->contemp_high;
    c.lag_low = cfg->lag_low;
    c.lag_high = cfg->lag_high;
    c.mode = to_pair_mode(cfg->pair_mode);
    c.base_seed = cfg->base_seed;
    c.jobs = cfg->jobs;
    tssort::GridResult result = tssort::degree_grid_study(c);
    tssort::write_grid_result(result, c, out_dir);
  });
}

int tssort_bench_binned(const tssort_binned_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return invalid("null argument");
  if (!cfg->bin_edges || cfg->n_bins < 1) return invalid("bin edges must not be empty");
  if (!cfg->methods || cfg->n_methods < 1) return invalid("method list must not be empty");
  return guarded([&] {
    tssort::BinnedBenchConfig c;
    c.gen = to_gen_config(cfg->gen);
    c.n = cfg->n;
    c.burn_in = cfg->burn_in;
    c.noise_low = cfg->noise_low;
    c.noise_high = cfg->noise_high;
    c.bin_edges.assign(cfg->bin_edges, cfg->bin_edges + cfg->n_bins + 1);
    c.m = cfg->m;
    c.criterion = to_criterion(cfg->criterion);
    c.mode = to_pair_mode(cfg->pair_mode);
    for (int32_t i = 0; i < cfg->n_methods; ++i) c.methods.emplace_back(cfg->methods[i]);
    c.max_attempts_per_bin = cfg->max_attempts_per_bin;
    c.base_seed = cfg->base_seed;
    c.jobs = cfg->jobs;
    c.eval_threshold = cfg->eval_threshold;
    c.dyno = to_dyno_config(cfg->dyno);
    tssort::MethodRegistry registry =
        tssort::MethodRegistry::standard(c.dyno, c.lasso, c.gen.tau_max);
    tssort::BinnedResult result = tssort::binned_benchmark(c, registry);
    tssort::write_binned_result(result, c, out_dir);
  });
}

}  // extern "C"
