#include "harness.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "common.hpp"

namespace tssort {

namespace {

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
  long used = 0;
};

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  out.used = static_cast<long>(values.size());
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

std::ofstream open_result_file(const std::string& dir, const std::string& name) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(fs::path(dir) / name, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot open for writing: " + (fs::path(dir) / name).string());
  return out;
}

}  // namespace

std::string to_string(EdgeScope s) {
  switch (s) {
    case EdgeScope::All: return "all";
    case EdgeScope::Contemporaneous: return "contemp";
    case EdgeScope::Lagged: return "lagged";
  }
  return "?";
}

void parallel_for(long n_items, int jobs, const std::function<void(long)>& fn) {
  if (n_items <= 0) return;
  if (jobs <= 1 || n_items == 1) {
    for (long i = 0; i < n_items; ++i) fn(i);
    return;
  }
  int workers = static_cast<int>(std::min<long>(jobs, n_items));
  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= n_items || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Method registry

MethodRegistry MethodRegistry::standard(const DynoConfig& dyno, const LassoConfig& lasso,
                                        int tau_max) {
  MethodRegistry reg;
  auto sortn = [lasso, tau_max](OrderKind kind) {
    return [lasso, tau_max, kind](const BenchDataset& ds) {
      OrderStrategy strategy{kind, ds.method_seed};
      return sortnregress_ts(ds.panel, tau_max, strategy, lasso);
    };
  };
  reg.add("varsortnregress", sortn(OrderKind::Variance));
  reg.add("r2sortnregress", sortn(OrderKind::R2));
  reg.add("randomregress", sortn(OrderKind::Random));
  reg.add("varsortnregress_rev", sortn(OrderKind::VarianceReversed));
  reg.add("dynotears", [dyno, tau_max](const BenchDataset& ds) {
    return fit_dynotears(ds.panel, tau_max, dyno).est;
  });
  reg.add("dynotears_std", [dyno, tau_max](const BenchDataset& ds) {
    EstimatedTsGraph est = fit_dynotears(standardize(ds.panel), tau_max, dyno).est;
    est.method = "dynotears_std";
    return est;
  });
  return reg;
}

void MethodRegistry::add(const std::string& name, Method method) {
  methods_[name] = std::move(method);
}

bool MethodRegistry::contains(const std::string& name) const {
  return methods_.count(name) > 0 || name.rfind("external:", 0) == 0;
}

Method MethodRegistry::get(const std::string& name) const {
  auto it = methods_.find(name);
  if (it != methods_.end()) return it->second;
  // External estimates produced by other tools are scored like any method.
  if (name.rfind("external:", 0) == 0) {
    std::string dir = name.substr(9);
    return [dir](const BenchDataset& ds) {
      std::string path = dir + "/est_" + std::to_string(ds.dataset_index) + ".json";
      GraphFile gf = load_graph_json(path);
      EstimatedTsGraph est;
      est.graph = std::move(gf.graph);
      est.method = gf.method.empty() ? "external" : gf.method;
      return est;
    };
  }
  fail(Errc::invalid_argument, "unknown method: " + name);
}

// ---------------------------------------------------------------------------
// Node-scaling study

namespace {

struct ScopeScores {
  // score per (scope, criterion); NaN marks an undefined scope
  double values[3][2];
  int64_t pairs[3][2];
};

constexpr EdgeScope kScopes[3] = {EdgeScope::Contemporaneous, EdgeScope::Lagged, EdgeScope::All};
constexpr Criterion kCriteria[2] = {Criterion::Variance, Criterion::R2};

struct StableDraw {
  WeightedTsGraph graph;
  std::vector<double> noise_std;
  Rng rng{0};  // stream state after generation, ready for simulation
};

// Per attempt: derive a stream, draw graph then per-node noise stds, keep the
// first stationary draw. Rejections are counted.
StableDraw generate_stable(const GraphGenConfig& gen, double noise_lo, double noise_hi,
                           uint64_t base, uint64_t stream_lo, int max_attempts, long* rejected) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng = Rng::derived(base, stream_lo + static_cast<uint64_t>(attempt));
    StableDraw draw{generate_er_tsgraph(gen, rng), {}, rng};
    draw.noise_std.resize(static_cast<size_t>(gen.d));
    for (double& s : draw.noise_std) s = rng.uniform(noise_lo, noise_hi);
    draw.rng = rng;
    if (is_stable(draw.graph)) return draw;
    if (rejected) ++*rejected;
  }
  fail(Errc::unstable, "no stable draw found in " + std::to_string(max_attempts) + " attempts");
}

ScopeScores score_all_scopes(const WeightedTsGraph& g, const Panel& p, int tau_max,
                             PairMode mode) {
  ScopeScores out{};
  CriterionVector cri_var = marginal_variance(p);
  CriterionVector cri_r2 = r2_scores(p, tau_max);
  for (int s = 0; s < 3; ++s) {
    SummaryGraph summary = summary_of(g, kScopes[s]);
    for (int c = 0; c < 2; ++c) {
      const CriterionVector& cri = c == 0 ? cri_var : cri_r2;
      try {
        SortabilityReport rep = sortability_score(cri, summary, mode);
        out.values[s][c] = rep.score;
        out.pairs[s][c] = rep.pairs_total;
      } catch (const Error& e) {
        if (e.code() != Errc::no_admissible_pairs) throw;
        out.values[s][c] = std::nan("");
        out.pairs[s][c] = 0;
      }
    }
  }
  return out;
}

}  // namespace

ScalingResult node_scaling_study(const ScalingConfig& cfg) {
  if (cfg.d_list.empty()) fail(Errc::invalid_argument, "d_list must not be empty");
  for (int d : cfg.d_list)
    if (d < 2) fail(Errc::invalid_argument, "node counts must be >= 2");
  if (cfg.graphs_per_d < 1) fail(Errc::invalid_argument, "graphs_per_d must be >= 1");
  if (!(cfg.noise_low > 0) || cfg.noise_high < cfg.noise_low)
    fail(Errc::invalid_argument, "invalid noise range");

  const long n_trials = static_cast<long>(cfg.d_list.size()) * cfg.graphs_per_d;
  std::vector<ScopeScores> scores(static_cast<size_t>(n_trials));
  std::vector<long> rejected(static_cast<size_t>(n_trials), 0);

  parallel_for(n_trials, cfg.jobs, [&](long item) {
    int d_idx = static_cast<int>(item / cfg.graphs_per_d);
    GraphGenConfig gen;
    gen.d = cfg.d_list[static_cast<size_t>(d_idx)];
    gen.contemp_degree = cfg.contemp_degree;
    gen.lag_degree = cfg.lag_degree;
    gen.tau_max = cfg.tau_max;
    gen.weight_decay = cfg.weight_decay;
    gen.contemp_low = cfg.contemp_low;
    gen.contemp_high = cfg.contemp_high;
    gen.lag_low = cfg.lag_low;
    gen.lag_high = cfg.lag_high;

    uint64_t stream_lo = static_cast<uint64_t>(item) * cfg.max_attempts_per_graph;
    StableDraw draw =
        generate_stable(gen, cfg.noise_low, cfg.noise_high, cfg.base_seed, stream_lo,
                        cfg.max_attempts_per_graph, &rejected[static_cast<size_t>(item)]);
    SimConfig sim;
    sim.n = cfg.n;
    sim.burn_in = cfg.burn_in;
    sim.noise_std = draw.noise_std;
    Panel p = simulate(draw.graph, sim, draw.rng);
    scores[static_cast<size_t>(item)] = score_all_scopes(draw.graph, p, cfg.tau_max, cfg.mode);
  });

  ScalingResult result;
  for (long item = 0; item < n_trials; ++item) {
    result.rejected_draws += rejected[static_cast<size_t>(item)];
    int d_idx = static_cast<int>(item / cfg.graphs_per_d);
    int trial = static_cast<int>(item % cfg.graphs_per_d);
    for (int s = 0; s < 3; ++s)
      for (int c = 0; c < 2; ++c) {
        ScalingTrial st;
        st.d = cfg.d_list[static_cast<size_t>(d_idx)];
        st.trial = trial;
        st.scope = kScopes[s];
        st.criterion = kCriteria[c];
        st.defined = !std::isnan(scores[static_cast<size_t>(item)].values[s][c]);
        st.score = st.defined ? scores[static_cast<size_t>(item)].values[s][c] : 0.0;
        st.pairs_total = scores[static_cast<size_t>(item)].pairs[s][c];
        result.trials.push_back(st);
      }
  }

  for (int d : cfg.d_list)
    for (int s = 0; s < 3; ++s)
      for (int c = 0; c < 2; ++c) {
        std::vector<double> vals;
        for (const ScalingTrial& st : result.trials)
          if (st.d == d && st.scope == kScopes[s] && st.criterion == kCriteria[c] && st.defined)
            vals.push_back(st.score);
        MeanStd ms = mean_std(vals);
        result.rows.push_back({d, kScopes[s], kCriteria[c], ms.mean, ms.stddev, ms.used});
      }
  return result;
}

void write_scaling_result(const ScalingResult& result, const ScalingConfig& cfg,
                          const std::string& out_dir) {
  std::ofstream trials = open_result_file(out_dir, "trials.csv");
  trials << "d,trial,scope,criterion,defined,score,pairs_total\n";
  for (const ScalingTrial& t : result.trials)
    trials << t.d << ',' << t.trial << ',' << to_string(t.scope) << ',' << to_string(t.criterion)
           << ',' << (t.defined ? 1 : 0) << ',' << format_g17(t.score) << ',' << t.pairs_total
           << '\n';

  std::ofstream table = open_result_file(out_dir, "scaling_table.csv");
  table << "d,scope,criterion,mean,std,graphs_used\n";
  for (const ScalingRow& r : result.rows)
    table << r.d << ',' << to_string(r.scope) << ',' << to_string(r.criterion) << ','
          << format_g17(r.mean) << ',' << format_g17(r.stddev) << ',' << r.used << '\n';

  nlohmann::json j;
  j["config"] = {{"d_list", cfg.d_list},
                 {"graphs_per_d", cfg.graphs_per_d},
                 {"n", cfg.n},
                 {"burn_in", cfg.burn_in},
                 {"noise_low", cfg.noise_low},
                 {"noise_high", cfg.noise_high},
                 {"contemp_degree", cfg.contemp_degree},
                 {"lag_degree", cfg.lag_degree},
                 {"tau_max", cfg.tau_max},
                 {"weight_decay", cfg.weight_decay},
                 {"contemp_low", cfg.contemp_low},
                 {"contemp_high", cfg.contemp_high},
                 {"lag_low", cfg.lag_low},
                 {"lag_high", cfg.lag_high},
                 {"mode", to_string(cfg.mode)},
                 {"base_seed", cfg.base_seed}};
  j["rejected_draws"] = result.rejected_draws;
  nlohmann::json rows = nlohmann::json::array();
  for (const ScalingRow& r : result.rows)
    rows.push_back({{"d", r.d},
                    {"scope", to_string(r.scope)},
                    {"criterion", to_string(r.criterion)},
                    {"mean", r.mean},
                    {"std", r.stddev},
                    {"graphs_used", r.used}});
  j["rows"] = std::move(rows);
  std::ofstream summary = open_result_file(out_dir, "summary.json");
  summary << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Degree-grid study

GridResult degree_grid_study(const GridConfig& cfg) {
  if (cfg.degrees.empty()) fail(Errc::invalid_argument, "degree list must not be empty");
  for (double deg : cfg.degrees)
    if (deg < 0) fail(Errc::invalid_argument, "degrees must be >= 0");
  if (cfg.trials < 1) fail(Errc::invalid_argument, "trials must be >= 1");
  if (!(cfg.noise_low > 0) || cfg.noise_high < cfg.noise_low)
    fail(Errc::invalid_argument, "invalid noise range");

  const long cells = static_cast<long>(cfg.degrees.size()) * cfg.degrees.size();
  const long n_items = cells * cfg.trials;
  struct TrialOut {
    double var_score = 0.0, r2_score = 0.0;
    bool var_defined = false, r2_defined = false;
    bool accepted = false;
    long attempts = 0;
  };
  std::vector<TrialOut> outs(static_cast<size_t>(n_items));

  parallel_for(n_items, cfg.jobs, [&](long item) {
    long cell = item / cfg.trials;
    size_t dc_idx = static_cast<size_t>(cell) / cfg.degrees.size();
    size_t dl_idx = static_cast<size_t>(cell) % cfg.degrees.size();
    GraphGenConfig gen;
    gen.d = cfg.d;
    gen.contemp_degree = cfg.degrees[dc_idx];
    gen.lag_degree = cfg.degrees[dl_idx];
    gen.tau_max = cfg.tau_max;
    gen.weight_decay = cfg.weight_decay;
    gen.contemp_low = cfg.contemp_low;
    gen.contemp_high = cfg.contemp_high;
    gen.lag_low = cfg.lag_low;
    gen.lag_high = cfg.lag_high;

    TrialOut& out = outs[static_cast<size_t>(item)];
    uint64_t stream_lo = static_cast<uint64_t>(item) * cfg.max_attempts_per_trial;
    StableDraw draw;
    try {
      long rejected = 0;
      draw = generate_stable(gen, cfg.noise_low, cfg.noise_high, cfg.base_seed, stream_lo,
                             cfg.max_attempts_per_trial, &rejected);
      out.attempts = rejected + 1;
    } catch (const Error& e) {
      if (e.code() != Errc::unstable) throw;
      out.attempts = cfg.max_attempts_per_trial;
      return;  // cell trial missing
    }
    SimConfig sim;
    sim.n = cfg.n;
    sim.burn_in = cfg.burn_in;
    sim.noise_std = draw.noise_std;
    Panel p = simulate(draw.graph, sim, draw.rng);
    out.accepted = true;

    SummaryGraph summary = summary_of(draw.graph, EdgeScope::All);
    CriterionVector cri_var = marginal_variance(p);
    CriterionVector cri_r2 = r2_scores(p, cfg.tau_max);
    for (int c = 0; c < 2; ++c) {
      try {
        SortabilityReport rep =
            sortability_score(c == 0 ? cri_var : cri_r2, summary, cfg.mode);
        if (c == 0) {
          out.var_score = rep.score;
          out.var_defined = true;
        } else {
          out.r2_score = rep.score;
          out.r2_defined = true;
        }
      } catch (const Error& e) {
        if (e.code() != Errc::no_admissible_pairs) throw;
      }
    }
  });

  GridResult result;
  for (long cell = 0; cell < cells; ++cell) {
    size_t dc_idx = static_cast<size_t>(cell) / cfg.degrees.size();
    size_t dl_idx = static_cast<size_t>(cell) % cfg.degrees.size();
    double dc = cfg.degrees[dc_idx], dl = cfg.degrees[dl_idx];
    std::vector<double> var_vals, r2_vals;
    long attempts = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const TrialOut& out = outs[static_cast<size_t>(cell * cfg.trials + trial)];
      attempts += out.attempts;
      if (out.var_defined) var_vals.push_back(out.var_score);
      if (out.r2_defined) r2_vals.push_back(out.r2_score);
      result.trials.push_back(
          {dc, dl, trial, Criterion::Variance, out.var_defined, out.var_score});
      result.trials.push_back({dc, dl, trial, Criterion::R2, out.r2_defined, out.r2_score});
    }
    MeanStd var_ms = mean_std(var_vals);
    MeanStd r2_ms = mean_std(r2_vals);
    result.cells.push_back(
        {dc, dl, Criterion::Variance, var_ms.mean, var_ms.stddev, var_ms.used, attempts});
    result.cells.push_back(
        {dc, dl, Criterion::R2, r2_ms.mean, r2_ms.stddev, r2_ms.used, attempts});
  }
  return result;
}

void write_grid_result(const GridResult& result, const GridConfig& cfg,
                       const std::string& out_dir) {
  std::ofstream trials = open_result_file(out_dir, "trials.csv");
  trials << "dc,dl,trial,criterion,defined,score\n";
  for (const GridTrial& t : result.trials)
    trials << format_g17(t.contemp_degree) << ',' << format_g17(t.lag_degree) << ',' << t.trial
           << ',' << to_string(t.criterion) << ',' << (t.defined ? 1 : 0) << ','
           << format_g17(t.score) << '\n';

  std::ofstream cells = open_result_file(out_dir, "cells.csv");
  cells << "dc,dl,criterion,mean,std,trials_used,attempts\n";
  for (const GridCell& c : result.cells) {
    cells << format_g17(c.contemp_degree) << ',' << format_g17(c.lag_degree) << ','
          << to_string(c.criterion) << ',';
    if (c.used > 0)
      cells << format_g17(c.mean) << ',' << format_g17(c.stddev);
    else
      cells << ',';  // missing cell
    cells << ',' << c.used << ',' << c.attempts << '\n';
  }

  // Heatmap matrices (rows: d_c, cols: d_l), empty cells where no trial survived.
  for (Criterion criterion : {Criterion::Variance, Criterion::R2}) {
    std::ofstream heat =
        open_result_file(out_dir, "grid_" + to_string(criterion) + ".csv");
    heat << "dc\\dl";
    for (double dl : cfg.degrees) heat << ',' << format_g17(dl);
    heat << '\n';
    for (double dc : cfg.degrees) {
      heat << format_g17(dc);
      for (double dl : cfg.degrees) {
        heat << ',';
        for (const GridCell& c : result.cells)
          if (c.criterion == criterion && c.contemp_degree == dc && c.lag_degree == dl &&
              c.used > 0)
            heat << format_g17(c.mean);
      }
      heat << '\n';
    }
  }

  nlohmann::json j;
  j["config"] = {{"d", cfg.d},
                 {"degrees", cfg.degrees},
                 {"trials", cfg.trials},
                 {"n", cfg.n},
                 {"burn_in", cfg.burn_in},
                 {"noise_low", cfg.noise_low},
                 {"noise_high", cfg.noise_high},
                 {"tau_max", cfg.tau_max},
                 {"weight_decay", cfg.weight_decay},
                 {"contemp_low", cfg.contemp_low},
                 {"contemp_high", cfg.contemp_high},
                 {"lag_low", cfg.lag_low},
                 {"lag_high", cfg.lag_high},
                 {"mode", to_string(cfg.mode)},
                 {"base_seed", cfg.base_seed}};
  nlohmann::json cells_json = nlohmann::json::array();
  for (const GridCell& c : result.cells) {
    nlohmann::json cj = {{"dc", c.contemp_degree},
                         {"dl", c.lag_degree},
                         {"criterion", to_string(c.criterion)},
                         {"trials_used", c.used},
                         {"attempts", c.attempts}};
    if (c.used > 0) {
      cj["mean"] = c.mean;
      cj["std"] = c.stddev;
    }
    cells_json.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells_json);
  std::ofstream summary = open_result_file(out_dir, "summary.json");
  summary << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Sortability-binned benchmark

namespace {

struct AttemptOutcome {
  bool valid = false;
  bool no_pairs = false;
  double sortability = 0.0;
  WeightedTsGraph graph;
  Panel panel;
};

void run_attempt(const BinnedBenchConfig& cfg, uint64_t attempt, AttemptOutcome& out) {
  Rng rng = Rng::derived(cfg.base_seed, attempt);
  WeightedTsGraph g = generate_er_tsgraph(cfg.gen, rng);
  std::vector<double> noise(static_cast<size_t>(cfg.gen.d));
  for (double& s : noise) s = rng.uniform(cfg.noise_low, cfg.noise_high);
  if (!is_stable(g)) return;  // out.valid stays false

  SimConfig sim;
  sim.n = cfg.n;
  sim.burn_in = cfg.burn_in;
  sim.noise_std = std::move(noise);
  Panel p = simulate(g, sim, rng);

  SummaryGraph summary = summary_of(g, EdgeScope::All);
  CriterionVector cri = cfg.criterion == Criterion::Variance
                            ? marginal_variance(p)
                            : r2_scores(p, cfg.gen.tau_max);
  try {
    out.sortability = sortability_score(cri, summary, cfg.mode).score;
  } catch (const Error& e) {
    if (e.code() != Errc::no_admissible_pairs) throw;
    out.no_pairs = true;
    return;
  }
  out.graph = std::move(g);
  out.panel = std::move(p);
  out.valid = true;
}

}  // namespace

BinnedResult binned_benchmark(const BinnedBenchConfig& cfg, const MethodRegistry& registry) {
  validate(cfg.gen);
  if (cfg.m < 1) fail(Errc::invalid_argument, "m must be >= 1");
  if (cfg.methods.empty()) fail(Errc::invalid_argument, "method list must not be empty");
  if (cfg.bin_edges.size() < 2 || cfg.bin_edges.front() != 0.0 || cfg.bin_edges.back() != 1.0)
    fail(Errc::invalid_argument, "bin edges must cover [0, 1]");
  for (size_t i = 1; i < cfg.bin_edges.size(); ++i)
    if (!(cfg.bin_edges[i] > cfg.bin_edges[i - 1]))
      fail(Errc::invalid_argument, "bin edges must be strictly increasing");
  if (!(cfg.noise_low > 0) || cfg.noise_high < cfg.noise_low)
    fail(Errc::invalid_argument, "invalid noise range");
  std::vector<Method> methods;
  for (const std::string& name : cfg.methods) methods.push_back(registry.get(name));

  const int n_bins = static_cast<int>(cfg.bin_edges.size()) - 1;
  long per_bin_cap = cfg.max_attempts_per_bin > 0 ? cfg.max_attempts_per_bin : 200L * cfg.m;
  const long attempt_cap = per_bin_cap * n_bins;

  BinnedResult result;
  for (int b = 0; b < n_bins; ++b)
    result.bins.push_back({cfg.bin_edges[static_cast<size_t>(b)],
                           cfg.bin_edges[static_cast<size_t>(b) + 1], cfg.m, 0});

  // Phase 1: rejection-sample datasets. Attempts are scanned in index order so
  // the accepted set is independent of wave size and thread count.
  struct Accepted {
    AttemptOutcome outcome;
    int bin = 0;
  };
  std::vector<Accepted> accepted;
  int bins_left = n_bins;
  long attempt = 0;
  const long wave = 64;
  std::vector<AttemptOutcome> outcomes(static_cast<size_t>(wave));
  while (bins_left > 0 && attempt < attempt_cap) {
    long count = std::min(wave, attempt_cap - attempt);
    for (long i = 0; i < count; ++i) outcomes[static_cast<size_t>(i)] = AttemptOutcome{};
    parallel_for(count, cfg.jobs, [&](long i) {
      run_attempt(cfg, static_cast<uint64_t>(attempt + i), outcomes[static_cast<size_t>(i)]);
    });
    for (long i = 0; i < count && bins_left > 0; ++i) {
      ++result.attempts;
      AttemptOutcome& out = outcomes[static_cast<size_t>(i)];
      if (!out.valid) {
        if (out.no_pairs)
          ++result.rejected_no_pairs;
        else
          ++result.rejected_unstable;
        continue;
      }
      int bin = n_bins - 1;
      for (int b = 0; b < n_bins; ++b)
        if (out.sortability >= cfg.bin_edges[static_cast<size_t>(b)] &&
            (out.sortability < cfg.bin_edges[static_cast<size_t>(b) + 1] || b == n_bins - 1)) {
          bin = b;
          break;
        }
      if (result.bins[static_cast<size_t>(bin)].achieved >= cfg.m) {
        ++result.rejected_full_bin;
        continue;
      }
      Accepted acc;
      acc.outcome = std::move(out);
      acc.bin = bin;
      accepted.push_back(std::move(acc));
      if (++result.bins[static_cast<size_t>(bin)].achieved == cfg.m) --bins_left;
    }
    attempt += count;
  }

  // Phase 2: run every method on every accepted dataset.
  const long n_datasets = static_cast<long>(accepted.size());
  const long n_methods = static_cast<long>(methods.size());
  const long n_items = n_datasets * n_methods;
  std::vector<std::array<EvalReport, 3>> reports(static_cast<size_t>(n_items));

  parallel_for(n_items, cfg.jobs, [&](long item) {
    long ds_idx = item / n_methods;
    long m_idx = item % n_methods;
    const Accepted& acc = accepted[static_cast<size_t>(ds_idx)];
    BenchDataset ds;
    ds.truth = acc.outcome.graph;
    ds.panel = acc.outcome.panel;
    ds.sortability = acc.outcome.sortability;
    ds.dataset_index = static_cast<int>(ds_idx);
    ds.method_seed = derive_seed(cfg.base_seed, 0x1000000000ULL + static_cast<uint64_t>(item));
    EstimatedTsGraph est = methods[static_cast<size_t>(m_idx)](ds);
    BinaryStack est_bin = binarize(est.graph, cfg.eval_threshold);
    BinaryStack truth_bin = binarize(acc.outcome.graph, 0.0);
    auto& slot = reports[static_cast<size_t>(item)];
    slot[0] = evaluate(est_bin, truth_bin, EvalMode::Overall);
    slot[1] = evaluate(est_bin, truth_bin, EvalMode::Contemp);
    slot[2] = evaluate(est_bin, truth_bin, EvalMode::Lagged);
  });

  for (long item = 0; item < n_items; ++item) {
    long ds_idx = item / n_methods;
    long m_idx = item % n_methods;
    const Accepted& acc = accepted[static_cast<size_t>(ds_idx)];
    for (const EvalReport& rep : reports[static_cast<size_t>(item)]) {
      BinnedRecord rec;
      rec.dataset_index = static_cast<int>(ds_idx);
      rec.bin = acc.bin;
      rec.sortability = acc.outcome.sortability;
      rec.method = cfg.methods[static_cast<size_t>(m_idx)];
      rec.mode = rep.mode;
      rec.report = rep;
      result.records.push_back(std::move(rec));
    }
  }
  return result;
}

void write_binned_result(const BinnedResult& result, const BinnedBenchConfig& cfg,
                         const std::string& out_dir) {
  std::ofstream trials = open_result_file(out_dir, "trials.csv");
  trials << "dataset,bin_lo,bin_hi,sortability,method,mode,tp,fp,fn,f1\n";
  for (const BinnedRecord& r : result.records) {
    const BinInfo& bin = result.bins[static_cast<size_t>(r.bin)];
    trials << r.dataset_index << ',' << format_g17(bin.lo) << ',' << format_g17(bin.hi) << ','
           << format_g17(r.sortability) << ',' << r.method << ',' << to_string(r.mode) << ','
           << r.report.tp << ',' << r.report.fp << ',' << r.report.fn << ','
           << format_g17(r.report.f1) << '\n';
  }

  nlohmann::json j;
  j["config"] = {{"d", cfg.gen.d},
                 {"contemp_degree", cfg.gen.contemp_degree},
                 {"lag_degree", cfg.gen.lag_degree},
                 {"tau_max", cfg.gen.tau_max},
                 {"weight_decay", cfg.gen.weight_decay},
                 {"n", cfg.n},
                 {"burn_in", cfg.burn_in},
                 {"noise_low", cfg.noise_low},
                 {"noise_high", cfg.noise_high},
                 {"bin_edges", cfg.bin_edges},
                 {"m", cfg.m},
                 {"criterion", to_string(cfg.criterion)},
                 {"mode", to_string(cfg.mode)},
                 {"methods", cfg.methods},
                 {"eval_threshold", cfg.eval_threshold},
                 {"base_seed", cfg.base_seed}};
  j["attempts"] = result.attempts;
  j["rejected_unstable"] = result.rejected_unstable;
  j["rejected_no_pairs"] = result.rejected_no_pairs;
  j["rejected_full_bin"] = result.rejected_full_bin;

  nlohmann::json bins = nlohmann::json::array();
  for (const BinInfo& b : result.bins)
    bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"target", b.target}, {"achieved", b.achieved}});
  j["bins"] = std::move(bins);

  nlohmann::json stats = nlohmann::json::array();
  for (const std::string& method : cfg.methods)
    for (EvalMode mode : {EvalMode::Overall, EvalMode::Contemp, EvalMode::Lagged})
      for (size_t b = 0; b < result.bins.size(); ++b) {
        std::vector<double> f1s;
        for (const BinnedRecord& r : result.records)
          if (r.method == method && r.mode == mode && r.bin == static_cast<int>(b))
            f1s.push_back(r.report.f1);
        MeanStd ms = mean_std(f1s);
        nlohmann::json sj = {{"method", method},
                             {"mode", to_string(mode)},
                             {"bin_lo", result.bins[b].lo},
                             {"bin_hi", result.bins[b].hi},
                             {"count", ms.used}};
        if (ms.used > 0) {
          sj["mean_f1"] = ms.mean;
          sj["std_f1"] = ms.stddev;
        }
        stats.push_back(std::move(sj));
      }
  j["stats"] = std::move(stats);
  std::ofstream summary = open_result_file(out_dir, "summary.json");
  summary << j.dump(2) << '\n';
}

}  // namespace tssort
