#pragma once

#include <functional>
#include <map>
#include <string>

#include "datasets.hpp"
#include "dynotears.hpp"
#include "metrics.hpp"

namespace tssort {

// One generated benchmark dataset handed to a method. Real methods must only
// look at panel/tau_max/seed; the truth is carried for stub and diagnostic
// methods.
struct BenchDataset {
  WeightedTsGraph truth;
  Panel panel;
  double sortability = 0.0;
  int dataset_index = 0;  // position among accepted datasets
  uint64_t method_seed = 0;
};

using Method = std::function<EstimatedTsGraph(const BenchDataset&)>;

class MethodRegistry {
public:
  // varsortnregress, r2sortnregress, randomregress, varsortnregress_rev,
  // dynotears, dynotears_std; "external:<dir>" resolves to a loader of
  // <dir>/est_<dataset_index>.json.
  static MethodRegistry standard(const DynoConfig& dyno = {}, const LassoConfig& lasso = {},
                                 int tau_max = 3);
  void add(const std::string& name, Method method);
  Method get(const std::string& name) const;
  bool contains(const std::string& name) const;

private:
  std::map<std::string, Method> methods_;
};

// Runs fn(0..n_items-1) on up to `jobs` threads; results must be written to
// pre-sized slots so the outcome does not depend on scheduling.
void parallel_for(long n_items, int jobs, const std::function<void(long)>& fn);

// ---------------------------------------------------------------------------
// Node-scaling study

// Study defaults are calibrated to reproduce the reference sortability table:
// contemporaneous magnitudes follow the lag formula evaluated at lag 0
// (alpha = delta), per-node noise stds are drawn from [noise_low, noise_high]
// per graph, and scores keep cyclically connected pairs (each contributing
// one half), which is what the reference statistics turn out to use.
struct ScalingConfig {
  std::vector<int> d_list = {10};
  int graphs_per_d = 100;
  long n = 500;
  long burn_in = 1000;
  double noise_low = 0.5;
  double noise_high = 2.0;
  double contemp_degree = 4.0;
  double lag_degree = 1.0;
  int tau_max = 3;
  double weight_decay = 1.1;
  double contemp_low = 0.33;
  double contemp_high = 0.55;
  double lag_low = 0.3;
  double lag_high = 0.5;
  PairMode mode = PairMode::AllConnected;
  uint64_t base_seed = 0;
  int jobs = 1;
  int max_attempts_per_graph = 2000;  // non-stationary draws rejected, resampled
};

struct ScalingTrial {
  int d = 0;
  int trial = 0;
  EdgeScope scope = EdgeScope::All;
  Criterion criterion = Criterion::Variance;
  bool defined = false;  // false when the scope has no admissible pairs
  double score = 0.0;
  int64_t pairs_total = 0;
};

struct ScalingRow {
  int d = 0;
  EdgeScope scope = EdgeScope::All;
  Criterion criterion = Criterion::Variance;
  double mean = 0.0;
  double stddev = 0.0;
  long used = 0;
};

struct ScalingResult {
  std::vector<ScalingTrial> trials;
  std::vector<ScalingRow> rows;
  long rejected_draws = 0;
};

ScalingResult node_scaling_study(const ScalingConfig& cfg);
void write_scaling_result(const ScalingResult& result, const ScalingConfig& cfg,
                          const std::string& out_dir);

// ---------------------------------------------------------------------------
// Degree-grid study

struct GridConfig {
  int d = 10;
  std::vector<double> degrees = {0, 0.5, 1, 2, 3, 4, 6, 8};
  int trials = 30;
  long n = 500;
  long burn_in = 1000;
  double noise_low = 0.5;
  double noise_high = 2.0;
  int tau_max = 3;
  double weight_decay = 1.1;
  double contemp_low = 0.33;
  double contemp_high = 0.55;
  double lag_low = 0.3;
  double lag_high = 0.5;
  PairMode mode = PairMode::AllConnected;
  uint64_t base_seed = 0;
  int jobs = 1;
  int max_attempts_per_trial = 500;
};

struct GridCell {
  double contemp_degree = 0.0;
  double lag_degree = 0.0;
  Criterion criterion = Criterion::Variance;
  double mean = 0.0;  // meaningless when used == 0 (cell missing)
  double stddev = 0.0;
  long used = 0;
  long attempts = 0;
};

struct GridTrial {
  double contemp_degree = 0.0;
  double lag_degree = 0.0;
  int trial = 0;
  Criterion criterion = Criterion::Variance;
  bool defined = false;
  double score = 0.0;
};

struct GridResult {
  std::vector<GridCell> cells;
  std::vector<GridTrial> trials;
};

GridResult degree_grid_study(const GridConfig& cfg);
void write_grid_result(const GridResult& result, const GridConfig& cfg,
                       const std::string& out_dir);

// ---------------------------------------------------------------------------
// Sortability-binned benchmark

struct BinnedBenchConfig {
  GraphGenConfig gen;
  long n = 500;
  long burn_in = 1000;
  // Per-node noise stds drawn uniformly from [noise_low, noise_high] for each
  // dataset; the degenerate default keeps the equal-variance protocol.
  double noise_low = 1.0;
  double noise_high = 1.0;
  std::vector<double> bin_edges = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  int m = 30;  // accepted datasets per bin
  Criterion criterion = Criterion::Variance;
  PairMode mode = PairMode::Admissible;  // pair set used when binning draws
  std::vector<std::string> methods;
  long max_attempts_per_bin = 0;  // 0 -> 200 * m
  uint64_t base_seed = 0;
  int jobs = 1;
  double eval_threshold = 0.1;
  DynoConfig dyno;
  LassoConfig lasso;
};

struct BinInfo {
  double lo = 0.0;
  double hi = 1.0;
  int target = 0;
  int achieved = 0;
};

struct BinnedRecord {
  int dataset_index = 0;
  int bin = 0;
  double sortability = 0.0;
  std::string method;
  EvalMode mode = EvalMode::Overall;
  EvalReport report;
};

struct BinnedResult {
  std::vector<BinInfo> bins;
  long attempts = 0;
  long rejected_unstable = 0;
  long rejected_no_pairs = 0;
  long rejected_full_bin = 0;
  std::vector<BinnedRecord> records;
};

BinnedResult binned_benchmark(const BinnedBenchConfig& cfg, const MethodRegistry& registry);
void write_binned_result(const BinnedResult& result, const BinnedBenchConfig& cfg,
                         const std::string& out_dir);

std::string to_string(EdgeScope s);

}  // namespace tssort
