#pragma once

#include <optional>
#include <string>

#include "dynotears.hpp"
#include "svar.hpp"

namespace tssort {

// Panel CSV: header row with column names, then one row per time step,
// doubles printed with 17 significant digits.
void save_panel_csv(const Panel& p, const std::string& path);
Panel load_panel_csv(const std::string& path);

// Summary CSV: d rows x d cols of 0/1, comma separated, no header.
void save_summary_csv(const SummaryGraph& g, const std::string& path);
SummaryGraph load_summary_csv(const std::string& path);

struct ConvergenceMeta {
  double h = 0.0;
  int outer_iterations = 0;
  bool converged = false;
};

// Graph JSON: {"d", "tau_max", "weights"[lag][from][to]} plus an optional
// "method" string and, for dynotears estimates, a "convergence" object.
struct GraphFile {
  WeightedTsGraph graph;
  std::string method;  // empty when absent
  std::optional<ConvergenceMeta> convergence;
  bool wc_acyclic = true;  // set by the loader; violation is warning-level
};

void save_graph_json(const GraphFile& gf, const std::string& path);
GraphFile load_graph_json(const std::string& path);

struct LabeledDataset {
  Panel panel;
  std::optional<SummaryGraph> truth_summary;
  std::optional<WeightedTsGraph> truth_ts;
  std::string name;
};

// Both truths present -> summary_of(truth_ts) pattern must equal truth_summary.
void validate(const LabeledDataset& ds);

// Corpus layout: <dir>/panel_<k>.csv (k = 0, 1, ...) plus <dir>/truth.json or
// <dir>/truth.csv; returns the panel with the given index.
LabeledDataset load_dataset_dir(const std::string& dir, int panel_index = 0);

}  // namespace tssort
