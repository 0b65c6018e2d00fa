#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "rng.hpp"

namespace tssort {

// Directed graph over the d processes; may contain cycles and self-loops.
struct SummaryGraph {
  int d = 0;
  std::vector<uint8_t> adj;  // row-major, adj[i*d + j] != 0 means edge i -> j

  SummaryGraph() = default;
  explicit SummaryGraph(int nodes) : d(nodes), adj(static_cast<size_t>(nodes) * nodes, 0) {}

  bool edge(int i, int j) const { return adj[static_cast<size_t>(i) * d + j] != 0; }
  void set_edge(int i, int j, bool present = true) {
    adj[static_cast<size_t>(i) * d + j] = present ? 1 : 0;
  }
  int edge_count() const;
  SummaryGraph transposed() const;
};

// Lagged coefficient stack: weights[k](i, j) is the coefficient of the edge
// (i, t-k) -> (j, t); weights[0] is the contemporaneous matrix.
struct WeightedTsGraph {
  int d = 0;
  int tau_max = 0;
  std::vector<Matrix> weights;  // tau_max + 1 slices, each d x d

  static WeightedTsGraph zeros(int d, int tau_max);
  const Matrix& contemporaneous() const { return weights[0]; }
};

enum class EdgeScope { All, Contemporaneous, Lagged };

struct GraphGenConfig {
  int d = 10;
  double contemp_degree = 4.0;  // expected contemporaneous mean degree
  double lag_degree = 1.0;      // expected per-lag mean degree
  int tau_max = 3;
  double weight_decay = 1.1;  // > 1; lag-t magnitudes scale by 1/decay^(t-1)
  double contemp_low = 0.5;
  double contemp_high = 2.0;
  double lag_low = 0.3;
  double lag_high = 0.5;
};

void validate(const GraphGenConfig& cfg);

// Shape checks plus acyclicity of the contemporaneous slice.
void check_ts_graph(const WeightedTsGraph& g);

// Component id per node; ids follow Tarjan emission order, so every edge of
// the condensation goes from a higher id to a lower id.
std::vector<int> scc_ids(const SummaryGraph& g, int* component_count = nullptr);

std::vector<std::vector<int>> strongly_connected_components(const SummaryGraph& g);

// Reachability through at least one directed edge, answered via the SCC
// condensation closure.
class Reachability {
public:
  explicit Reachability(const SummaryGraph& g);
  // true iff there is a directed path (>= 1 edge) from i to j
  bool connected(int i, int j) const;
  int component_of(int i) const { return comp_[static_cast<size_t>(i)]; }

private:
  int d_ = 0;
  int n_comp_ = 0;
  std::vector<int> comp_;
  std::vector<int> comp_size_;
  std::vector<uint8_t> comp_reach_;  // comp_reach_[a*n_comp_+b]: a reaches b (>= 1 edge)
};

// Ordered pairs (i, j), i != j, with i => j and j =/=> i.
std::vector<std::pair<int, int>> admissible_pairs(const SummaryGraph& g);

// Ordered pairs (i, j), i != j, with i => j (cyclically connected pairs kept).
std::vector<std::pair<int, int>> all_connected_pairs(const SummaryGraph& g);

std::optional<std::vector<int>> topological_order(const SummaryGraph& g);
bool is_acyclic(const SummaryGraph& g);

// adj[i][j] set iff |weights[k](i,j)| > tol for some k in the scope.
// tol 0 keeps the exact-nonzero rule used for generated graphs; loaders of
// external files pass 1e-12.
SummaryGraph summary_of(const WeightedTsGraph& g, EdgeScope scope = EdgeScope::All,
                        double tol = 0.0);

WeightedTsGraph generate_er_tsgraph(const GraphGenConfig& cfg, Rng& rng);

}  // namespace tssort
