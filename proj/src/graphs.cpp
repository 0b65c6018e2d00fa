#include "graphs.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace tssort {

int SummaryGraph::edge_count() const {
  int count = 0;
  for (uint8_t v : adj) count += v != 0;
  return count;
}

SummaryGraph SummaryGraph::transposed() const {
  SummaryGraph t(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (edge(i, j)) t.set_edge(j, i);
  return t;
}

WeightedTsGraph WeightedTsGraph::zeros(int d, int tau_max) {
  WeightedTsGraph g;
  g.d = d;
  g.tau_max = tau_max;
  g.weights.assign(static_cast<size_t>(tau_max) + 1, Matrix::Zero(d, d));
  return g;
}

void validate(const GraphGenConfig& cfg) {
  if (cfg.d < 2) fail(Errc::invalid_argument, "graph generation needs d >= 2");
  if (cfg.tau_max < 0) fail(Errc::invalid_argument, "tau_max must be >= 0");
  if (cfg.contemp_degree < 0 || cfg.lag_degree < 0)
    fail(Errc::invalid_argument, "mean degrees must be >= 0");
  if (cfg.contemp_degree > cfg.d - 1)
    fail(Errc::invalid_argument, "contemporaneous degree exceeds d-1: edge probability above 1");
  if (cfg.lag_degree > cfg.d)
    fail(Errc::invalid_argument, "lag degree exceeds d: edge probability above 1");
  if (!(cfg.weight_decay > 1.0)) fail(Errc::invalid_argument, "weight decay must be > 1");
  if (!(cfg.contemp_low > 0 && cfg.contemp_low < cfg.contemp_high))
    fail(Errc::invalid_argument, "contemporaneous magnitude interval invalid");
  if (!(cfg.lag_low > 0 && cfg.lag_low < cfg.lag_high))
    fail(Errc::invalid_argument, "lag magnitude interval invalid");
}

void check_ts_graph(const WeightedTsGraph& g) {
  if (g.d < 1) fail(Errc::invalid_argument, "graph has no nodes");
  if (g.tau_max < 0) fail(Errc::invalid_argument, "negative tau_max");
  if (static_cast<int>(g.weights.size()) != g.tau_max + 1)
    fail(Errc::invalid_argument, "weight stack size does not match tau_max + 1");
  for (const Matrix& w : g.weights) {
    if (w.rows() != g.d || w.cols() != g.d)
      fail(Errc::invalid_argument, "weight slice is not d x d");
    if (!w.allFinite()) fail(Errc::invalid_argument, "non-finite weight");
  }
  if (!is_acyclic(summary_of(g, EdgeScope::Contemporaneous)))
    fail(Errc::domain_error, "contemporaneous matrix is cyclic");
}

namespace {

// Iterative Tarjan; component ids are assigned in emission order, which means
// every condensation edge points from a larger id to a smaller one.
struct TarjanState {
  const SummaryGraph& g;
  std::vector<int> index, lowlink, comp;
  std::vector<uint8_t> on_stack;
  std::vector<int> stack;
  int next_index = 0;
  int next_comp = 0;

  explicit TarjanState(const SummaryGraph& graph)
      : g(graph),
        index(static_cast<size_t>(graph.d), -1),
        lowlink(static_cast<size_t>(graph.d), -1),
        comp(static_cast<size_t>(graph.d), -1),
        on_stack(static_cast<size_t>(graph.d), 0) {}

  void run(int root) {
    // Explicit frame stack: (node, next successor to scan).
    std::vector<std::pair<int, int>> frames;
    frames.emplace_back(root, 0);
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;

    while (!frames.empty()) {
      auto& [v, succ] = frames.back();
      bool descended = false;
      while (succ < g.d) {
        int w = succ++;
        if (!g.edge(v, w)) continue;
        if (index[w] < 0) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
      }
      if (descended) continue;
      if (lowlink[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
      int finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        int parent = frames.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[finished]);
      }
    }
  }
};

}  // namespace

std::vector<int> scc_ids(const SummaryGraph& g, int* component_count) {
  TarjanState state(g);
  for (int v = 0; v < g.d; ++v)
    if (state.index[v] < 0) state.run(v);
  if (component_count) *component_count = state.next_comp;
  return state.comp;
}

std::vector<std::vector<int>> strongly_connected_components(const SummaryGraph& g) {
  int n_comp = 0;
  std::vector<int> comp = scc_ids(g, &n_comp);
  std::vector<std::vector<int>> out(static_cast<size_t>(n_comp));
  for (int v = 0; v < g.d; ++v) out[static_cast<size_t>(comp[v])].push_back(v);
  return out;
}

Reachability::Reachability(const SummaryGraph& g) : d_(g.d) {
  comp_ = scc_ids(g, &n_comp_);
  comp_size_.assign(static_cast<size_t>(n_comp_), 0);
  for (int v = 0; v < d_; ++v) ++comp_size_[static_cast<size_t>(comp_[v])];

  comp_reach_.assign(static_cast<size_t>(n_comp_) * n_comp_, 0);
  auto reach = [&](int a, int b) -> uint8_t& {
    return comp_reach_[static_cast<size_t>(a) * n_comp_ + b];
  };

  // Condensation edges; self marks a component containing a cycle or self-loop.
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      if (g.edge(i, j)) {
        int a = comp_[i], b = comp_[j];
        if (a != b || i == j || comp_size_[static_cast<size_t>(a)] > 1) reach(a, b) = 1;
      }
  for (int a = 0; a < n_comp_; ++a)
    if (comp_size_[static_cast<size_t>(a)] > 1) reach(a, a) = 1;

  // Successors carry smaller ids, so one ascending pass closes the relation.
  for (int a = 0; a < n_comp_; ++a)
    for (int b = 0; b < n_comp_; ++b)
      if (b != a && reach(a, b))
        for (int c = 0; c < n_comp_; ++c)
          if (reach(b, c)) reach(a, c) = 1;
}

bool Reachability::connected(int i, int j) const {
  int a = comp_[static_cast<size_t>(i)], b = comp_[static_cast<size_t>(j)];
  if (a == b && i != j) return true;  // same non-trivial SCC
  return comp_reach_[static_cast<size_t>(a) * n_comp_ + b] != 0;
}

std::vector<std::pair<int, int>> admissible_pairs(const SummaryGraph& g) {
  Reachability r(g);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < g.d; ++i)
    for (int j = 0; j < g.d; ++j)
      if (i != j && r.connected(i, j) && !r.connected(j, i)) pairs.emplace_back(i, j);
  return pairs;
}

std::vector<std::pair<int, int>> all_connected_pairs(const SummaryGraph& g) {
  Reachability r(g);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < g.d; ++i)
    for (int j = 0; j < g.d; ++j)
      if (i != j && r.connected(i, j)) pairs.emplace_back(i, j);
  return pairs;
}

std::optional<std::vector<int>> topological_order(const SummaryGraph& g) {
  std::vector<int> in_degree(static_cast<size_t>(g.d), 0);
  for (int i = 0; i < g.d; ++i)
    for (int j = 0; j < g.d; ++j)
      if (g.edge(i, j)) ++in_degree[static_cast<size_t>(j)];

  std::vector<int> order;
  order.reserve(static_cast<size_t>(g.d));
  std::vector<int> ready;
  for (int v = g.d - 1; v >= 0; --v)
    if (in_degree[static_cast<size_t>(v)] == 0) ready.push_back(v);
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int w = g.d - 1; w >= 0; --w)
      if (g.edge(v, w) && --in_degree[static_cast<size_t>(w)] == 0) ready.push_back(w);
  }
  if (static_cast<int>(order.size()) != g.d) return std::nullopt;
  return order;
}

bool is_acyclic(const SummaryGraph& g) { return topological_order(g).has_value(); }

SummaryGraph summary_of(const WeightedTsGraph& g, EdgeScope scope, double tol) {
  SummaryGraph s(g.d);
  int first = scope == EdgeScope::Lagged ? 1 : 0;
  int last = scope == EdgeScope::Contemporaneous ? 0 : g.tau_max;
  for (int k = first; k <= last; ++k)
    for (int i = 0; i < g.d; ++i)
      for (int j = 0; j < g.d; ++j)
        if (std::abs(g.weights[static_cast<size_t>(k)](i, j)) > tol) s.set_edge(i, j);
  return s;
}

WeightedTsGraph generate_er_tsgraph(const GraphGenConfig& cfg, Rng& rng) {
  validate(cfg);
  WeightedTsGraph g = WeightedTsGraph::zeros(cfg.d, cfg.tau_max);

  // Contemporaneous slice: Bernoulli trials on the strict lower triangle,
  // then a uniform node permutation; the permuted pattern stays acyclic.
  double p_contemp = cfg.contemp_degree / (cfg.d - 1);
  Matrix lower = Matrix::Zero(cfg.d, cfg.d);
  for (int i = 1; i < cfg.d; ++i)
    for (int j = 0; j < i; ++j)
      if (rng.bernoulli(p_contemp))
        lower(i, j) = rng.two_sided_uniform(cfg.contemp_low, cfg.contemp_high);
  std::vector<int> perm = rng.permutation(cfg.d);
  for (int i = 0; i < cfg.d; ++i)
    for (int j = 0; j < cfg.d; ++j)
      if (lower(i, j) != 0.0) g.weights[0](perm[i], perm[j]) = lower(i, j);

  // Lagged slices: every entry (self-lags included) with probability d_l/d,
  // magnitudes decayed by 1/delta^(k-1).
  double p_lag = cfg.lag_degree / cfg.d;
  for (int k = 1; k <= cfg.tau_max; ++k) {
    double alpha = 1.0 / std::pow(cfg.weight_decay, k - 1);
    for (int i = 0; i < cfg.d; ++i)
      for (int j = 0; j < cfg.d; ++j)
        if (rng.bernoulli(p_lag))
          g.weights[static_cast<size_t>(k)](i, j) =
              rng.two_sided_uniform(cfg.lag_low * alpha, cfg.lag_high * alpha);
  }
  return g;
}

}  // namespace tssort
