#include <doctest.h>

#include <algorithm>

#include "baselines.hpp"
#include "common.hpp"
#include "svar.hpp"

using namespace tssort;

namespace {

Panel noise_free_chain(long n, uint64_t seed) {
  // y = 2x exactly; Var(x) = 1-ish, Var(y) = 4x that
  Panel p;
  p.names = {"x", "y"};
  p.data.resize(n, 2);
  Rng rng(seed);
  for (long t = 0; t < n; ++t) {
    double x = rng.gauss();
    p.data(t, 0) = x;
    p.data(t, 1) = 2.0 * x;
  }
  return p;
}

Panel simulate_graph(const WeightedTsGraph& g, long n, uint64_t seed) {
  SimConfig cfg;
  cfg.n = n;
  Rng rng(seed);
  return simulate(g, cfg, rng);
}

std::vector<int> order_positions(const WeightedTsGraph& est_wc_owner,
                                 const std::vector<int>& order) {
  (void)est_wc_owner;
  std::vector<int> pos(order.size());
  for (size_t q = 0; q < order.size(); ++q) pos[static_cast<size_t>(order[q])] = static_cast<int>(q);
  return pos;
}

}  // namespace

TEST_CASE("sortnregress: noise-free chain is recovered in the variance order") {
  Panel p = noise_free_chain(500, 3);
  EstimatedTsGraph est = sortnregress_ts(p, 0, {OrderKind::Variance, 0});
  CHECK(est.graph.weights[0](0, 1) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(est.graph.weights[0](1, 0) == 0.0);  // back-edge structurally impossible
}

TEST_CASE("sortnregress: reversed variance order flips the edge") {
  Panel p = noise_free_chain(500, 3);
  EstimatedTsGraph est = sortnregress_ts(p, 0, {OrderKind::VarianceReversed, 0});
  CHECK(est.graph.weights[0](0, 1) == 0.0);
  CHECK(est.graph.weights[0](1, 0) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("sortnregress: estimated W_c is acyclic under the chosen order") {
  WeightedTsGraph g = WeightedTsGraph::zeros(5, 1);
  g.weights[0](0, 1) = 1.1;
  g.weights[0](1, 2) = -0.9;
  g.weights[0](3, 2) = 0.7;
  g.weights[1](4, 4) = 0.5;
  g.weights[1](0, 3) = 0.4;
  Panel p = simulate_graph(g, 800, 17);

  for (OrderKind kind :
       {OrderKind::Variance, OrderKind::R2, OrderKind::Random, OrderKind::VarianceReversed}) {
    EstimatedTsGraph est = sortnregress_ts(p, 1, {kind, 99});
    std::vector<int> order = order_nodes(p, 1, {kind, 99});
    std::vector<int> pos = order_positions(est.graph, order);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (est.graph.weights[0](i, j) != 0.0) CHECK(pos[i] < pos[j]);
    SummaryGraph pattern(5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (est.graph.weights[0](i, j) != 0.0) pattern.set_edge(i, j);
    CHECK(is_acyclic(pattern));
  }
}

TEST_CASE("sortnregress: random order is deterministic for a fixed seed") {
  WeightedTsGraph g = WeightedTsGraph::zeros(4, 1);
  g.weights[0](0, 1) = 1.0;
  g.weights[1](2, 3) = 0.4;
  Panel p = simulate_graph(g, 400, 5);
  EstimatedTsGraph a = sortnregress_ts(p, 1, {OrderKind::Random, 1234});
  EstimatedTsGraph b = sortnregress_ts(p, 1, {OrderKind::Random, 1234});
  for (size_t k = 0; k < a.graph.weights.size(); ++k)
    CHECK(a.graph.weights[k] == b.graph.weights[k]);
}

TEST_CASE("sortnregress: lagged regressors are unrestricted by the order") {
  // y has the smallest variance and is driven by lagged x; the first-ordered
  // node must still receive lagged coefficients from later-ordered nodes.
  Panel p;
  p.names = {"x", "y"};
  const long n = 2000;
  p.data.resize(n, 2);
  Rng rng(77);
  double prev_x = 0.0;
  for (long t = 0; t < n; ++t) {
    double x = 2.0 * rng.gauss();
    double y = 0.5 * prev_x + 0.1 * rng.gauss();
    p.data(t, 0) = x;
    p.data(t, 1) = y;
    prev_x = x;
  }
  std::vector<int> order = order_nodes(p, 1, {OrderKind::Variance, 0});
  CHECK(order[0] == 1);  // y first
  EstimatedTsGraph est = sortnregress_ts(p, 1, {OrderKind::Variance, 0});
  CHECK(est.graph.weights[1](0, 1) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("sortnregress with high varsortability beats the random order") {
  GraphGenConfig gen;
  gen.d = 5;
  gen.contemp_degree = 4;
  gen.lag_degree = 1;
  gen.tau_max = 1;
  double var_f1_sum = 0, rnd_f1_sum = 0;
  int used = 0;
  uint64_t stream = 0;
  while (used < 20 && stream < 400) {
    Rng rng = Rng::derived(1001, stream++);
    WeightedTsGraph g = generate_er_tsgraph(gen, rng);
    if (!is_stable(g)) continue;
    SimConfig sim;
    sim.n = 2000;
    Panel p = simulate(g, sim, rng);
    SummaryGraph summary = summary_of(g);
    double varsort;
    try {
      varsort = sortability_score(marginal_variance(p), summary, PairMode::Admissible).score;
    } catch (const Error&) {
      continue;
    }
    if (varsort < 0.9) continue;
    ++used;
    BinaryStack truth = binarize(g, 0.0);
    BoolMat truth_sum = truth[0];
    for (size_t k = 1; k < truth.size(); ++k)
      truth_sum = (truth_sum.array() || truth[k].array()).matrix();

    EstimatedTsGraph var_est = sortnregress_ts(p, 1, {OrderKind::Variance, 0});
    EstimatedTsGraph rnd_est = sortnregress_ts(p, 1, {OrderKind::Random, stream});
    var_f1_sum +=
        evaluate(binarize(var_est.graph, 0.1), truth, EvalMode::Summary).f1;
    rnd_f1_sum +=
        evaluate(binarize(rnd_est.graph, 0.1), truth, EvalMode::Summary).f1;
  }
  REQUIRE(used == 20);
  CHECK(var_f1_sum / used > rnd_f1_sum / used);
}

TEST_CASE("binarize: threshold semantics and monotone sweep") {
  WeightedTsGraph g = WeightedTsGraph::zeros(2, 1);
  g.weights[0](0, 1) = 0.09;
  g.weights[1](1, 0) = -0.5;

  BinaryStack at0 = binarize(g, 0.0);
  CHECK(at0[0](0, 1));  // only structural zeros removed
  CHECK(at0[1](1, 0));
  CHECK(!at0[0](1, 1));

  BinaryStack at01 = binarize(g, 0.1);
  CHECK(!at01[0](0, 1));  // 0.09 dropped at threshold 0.1
  CHECK(at01[1](1, 0));

  int prev = 1 << 30;
  for (double threshold : {0.0, 0.05, 0.09, 0.3, 0.5, 1.0}) {
    BinaryStack s = binarize(g, threshold);
    int count = 0;
    for (const BoolMat& m : s) count += static_cast<int>(m.count());
    CHECK(count <= prev);
    prev = count;
  }
}

TEST_CASE("binarize rejects negative thresholds") {
  WeightedTsGraph g = WeightedTsGraph::zeros(2, 0);
  CHECK_THROWS_AS(binarize(g, -0.1), Error);
}
