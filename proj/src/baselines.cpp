#include "baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common.hpp"
#include "rng.hpp"

namespace tssort {

std::vector<int> order_nodes(const Panel& p, int tau_max, const OrderStrategy& strategy) {
  const int d = p.cols();
  std::vector<int> order(static_cast<size_t>(d));
  std::iota(order.begin(), order.end(), 0);

  auto sort_by = [&](const std::vector<double>& values, bool ascending) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      double va = values[static_cast<size_t>(a)], vb = values[static_cast<size_t>(b)];
      return ascending ? va < vb : va > vb;
    });
  };

  switch (strategy.kind) {
    case OrderKind::Variance:
      sort_by(marginal_variance(p).values, true);
      break;
    case OrderKind::R2:
      sort_by(r2_scores(p, tau_max).values, true);
      break;
    case OrderKind::VarianceReversed:
      sort_by(marginal_variance(p).values, false);
      break;
    case OrderKind::Random: {
      Rng rng(strategy.seed);
      order = rng.permutation(d);
      break;
    }
  }
  return order;
}

EstimatedTsGraph sortnregress_ts(const Panel& p, int tau_max, const OrderStrategy& strategy,
                                 const LassoConfig& lasso) {
  check_panel(p);
  if (tau_max < 0) fail(Errc::invalid_argument, "tau_max must be >= 0");
  const int d = p.cols();
  const long t = p.rows();
  if (t <= static_cast<long>(d) * (tau_max + 1) + 1)
    fail(Errc::invalid_argument, "insufficient samples: need T > d*(tau_max+1)+1");

  std::vector<int> order = order_nodes(p, tau_max, strategy);

  const long n_eff = t - tau_max;
  const int n_lagged = d * tau_max;
  Matrix contemp = p.data.bottomRows(n_eff);
  Matrix lagged(n_eff, n_lagged);
  for (int k = 1; k <= tau_max; ++k)
    lagged.middleCols((k - 1) * d, d) = p.data.middleRows(tau_max - k, n_eff);

  EstimatedTsGraph est;
  est.graph = WeightedTsGraph::zeros(d, tau_max);
  est.method = std::string("sortnregress_") + to_string(strategy.kind);

  for (int q = 0; q < d; ++q) {
    int node = order[static_cast<size_t>(q)];
    Matrix design(n_eff, q + n_lagged);
    for (int r = 0; r < q; ++r) design.col(r) = contemp.col(order[static_cast<size_t>(r)]);
    if (n_lagged > 0) design.rightCols(n_lagged) = lagged;

    Vector target = contemp.col(node);
    LassoFit fit = lasso_bic(design, target, lasso);

    for (int r = 0; r < q; ++r)
      est.graph.weights[0](order[static_cast<size_t>(r)], node) = fit.coefficients(r);
    for (int k = 1; k <= tau_max; ++k)
      for (int i = 0; i < d; ++i)
        est.graph.weights[static_cast<size_t>(k)](i, node) =
            fit.coefficients(q + (k - 1) * d + i);
  }
  return est;
}

BinaryStack binarize(const WeightedTsGraph& g, double threshold) {
  if (threshold < 0) fail(Errc::invalid_argument, "threshold must be >= 0");
  BinaryStack stack;
  stack.reserve(g.weights.size());
  for (const Matrix& w : g.weights) stack.push_back(w.cwiseAbs().array() > threshold);
  return stack;
}

std::string to_string(OrderKind k) {
  switch (k) {
    case OrderKind::Variance: return "variance";
    case OrderKind::R2: return "r2";
    case OrderKind::Random: return "random";
    case OrderKind::VarianceReversed: return "variance_reversed";
  }
  return "?";
}

}  // namespace tssort
