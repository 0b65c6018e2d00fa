#pragma once

#include <string>

#include "metrics.hpp"
#include "regression.hpp"
#include "sortability.hpp"

namespace tssort {

enum class OrderKind { Variance, R2, Random, VarianceReversed };

struct OrderStrategy {
  OrderKind kind = OrderKind::Variance;
  uint64_t seed = 0;  // random kind only
};

struct EstimatedTsGraph {
  WeightedTsGraph graph;  // graph.weights[0] acyclic by construction
  std::string method;
};

std::vector<int> order_nodes(const Panel& p, int tau_max, const OrderStrategy& strategy);

// Two-step estimator: order nodes by the strategy, then per node run a
// BIC-selected LASSO on its contemporaneous order-predecessors plus all nodes
// at lags 1..tau_max.
EstimatedTsGraph sortnregress_ts(const Panel& p, int tau_max, const OrderStrategy& strategy,
                                 const LassoConfig& lasso = {});

// Entry true iff |w| > threshold.
BinaryStack binarize(const WeightedTsGraph& g, double threshold);

std::string to_string(OrderKind k);

}  // namespace tssort
