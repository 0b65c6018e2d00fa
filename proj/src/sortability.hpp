#pragma once

#include <cstdint>
#include <string>

#include "graphs.hpp"
#include "svar.hpp"

namespace tssort {

enum class Criterion { Variance, R2 };
enum class PairMode { Admissible, AllConnected, PathWeighted };

struct CriterionVector {
  Criterion kind = Criterion::Variance;
  std::vector<double> values;  // values[i] = cri(X^i)
};

struct SortabilityReport {
  double score = 0.0;  // (pairs_increasing + 0.5 * pairs_tied) / pairs_total
  int64_t pairs_total = 0;
  int64_t pairs_increasing = 0;
  int64_t pairs_tied = 0;
  PairMode mode = PairMode::Admissible;
};

// 1 if a < b, 0 if a > b, 0.5 on a tie at relative tolerance 1e-9.
double increasing(double a, double b);

CriterionVector marginal_variance(const Panel& p);

// R^2 of OLS of X_t^i on the other contemporaneous columns plus all columns
// at lags 1..tau_max (own lags included), aligned rows t = tau_max..T-1.
CriterionVector r2_scores(const Panel& p, int tau_max);

SortabilityReport sortability_score(const CriterionVector& cri, const SummaryGraph& g,
                                    PairMode mode);

std::string to_string(Criterion c);
std::string to_string(PairMode m);
std::string report_json(const SortabilityReport& r, Criterion criterion);

}  // namespace tssort
