#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace tssort {

using BoolMat = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
// Slices for lags 0..tau_max; slice k entry (i, j) marks edge (i, t-k) -> (j, t).
using BinaryStack = std::vector<BoolMat>;

enum class EvalMode { Overall, Contemp, Lagged, Summary };

struct EvalReport {
  EvalMode mode = EvalMode::Overall;
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  double f1 = 0.0;
};

// F1 = tp / (tp + 0.5 (fp + fn)); defined as 1 when all counts are zero.
double f1_score(int64_t tp, int64_t fp, int64_t fn);

// overall: elementwise over all slices; contemp: slice 0; lagged: slices 1..;
// summary: OR-collapse both stacks, diagonal excluded unless requested
// (self-loops from autocorrelation are uninformative there).
EvalReport evaluate(const BinaryStack& est, const BinaryStack& truth, EvalMode mode,
                    bool summary_include_diagonal = false);

std::string to_string(EvalMode m);
std::string eval_report_json(const EvalReport& r);

}  // namespace tssort
