#pragma once

#include <vector>

#include "linalg.hpp"

namespace tssort {

struct OlsFit {
  Vector coefficients;
  double rss = 0.0;
};

// Minimum-norm least squares; rank deficiency handled by the pseudo-solution.
OlsFit ols(const Matrix& design, const Vector& target);

struct LassoConfig {
  int path_size = 30;
  double path_floor = 1e-3;  // lambda_min = lambda_max * path_floor
  double tol = 1e-7;         // max coefficient change per sweep
  long max_sweeps = 100000;
};

struct LassoFit {
  Vector coefficients;  // original scale
  double intercept = 0.0;
  double lambda = 0.0;
  double bic = 0.0;
  double rss = 0.0;
};

// Coordinate descent on a standardized problem expressed through the Gram
// matrix gram = X^T X / T (unit diagonal) and corr = X^T y / T; minimizes
// 1/(2T) ||y - X b||^2 + lambda ||b||_1.
Vector lasso_coordinate_descent(const Matrix& gram, const Vector& corr, double lambda,
                                Vector beta, double tol, long max_sweeps);

// Coordinate descent over a geometric lambda path, intercept always fit and
// never penalized, fit minimizing BIC = T ln(rss/T) + k ln(T) returned.
LassoFit lasso_bic(const Matrix& design, const Vector& target, const LassoConfig& cfg = {},
                   std::vector<LassoFit>* path_out = nullptr);

}  // namespace tssort
