#pragma once

#include <Eigen/Dense>

namespace tssort {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct LstsqResult {
  Vector coefficients;
  double rss = 0.0;
};

// Minimum-norm least-squares solution of a x = b (rank deficiency handled).
LstsqResult lstsq_min_norm(const Matrix& a, const Vector& b);

// Largest eigenvalue magnitude of a (possibly nonsymmetric) square matrix.
double spectral_radius(const Matrix& a);

// Matrix exponential by scaling-and-squaring around a truncated Taylor
// approximant; accurate to ~1e-14 relative for 1-norms up to ~1e3.
Matrix expm(const Matrix& a);

}  // namespace tssort
