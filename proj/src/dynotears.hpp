#pragma once

#include <vector>

#include "baselines.hpp"
#include "svar.hpp"

namespace tssort {

struct DynoConfig {
  double lambda1 = 0.05;   // l1 weight on W_c
  double lambda2 = 0.05;   // l1 weight on W_l
  double threshold = 0.1;  // post-hoc weight cutoff
  int max_outer = 100;
  double h_tol = 1e-8;
  double rho_max = 1e16;
  // inner solver knobs
  int inner_max_iter = 1500;
  double inner_tol = 1e-5;
  int lbfgs_memory = 10;
};

struct HValue {
  double value = 0.0;
  Matrix gradient;
};

// h(W) = tr exp(W ∘ W) - d; zero exactly on acyclic patterns.
HValue h_dagness(const Matrix& w);

struct DynoResult {
  EstimatedTsGraph est;
  double h_value = 0.0;  // pre-threshold h(W_c)
  int outer_iterations = 0;
  bool converged = false;
  std::vector<double> inner_objectives;  // accepted objective values, last inner solve
};

// Augmented-Lagrangian fit of 1/(2n)||X - X W_c - X_l W_l||^2 + l1 penalties
// subject to h(W_c) = 0; thresholded W_c is made acyclic by dropping the
// smallest-magnitude edges if needed.
DynoResult fit_dynotears(const Panel& p, int tau_max, const DynoConfig& cfg = {});

// Smooth part of the inner objective (loss + alpha h + rho/2 h^2); exposed so
// the gradient can be checked against finite differences.
double dyno_smooth_value_grad(const Matrix& x, const Matrix& x_lagged, const Matrix& w_c,
                              const Matrix& w_l, double alpha, double rho, Matrix* grad_wc,
                              Matrix* grad_wl);

}  // namespace tssort
