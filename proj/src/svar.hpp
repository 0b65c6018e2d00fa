#pragma once

#include <string>
#include <vector>

#include "graphs.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace tssort {

struct Panel {
  std::vector<std::string> names;
  Matrix data;  // T x d, consecutive time steps

  long rows() const { return data.rows(); }
  int cols() const { return static_cast<int>(data.cols()); }
};

struct SimConfig {
  long n = 500;         // samples kept after burn-in
  long burn_in = 1000;  // discarded start-up steps
  std::vector<double> noise_std;  // per-node std of the Gaussian noise; empty = all 1.0
};

// Spectral radius of the companion matrix of the reduced VAR form
// B_k = (I - W_c)^-T W_k^T. Throws on a numerically singular (I - W_c^T).
double companion_spectral_radius(const WeightedTsGraph& g);

// Stationarity test: companion spectral radius < 1 - 1e-6.
bool is_stable(const WeightedTsGraph& g);

Panel simulate(const WeightedTsGraph& g, const SimConfig& cfg, Rng& rng);

// Per-column mean 0, unbiased sample variance 1.
Panel standardize(const Panel& p);

void check_panel(const Panel& p);

}  // namespace tssort
