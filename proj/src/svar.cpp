#include "svar.hpp"

#include <cmath>

#include "common.hpp"

namespace tssort {

namespace {
constexpr double kStabilityMargin = 1e-6;
constexpr double kOverflowLimit = 1e12;

std::vector<double> resolved_noise_std(const SimConfig& cfg, int d) {
  std::vector<double> std_devs = cfg.noise_std;
  if (std_devs.empty()) std_devs.assign(static_cast<size_t>(d), 1.0);
  if (static_cast<int>(std_devs.size()) != d)
    fail(Errc::invalid_argument, "noise_std size does not match node count");
  for (double s : std_devs)
    if (!(s > 0.0)) fail(Errc::invalid_argument, "noise_std entries must be > 0");
  return std_devs;
}
}  // namespace

double companion_spectral_radius(const WeightedTsGraph& g) {
  if (g.tau_max == 0) return 0.0;
  const int d = g.d;
  Matrix m = Matrix::Identity(d, d) - g.weights[0].transpose();
  Eigen::PartialPivLU<Matrix> lu(m);
  if (lu.rcond() < 1e-13)
    fail(Errc::domain_error, "contemporaneous matrix: (I - W_c^T) is numerically singular");

  const int dim = d * g.tau_max;
  Matrix companion = Matrix::Zero(dim, dim);
  for (int k = 1; k <= g.tau_max; ++k) {
    Matrix b_k = lu.solve(g.weights[static_cast<size_t>(k)].transpose());
    companion.block(0, (k - 1) * d, d, d) = b_k;
  }
  for (int k = 1; k < g.tau_max; ++k)
    companion.block(k * d, (k - 1) * d, d, d) = Matrix::Identity(d, d);
  return spectral_radius(companion);
}

bool is_stable(const WeightedTsGraph& g) {
  check_ts_graph(g);
  return companion_spectral_radius(g) < 1.0 - kStabilityMargin;
}

Panel simulate(const WeightedTsGraph& g, const SimConfig& cfg, Rng& rng) {
  check_ts_graph(g);
  if (cfg.n < 2) fail(Errc::invalid_argument, "need n >= 2 samples");
  if (cfg.burn_in < 0) fail(Errc::invalid_argument, "burn_in must be >= 0");
  std::vector<double> noise_std = resolved_noise_std(cfg, g.d);
  if (!is_stable(g)) fail(Errc::unstable, "process is not stable: spectral radius >= 1");

  std::vector<int> order =
      *topological_order(summary_of(g, EdgeScope::Contemporaneous));

  const int d = g.d;
  const long total = cfg.burn_in + cfg.n;
  Matrix x = Matrix::Zero(total, d);
  std::vector<double> eta(static_cast<size_t>(d));

  for (long t = 0; t < total; ++t) {
    for (int j = 0; j < d; ++j) eta[static_cast<size_t>(j)] = rng.gauss();

    auto row = x.row(t);
    for (int k = 1; k <= g.tau_max; ++k) {
      if (t - k < 0) continue;
      row += x.row(t - k) * g.weights[static_cast<size_t>(k)];
    }
    // Contemporaneous effects resolved in topological order of W_c.
    for (int j : order) {
      double v = row(j) + eta[static_cast<size_t>(j)] * noise_std[static_cast<size_t>(j)];
      for (int i = 0; i < d; ++i) {
        double w = g.weights[0](i, j);
        if (w != 0.0) v += w * row(i);
      }
      if (std::abs(v) > kOverflowLimit)
        fail(Errc::domain_error, "numerical overflow during simulation");
      row(j) = v;
    }
  }

  Panel p;
  p.data = x.bottomRows(cfg.n);
  p.names.reserve(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j) p.names.push_back("x" + std::to_string(j));
  return p;
}

Panel standardize(const Panel& p) {
  check_panel(p);
  const long t = p.rows();
  Panel out;
  out.names = p.names;
  out.data = p.data;
  for (int j = 0; j < p.cols(); ++j) {
    double mean = out.data.col(j).mean();
    out.data.col(j).array() -= mean;
    double var = out.data.col(j).squaredNorm() / static_cast<double>(t - 1);
    if (var <= 0.0)
      fail(Errc::domain_error, "degenerate column " + std::to_string(j) + ": zero variance");
    out.data.col(j) /= std::sqrt(var);
  }
  return out;
}

void check_panel(const Panel& p) {
  if (p.rows() < 2) fail(Errc::invalid_argument, "panel needs at least 2 rows");
  if (p.cols() < 1) fail(Errc::invalid_argument, "panel needs at least 1 column");
  if (!p.names.empty() && static_cast<int>(p.names.size()) != p.cols())
    fail(Errc::invalid_argument, "panel name count does not match column count");
  if (!p.data.allFinite()) fail(Errc::invalid_argument, "panel contains non-finite values");
}

}  // namespace tssort
