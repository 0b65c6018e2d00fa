#include "regression.hpp"

#include <cmath>

#include "common.hpp"

namespace tssort {

OlsFit ols(const Matrix& design, const Vector& target) {
  if (design.rows() < 1) fail(Errc::invalid_argument, "ols: empty design");
  LstsqResult ls = lstsq_min_norm(design, target);
  return {std::move(ls.coefficients), ls.rss};
}

Vector lasso_coordinate_descent(const Matrix& gram, const Vector& corr, double lambda,
                                Vector beta, double tol, long max_sweeps) {
  const Eigen::Index m = gram.rows();
  Vector gram_beta = gram * beta;
  for (long sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      double g_jj = gram(j, j);
      if (g_jj <= 0.0) continue;
      double rho = corr(j) - gram_beta(j) + g_jj * beta(j);
      double next = 0.0;
      if (rho > lambda)
        next = (rho - lambda) / g_jj;
      else if (rho < -lambda)
        next = (rho + lambda) / g_jj;
      double delta = next - beta(j);
      if (delta != 0.0) {
        gram_beta += delta * gram.col(j);
        beta(j) = next;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (max_change < tol) break;
  }
  return beta;
}

LassoFit lasso_bic(const Matrix& design, const Vector& target, const LassoConfig& cfg,
                   std::vector<LassoFit>* path_out) {
  const long t = design.rows();
  const Eigen::Index m = design.cols();
  if (t != target.size()) fail(Errc::invalid_argument, "lasso: row count mismatch");
  if (t < 2) fail(Errc::invalid_argument, "lasso: need at least 2 rows");
  if (cfg.path_size < 2) fail(Errc::invalid_argument, "lasso: path_size must be >= 2");
  if (!design.allFinite() || !target.allFinite())
    fail(Errc::invalid_argument, "lasso: non-finite input");

  double y_mean = target.mean();
  Vector y = target.array() - y_mean;
  double tss = y.squaredNorm();

  // Standardize columns (population RMS scale); constant columns drop out.
  std::vector<Eigen::Index> active;
  active.reserve(static_cast<size_t>(m));
  Eigen::RowVectorXd col_mean = design.colwise().mean();
  std::vector<double> scale(static_cast<size_t>(m), 0.0);
  for (Eigen::Index j = 0; j < m; ++j) {
    double ss = (design.col(j).array() - col_mean(j)).matrix().squaredNorm();
    double s = std::sqrt(ss / static_cast<double>(t));
    scale[static_cast<size_t>(j)] = s;
    if (s > 0.0) active.push_back(j);
  }

  auto intercept_only = [&]() {
    LassoFit fit;
    fit.coefficients = Vector::Zero(m);
    fit.intercept = y_mean;
    fit.rss = tss;
    fit.bic = static_cast<double>(t) * std::log(std::max(tss, 1e-300) / static_cast<double>(t));
    if (path_out) path_out->push_back(fit);
    return fit;
  };
  if (active.empty()) return intercept_only();

  const Eigen::Index ma = static_cast<Eigen::Index>(active.size());
  Matrix xs(t, ma);
  for (Eigen::Index c = 0; c < ma; ++c) {
    Eigen::Index j = active[static_cast<size_t>(c)];
    xs.col(c) = (design.col(j).array() - col_mean(j)) / scale[static_cast<size_t>(j)];
  }
  Matrix gram = (xs.transpose() * xs) / static_cast<double>(t);
  Vector corr = (xs.transpose() * y) / static_cast<double>(t);
  double y_sq = y.squaredNorm() / static_cast<double>(t);

  double lambda_max = corr.cwiseAbs().maxCoeff();
  if (lambda_max <= 0.0) return intercept_only();

  LassoFit best;
  bool have_best = false;
  Vector beta = Vector::Zero(ma);
  for (int p = 0; p < cfg.path_size; ++p) {
    double lambda =
        lambda_max * std::pow(cfg.path_floor, static_cast<double>(p) / (cfg.path_size - 1));
    beta = lasso_coordinate_descent(gram, corr, lambda, beta, cfg.tol, cfg.max_sweeps);

    double rss = static_cast<double>(t) *
                 (y_sq - 2.0 * corr.dot(beta) + beta.dot(gram * beta));
    rss = std::max(rss, 0.0);
    int k = 0;
    for (Eigen::Index c = 0; c < ma; ++c) k += beta(c) != 0.0;
    double bic = static_cast<double>(t) * std::log(std::max(rss, 1e-300) / static_cast<double>(t)) +
                 k * std::log(static_cast<double>(t));

    LassoFit fit;
    fit.coefficients = Vector::Zero(m);
    for (Eigen::Index c = 0; c < ma; ++c) {
      Eigen::Index j = active[static_cast<size_t>(c)];
      fit.coefficients(j) = beta(c) / scale[static_cast<size_t>(j)];
    }
    fit.intercept = y_mean - fit.coefficients.dot(col_mean.transpose());
    fit.lambda = lambda;
    fit.rss = rss;
    fit.bic = bic;
    if (path_out) path_out->push_back(fit);
    if (!have_best || fit.bic < best.bic) {
      best = fit;
      have_best = true;
    }
  }
  return best;
}

}  // namespace tssort
