#include "dynotears.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "common.hpp"

namespace tssort {

HValue h_dagness(const Matrix& w) {
  if (w.rows() != w.cols()) fail(Errc::invalid_argument, "h_dagness: matrix not square");
  if (!w.allFinite()) fail(Errc::domain_error, "h_dagness: non-finite entries");
  const Eigen::Index d = w.rows();
  Matrix squared = w.cwiseProduct(w);
  // exp overflows around 709; treat runaway weights as an infinite barrier.
  if (squared.cwiseAbs().colwise().sum().maxCoeff() > 500.0) {
    HValue hv;
    hv.value = std::numeric_limits<double>::infinity();
    hv.gradient = Matrix::Zero(d, d);
    return hv;
  }
  Matrix e = expm(squared);
  HValue hv;
  hv.value = e.trace() - static_cast<double>(d);
  hv.gradient = e.transpose().cwiseProduct(2.0 * w);
  return hv;
}

double dyno_smooth_value_grad(const Matrix& x, const Matrix& x_lagged, const Matrix& w_c,
                              const Matrix& w_l, double alpha, double rho, Matrix* grad_wc,
                              Matrix* grad_wl) {
  const double n = static_cast<double>(x.rows());
  Matrix residual = x - x * w_c;
  if (x_lagged.cols() > 0) residual -= x_lagged * w_l;
  double loss = residual.squaredNorm() / (2.0 * n);

  HValue h = h_dagness(w_c);
  if (!std::isfinite(h.value)) {
    if (grad_wc) grad_wc->setZero(w_c.rows(), w_c.cols());
    if (grad_wl) grad_wl->setZero(w_l.rows(), w_l.cols());
    return std::numeric_limits<double>::infinity();
  }
  double value = loss + alpha * h.value + 0.5 * rho * h.value * h.value;
  if (grad_wc) *grad_wc = -(x.transpose() * residual) / n + (alpha + rho * h.value) * h.gradient;
  if (grad_wl && x_lagged.cols() > 0) *grad_wl = -(x_lagged.transpose() * residual) / n;
  return value;
}

namespace {

// Inner problem over the nonnegative split z = [Wc+, Wc-, Wl+, Wl-] with the
// W_c diagonal frozen at zero. Loss and gradient are evaluated through the
// precomputed Gram matrices, so each evaluation is independent of the sample
// count:
//   X^T R  = S_xx (I - W_c) - S_xl W_l
//   X_l^T R = S_xl^T (I - W_c) - S_ll W_l
//   ||R||^2 = tr((I - W_c)^T X^T R) - tr(W_l^T X_l^T R)
struct InnerProblem {
  int d;
  int lag_rows;
  double n;
  Matrix s_xx;  // X^T X
  Matrix s_xl;  // X^T X_l
  Matrix s_ll;  // X_l^T X_l
  double lambda1, lambda2;
  double alpha = 0.0, rho = 1.0;

  InnerProblem(const Matrix& x, const Matrix& x_lagged, double l1, double l2)
      : d(static_cast<int>(x.cols())),
        lag_rows(static_cast<int>(x_lagged.cols())),
        n(static_cast<double>(x.rows())),
        s_xx(x.transpose() * x),
        s_xl(x.transpose() * x_lagged),
        s_ll(x_lagged.transpose() * x_lagged),
        lambda1(l1),
        lambda2(l2) {}

  Eigen::Index size() const {
    return 2 * static_cast<Eigen::Index>(d) * d + 2 * static_cast<Eigen::Index>(lag_rows) * d;
  }

  void unpack(const Vector& z, Matrix& w_c, Matrix& w_l) const {
    const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
    const Eigen::Index ld = static_cast<Eigen::Index>(lag_rows) * d;
    w_c = Eigen::Map<const Matrix>(z.data(), d, d) -
          Eigen::Map<const Matrix>(z.data() + dd, d, d);
    if (lag_rows > 0)
      w_l = Eigen::Map<const Matrix>(z.data() + 2 * dd, lag_rows, d) -
            Eigen::Map<const Matrix>(z.data() + 2 * dd + ld, lag_rows, d);
    else
      w_l = Matrix::Zero(0, d);
  }

  double value_grad(const Vector& z, Vector& grad) const {
    Matrix w_c, w_l;
    unpack(z, w_c, w_l);

    Matrix eye_minus_wc = Matrix::Identity(d, d) - w_c;
    Matrix xt_r = s_xx * eye_minus_wc;
    if (lag_rows > 0) xt_r -= s_xl * w_l;
    double rss = (eye_minus_wc.transpose() * xt_r).trace();
    Matrix xlt_r;
    if (lag_rows > 0) {
      xlt_r = s_xl.transpose() * eye_minus_wc - s_ll * w_l;
      rss -= (w_l.transpose() * xlt_r).trace();
    }
    double loss = std::max(rss, 0.0) / (2.0 * n);

    HValue h = h_dagness(w_c);
    double smooth;
    Matrix g_c, g_l;
    if (!std::isfinite(h.value)) {
      smooth = std::numeric_limits<double>::infinity();
      g_c = Matrix::Zero(d, d);
      g_l = Matrix::Zero(lag_rows, d);
    } else {
      smooth = loss + alpha * h.value + 0.5 * rho * h.value * h.value;
      g_c = -xt_r / n + (alpha + rho * h.value) * h.gradient;
      if (lag_rows > 0) g_l = -xlt_r / n;
    }

    const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
    const Eigen::Index ld = static_cast<Eigen::Index>(lag_rows) * d;
    grad.resize(size());
    Eigen::Map<Matrix>(grad.data(), d, d) = g_c.array() + lambda1;
    Eigen::Map<Matrix>(grad.data() + dd, d, d) = (-g_c).array() + lambda1;
    if (lag_rows > 0) {
      Eigen::Map<Matrix>(grad.data() + 2 * dd, lag_rows, d) = g_l.array() + lambda2;
      Eigen::Map<Matrix>(grad.data() + 2 * dd + ld, lag_rows, d) = (-g_l).array() + lambda2;
    }
    // Frozen diagonal of W_c: both split parts keep zero gradient.
    for (int i = 0; i < d; ++i) {
      grad(static_cast<Eigen::Index>(i) * d + i) = 0.0;
      grad(dd + static_cast<Eigen::Index>(i) * d + i) = 0.0;
    }
    if (!std::isfinite(smooth)) return smooth;
    double penalty = lambda1 * z.head(2 * dd).sum();
    if (lag_rows > 0) penalty += lambda2 * z.tail(2 * ld).sum();
    return smooth + penalty;
  }
};

// Projected L-BFGS with Armijo backtracking along the projection arc.
struct InnerOutcome {
  Vector z;
  std::vector<double> objective_trace;
};

InnerOutcome solve_inner(const InnerProblem& prob, Vector z, const DynoConfig& cfg) {
  const Eigen::Index n = prob.size();
  Vector grad(n), grad_new(n);
  double f = prob.value_grad(z, grad);

  std::deque<std::pair<Vector, Vector>> pairs;  // (s, y)
  InnerOutcome out;
  out.objective_trace.push_back(f);
  int stalled = 0;

  for (int iter = 0; iter < cfg.inner_max_iter; ++iter) {
    // Projected-gradient stationarity measure on the nonnegative orthant.
    double stat = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double gi = z(i) > 0.0 ? grad(i) : std::min(grad(i), 0.0);
      stat = std::max(stat, std::abs(gi));
    }
    if (stat < cfg.inner_tol) break;

    // Two-loop recursion.
    Vector dir = -grad;
    if (!pairs.empty()) {
      std::vector<double> alpha_i(pairs.size());
      for (size_t k = pairs.size(); k-- > 0;) {
        const auto& [s, y] = pairs[k];
        double rho_k = 1.0 / y.dot(s);
        alpha_i[k] = rho_k * s.dot(dir);
        dir -= alpha_i[k] * y;
      }
      const auto& [s_last, y_last] = pairs.back();
      dir *= s_last.dot(y_last) / y_last.dot(y_last);
      for (size_t k = 0; k < pairs.size(); ++k) {
        const auto& [s, y] = pairs[k];
        double rho_k = 1.0 / y.dot(s);
        double beta = rho_k * y.dot(dir);
        dir += (alpha_i[k] - beta) * s;
      }
    }
    if (dir.dot(grad) >= 0.0) dir = -grad;  // safeguard: fall back to steepest descent

    // Backtracking on x_new = P(z + step * dir).
    double step = 1.0;
    bool accepted = false;
    Vector z_new;
    double f_new = f;
    for (int ls = 0; ls < 60; ++ls) {
      z_new = (z + step * dir).cwiseMax(0.0);
      f_new = prob.value_grad(z_new, grad_new);
      double pred = grad.dot(z_new - z);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * pred && f_new <= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || (z_new - z).lpNorm<Eigen::Infinity>() == 0.0) break;

    Vector s = z_new - z;
    Vector y = grad_new - grad;
    double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      pairs.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(pairs.size()) > cfg.lbfgs_memory) pairs.pop_front();
    }
    double decrease = f - f_new;
    z = std::move(z_new);
    grad = grad_new;
    f = f_new;
    out.objective_trace.push_back(f);
    stalled = decrease <= 1e-12 * std::max(1.0, std::abs(f)) ? stalled + 1 : 0;
    if (stalled >= 8) break;
  }
  out.z = std::move(z);
  return out;
}

void repair_acyclicity(Matrix& w_c) {
  const int d = static_cast<int>(w_c.rows());
  for (;;) {
    SummaryGraph pattern(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (w_c(i, j) != 0.0) pattern.set_edge(i, j);
    if (is_acyclic(pattern)) return;
    // Drop the smallest-magnitude surviving edge and retry.
    double best = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (w_c(i, j) != 0.0 && std::abs(w_c(i, j)) < best) {
          best = std::abs(w_c(i, j));
          bi = i;
          bj = j;
        }
    w_c(bi, bj) = 0.0;
  }
}

}  // namespace

DynoResult fit_dynotears(const Panel& p, int tau_max, const DynoConfig& cfg) {
  check_panel(p);
  if (tau_max < 0) fail(Errc::invalid_argument, "tau_max must be >= 0");
  if (cfg.lambda1 < 0 || cfg.lambda2 < 0 || cfg.threshold < 0 || cfg.h_tol <= 0)
    fail(Errc::invalid_argument, "invalid dynotears config");
  const int d = p.cols();
  const long t = p.rows();
  if (t <= static_cast<long>(d) * (tau_max + 1) + 1)
    fail(Errc::invalid_argument, "insufficient samples: need T > d*(tau_max+1)+1");

  const long n_eff = t - tau_max;
  const int lag_rows = d * tau_max;
  Matrix x = p.data.bottomRows(n_eff);
  Matrix x_lagged(n_eff, lag_rows);
  for (int k = 1; k <= tau_max; ++k)
    x_lagged.middleCols((k - 1) * d, d) = p.data.middleRows(tau_max - k, n_eff);

  InnerProblem prob(x, x_lagged, cfg.lambda1, cfg.lambda2);

  Vector z = Vector::Zero(prob.size());
  double rho = 1.0;
  double alpha = 0.0;
  double h_current = std::numeric_limits<double>::infinity();
  DynoResult result;

  auto h_of = [&](const Vector& zv) {
    Matrix w_c, w_l;
    prob.unpack(zv, w_c, w_l);
    return h_dagness(w_c).value;
  };

  int outer = 0;
  while (outer < cfg.max_outer) {
    ++outer;
    Vector z_candidate;
    double h_candidate = 0.0;
    std::vector<double> trace;
    for (;;) {
      prob.alpha = alpha;
      prob.rho = rho;
      InnerOutcome inner = solve_inner(prob, z, cfg);
      z_candidate = std::move(inner.z);
      trace = std::move(inner.objective_trace);
      h_candidate = h_of(z_candidate);
      if (h_candidate > 0.25 * h_current && rho < cfg.rho_max) {
        rho *= 10.0;
        continue;
      }
      break;
    }
    z = std::move(z_candidate);
    h_current = h_candidate;
    alpha += rho * h_current;
    result.inner_objectives = std::move(trace);
    if (h_current <= cfg.h_tol || rho >= cfg.rho_max) break;
  }

  result.outer_iterations = outer;
  result.h_value = h_current;
  result.converged = h_current <= cfg.h_tol;

  Matrix w_c, w_l;
  prob.unpack(z, w_c, w_l);
  w_c = (w_c.cwiseAbs().array() > cfg.threshold).select(w_c, 0.0);
  repair_acyclicity(w_c);

  result.est.method = "dynotears";
  result.est.graph = WeightedTsGraph::zeros(d, tau_max);
  result.est.graph.weights[0] = w_c;
  for (int k = 1; k <= tau_max; ++k) {
    Matrix slice = w_l.middleRows((k - 1) * d, d);
    result.est.graph.weights[static_cast<size_t>(k)] =
        (slice.cwiseAbs().array() > cfg.threshold).select(slice, 0.0);
  }
  return result;
}

}  // namespace tssort
