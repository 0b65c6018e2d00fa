#include "sortability.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace tssort {

double increasing(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    fail(Errc::domain_error, "increasing: non-finite criterion value");
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(a - b) <= 1e-9 * scale) return 0.5;
  return a < b ? 1.0 : 0.0;
}

CriterionVector marginal_variance(const Panel& p) {
  check_panel(p);
  const long t = p.rows();
  CriterionVector out;
  out.kind = Criterion::Variance;
  out.values.reserve(static_cast<size_t>(p.cols()));
  for (int j = 0; j < p.cols(); ++j) {
    double mean = p.data.col(j).mean();
    double var = (p.data.col(j).array() - mean).matrix().squaredNorm() /
                 static_cast<double>(t - 1);
    out.values.push_back(var);
  }
  return out;
}

CriterionVector r2_scores(const Panel& p, int tau_max) {
  check_panel(p);
  if (tau_max < 0) fail(Errc::invalid_argument, "tau_max must be >= 0");
  const int d = p.cols();
  const long t = p.rows();
  if (t <= static_cast<long>(d) * (tau_max + 1) + 1)
    fail(Errc::invalid_argument, "insufficient samples: need T > d*(tau_max+1)+1");

  const long n_eff = t - tau_max;
  const int n_lagged = d * tau_max;

  // Regressor pool: all contemporaneous columns followed by lag-major blocks;
  // everything centered once, per-node designs drop the own contemporaneous
  // column.
  Matrix pool(n_eff, d + n_lagged);
  pool.leftCols(d) = p.data.bottomRows(n_eff);
  for (int k = 1; k <= tau_max; ++k)
    pool.middleCols(d + (k - 1) * d, d) = p.data.middleRows(tau_max - k, n_eff);
  Eigen::RowVectorXd means = pool.colwise().mean();
  pool.rowwise() -= means;

  CriterionVector out;
  out.kind = Criterion::R2;
  out.values.reserve(static_cast<size_t>(d));

  Matrix design(n_eff, d - 1 + n_lagged);
  for (int i = 0; i < d; ++i) {
    int col = 0;
    for (int j = 0; j < d; ++j)
      if (j != i) design.col(col++) = pool.col(j);
    design.rightCols(n_lagged) = pool.rightCols(n_lagged);

    Vector y = pool.col(i);
    double tss = y.squaredNorm();
    if (tss <= 0.0) {
      out.values.push_back(0.0);
      continue;
    }
    LstsqResult fit = lstsq_min_norm(design, y);
    double r2 = 1.0 - fit.rss / tss;
    out.values.push_back(std::clamp(r2, 0.0, 1.0));
  }
  return out;
}

namespace {

SortabilityReport score_over_pairs(const CriterionVector& cri,
                                   const std::vector<std::pair<int, int>>& pairs,
                                   PairMode mode) {
  if (pairs.empty())
    fail(Errc::no_admissible_pairs, "sortability undefined: empty pair set");
  SortabilityReport r;
  r.mode = mode;
  for (auto [i, j] : pairs) {
    double v = increasing(cri.values[static_cast<size_t>(i)],
                          cri.values[static_cast<size_t>(j)]);
    ++r.pairs_total;
    if (v == 0.5)
      ++r.pairs_tied;
    else if (v == 1.0)
      ++r.pairs_increasing;
  }
  r.score = (static_cast<double>(r.pairs_increasing) + 0.5 * static_cast<double>(r.pairs_tied)) /
            static_cast<double>(r.pairs_total);
  return r;
}

// One term per (i, j, k) triple with a length-k path from i to j.
SortabilityReport score_path_weighted(const CriterionVector& cri, const SummaryGraph& g) {
  if (!is_acyclic(g))
    fail(Errc::invalid_argument, "path-weighted sortability requires an acyclic graph");
  SortabilityReport r;
  r.mode = PairMode::PathWeighted;
  const int d = g.d;
  std::vector<uint8_t> power = g.adj;  // paths of length exactly k
  for (int k = 1; k <= d - 1; ++k) {
    if (k > 1) {
      std::vector<uint8_t> next(static_cast<size_t>(d) * d, 0);
      for (int i = 0; i < d; ++i)
        for (int m = 0; m < d; ++m)
          if (power[static_cast<size_t>(i) * d + m])
            for (int j = 0; j < d; ++j)
              if (g.edge(m, j)) next[static_cast<size_t>(i) * d + j] = 1;
      power.swap(next);
    }
    bool any = false;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (power[static_cast<size_t>(i) * d + j]) {
          any = true;
          double v = increasing(cri.values[static_cast<size_t>(i)],
                                cri.values[static_cast<size_t>(j)]);
          ++r.pairs_total;
          if (v == 0.5)
            ++r.pairs_tied;
          else if (v == 1.0)
            ++r.pairs_increasing;
        }
    if (!any) break;
  }
  if (r.pairs_total == 0)
    fail(Errc::no_admissible_pairs, "sortability undefined: graph has no paths");
  r.score = (static_cast<double>(r.pairs_increasing) + 0.5 * static_cast<double>(r.pairs_tied)) /
            static_cast<double>(r.pairs_total);
  return r;
}

}  // namespace

SortabilityReport sortability_score(const CriterionVector& cri, const SummaryGraph& g,
                                    PairMode mode) {
  if (static_cast<int>(cri.values.size()) != g.d)
    fail(Errc::invalid_argument, "criterion vector length does not match node count");
  for (double v : cri.values)
    if (!std::isfinite(v)) fail(Errc::domain_error, "non-finite criterion value");

  switch (mode) {
    case PairMode::Admissible:
      return score_over_pairs(cri, admissible_pairs(g), mode);
    case PairMode::AllConnected:
      return score_over_pairs(cri, all_connected_pairs(g), mode);
    case PairMode::PathWeighted:
      return score_path_weighted(cri, g);
  }
  fail(Errc::internal, "unknown pair mode");
}

std::string to_string(Criterion c) {
  return c == Criterion::Variance ? "variance" : "r2";
}

std::string to_string(PairMode m) {
  switch (m) {
    case PairMode::Admissible: return "admissible";
    case PairMode::AllConnected: return "all_connected";
    case PairMode::PathWeighted: return "path_weighted";
  }
  return "?";
}

std::string report_json(const SortabilityReport& r, Criterion criterion) {
  std::string s = "{";
  s += "\"criterion\":\"" + to_string(criterion) + "\",";
  s += "\"mode\":\"" + to_string(r.mode) + "\",";
  s += "\"pairs_increasing\":" + std::to_string(r.pairs_increasing) + ",";
  s += "\"pairs_tied\":" + std::to_string(r.pairs_tied) + ",";
  s += "\"pairs_total\":" + std::to_string(r.pairs_total) + ",";
  s += "\"score\":" + format_g17(r.score);
  s += "}";
  return s;
}

}  // namespace tssort
