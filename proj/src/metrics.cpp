#include "metrics.hpp"

#include "common.hpp"

namespace tssort {

double f1_score(int64_t tp, int64_t fp, int64_t fn) {
  double denom = static_cast<double>(tp) + 0.5 * static_cast<double>(fp + fn);
  if (denom == 0.0) return 1.0;  // both graphs empty: perfect agreement
  return static_cast<double>(tp) / denom;
}

namespace {

void count_slice(const BoolMat& est, const BoolMat& truth, bool skip_diagonal,
                 EvalReport& r) {
  for (Eigen::Index i = 0; i < est.rows(); ++i)
    for (Eigen::Index j = 0; j < est.cols(); ++j) {
      if (skip_diagonal && i == j) continue;
      bool e = est(i, j), t = truth(i, j);
      if (e && t)
        ++r.tp;
      else if (e && !t)
        ++r.fp;
      else if (!e && t)
        ++r.fn;
    }
}

BoolMat or_collapse(const BinaryStack& stack) {
  if (stack.empty()) fail(Errc::invalid_argument, "evaluate: empty stack");
  BoolMat m = stack[0];
  for (size_t k = 1; k < stack.size(); ++k)
    m = (m.array() || stack[k].array()).matrix();
  return m;
}

void check_stack(const BinaryStack& s) {
  if (s.empty()) fail(Errc::invalid_argument, "evaluate: empty stack");
  for (const BoolMat& m : s)
    if (m.rows() != s[0].rows() || m.cols() != s[0].cols() || m.rows() != m.cols())
      fail(Errc::invalid_argument, "evaluate: slices must be square and same size");
}

}  // namespace

EvalReport evaluate(const BinaryStack& est, const BinaryStack& truth, EvalMode mode,
                    bool summary_include_diagonal) {
  check_stack(est);
  check_stack(truth);
  if (est[0].rows() != truth[0].rows())
    fail(Errc::invalid_argument, "evaluate: node counts differ");
  if (mode != EvalMode::Summary && est.size() != truth.size())
    fail(Errc::invalid_argument, "evaluate: lag depths differ");

  EvalReport r;
  r.mode = mode;
  switch (mode) {
    case EvalMode::Overall:
      for (size_t k = 0; k < est.size(); ++k) count_slice(est[k], truth[k], false, r);
      break;
    case EvalMode::Contemp:
      count_slice(est[0], truth[0], false, r);
      break;
    case EvalMode::Lagged:
      for (size_t k = 1; k < est.size(); ++k) count_slice(est[k], truth[k], false, r);
      break;
    case EvalMode::Summary:
      count_slice(or_collapse(est), or_collapse(truth), !summary_include_diagonal, r);
      break;
  }
  r.f1 = f1_score(r.tp, r.fp, r.fn);
  return r;
}

std::string to_string(EvalMode m) {
  switch (m) {
    case EvalMode::Overall: return "overall";
    case EvalMode::Contemp: return "contemp";
    case EvalMode::Lagged: return "lagged";
    case EvalMode::Summary: return "summary";
  }
  return "?";
}

std::string eval_report_json(const EvalReport& r) {
  std::string s = "{";
  s += "\"f1\":" + format_g17(r.f1) + ",";
  s += "\"fn\":" + std::to_string(r.fn) + ",";
  s += "\"fp\":" + std::to_string(r.fp) + ",";
  s += "\"mode\":\"" + to_string(r.mode) + "\",";
  s += "\"tp\":" + std::to_string(r.tp);
  s += "}";
  return s;
}

}  // namespace tssort
