#include <doctest.h>

#include <cmath>
#include <limits>

#include "common.hpp"
#include "oracles.hpp"
#include "sortability.hpp"
#include "svar.hpp"

using namespace tssort;

namespace {

SummaryGraph worked_example() {
  SummaryGraph g(4);  // 0 = A, 1 = B, 2 = C, 3 = D
  g.set_edge(0, 1);
  g.set_edge(1, 2);
  g.set_edge(2, 1);
  g.set_edge(3, 2);
  return g;
}

CriterionVector cri(std::vector<double> v) {
  return CriterionVector{Criterion::Variance, std::move(v)};
}

Panel random_panel(int d, long n, uint64_t seed) {
  Panel p;
  p.data.resize(n, d);
  Rng rng(seed);
  for (long t = 0; t < n; ++t)
    for (int j = 0; j < d; ++j) p.data(t, j) = rng.gauss();
  for (int j = 0; j < d; ++j) p.names.push_back("x" + std::to_string(j));
  return p;
}

double oracle_pair_score(const CriterionVector& c, const std::set<std::pair<int, int>>& pairs) {
  double num = 0;
  for (auto& pr : pairs)
    num += increasing(c.values[static_cast<size_t>(pr.first)],
                      c.values[static_cast<size_t>(pr.second)]);
  return num / static_cast<double>(pairs.size());
}

}  // namespace

TEST_CASE("increasing: strict, tie, decreasing, non-finite") {
  CHECK(increasing(1, 2) == 1.0);
  CHECK(increasing(2, 2) == 0.5);
  CHECK(increasing(3, 2) == 0.0);
  CHECK(increasing(1.0, 1.0 + 1e-12) == 0.5);  // inside relative tolerance
  CHECK_THROWS_AS(increasing(std::numeric_limits<double>::quiet_NaN(), 1.0), Error);
  CHECK_THROWS_AS(increasing(1.0, std::numeric_limits<double>::infinity()), Error);
}

TEST_CASE("marginal variance: constant column, two-point column, standardized panel") {
  Panel p;
  p.names = {"a", "b"};
  p.data.resize(2, 2);
  p.data << 3, 0, 3, 2;
  CriterionVector v = marginal_variance(p);
  CHECK(v.values[0] == 0.0);
  CHECK(v.values[1] == 2.0);  // divisor T-1

  Panel r = random_panel(3, 200, 5);
  CriterionVector sv = marginal_variance(standardize(r));
  for (double value : sv.values) CHECK(value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("r2: white noise explains almost nothing") {
  Panel p = random_panel(3, 5000, 17);
  CriterionVector r2 = r2_scores(p, 0);
  for (double value : r2.values) {
    CHECK(value >= 0.0);
    CHECK(value < 0.05);
  }
}

TEST_CASE("r2: noise-free contemporaneous copy is fully explained") {
  Panel p = random_panel(1, 400, 23);
  Panel two;
  two.names = {"x", "y"};
  two.data.resize(400, 2);
  two.data.col(0) = p.data.col(0);
  two.data.col(1) = 2.0 * p.data.col(0);
  CriterionVector r2 = r2_scores(two, 0);
  CHECK(r2.values[1] >= 0.999);
  CHECK(r2.values[0] >= 0.999);  // symmetric: x is a perfect function of y too
}

TEST_CASE("r2 is invariant under per-column affine maps") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Panel p = random_panel(4, 300, 100 + seed);
    // add some structure so r2 is not trivially 0
    p.data.col(2) += 0.8 * p.data.col(0);
    p.data.col(3) -= 1.5 * p.data.col(1);
    CriterionVector base = r2_scores(p, 1);
    Rng rng(seed);
    Panel mapped = p;
    for (int j = 0; j < 4; ++j) {
      double a = rng.two_sided_uniform(0.2, 3.0);
      double b = rng.uniform(-5.0, 5.0);
      mapped.data.col(j) = a * mapped.data.col(j).array() + b;
    }
    CriterionVector moved = r2_scores(mapped, 1);
    for (size_t i = 0; i < base.values.size(); ++i)
      CHECK(std::abs(base.values[i] - moved.values[i]) <= 1e-6);
  }
}

TEST_CASE("r2 rejects too-short panels") {
  Panel p = random_panel(4, 9, 3);
  CHECK_THROWS_AS(r2_scores(p, 1), Error);
}

TEST_CASE("worked example scores: 0.75 admissible, 4/6 all-connected") {
  CriterionVector c = cri({1.0, 2.0, 3.0, 2.5});  // A, B, C, D
  SummaryGraph g = worked_example();
  SortabilityReport adm = sortability_score(c, g, PairMode::Admissible);
  CHECK(adm.score == 0.75);
  CHECK(adm.pairs_total == 4);
  CHECK(adm.pairs_increasing == 3);
  CHECK(adm.pairs_tied == 0);
  SortabilityReport all = sortability_score(c, g, PairMode::AllConnected);
  CHECK(all.score == 4.0 / 6.0);
  CHECK(all.pairs_total == 6);
}

TEST_CASE("path-weighted: sorted chain scores 1 over 3 paths") {
  SummaryGraph chain(3);
  chain.set_edge(0, 1);
  chain.set_edge(1, 2);
  SortabilityReport rep =
      sortability_score(cri({1.0, 2.0, 3.0}), chain, PairMode::PathWeighted);
  CHECK(rep.score == 1.0);
  CHECK(rep.pairs_total == 3);  // 0->1, 1->2, 0=>2
}

TEST_CASE("path-weighted matches exhaustive path enumeration on random DAGs") {
  Rng rng(4242);
  int checked = 0;
  while (checked < 100) {
    int d = 2 + static_cast<int>(rng.below(4));  // up to 5 nodes
    SummaryGraph g = oracle::random_dag(d, rng.uniform(0.2, 0.7), rng);
    auto triples = oracle::dag_path_triples(g);
    if (triples.empty()) continue;
    ++checked;
    std::vector<double> values;
    for (int i = 0; i < d; ++i) values.push_back(rng.uniform(0.0, 10.0));
    // one term per (i, j, k) triple regardless of path multiplicity
    double num = 0, den = 0;
    for (auto& [key, count] : triples) {
      (void)count;
      num += increasing(values[static_cast<size_t>(std::get<0>(key))],
                        values[static_cast<size_t>(std::get<1>(key))]);
      den += 1.0;
    }
    SortabilityReport rep =
        sortability_score(CriterionVector{Criterion::Variance, values}, g, PairMode::PathWeighted);
    CHECK(rep.score == num / den);
    CHECK(rep.pairs_total == static_cast<int64_t>(den));
  }
}

TEST_CASE("path-weighted requires a DAG") {
  SummaryGraph cyc(2);
  cyc.set_edge(0, 1);
  cyc.set_edge(1, 0);
  CHECK_THROWS_AS(sortability_score(cri({1, 2}), cyc, PairMode::PathWeighted), Error);
}

TEST_CASE("admissible and all-connected agree on random summary graphs vs oracle") {
  Rng rng(31337);
  for (int trial = 0; trial < 100; ++trial) {
    int d = 3 + static_cast<int>(rng.below(4));
    SummaryGraph g = oracle::random_summary(d, rng.uniform(0.1, 0.5), rng);
    std::vector<double> values;
    for (int i = 0; i < d; ++i) values.push_back(rng.uniform(0.0, 4.0));
    CriterionVector c{Criterion::Variance, values};

    auto adm = oracle::admissible_pairs_oracle(g);
    if (!adm.empty()) {
      SortabilityReport rep = sortability_score(c, g, PairMode::Admissible);
      CHECK(rep.score == oracle_pair_score(c, adm));
    }
    auto all = oracle::all_connected_pairs_oracle(g);
    if (!all.empty()) {
      SortabilityReport rep = sortability_score(c, g, PairMode::AllConnected);
      CHECK(rep.score == oracle_pair_score(c, all));
    }
  }
}

TEST_CASE("negating the criterion flips the score when there are no ties") {
  Rng rng(555);
  for (int trial = 0; trial < 30; ++trial) {
    SummaryGraph g = oracle::random_summary(5, 0.4, rng);
    if (oracle::admissible_pairs_oracle(g).empty()) continue;
    std::vector<double> values = {0.1, 1.7, 2.9, 4.2, 5.8};
    Rng shuffle_rng(trial);
    auto perm = shuffle_rng.permutation(5);
    std::vector<double> shuffled(5);
    for (int i = 0; i < 5; ++i) shuffled[static_cast<size_t>(i)] = values[perm[i]];
    CriterionVector c{Criterion::Variance, shuffled};
    std::vector<double> negated;
    for (double v : shuffled) negated.push_back(-v);
    CriterionVector neg{Criterion::Variance, negated};
    double s = sortability_score(c, g, PairMode::Admissible).score;
    double sneg = sortability_score(neg, g, PairMode::Admissible).score;
    CHECK(s == doctest::Approx(1.0 - sneg));
    // reversal duality: transposing the graph also flips the score
    double st = sortability_score(c, g.transposed(), PairMode::Admissible).score;
    CHECK(st == doctest::Approx(1.0 - s));
  }
}

TEST_CASE("all-equal criterion scores exactly 0.5 in every mode") {
  SummaryGraph g = worked_example();
  CriterionVector c = cri({2.0, 2.0, 2.0, 2.0});
  CHECK(sortability_score(c, g, PairMode::Admissible).score == 0.5);
  CHECK(sortability_score(c, g, PairMode::AllConnected).score == 0.5);
  SummaryGraph chain(3);
  chain.set_edge(0, 1);
  chain.set_edge(1, 2);
  CHECK(sortability_score(cri({1, 1, 1}), chain, PairMode::PathWeighted).score == 0.5);
}

TEST_CASE("admissible equals all-connected on acyclic graphs") {
  Rng rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    SummaryGraph g = oracle::random_dag(5, 0.4, rng);
    if (oracle::all_connected_pairs_oracle(g).empty()) continue;
    std::vector<double> values;
    for (int i = 0; i < 5; ++i) values.push_back(rng.uniform(0.0, 3.0));
    CriterionVector c{Criterion::Variance, values};
    CHECK(sortability_score(c, g, PairMode::Admissible).score ==
          sortability_score(c, g, PairMode::AllConnected).score);
  }
}

TEST_CASE("empty pair set is an error, not 0.5") {
  SummaryGraph g(3);
  CHECK_THROWS_AS(sortability_score(cri({1, 2, 3}), g, PairMode::Admissible), Error);
  try {
    sortability_score(cri({1, 2, 3}), g, PairMode::AllConnected);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_admissible_pairs);
  }
}

TEST_CASE("report JSON carries all fields") {
  SortabilityReport rep = sortability_score(cri({1.0, 2.0, 3.0, 2.5}), worked_example(),
                                            PairMode::Admissible);
  std::string json = report_json(rep, Criterion::Variance);
  CHECK(json.find("\"score\":0.75") != std::string::npos);
  CHECK(json.find("\"pairs_total\":4") != std::string::npos);
  CHECK(json.find("\"mode\":\"admissible\"") != std::string::npos);
  CHECK(json.find("\"criterion\":\"variance\"") != std::string::npos);
}

TEST_CASE("scores stay in [0, 1] for arbitrary criteria and graphs") {
  Rng rng(20202);
  for (int trial = 0; trial < 60; ++trial) {
    int d = 2 + static_cast<int>(rng.below(6));
    SummaryGraph g = oracle::random_summary(d, rng.uniform(0.1, 0.6), rng);
    std::vector<double> values;
    for (int i = 0; i < d; ++i) values.push_back(rng.two_sided_uniform(0.001, 100.0));
    CriterionVector c{Criterion::Variance, values};
    for (PairMode mode : {PairMode::Admissible, PairMode::AllConnected}) {
      try {
        SortabilityReport rep = sortability_score(c, g, mode);
        CHECK(rep.score >= 0.0);
        CHECK(rep.score <= 1.0);
        CHECK(rep.score ==
              (rep.pairs_increasing + 0.5 * static_cast<double>(rep.pairs_tied)) /
                  static_cast<double>(rep.pairs_total));
      } catch (const Error& e) {
        CHECK(e.code() == Errc::no_admissible_pairs);
      }
    }
  }
}

TEST_CASE("r2 handles exactly collinear regressors via the minimum-norm fallback") {
  Panel p = random_panel(2, 200, 77);
  Panel three;
  three.names = {"a", "b", "c"};
  three.data.resize(200, 3);
  three.data.col(0) = p.data.col(0);
  three.data.col(1) = p.data.col(1);
  three.data.col(2) = p.data.col(0);  // duplicate of column a
  CriterionVector r2 = r2_scores(three, 0);
  CHECK(r2.values[0] >= 0.999);  // explained exactly by its duplicate
  CHECK(r2.values[2] >= 0.999);
  CHECK(std::isfinite(r2.values[1]));
}
