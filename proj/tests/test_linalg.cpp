#include <doctest.h>

#include "linalg.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace tssort;

TEST_CASE("expm: identity on the zero matrix") {
  Matrix e = expm(Matrix::Zero(3, 3));
  CHECK((e - Matrix::Identity(3, 3)).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("expm matches plain Taylor summation on random matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng.below(4));
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.5, 1.5);
    Matrix got = expm(a);
    Matrix want = oracle::expm_taylor(a, 80);
    CHECK((got - want).lpNorm<Eigen::Infinity>() < 1e-11 * std::max(1.0, want.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("expm: diagonal matrix exponentiates entrywise") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -2.0;
  Matrix e = expm(a);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
  CHECK(e(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  CHECK(e(0, 1) == 0.0);
}

TEST_CASE("spectral radius of known matrices") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 0.5;
  a(1, 1) = -0.9;
  CHECK(spectral_radius(a) == doctest::Approx(0.9).epsilon(1e-12));

  // rotation-by-scaling: complex pair with modulus r
  Matrix rot(2, 2);
  double r = 0.85, theta = 0.7;
  rot << r * std::cos(theta), -r * std::sin(theta), r * std::sin(theta), r * std::cos(theta);
  CHECK(spectral_radius(rot) == doctest::Approx(r).epsilon(1e-12));

  // nilpotent
  Matrix nil = Matrix::Zero(3, 3);
  nil(0, 1) = 4.0;
  nil(1, 2) = -7.0;
  CHECK(spectral_radius(nil) < 1e-7);
}

TEST_CASE("lstsq: exact system and rank-deficient minimum norm") {
  Matrix a(3, 2);
  a << 1, 0, 0, 1, 0, 0;
  Vector b(3);
  b << 2, -1, 5;
  LstsqResult r = lstsq_min_norm(a, b);
  CHECK(r.coefficients(0) == doctest::Approx(2.0));
  CHECK(r.coefficients(1) == doctest::Approx(-1.0));
  CHECK(r.rss == doctest::Approx(25.0));

  // duplicated column: minimum-norm solution splits the weight evenly
  Matrix dup(4, 2);
  dup.col(0) << 1, 2, 3, 4;
  dup.col(1) = dup.col(0);
  Vector y = 2.0 * dup.col(0);
  LstsqResult rd = lstsq_min_norm(dup, y);
  CHECK(rd.rss < 1e-18);
  CHECK(rd.coefficients(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rd.coefficients(1) == doctest::Approx(1.0).epsilon(1e-10));
}
