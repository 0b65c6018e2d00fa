#include "linalg.hpp"

#include <cmath>

#include "common.hpp"

namespace tssort {

LstsqResult lstsq_min_norm(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) fail(Errc::invalid_argument, "lstsq: row count mismatch");
  LstsqResult out;
  if (a.cols() == 0) {
    out.coefficients = Vector(0);
    out.rss = b.squaredNorm();
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  out.coefficients = cod.solve(b);
  out.rss = (b - a * out.coefficients).squaredNorm();
  return out;
}

double spectral_radius(const Matrix& a) {
  if (a.rows() != a.cols()) fail(Errc::invalid_argument, "spectral_radius: matrix not square");
  if (a.rows() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) fail(Errc::internal, "eigenvalue iteration failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) fail(Errc::invalid_argument, "expm: matrix not square");
  const Eigen::Index n = a.rows();
  if (!a.allFinite()) fail(Errc::domain_error, "expm: non-finite entries");

  double norm1 = n > 0 ? a.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
  int squarings = 0;
  if (norm1 > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.25)));

  Matrix b = a / std::ldexp(1.0, squarings);
  const Matrix identity = Matrix::Identity(n, n);
  Matrix e = identity;
  for (int k = 20; k >= 1; --k) e = identity + (b * e) / static_cast<double>(k);
  for (int i = 0; i < squarings; ++i) e = e * e;
  return e;
}

}  // namespace tssort
