//
// Project     : pivotal
// Module      : rbfmodel
// Description : textbook dense factorizations, column-major inner loops
//

#include "pivotal/dense_solve.hpp"

#include <cmath>

namespace pivotal {

void cholesky_factor(DenseMatrix& A) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw DimensionError("cholesky_factor: matrix not square");
  for (std::size_t j = 0; j < n; ++j) {
    auto cj = A.col(j);
    for (std::size_t q = 0; q < j; ++q) {
      const double w = A(j, q);
      if (w == 0.0) continue;
      const auto cq = A.col(q);
      for (std::size_t i = j; i < n; ++i) cj[i] -= w * cq[i];
    }
    const double d = cj[j];
    if (!(d > 0.0))
      throw FactorizationError("cholesky_factor: nonpositive pivot at index " +
                               std::to_string(j));
    const double root = std::sqrt(d);
    cj[j] = root;
    for (std::size_t i = j + 1; i < n; ++i) cj[i] /= root;
  }
}

std::vector<double> cholesky_solve(DenseMatrix A, std::span<const double> b) {
  if (b.size() != A.rows())
    throw DimensionError("cholesky_solve: rhs length mismatch");
  cholesky_factor(A);
  std::vector<double> y = solve_triangular(A, b, TriangularSide::Lower);
  // The factor's transpose is solved by reading the lower triangle backwards.
  const std::size_t n = A.rows();
  for (std::size_t jj = n; jj-- > 0;) {
    y[jj] /= A(jj, jj);
    const double xj = y[jj];
    for (std::size_t i = 0; i < jj; ++i) y[i] -= A(jj, i) * xj;
  }
  return y;
}

void lu_factor(DenseMatrix& A, std::vector<std::size_t>& piv) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw DimensionError("lu_factor: matrix not square");
  piv.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    auto cj = A.col(j);
    std::size_t ip = j;
    double best = std::abs(cj[j]);
    for (std::size_t i = j + 1; i < n; ++i) {
      const double v = std::abs(cj[i]);
      if (v > best) {
        best = v;
        ip = i;
      }
    }
    if (best == 0.0) throw SingularError("lu_factor: zero pivot column", j);
    piv[j] = ip;
    if (ip != j)
      for (std::size_t c = 0; c < n; ++c) std::swap(A(j, c), A(ip, c));

    const double d = cj[j];
    for (std::size_t i = j + 1; i < n; ++i) cj[i] /= d;
    for (std::size_t c = j + 1; c < n; ++c) {
      const double w = A(j, c);
      if (w == 0.0) continue;
      auto cc = A.col(c);
      for (std::size_t i = j + 1; i < n; ++i) cc[i] -= cj[i] * w;
    }
  }
}

std::vector<double> lu_solve(DenseMatrix A, std::span<const double> b) {
  const std::size_t n = A.rows();
  if (b.size() != n) throw DimensionError("lu_solve: rhs length mismatch");
  std::vector<std::size_t> piv;
  lu_factor(A, piv);
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t j = 0; j < n; ++j)
    if (piv[j] != j) std::swap(x[j], x[piv[j]]);
  // Unit lower solve, then upper solve on the same storage.
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    const auto cj = A.col(j);
    for (std::size_t i = j + 1; i < n; ++i) x[i] -= cj[i] * xj;
  }
  for (std::size_t jj = n; jj-- > 0;) {
    x[jj] /= A(jj, jj);
    const double xj = x[jj];
    if (xj == 0.0) continue;
    const auto cj = A.col(jj);
    for (std::size_t i = 0; i < jj; ++i) x[i] -= cj[i] * xj;
  }
  return x;
}

}  // namespace pivotal
