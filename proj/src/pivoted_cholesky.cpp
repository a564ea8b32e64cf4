//
// Project     : pivotal
// Module      : pivchol
// Description : permutation assembly, padded square factor, reduced solve
//

#include "pivotal/pivoted_cholesky.hpp"

#include <cmath>

namespace pivotal {

namespace {

// p lists the pivots first, then every untouched index in ascending order.
PermutationIndex pivot_permutation(std::size_t n,
                                   const std::vector<std::size_t>& beta) {
  std::vector<std::size_t> p(beta);
  std::vector<bool> used(n, false);
  for (std::size_t b : beta) used[b] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!used[i]) p.push_back(i);
  return PermutationIndex(std::move(p));
}

}  // namespace

PivotedCholesky pcd_lowrank(const ColumnOracle& oracle, const StopRule& stop) {
  detail::DiagCA ca = detail::diag_ca(oracle, stop);
  const std::size_t n = oracle.dimension();
  const std::size_t k = ca.result.rank();

  PivotedCholesky out;
  out.beta = std::move(ca.result.row_pivots);
  out.gammas = std::move(ca.result.gammas);
  out.epsilon = ca.result.epsilon;
  out.negative_diagonal = ca.result.negative_diagonal;
  out.p = pivot_permutation(n, out.beta);
  out.L = apply_row_permutation(ca.result.A, out.p);
  out.L_star = DenseMatrix(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i) out.L_star(i, j) = out.L(i, j);
  return out;
}

FullPivotedCholesky pcd_fullrank(const ColumnOracle& oracle,
                                 const StopRule& stop) {
  detail::DiagCA ca = detail::diag_ca(oracle, stop);
  const std::size_t n = oracle.dimension();
  const std::size_t k = ca.result.rank();

  FullPivotedCholesky out;
  out.gammas = std::move(ca.result.gammas);
  out.epsilon = ca.result.epsilon;
  out.rank_used = k;
  out.negative_diagonal = ca.result.negative_diagonal;
  out.p = pivot_permutation(n, ca.result.row_pivots);

  // Unfactored rows keep their residual diagonal as a square root on the
  // extended diagonal, making the permuted factor square and triangular.
  DenseMatrix A = std::move(ca.result.A);
  A.resize_cols(n);
  for (std::size_t m = k; m < n; ++m) {
    const std::size_t row = out.p[m];
    A(row, m) = std::sqrt(std::max(ca.residual_diag[row], 0.0));
  }
  out.L_n = apply_row_permutation(A, out.p);
  return out;
}

LogDetResult logdet_approx(const FullPivotedCholesky& f) {
  LogDetResult out;
  for (std::size_t i = 0; i < f.L_n.rows(); ++i) {
    const double d = f.L_n(i, i);
    if (d > 0.0)
      out.log_value += 2.0 * std::log(d);
    else
      ++out.zero_count;
  }
  return out;
}

std::vector<double> reduced_solve(const PivotedCholesky& f,
                                  std::span<const double> rhs) {
  const std::size_t n = f.n();
  const std::size_t k = f.k();
  if (rhs.size() != n)
    throw DimensionError("reduced_solve: rhs length mismatch");

  std::vector<double> w(n, 0.0);
  if (k == 0) return w;

  std::vector<double> fstar(k);
  for (std::size_t q = 0; q < k; ++q) fstar[q] = rhs[f.beta[q]];
  std::vector<double> y =
      solve_triangular(f.L_star, fstar, TriangularSide::Lower);
  // L_star^T is the upper triangle of the same data, solved in place.
  DenseMatrix U = f.L_star.transposed();
  std::vector<double> wstar = solve_triangular(U, y, TriangularSide::Upper);
  for (std::size_t q = 0; q < k; ++q) w[f.beta[q]] = wstar[q];
  return w;
}

}  // namespace pivotal
