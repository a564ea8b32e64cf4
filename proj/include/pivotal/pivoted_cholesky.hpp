//
// Project     : pivotal
// Module      : pivchol
// Description : pivoted Cholesky views of the symmetric cross approximation
//

#ifndef PIVOTAL_PIVOTED_CHOLESKY_HPP
#define PIVOTAL_PIVOTED_CHOLESKY_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "pivotal/column_oracle.hpp"
#include "pivotal/cross_approx.hpp"
#include "pivotal/dense_matrix.hpp"

namespace pivotal {

// Rank-k factorization M ~ (P^T L)(P^T L)^T where P is the row permutation
// listing the pivots beta first, then the untouched indices in ascending
// order. L is n-by-k lower trapezoidal, L_star its leading k-by-k block.
struct PivotedCholesky {
  DenseMatrix L;
  DenseMatrix L_star;
  PermutationIndex p;
  std::vector<std::size_t> beta;
  std::vector<double> gammas;
  double epsilon = 0.0;
  bool negative_diagonal = false;

  std::size_t k() const noexcept { return beta.size(); }
  std::size_t n() const noexcept { return p.size(); }
};

// Square variant padding the unfactored rows with the square roots of their
// residual diagonal, so L_n is n-by-n lower triangular after permutation and
// det(L_n L_n^T) approximates det(M).
struct FullPivotedCholesky {
  DenseMatrix L_n;
  PermutationIndex p;
  std::vector<double> gammas;
  double epsilon = 0.0;
  std::size_t rank_used = 0;
  bool negative_diagonal = false;

  std::size_t n() const noexcept { return p.size(); }
};

PivotedCholesky pcd_lowrank(const ColumnOracle& oracle, const StopRule& stop);
FullPivotedCholesky pcd_fullrank(const ColumnOracle& oracle,
                                 const StopRule& stop);

struct LogDetResult {
  double log_value = 0.0;
  std::size_t zero_count = 0;  // diagonal entries of L_n that vanished
};

// log det(L_n L_n^T) over the strictly positive diagonal entries.
LogDetResult logdet_approx(const FullPivotedCholesky& f);

// Consistent least-squares weights for M w = f restricted to the pivot rows:
// solves the k-by-k system on beta and leaves every other weight at zero.
std::vector<double> reduced_solve(const PivotedCholesky& f,
                                  std::span<const double> rhs);

}  // namespace pivotal

#endif  // PIVOTAL_PIVOTED_CHOLESKY_HPP
