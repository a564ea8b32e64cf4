//
// Project     : pivotal
// Module      : crossapprox
// Description : pivoted cross approximation, dense and lazy symmetric variants
//

#ifndef PIVOTAL_CROSS_APPROX_HPP
#define PIVOTAL_CROSS_APPROX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "pivotal/column_oracle.hpp"
#include "pivotal/dense_matrix.hpp"

namespace pivotal {

// Stopping policy shared by the factorizations. Fixed-rank mode runs an exact
// number of steps; adaptive mode stops once the pivot magnitude falls to a
// threshold, either a constant or a rank-proportional roundoff estimate
// rebuilt at every step from the entries fetched so far.
class StopRule {
 public:
  static StopRule fixed_rank(std::size_t k);
  static StopRule adaptive(double eps_tol);
  static StopRule adaptive_dynamic();

  bool fixed() const noexcept { return fixed_; }
  std::size_t rank() const noexcept { return k_; }
  bool dynamic() const noexcept { return dynamic_; }
  double tolerance() const noexcept { return eps_tol_; }

  // Threshold for the next step given the number of completed steps and the
  // running mean magnitude of all entries fetched so far.
  double threshold(std::size_t steps_done, double mean_abs_seen) const;

 private:
  bool fixed_ = false;
  bool dynamic_ = false;
  std::size_t k_ = 0;
  double eps_tol_ = 0.0;
};

// Rank-revealing decomposition M ~ A*B with the selected pivots and pivot
// values gamma in factorization order. The symmetric variant leaves B empty
// (the factorization is A*A^T) and mirrors the pivots into both index lists.
struct CAResult {
  DenseMatrix A;
  DenseMatrix B;
  std::vector<std::size_t> row_pivots;
  std::vector<std::size_t> col_pivots;
  std::vector<double> gammas;
  double epsilon = 0.0;
  // Set when the running diagonal dropped below the roundoff band that the
  // clamping rule tolerates; the factorization stops at that point.
  bool negative_diagonal = false;

  std::size_t rank() const noexcept { return gammas.size(); }
};

// Cross approximation of a dense rectangular matrix with full pivoting: each
// step subtracts the rank-1 cross through the largest remaining entry. Ties
// prefer diagonal entries, then the smallest row index, then the smallest
// column index. epsilon reports the largest entry left in the remainder.
CAResult fully_pivoted_ca(const DenseMatrix& M, const StopRule& stop);

// Symmetric positive semidefinite variant that only ever reads the pivot
// columns. Pivots on the running diagonal, so M ~ A*A^T with A lower
// triangular after row permutation by the pivot order. Small negative
// diagonal noise is clamped to zero; anything below that band stops the
// factorization and raises the diagnostic flag. epsilon reports the largest
// diagonal entry left in the remainder.
CAResult diag_pivoted_ca(const ColumnOracle& oracle, const StopRule& stop);

struct PivotLogDet {
  double value = 0.0;     // sum of log|gamma|; -inf when any gamma is zero
  bool has_zero = false;  // a zero pivot made the product vanish
};

// Log of |det| of the rank-k skeleton through the pivot values.
PivotLogDet pivot_logdet(std::span<const double> gammas);

namespace detail {

// Symmetric factorization core shared with the Cholesky wrappers; also hands
// back the residual diagonal left when the loop stopped.
struct DiagCA {
  CAResult result;
  std::vector<double> residual_diag;
};

DiagCA diag_ca(const ColumnOracle& oracle, const StopRule& stop);

}  // namespace detail

}  // namespace pivotal

#endif  // PIVOTAL_CROSS_APPROX_HPP
