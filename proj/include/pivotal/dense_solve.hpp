//
// Project     : pivotal
// Module      : rbfmodel
// Description : dense Cholesky and LU solvers for the baseline fits
//

#ifndef PIVOTAL_DENSE_SOLVE_HPP
#define PIVOTAL_DENSE_SOLVE_HPP

#include <span>
#include <vector>

#include "pivotal/dense_matrix.hpp"

namespace pivotal {

// In-place lower Cholesky factor of a symmetric positive definite matrix.
// Throws FactorizationError at the first nonpositive pivot.
void cholesky_factor(DenseMatrix& A);

std::vector<double> cholesky_solve(DenseMatrix A, std::span<const double> b);

// In-place LU with partial pivoting; piv records the row swap made at each
// step. Throws SingularError when a pivot column vanishes.
void lu_factor(DenseMatrix& A, std::vector<std::size_t>& piv);

std::vector<double> lu_solve(DenseMatrix A, std::span<const double> b);

}  // namespace pivotal

#endif  // PIVOTAL_DENSE_SOLVE_HPP
