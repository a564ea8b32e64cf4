//
// Project     : pivotal
// Module      : loweig
// Description : eigenpairs of a low-rank Gram product and expansion sampling
//

#ifndef PIVOTAL_LOW_RANK_EIGEN_HPP
#define PIVOTAL_LOW_RANK_EIGEN_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "pivotal/column_oracle.hpp"
#include "pivotal/cross_approx.hpp"
#include "pivotal/dense_matrix.hpp"

namespace pivotal {

// Eigenvalues descending and clamped at zero, eigenvectors as orthonormal
// columns. Each column is normalized so its largest-magnitude component is
// positive (first such component on exact ties).
struct EigenPairs {
  std::vector<double> values;
  DenseMatrix vectors;

  std::size_t count() const noexcept { return values.size(); }
};

// Eigenpairs of A A^T for a tall factor A (n-by-k, k <= n): thin Householder
// QR of A, then a Jacobi eigendecomposition of the k-by-k Gram core R R^T,
// mapped back through Q. Returns k pairs; the rest of the spectrum is zero.
EigenPairs lowrank_eigen(const DenseMatrix& A);

// Deterministic standard normal stream: mt19937_64 driving the cosine
// Box-Muller transform, one normal per two uniform draws.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  double next();

 private:
  std::mt19937_64 gen_;
};

// One realization sum_{a < kprime} xi_a sqrt(lambda_a) phi_a with independent
// standard normal xi drawn from the stream in mode order.
std::vector<double> kle_sample(const EigenPairs& modes, std::size_t kprime,
                               GaussianStream& xi);

// Factorization, spectral decomposition and sampling diagnostics in one shot.
struct KLEModes {
  EigenPairs modes;
  std::vector<std::size_t> beta;
  double epsilon = 0.0;
  std::size_t rank = 0;
  bool negative_diagonal = false;
};

KLEModes kle_modes(const ColumnOracle& covariance, const StopRule& stop);

// Convenience wrapper drawing nsamples realizations, one per row.
DenseMatrix kle_pipeline(const ColumnOracle& covariance, const StopRule& stop,
                         std::size_t kprime, std::uint64_t seed,
                         std::size_t nsamples);

}  // namespace pivotal

#endif  // PIVOTAL_LOW_RANK_EIGEN_HPP
