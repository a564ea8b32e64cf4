//
// Project     : pivotal
// Module      : matcore
// Description : column-major dense matrix, permutations, triangular solves
//

#ifndef PIVOTAL_DENSE_MATRIX_HPP
#define PIVOTAL_DENSE_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "pivotal/errors.hpp"

namespace pivotal {

// Dense real matrix, column-major storage. Entry (i,j) lives at data[i + j*rows].
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  // Row-wise construction, mostly for tests and small fixtures.
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i + j * rows_];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i + j * rows_];
  }

  std::span<const double> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }
  std::span<double> col(std::size_t j) {
    return {data_.data() + j * rows_, rows_};
  }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  // Shrinks or extends the column count in place; kept columns are unchanged,
  // new columns are zero. Cheap for column-major storage.
  void resize_cols(std::size_t new_cols);

  DenseMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// 0-based permutation of {0, ..., n-1}. The constructor verifies bijectivity.
class PermutationIndex {
 public:
  PermutationIndex() = default;
  explicit PermutationIndex(std::vector<std::size_t> entries);

  static PermutationIndex identity(std::size_t n);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<std::size_t>& entries() const noexcept { return entries_; }

  PermutationIndex inverse() const;

 private:
  std::vector<std::size_t> entries_;
};

// Returns B with B[i,:] = A[p[i],:]. Requires p.size() == A.rows().
DenseMatrix apply_row_permutation(const DenseMatrix& A,
                                  const PermutationIndex& p);

enum class TriangularSide { Lower, Upper };

// Solves T x = b reading only the stated triangle of T. A zero diagonal entry
// raises SingularError with its index.
std::vector<double> solve_triangular(const DenseMatrix& T,
                                     std::span<const double> b,
                                     TriangularSide side);

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
std::vector<double> matvec(const DenseMatrix& A, std::span<const double> x);

// Largest entry magnitude; 0 for empty matrices.
double max_abs(const DenseMatrix& A);

// Largest |A - B| entry. Shapes must match.
double max_abs_diff(const DenseMatrix& A, const DenseMatrix& B);

}  // namespace pivotal

#endif  // PIVOTAL_DENSE_MATRIX_HPP
