//
// Project     : pivotal
// Module      : matcore
// Description : dense matrix kernels and permutation checks
//

#include "pivotal/dense_matrix.hpp"

#include <cmath>
#include <cstdlib>

namespace pivotal {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.begin()->size();
  DenseMatrix A(m, n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n)
      throw DimensionError("from_rows: ragged row lengths");
    std::size_t j = 0;
    for (double v : row) A(i, j++) = v;
    ++i;
  }
  return A;
}

void DenseMatrix::resize_cols(std::size_t new_cols) {
  data_.resize(rows_ * new_cols, 0.0);
  cols_ = new_cols;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix T(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) T(j, i) = (*this)(i, j);
  return T;
}

PermutationIndex::PermutationIndex(std::vector<std::size_t> entries)
    : entries_(std::move(entries)) {
  const std::size_t n = entries_.size();
  std::vector<bool> seen(n, false);
  for (std::size_t v : entries_) {
    if (v >= n || seen[v])
      throw ParameterError("permutation entries are not a bijection");
    seen[v] = true;
  }
}

PermutationIndex PermutationIndex::identity(std::size_t n) {
  std::vector<std::size_t> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = i;
  return PermutationIndex(std::move(e));
}

PermutationIndex PermutationIndex::inverse() const {
  std::vector<std::size_t> inv(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) inv[entries_[i]] = i;
  return PermutationIndex(std::move(inv));
}

DenseMatrix apply_row_permutation(const DenseMatrix& A,
                                  const PermutationIndex& p) {
  if (p.size() != A.rows())
    throw DimensionError("apply_row_permutation: permutation length mismatch");
  DenseMatrix B(A.rows(), A.cols());
  for (std::size_t j = 0; j < A.cols(); ++j)
    for (std::size_t i = 0; i < A.rows(); ++i) B(i, j) = A(p[i], j);
  return B;
}

std::vector<double> solve_triangular(const DenseMatrix& T,
                                     std::span<const double> b,
                                     TriangularSide side) {
  const std::size_t n = T.rows();
  if (T.cols() != n) throw DimensionError("solve_triangular: matrix not square");
  if (b.size() != n) throw DimensionError("solve_triangular: rhs length mismatch");

  std::vector<double> x(b.begin(), b.end());
  if (side == TriangularSide::Lower) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = T(j, j);
      if (d == 0.0) throw SingularError("solve_triangular: zero diagonal", j);
      x[j] /= d;
      const double xj = x[j];
      for (std::size_t i = j + 1; i < n; ++i) x[i] -= T(i, j) * xj;
    }
  } else {
    for (std::size_t jj = n; jj-- > 0;) {
      const double d = T(jj, jj);
      if (d == 0.0) throw SingularError("solve_triangular: zero diagonal", jj);
      x[jj] /= d;
      const double xj = x[jj];
      for (std::size_t i = 0; i < jj; ++i) x[i] -= T(i, jj) * xj;
    }
  }
  return x;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.cols() != B.rows()) throw DimensionError("matmul: inner dimensions differ");
  DenseMatrix C(A.rows(), B.cols(), 0.0);
  for (std::size_t j = 0; j < B.cols(); ++j) {
    for (std::size_t q = 0; q < A.cols(); ++q) {
      const double b = B(q, j);
      if (b == 0.0) continue;
      const auto a = A.col(q);
      auto c = C.col(j);
      for (std::size_t i = 0; i < A.rows(); ++i) c[i] += a[i] * b;
    }
  }
  return C;
}

std::vector<double> matvec(const DenseMatrix& A, std::span<const double> x) {
  if (A.cols() != x.size()) throw DimensionError("matvec: length mismatch");
  std::vector<double> y(A.rows(), 0.0);
  for (std::size_t j = 0; j < A.cols(); ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    const auto a = A.col(j);
    for (std::size_t i = 0; i < A.rows(); ++i) y[i] += a[i] * xj;
  }
  return y;
}

double max_abs(const DenseMatrix& A) {
  double m = 0.0;
  for (double v : A.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t q = 0; q < A.data().size(); ++q)
    m = std::max(m, std::abs(A.data()[q] - B.data()[q]));
  return m;
}

}  // namespace pivotal
