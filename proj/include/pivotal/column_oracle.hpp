//
// Project     : pivotal
// Module      : matcore
// Description : lazy column access to an implicit symmetric matrix
//

#ifndef PIVOTAL_COLUMN_ORACLE_HPP
#define PIVOTAL_COLUMN_ORACLE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "pivotal/dense_matrix.hpp"

namespace pivotal {

// Column access to an implicit n-by-n symmetric positive semidefinite matrix.
// column(j)[j] must equal diagonal()[j]; repeated calls must return identical
// values. Factorizations query columns only for the pivots they select.
class ColumnOracle {
 public:
  virtual ~ColumnOracle() = default;

  virtual std::size_t dimension() const = 0;

  // Writes column j into out. Requires out.size() == dimension().
  virtual void column(std::size_t j, std::span<double> out) const = 0;

  virtual std::vector<double> diagonal() const = 0;
};

// Adapter exposing an in-memory symmetric matrix column by column.
// Holds its own copy, so the source may go away.
class DenseColumnOracle final : public ColumnOracle {
 public:
  explicit DenseColumnOracle(DenseMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw DimensionError("DenseColumnOracle: matrix not square");
  }

  std::size_t dimension() const override { return m_.rows(); }

  void column(std::size_t j, std::span<double> out) const override {
    if (out.size() != m_.rows())
      throw DimensionError("DenseColumnOracle: output length mismatch");
    const auto c = m_.col(j);
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i];
  }

  std::vector<double> diagonal() const override {
    std::vector<double> d(m_.rows());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = m_(i, i);
    return d;
  }

  const DenseMatrix& matrix() const { return m_; }

 private:
  DenseMatrix m_;
};

}  // namespace pivotal

#endif  // PIVOTAL_COLUMN_ORACLE_HPP
