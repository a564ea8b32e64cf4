//
// Project     : pivotal
// Module      : oracles
// Description : Eigen-backed references and the extended-precision residual
//

#include "oracle_refs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace pivotal::oracles {

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& M) {
  Eigen::MatrixXd out(M.rows(), M.cols());
  for (std::size_t j = 0; j < M.cols(); ++j)
    for (std::size_t i = 0; i < M.rows(); ++i)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = M(i, j);
  return out;
}

DenseMatrix from_eigen(const Eigen::MatrixXd& M) {
  DenseMatrix out(static_cast<std::size_t>(M.rows()),
                  static_cast<std::size_t>(M.cols()));
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = M(i, j);
  return out;
}

}  // namespace

OracleReport OracleReport::absolute(const std::string& quantity,
                                    double reference, double candidate,
                                    double tolerance) {
  OracleReport r;
  r.quantity = quantity;
  r.reference = reference;
  r.candidate = candidate;
  r.abs_dev = std::abs(reference - candidate);
  r.rel_dev = reference != 0.0 ? r.abs_dev / std::abs(reference) : 0.0;
  r.tolerance = tolerance;
  r.pass = r.abs_dev <= tolerance;
  return r;
}

OracleReport OracleReport::relative_to(const std::string& quantity,
                                       double reference, double candidate,
                                       double tolerance) {
  OracleReport r = absolute(quantity, reference, candidate, tolerance);
  r.relative = true;
  r.rel_dev = reference != 0.0 ? r.abs_dev / std::abs(reference) : r.abs_dev;
  r.pass = r.rel_dev <= tolerance;
  return r;
}

std::ostream& operator<<(std::ostream& os, const OracleReport& r) {
  os << "  [" << (r.pass ? "ok" : "FAIL") << "] " << r.quantity
     << ": reference=" << r.reference << " candidate=" << r.candidate
     << " abs_dev=" << r.abs_dev << " rel_dev=" << r.rel_dev
     << (r.relative ? " (relative tol " : " (absolute tol ") << r.tolerance
     << ")";
  return os;
}

DenseMatrix dense_cholesky(const DenseMatrix& M) {
  Eigen::LLT<Eigen::MatrixXd> llt(to_eigen(M));
  if (llt.info() != Eigen::Success)
    throw FactorizationError("dense_cholesky: matrix not positive definite");
  return from_eigen(llt.matrixL());
}

std::vector<double> lu_solve_ref(const DenseMatrix& M,
                                 std::span<const double> f) {
  if (f.size() != M.rows())
    throw DimensionError("lu_solve_ref: rhs length mismatch");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(to_eigen(M));
  Eigen::VectorXd b(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i)
    b(static_cast<Eigen::Index>(i)) = f[i];
  const Eigen::VectorXd x = lu.solve(b);
  return {x.data(), x.data() + x.size()};
}

double exact_logdet(const DenseMatrix& M, int* sign_out) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(to_eigen(M));
  const Eigen::MatrixXd& U = lu.matrixLU();
  double log_abs = 0.0;
  int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    const double d = U(i, i);
    if (d == 0.0) sign = 0;
    if (d < 0.0) sign = -sign;
    log_abs += std::log(std::abs(d));
  }
  if (sign_out) *sign_out = sign;
  return log_abs;
}

EigenPairs dense_symm_eigen(const DenseMatrix& M, bool vectors_wanted) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.compute(to_eigen(M), vectors_wanted ? Eigen::ComputeEigenvectors
                                         : Eigen::EigenvaluesOnly);
  const std::size_t n = M.rows();

  // Eigen reports ascending order; flip to descending to match the library.
  EigenPairs out;
  out.values.resize(n);
  for (std::size_t q = 0; q < n; ++q)
    out.values[q] = es.eigenvalues()(static_cast<Eigen::Index>(n - 1 - q));
  if (!vectors_wanted) return out;

  out.vectors = DenseMatrix(n, n);
  for (std::size_t q = 0; q < n; ++q) {
    const auto src = es.eigenvectors().col(static_cast<Eigen::Index>(n - 1 - q));
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::abs(src(static_cast<Eigen::Index>(i)));
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    const double flip = src(static_cast<Eigen::Index>(arg)) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i)
      out.vectors(i, q) = flip * src(static_cast<Eigen::Index>(i));
  }
  return out;
}

DenseMatrix skeleton_eval(const DenseMatrix& M,
                          const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& cols) {
  if (rows.size() != cols.size())
    throw DimensionError("skeleton_eval: pivot block must be square");
  const std::size_t k = rows.size();
  const Eigen::MatrixXd E = to_eigen(M);

  Eigen::MatrixXd colsM(E.rows(), k), rowsM(k, E.cols()), block(k, k);
  for (std::size_t q = 0; q < k; ++q) {
    colsM.col(static_cast<Eigen::Index>(q)) =
        E.col(static_cast<Eigen::Index>(cols[q]));
    rowsM.row(static_cast<Eigen::Index>(q)) =
        E.row(static_cast<Eigen::Index>(rows[q]));
    for (std::size_t r = 0; r < k; ++r)
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(q)) =
          E(static_cast<Eigen::Index>(rows[r]),
            static_cast<Eigen::Index>(cols[q]));
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
  if (!lu.isInvertible())
    throw SingularError("skeleton_eval: pivot block is singular", 0);
  return from_eigen(colsM * lu.solve(rowsM));
}

double nullspace_residual(const DenseMatrix& M, const PivotedCholesky& pcd) {
  const std::size_t n = pcd.n();
  const std::size_t k = pcd.k();
  if (M.rows() != n || M.cols() != n)
    throw DimensionError("nullspace_residual: matrix shape mismatch");
  if (k >= n) return 0.0;  // no complement block, nothing to annihilate
  const std::size_t m = n - k;

  using quad = __float128;
  const auto& p = pcd.p;

  // Permuted blocks in extended precision: pivot block and coupling strip.
  std::vector<quad> phi(k * k), strip(n * m);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i)
      phi[i + j * k] = static_cast<quad>(M(p[i], p[j]));
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t i = 0; i < n; ++i)
      strip[i + c * n] = static_cast<quad>(M(p[i], p[k + c]));

  const auto q_abs = [](quad v) { return v < 0 ? -v : v; };

  // Partially pivoted elimination of phi, applied to W = Z (top of strip).
  std::vector<std::size_t> rowmap(k);
  std::iota(rowmap.begin(), rowmap.end(), 0);
  std::vector<quad> W(k * m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t i = 0; i < k; ++i) W[i + c * k] = strip[i + c * n];

  for (std::size_t j = 0; j < k; ++j) {
    std::size_t ip = j;
    quad best = q_abs(phi[rowmap[j] + j * k]);
    for (std::size_t i = j + 1; i < k; ++i) {
      const quad v = q_abs(phi[rowmap[i] + j * k]);
      if (v > best) {
        best = v;
        ip = i;
      }
    }
    if (best == 0)
      throw SingularError("nullspace_residual: pivot block is singular", j);
    std::swap(rowmap[j], rowmap[ip]);
    const std::size_t rj = rowmap[j];
    const quad d = phi[rj + j * k];
    for (std::size_t i = j + 1; i < k; ++i) {
      const std::size_t ri = rowmap[i];
      const quad factor = phi[ri + j * k] / d;
      if (factor == 0) continue;
      for (std::size_t c = j + 1; c < k; ++c)
        phi[ri + c * k] -= factor * phi[rj + c * k];
      for (std::size_t c = 0; c < m; ++c)
        W[ri + c * k] -= factor * W[rj + c * k];
    }
  }
  // Back substitution row by row in elimination order.
  std::vector<quad> X(k * m);
  for (std::size_t jj = k; jj-- > 0;) {
    const std::size_t rj = rowmap[jj];
    for (std::size_t c = 0; c < m; ++c) {
      quad acc = W[rj + c * k];
      for (std::size_t q = jj + 1; q < k; ++q)
        acc -= phi[rj + q * k] * X[q + c * k];
      X[jj + c * k] = acc / phi[rj + jj * k];
    }
  }

  // Residual block M[p,p] N = [0; Y - Z^T X] evaluated directly.
  quad worst = 0;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      quad acc = strip[i + c * n];
      for (std::size_t q = 0; q < k; ++q) {
        const quad mq = static_cast<quad>(M(p[i], p[q]));
        acc -= mq * X[q + c * k];
      }
      const quad a = q_abs(acc);
      if (a > worst) worst = a;
    }
  }
  return static_cast<double>(worst);
}

}  // namespace pivotal::oracles
