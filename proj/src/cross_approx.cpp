//
// Project     : pivotal
// Module      : crossapprox
// Description : cross approximation driver loops
//

#include "pivotal/cross_approx.hpp"

#include <cmath>
#include <limits>

namespace pivotal {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon();

}  // namespace

StopRule StopRule::fixed_rank(std::size_t k) {
  if (k == 0) throw ParameterError("StopRule: rank must be positive");
  StopRule r;
  r.fixed_ = true;
  r.k_ = k;
  return r;
}

StopRule StopRule::adaptive(double eps_tol) {
  if (!(eps_tol >= 0.0) || !std::isfinite(eps_tol))
    throw ParameterError("StopRule: tolerance must be finite and nonnegative");
  StopRule r;
  r.eps_tol_ = eps_tol;
  return r;
}

StopRule StopRule::adaptive_dynamic() {
  StopRule r;
  r.dynamic_ = true;
  return r;
}

double StopRule::threshold(std::size_t steps_done, double mean_abs_seen) const {
  if (!dynamic_) return eps_tol_;
  return static_cast<double>(steps_done) * kUnitRoundoff * mean_abs_seen;
}

CAResult fully_pivoted_ca(const DenseMatrix& M, const StopRule& stop) {
  const std::size_t m = M.rows();
  const std::size_t n = M.cols();
  const std::size_t max_rank = std::min(m, n);
  if (stop.fixed() && stop.rank() > max_rank)
    throw ParameterError("fully_pivoted_ca: rank exceeds matrix dimensions");

  CAResult out;
  out.A = DenseMatrix(m, 0);
  out.B = DenseMatrix(0, n);
  if (max_rank == 0) return out;

  DenseMatrix R = M;
  std::vector<std::vector<double>> a_cols, b_rows;
  double sum_abs_seen = 0.0;
  std::size_t count_seen = 0;

  for (std::size_t step = 0;; ++step) {
    // Global pivot search; diagonal wins ties, then lowest row, then column.
    std::size_t pi = 0, pj = 0;
    double pv = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto c = R.col(j);
      for (std::size_t i = 0; i < m; ++i) {
        const double v = std::abs(c[i]);
        if (v < pv) continue;
        if (v > pv) {
          pv = v;
          pi = i;
          pj = j;
          continue;
        }
        const bool diag = i == j, best_diag = pi == pj;
        if (diag != best_diag) {
          if (diag) {
            pi = i;
            pj = j;
          }
          continue;
        }
        if (i < pi || (i == pi && j < pj)) {
          pi = i;
          pj = j;
        }
      }
    }

    out.epsilon = pv;
    if (pv == 0.0) break;
    if (stop.fixed()) {
      if (step == stop.rank()) break;
    } else {
      const double mean = count_seen ? sum_abs_seen / count_seen : 0.0;
      if (pv <= stop.threshold(step, mean)) break;
      if (step == max_rank) break;
    }

    const double gamma = R(pi, pj);
    out.row_pivots.push_back(pi);
    out.col_pivots.push_back(pj);
    out.gammas.push_back(gamma);

    std::vector<double> a(m), b(n);
    for (std::size_t i = 0; i < m; ++i) a[i] = R(i, pj);
    for (std::size_t j = 0; j < n; ++j) b[j] = R(pi, j) / gamma;
    for (std::size_t i = 0; i < m; ++i) sum_abs_seen += std::abs(a[i]);
    for (std::size_t j = 0; j < n; ++j)
      if (j != pj) sum_abs_seen += std::abs(R(pi, j));
    count_seen += m + n - 1;

    for (std::size_t j = 0; j < n; ++j) {
      const double bj = b[j];
      auto c = R.col(j);
      for (std::size_t i = 0; i < m; ++i) c[i] -= a[i] * bj;
    }
    // The pivot cross is annihilated exactly.
    for (std::size_t j = 0; j < n; ++j) R(pi, j) = 0.0;
    for (std::size_t i = 0; i < m; ++i) R(i, pj) = 0.0;

    a_cols.push_back(std::move(a));
    b_rows.push_back(std::move(b));
  }

  const std::size_t k = a_cols.size();
  out.A = DenseMatrix(m, k);
  out.B = DenseMatrix(k, n);
  for (std::size_t q = 0; q < k; ++q) {
    for (std::size_t i = 0; i < m; ++i) out.A(i, q) = a_cols[q][i];
    for (std::size_t j = 0; j < n; ++j) out.B(q, j) = b_rows[q][j];
  }
  return out;
}

namespace detail {

DiagCA diag_ca(const ColumnOracle& oracle, const StopRule& stop) {
  const std::size_t n = oracle.dimension();
  if (stop.fixed() && stop.rank() > n)
    throw ParameterError("diag_pivoted_ca: rank exceeds matrix dimension");

  DiagCA out;
  out.result.A = DenseMatrix(n, 0);
  if (n == 0) return out;

  std::vector<double> d = oracle.diagonal();
  if (d.size() != n)
    throw DimensionError("diag_pivoted_ca: oracle diagonal length mismatch");

  double maxdiag0 = 0.0;
  for (double v : d) maxdiag0 = std::max(maxdiag0, v);
  const double clamp_band = 10.0 * kUnitRoundoff * maxdiag0;

  const std::size_t cap = stop.fixed() ? stop.rank() : n;
  DenseMatrix A(n, cap);
  std::vector<std::size_t> pivots;
  std::vector<double> colbuf(n);
  double sum_abs_seen = 0.0;
  std::size_t count_seen = 0;

  std::size_t step = 0;
  for (;; ++step) {
    // Roundoff-sized negative diagonal entries count as converged rows.
    bool below_band = false;
    for (double& v : d) {
      if (v < 0.0) {
        if (-v <= clamp_band)
          v = 0.0;
        else
          below_band = true;
      }
    }
    if (below_band) {
      out.result.negative_diagonal = true;
      break;
    }

    std::size_t piv = 0;
    double dmax = d[0];
    for (std::size_t i = 1; i < n; ++i) {
      if (d[i] > dmax) {
        dmax = d[i];
        piv = i;
      }
    }
    if (dmax <= 0.0) break;
    if (stop.fixed()) {
      if (step == stop.rank()) break;
    } else {
      const double mean = count_seen ? sum_abs_seen / count_seen : 0.0;
      if (dmax <= stop.threshold(step, mean)) break;
      if (step == n) break;
    }

    const double gamma = dmax;
    oracle.column(piv, colbuf);
    for (double v : colbuf) sum_abs_seen += std::abs(v);
    count_seen += n;

    // s = column - sum over prior steps of A[:,q] * A[piv,q], then scale.
    std::vector<double>& s = colbuf;
    for (std::size_t q = 0; q < step; ++q) {
      const double w = A(piv, q);
      if (w == 0.0) continue;
      const auto aq = A.col(q);
      for (std::size_t i = 0; i < n; ++i) s[i] -= w * aq[i];
    }
    const double root = std::sqrt(gamma);
    auto al = A.col(step);
    for (std::size_t i = 0; i < n; ++i) al[i] = s[i] / root;
    // Rows already eliminated are exact zeros; the pivot row is exactly root.
    for (std::size_t q : pivots) al[q] = 0.0;
    al[piv] = root;

    for (std::size_t i = 0; i < n; ++i) d[i] -= al[i] * al[i];
    d[piv] = 0.0;

    pivots.push_back(piv);
    out.result.gammas.push_back(gamma);
  }

  double dmax_left = 0.0;
  for (double v : d) dmax_left = std::max(dmax_left, v);
  out.result.epsilon = dmax_left;

  A.resize_cols(pivots.size());
  out.result.A = std::move(A);
  out.result.row_pivots = pivots;
  out.result.col_pivots = std::move(pivots);
  out.residual_diag = std::move(d);
  return out;
}

}  // namespace detail

CAResult diag_pivoted_ca(const ColumnOracle& oracle, const StopRule& stop) {
  return detail::diag_ca(oracle, stop).result;
}

PivotLogDet pivot_logdet(std::span<const double> gammas) {
  PivotLogDet out;
  for (double g : gammas) {
    if (g == 0.0) {
      out.has_zero = true;
      continue;
    }
    out.value += std::log(std::abs(g));
  }
  if (out.has_zero) out.value = -std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace pivotal
