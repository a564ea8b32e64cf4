//
// Project     : pivotal
// Module      : loweig
// Description : Householder QR, Jacobi sweeps, Box-Muller sampling
//

#include "pivotal/low_rank_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace pivotal {

namespace {

// Thin QR: reflectors overwrite the strict lower part of W (scaled so the
// leading component is 1), R its upper triangle. tau holds the reflector
// weights; tau = 0 marks a vanished column.
void householder_qr(DenseMatrix& W, std::vector<double>& tau) {
  const std::size_t n = W.rows(), k = W.cols();
  tau.assign(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    auto cj = W.col(j);
    double norm2 = 0.0;
    for (std::size_t i = j; i < n; ++i) norm2 += cj[i] * cj[i];
    const double sigma = std::sqrt(norm2);
    if (sigma == 0.0) continue;

    const double alpha = cj[j];
    const double beta = alpha >= 0.0 ? -sigma : sigma;
    const double v0 = alpha - beta;  // no cancellation by the sign choice
    tau[j] = -v0 / beta;
    cj[j] = beta;
    for (std::size_t i = j + 1; i < n; ++i) cj[i] /= v0;

    for (std::size_t c = j + 1; c < k; ++c) {
      auto cc = W.col(c);
      double w = cc[j];
      for (std::size_t i = j + 1; i < n; ++i) w += cj[i] * cc[i];
      w *= tau[j];
      cc[j] -= w;
      for (std::size_t i = j + 1; i < n; ++i) cc[i] -= cj[i] * w;
    }
  }
}

DenseMatrix build_q(const DenseMatrix& W, const std::vector<double>& tau) {
  const std::size_t n = W.rows(), k = W.cols();
  DenseMatrix Q(n, k);
  for (std::size_t c = 0; c < k; ++c) Q(c, c) = 1.0;
  for (std::size_t jj = k; jj-- > 0;) {
    if (tau[jj] == 0.0) continue;
    const auto vj = W.col(jj);
    for (std::size_t c = 0; c < k; ++c) {
      auto qc = Q.col(c);
      double w = qc[jj];
      for (std::size_t i = jj + 1; i < n; ++i) w += vj[i] * qc[i];
      w *= tau[jj];
      qc[jj] -= w;
      for (std::size_t i = jj + 1; i < n; ++i) qc[i] -= vj[i] * w;
    }
  }
  return Q;
}

// Cyclic Jacobi with the usual small-rotation skip; S ends diagonal, V holds
// the accumulated rotations.
void jacobi_eigen(DenseMatrix& S, DenseMatrix& V) {
  const std::size_t k = S.rows();
  V = DenseMatrix::identity(k);
  constexpr int kMaxSweeps = 60;

  for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t j = 1; j < k; ++j)
      for (std::size_t i = 0; i < j; ++i) off += std::abs(S(i, j));
    if (off == 0.0) break;

    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const double g = 100.0 * std::abs(S(i, j));
        if (sweep > 4 && std::abs(S(i, i)) + g == std::abs(S(i, i)) &&
            std::abs(S(j, j)) + g == std::abs(S(j, j))) {
          S(i, j) = S(j, i) = 0.0;
          continue;
        }
        if (S(i, j) == 0.0) continue;

        const double h = S(j, j) - S(i, i);
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = S(i, j) / h;
        } else {
          const double theta = 0.5 * h / S(i, j);
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double delta = t * S(i, j);

        S(i, i) -= delta;
        S(j, j) += delta;
        S(i, j) = S(j, i) = 0.0;
        for (std::size_t q = 0; q < k; ++q) {
          if (q == i || q == j) continue;
          const double sqi = S(q, i), sqj = S(q, j);
          S(q, i) = sqi - s * (sqj + tau * sqi);
          S(q, j) = sqj + s * (sqi - tau * sqj);
          S(i, q) = S(q, i);
          S(j, q) = S(q, j);
        }
        for (std::size_t q = 0; q < k; ++q) {
          const double vqi = V(q, i), vqj = V(q, j);
          V(q, i) = vqi - s * (vqj + tau * vqi);
          V(q, j) = vqj + s * (vqi - tau * vqj);
        }
      }
    }
  }
}

void fix_signs(DenseMatrix& vectors) {
  for (std::size_t j = 0; j < vectors.cols(); ++j) {
    auto c = vectors.col(j);
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double v = std::abs(c[i]);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (c[arg] < 0.0)
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = -c[i];
  }
}

}  // namespace

EigenPairs lowrank_eigen(const DenseMatrix& A) {
  const std::size_t n = A.rows(), k = A.cols();
  if (k > n) throw DimensionError("lowrank_eigen: factor has more columns than rows");

  EigenPairs out;
  out.vectors = DenseMatrix(n, k);
  if (k == 0) return out;

  DenseMatrix W = A;
  std::vector<double> tau;
  householder_qr(W, tau);
  const DenseMatrix Q = build_q(W, tau);

  // Gram core S = R R^T of the k-by-k triangle.
  DenseMatrix R(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i <= j; ++i) R(i, j) = W(i, j);
  DenseMatrix S = matmul(R, R.transposed());

  DenseMatrix V;
  jacobi_eigen(S, V);

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return S(a, a) > S(b, b);
  });

  out.values.resize(k);
  DenseMatrix Vs(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    out.values[j] = std::max(S(order[j], order[j]), 0.0);
    for (std::size_t i = 0; i < k; ++i) Vs(i, j) = V(i, order[j]);
  }
  out.vectors = matmul(Q, Vs);
  fix_signs(out.vectors);
  return out;
}

double GaussianStream::next() {
  // Top 53 bits give uniforms that are identical across platforms.
  const double r1 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  const double u1 = 1.0 - r1;  // (0, 1], keeps the log finite
  const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> kle_sample(const EigenPairs& modes, std::size_t kprime,
                               GaussianStream& xi) {
  if (kprime > modes.count())
    throw ParameterError("kle_sample: more modes requested than available");
  const std::size_t n = modes.vectors.rows();
  std::vector<double> r(n, 0.0);
  for (std::size_t a = 0; a < kprime; ++a) {
    const double w = xi.next() * std::sqrt(modes.values[a]);
    const auto phi = modes.vectors.col(a);
    for (std::size_t i = 0; i < n; ++i) r[i] += w * phi[i];
  }
  return r;
}

KLEModes kle_modes(const ColumnOracle& covariance, const StopRule& stop) {
  const CAResult ca = diag_pivoted_ca(covariance, stop);
  KLEModes out;
  out.modes = lowrank_eigen(ca.A);
  out.beta = ca.row_pivots;
  out.epsilon = ca.epsilon;
  out.rank = ca.rank();
  out.negative_diagonal = ca.negative_diagonal;
  return out;
}

DenseMatrix kle_pipeline(const ColumnOracle& covariance, const StopRule& stop,
                         std::size_t kprime, std::uint64_t seed,
                         std::size_t nsamples) {
  const KLEModes km = kle_modes(covariance, stop);
  GaussianStream xi(seed);
  DenseMatrix samples(nsamples, covariance.dimension());
  for (std::size_t s = 0; s < nsamples; ++s) {
    const std::vector<double> r = kle_sample(km.modes, kprime, xi);
    for (std::size_t i = 0; i < r.size(); ++i) samples(s, i) = r[i];
  }
  return samples;
}

}  // namespace pivotal
