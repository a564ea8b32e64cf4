//
// Project     : pivotal
// Module      : kernels
// Description : kernel evaluation, surface sampler, point set files
//

#include "pivotal/kernels.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pivotal/matrix_io.hpp"

namespace pivotal {

namespace {

void check_widths(const std::vector<double>& theta) {
  if (theta.empty()) throw ParameterError("kernel width list is empty");
  for (double t : theta)
    if (!(t > 0.0) || !std::isfinite(t))
      throw ParameterError("kernel widths must be positive and finite");
}

// Uniform in [0,1) from the top 53 bits; keeps streams identical across
// platforms, unlike the distribution adaptors.
double u01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

GaussianRBF::GaussianRBF(double theta) : theta_{theta} { check_widths(theta_); }

GaussianRBF::GaussianRBF(std::vector<double> theta) : theta_(std::move(theta)) {
  check_widths(theta_);
}

double GaussianRBF::operator()(std::span<const double> x,
                               std::span<const double> c) const {
  if (x.size() != c.size())
    throw DimensionError("GaussianRBF: point dimensions differ");
  if (theta_.size() != 1 && theta_.size() != x.size())
    throw DimensionError("GaussianRBF: width count does not match dimension");
  double s = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    const double r = (x[p] - c[p]) / (theta_.size() == 1 ? theta_[0] : theta_[p]);
    s += r * r;
  }
  return std::exp(-s);
}

double rbf_eval(const GaussianRBF& kernel, std::span<const double> x,
                std::span<const double> c) {
  return kernel(x, c);
}

KernelMatrixOracle::KernelMatrixOracle(GaussianRBF kernel, PointSet points)
    : kernel_(std::move(kernel)), points_(std::move(points)) {
  if (points_.size() > 0 && kernel_.theta().size() != 1 &&
      kernel_.theta().size() != points_.dim)
    throw DimensionError("KernelMatrixOracle: width count mismatch");
}

void KernelMatrixOracle::column(std::size_t j, std::span<double> out) const {
  const std::size_t n = points_.size();
  if (out.size() != n)
    throw DimensionError("KernelMatrixOracle: output length mismatch");
  const auto cj = points_.point(j);
  for (std::size_t i = 0; i < n; ++i) out[i] = kernel_(points_.point(i), cj);
}

std::vector<double> KernelMatrixOracle::diagonal() const {
  return std::vector<double>(points_.size(), 1.0);
}

DenseMatrix KernelMatrixOracle::dense() const {
  const std::size_t n = points_.size();
  DenseMatrix M(n, n);
  for (std::size_t j = 0; j < n; ++j) column(j, M.col(j));
  return M;
}

CovarianceModel::CovarianceModel(double tx, double ty, double tz)
    : theta_x(tx), theta_y(ty), theta_z(tz) {
  check_widths({tx, ty, tz});
}

CovarianceOracle::CovarianceOracle(CovarianceModel model, PointSet points)
    : model_(model), points_(std::move(points)) {
  if (points_.dim != 3)
    throw DimensionError("CovarianceOracle: points must be 3-d");
  if (points_.sigma.size() != points_.size())
    throw DimensionError("CovarianceOracle: one sigma per point required");
  for (double s : points_.sigma)
    if (!(s >= 0.0) || !std::isfinite(s))
      throw ParameterError("CovarianceOracle: sigmas must be nonnegative");
}

void CovarianceOracle::column(std::size_t j, std::span<double> out) const {
  const std::size_t n = points_.size();
  if (out.size() != n)
    throw DimensionError("CovarianceOracle: output length mismatch");
  const auto cj = points_.point(j);
  const double sj = points_.sigma[j];
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = points_.point(i);
    const double rx = (xi[0] - cj[0]) / model_.theta_x;
    const double ry = (xi[1] - cj[1]) / model_.theta_y;
    const double rz = (xi[2] - cj[2]) / model_.theta_z;
    out[i] = points_.sigma[i] * sj * std::exp(-(rx * rx + ry * ry + rz * rz));
  }
}

std::vector<double> CovarianceOracle::diagonal() const {
  std::vector<double> d(points_.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = points_.sigma[i] * points_.sigma[i];
  return d;
}

DenseMatrix CovarianceOracle::dense() const {
  const std::size_t n = points_.size();
  DenseMatrix M(n, n);
  for (std::size_t j = 0; j < n; ++j) column(j, M.col(j));
  return M;
}

PointSet synth_surface(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  PointSet out;
  out.dim = 3;
  out.coords.resize(3 * n);
  out.sigma.resize(n);
  constexpr double pi = std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    // Stratified u keeps the points distinct for every seed.
    const double u = (static_cast<double>(i) + u01(gen)) / static_cast<double>(n);
    const double v = u01(gen);
    out.coords[3 * i + 0] = 0.3 * u;
    out.coords[3 * i + 1] = 0.3 * v;
    out.coords[3 * i + 2] = 0.002 * std::sin(pi * u) * std::cos(2.0 * pi * v);
    const double du = u - 0.35, dv = v - 0.65;
    out.sigma[i] = 0.4 + 0.6 * std::exp(-(du * du + dv * dv) / 0.08);
  }
  return out;
}

void write_point_set(const PointSet& points, const std::filesystem::path& path) {
  const bool with_sigma = !points.sigma.empty();
  DenseMatrix A(points.size(), points.dim + (with_sigma ? 1 : 0));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t p = 0; p < points.dim; ++p) A(i, p) = points.point(i)[p];
    if (with_sigma) A(i, points.dim) = points.sigma[i];
  }
  write_matrix(A, path, MatrixFileFormat::Csv);
}

PointSet read_point_set(const std::filesystem::path& path, std::size_t dim,
                        bool with_sigma) {
  const DenseMatrix A = read_matrix(path, MatrixFileFormat::Csv);
  const std::size_t want = dim + (with_sigma ? 1 : 0);
  if (A.rows() > 0 && A.cols() != want)
    throw ParseError(path.string() + ": expected " + std::to_string(want) +
                     " columns, got " + std::to_string(A.cols()));
  PointSet out;
  out.dim = dim;
  out.coords.resize(A.rows() * dim);
  if (with_sigma) out.sigma.resize(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t p = 0; p < dim; ++p) out.coords[i * dim + p] = A(i, p);
    if (with_sigma) {
      if (A(i, dim) < 0.0)
        throw ParseError(path.string() + ": negative sigma in row " +
                         std::to_string(i + 1));
      out.sigma[i] = A(i, dim);
    }
  }
  return out;
}

}  // namespace pivotal
