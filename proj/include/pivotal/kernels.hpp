//
// Project     : pivotal
// Module      : kernels
// Description : Gaussian kernels, point sets, covariance models
//

#ifndef PIVOTAL_KERNELS_HPP
#define PIVOTAL_KERNELS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pivotal/column_oracle.hpp"
#include "pivotal/dense_matrix.hpp"

namespace pivotal {

// Points stored contiguously, point i at coords[i*dim .. i*dim+dim). sigma is
// empty unless the set carries per-point standard deviations.
struct PointSet {
  std::size_t dim = 0;
  std::vector<double> coords;
  std::vector<double> sigma;

  std::size_t size() const noexcept { return dim ? coords.size() / dim : 0; }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, dim};
  }
};

// exp(-sum_p ((x_p - c_p)/theta_p)^2) with componentwise widths; a single
// width is applied to every component.
class GaussianRBF {
 public:
  explicit GaussianRBF(double theta);
  explicit GaussianRBF(std::vector<double> theta);

  const std::vector<double>& theta() const noexcept { return theta_; }
  bool isotropic() const noexcept { return theta_.size() == 1; }

  double operator()(std::span<const double> x, std::span<const double> c) const;

 private:
  std::vector<double> theta_;
};

double rbf_eval(const GaussianRBF& kernel, std::span<const double> x,
                std::span<const double> c);

// Kernel collocation matrix Phi[i][j] = kernel(x_i, x_j), served lazily.
class KernelMatrixOracle final : public ColumnOracle {
 public:
  KernelMatrixOracle(GaussianRBF kernel, PointSet points);

  std::size_t dimension() const override { return points_.size(); }
  void column(std::size_t j, std::span<double> out) const override;
  std::vector<double> diagonal() const override;

  const PointSet& points() const noexcept { return points_; }
  const GaussianRBF& kernel() const noexcept { return kernel_; }

  DenseMatrix dense() const;

 private:
  GaussianRBF kernel_;
  PointSet points_;
};

// Squared-exponential covariance on 3-d points with separate correlation
// lengths per axis and per-point standard deviations:
// c_ij = sigma_i sigma_j exp(-((dx/tx)^2 + (dy/ty)^2 + (dz/tz)^2)).
struct CovarianceModel {
  double theta_x = 0.0, theta_y = 0.0, theta_z = 0.0;

  CovarianceModel(double tx, double ty, double tz);
};

class CovarianceOracle final : public ColumnOracle {
 public:
  // points must be 3-d and carry sigma values (>= 0, one per point).
  CovarianceOracle(CovarianceModel model, PointSet points);

  std::size_t dimension() const override { return points_.size(); }
  void column(std::size_t j, std::span<double> out) const override;
  std::vector<double> diagonal() const override;

  const PointSet& points() const noexcept { return points_; }
  const CovarianceModel& model() const noexcept { return model_; }

  DenseMatrix dense() const;

 private:
  CovarianceModel model_;
  PointSet points_;
};

// Reproducible scattered sample of a gently undulating sheet, 3-d points plus
// a smooth sigma field, for covariance and expansion studies:
//   u_i stratified in (0,1), v_i uniform,
//   x = 0.3 u, y = 0.3 v, z = 0.002 sin(pi u) cos(2 pi v),
//   sigma = 0.4 + 0.6 exp(-((u-0.35)^2 + (v-0.65)^2) / 0.08).
// The sheet extent is a fraction of the correlation lengths used in the
// studies, so covariance spectra decay well below roundoff within a few
// hundred modes even at n in the thousands.
PointSet synth_surface(std::size_t n, std::uint64_t seed);

// One point per line, comma separated coordinates; when with_sigma is set the
// last column is the per-point standard deviation.
void write_point_set(const PointSet& points, const std::filesystem::path& path);
PointSet read_point_set(const std::filesystem::path& path, std::size_t dim,
                        bool with_sigma);

}  // namespace pivotal

#endif  // PIVOTAL_KERNELS_HPP
