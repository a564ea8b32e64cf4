//
// Project     : pivotal
// Module      : rbfmodel
// Description : RBF interpolation fits, prediction, model files
//

#ifndef PIVOTAL_RBF_MODEL_HPP
#define PIVOTAL_RBF_MODEL_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pivotal/cross_approx.hpp"
#include "pivotal/kernels.hpp"

namespace pivotal {

enum class FitMethod { Pcd, Chol, Lu };

std::string to_string(FitMethod m);
FitMethod fit_method_from_string(const std::string& s);

// A fitted interpolant sum_i w_i k(x, x_i). The pivoted fit leaves most
// weights at exactly zero; beta lists the active centers in pivot order.
struct RBFModel {
  FitMethod method = FitMethod::Pcd;
  std::vector<double> theta;
  PointSet centers;
  std::vector<double> weights;
  std::vector<std::size_t> beta;

  struct Diagnostics {
    double epsilon = 0.0;      // remainder bound reported by the factorization
    double lambda = 0.0;       // ridge added by the dense Cholesky fit
    std::size_t k = 0;         // working rank
    double fit_seconds = 0.0;  // factor plus solve wall time
    bool negative_diagonal = false;
  } diag;

  GaussianRBF kernel() const { return GaussianRBF(theta); }
  std::size_t size() const noexcept { return centers.size(); }
};

// Interpolation weights through the pivoted Cholesky factorization and the
// reduced solve on the pivot set. Defaults to the adaptive stop with the
// rank-proportional roundoff threshold.
RBFModel rbf_fit_pcd(const PointSet& X, std::span<const double> f,
                     const GaussianRBF& kernel,
                     const StopRule& stop = StopRule::adaptive_dynamic());

// Dense symmetric fit with a proportional ridge lambda = n u mean|Phi| to
// keep the factorization alive near singularity. lambda_override >= 0 forces
// a specific ridge (0 disables it).
RBFModel rbf_fit_chol(const PointSet& X, std::span<const double> f,
                      const GaussianRBF& kernel, double lambda_override = -1.0);

// Dense unsymmetric baseline, no regularization.
RBFModel rbf_fit_lu(const PointSet& X, std::span<const double> f,
                    const GaussianRBF& kernel);

std::vector<double> rbf_predict(const RBFModel& model, const PointSet& query);

// Root mean square difference; the spans must have equal, nonzero length.
double rmse(std::span<const double> predicted, std::span<const double> truth);

// JSON model files: kernel widths, centers, weights, pivot set, diagnostics.
void save_model(const RBFModel& model, const std::filesystem::path& path);
RBFModel load_model(const std::filesystem::path& path);

}  // namespace pivotal

#endif  // PIVOTAL_RBF_MODEL_HPP
