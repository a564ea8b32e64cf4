//
// Project     : pivotal
// Module      : benchharness
// Description : RBF fitting studies over width grids and sample counts
//

#ifndef PIVOTAL_BENCH_HPP
#define PIVOTAL_BENCH_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "pivotal/kernels.hpp"
#include "pivotal/rbf_model.hpp"

namespace pivotal {

enum class BenchFunction { F1, F2 };

std::string to_string(BenchFunction f);
BenchFunction bench_function_from_string(const std::string& s);

// 1-d test function (6x-2)^2 sin(12x-4) on [0,1].
double bench_f1(double x);

// Rosenbrock (1-x)^2 + 100 (y-x^2)^2 on [-1,1]^2.
double bench_f2(double x, double y);

std::vector<double> evaluate(BenchFunction f, const PointSet& points);

// Cell midpoints (2i-1)/(2n), i = 1..n, on [0,1].
PointSet midpoint_points_1d(std::size_t n);

// Tensor grid of m = ceil(sqrt(n)) midpoints per axis on [-1,1]^2; the set
// holds m*m >= n points.
PointSet midpoint_grid_2d(std::size_t n);

// Equispaced evaluation grids, endpoints included.
PointSet eval_points_1d(std::size_t count);
PointSet eval_grid_2d(std::size_t per_axis);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

// One fitted cell. k is the working rank (n for the dense methods), rmse is
// NaN when the fit failed and status holds the failure class.
struct BenchRow {
  std::string function;
  std::string method;
  std::size_t n = 0;
  double theta = 0.0;
  std::size_t k = 0;
  double rmse = 0.0;
  double fit_seconds = 0.0;
  std::string status = "ok";
};

struct SweepConfig {
  BenchFunction function = BenchFunction::F1;
  std::vector<std::size_t> n_values = {50, 100};
  double theta_min = 0.001;
  double theta_max = 1.5;
  std::size_t theta_count = 200;
  std::vector<FitMethod> methods = {FitMethod::Pcd, FitMethod::Chol,
                                    FitMethod::Lu};
  std::size_t test_points = 10000;  // per axis squared in 2-d (100 x 100)
};

// Fits every (n, theta, method) cell and reports its held-out RMSE. Cells run
// concurrently when PIVOTAL_THREADS allows; results are ordered and
// reproducible either way.
std::vector<BenchRow> theta_sweep(const SweepConfig& config);

struct ConvergeConfig {
  BenchFunction function = BenchFunction::F1;
  std::vector<std::size_t> n_values = {200, 400, 800, 1600};
  double theta = 0.2;
  std::vector<FitMethod> methods = {FitMethod::Pcd, FitMethod::Chol};
  std::size_t test_points = 10000;
  std::size_t reps = 3;  // fit repetitions; the median wall time is recorded
};

// Growth study at a pinned width: rank and fit time versus sample count.
// Always runs cells sequentially so the timings are clean.
std::vector<BenchRow> convergence_study(const ConvergeConfig& config);

// CSV with header function,method,n,theta,k,rmse,fit_seconds,status.
void write_bench_csv(const std::vector<BenchRow>& rows,
                     const std::filesystem::path& path);

// Gnuplot script next to per-group .dat files (theta, rmse, k, n,
// fit_seconds), one group per function/method/n combination.
void write_plot_script(const std::vector<BenchRow>& rows,
                       const std::filesystem::path& script_path);

// Concurrency cap from PIVOTAL_THREADS; unset or unparsable means 1.
std::size_t thread_cap();

}  // namespace pivotal

#endif  // PIVOTAL_BENCH_HPP
