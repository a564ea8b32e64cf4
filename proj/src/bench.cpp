//
// Project     : pivotal
// Module      : benchharness
// Description : sweep and growth drivers, CSV and plot emitters
//

#include "pivotal/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <thread>

#include "pivotal/matrix_io.hpp"

namespace pivotal {

namespace {

struct Cell {
  BenchFunction function;
  FitMethod method;
  std::size_t n;
  double theta;
};

RBFModel fit_cell(FitMethod method, const PointSet& X,
                  const std::vector<double>& f, const GaussianRBF& kernel) {
  switch (method) {
    case FitMethod::Pcd: return rbf_fit_pcd(X, f, kernel);
    case FitMethod::Chol: return rbf_fit_chol(X, f, kernel);
    case FitMethod::Lu: return rbf_fit_lu(X, f, kernel);
  }
  throw ParameterError("unknown fit method");
}

BenchRow run_cell(const Cell& cell, const PointSet& X,
                  const std::vector<double>& f, const PointSet& test,
                  const std::vector<double>& truth) {
  BenchRow row;
  row.function = to_string(cell.function);
  row.method = to_string(cell.method);
  row.n = X.size();
  row.theta = cell.theta;
  try {
    const GaussianRBF kernel(cell.theta);
    const RBFModel model = fit_cell(cell.method, X, f, kernel);
    row.k = model.diag.k;
    row.fit_seconds = model.diag.fit_seconds;
    row.rmse = rmse(rbf_predict(model, test), truth);
  } catch (const SingularError&) {
    row.status = "failed(singular)";
    row.rmse = std::numeric_limits<double>::quiet_NaN();
  } catch (const FactorizationError&) {
    row.status = "failed(factorization)";
    row.rmse = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

void run_cells(const std::vector<Cell>& cells,
               const std::map<std::size_t, PointSet>& samples,
               const std::map<std::size_t, std::vector<double>>& values,
               const PointSet& test, const std::vector<double>& truth,
               std::vector<BenchRow>& rows) {
  rows.resize(cells.size());
  const std::size_t workers = std::min(thread_cap(), cells.size());
  if (workers <= 1) {
    for (std::size_t q = 0; q < cells.size(); ++q)
      rows[q] = run_cell(cells[q], samples.at(cells[q].n), values.at(cells[q].n),
                         test, truth);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t q = next.fetch_add(1);
      if (q >= cells.size()) return;
      rows[q] = run_cell(cells[q], samples.at(cells[q].n), values.at(cells[q].n),
                         test, truth);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

std::string to_string(BenchFunction f) {
  return f == BenchFunction::F1 ? "f1" : "f2";
}

BenchFunction bench_function_from_string(const std::string& s) {
  if (s == "f1") return BenchFunction::F1;
  if (s == "f2") return BenchFunction::F2;
  throw ParameterError("unknown test function '" + s + "'");
}

double bench_f1(double x) {
  const double a = 6.0 * x - 2.0;
  return a * a * std::sin(12.0 * x - 4.0);
}

double bench_f2(double x, double y) {
  const double a = 1.0 - x;
  const double b = y - x * x;
  return a * a + 100.0 * b * b;
}

std::vector<double> evaluate(BenchFunction f, const PointSet& points) {
  std::vector<double> out(points.size());
  if (f == BenchFunction::F1) {
    if (points.dim != 1) throw DimensionError("evaluate: f1 needs 1-d points");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = bench_f1(points.point(i)[0]);
  } else {
    if (points.dim != 2) throw DimensionError("evaluate: f2 needs 2-d points");
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto p = points.point(i);
      out[i] = bench_f2(p[0], p[1]);
    }
  }
  return out;
}

PointSet midpoint_points_1d(std::size_t n) {
  if (n == 0) throw ParameterError("midpoint_points_1d: n must be positive");
  PointSet out;
  out.dim = 1;
  out.coords.resize(n);
  for (std::size_t i = 1; i <= n; ++i)
    out.coords[i - 1] = static_cast<double>(2 * i - 1) /
                        static_cast<double>(2 * n);
  return out;
}

PointSet midpoint_grid_2d(std::size_t n) {
  if (n == 0) throw ParameterError("midpoint_grid_2d: n must be positive");
  const auto m = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(n))));
  PointSet out;
  out.dim = 2;
  out.coords.reserve(2 * m * m);
  for (std::size_t ix = 1; ix <= m; ++ix) {
    const double x =
        static_cast<double>(2 * ix - 1) / static_cast<double>(m) - 1.0;
    for (std::size_t iy = 1; iy <= m; ++iy) {
      const double y =
          static_cast<double>(2 * iy - 1) / static_cast<double>(m) - 1.0;
      out.coords.push_back(x);
      out.coords.push_back(y);
    }
  }
  return out;
}

PointSet eval_points_1d(std::size_t count) {
  if (count < 2) throw ParameterError("eval_points_1d: need at least 2 points");
  PointSet out;
  out.dim = 1;
  out.coords.resize(count);
  for (std::size_t q = 0; q < count; ++q)
    out.coords[q] = static_cast<double>(q) / static_cast<double>(count - 1);
  return out;
}

PointSet eval_grid_2d(std::size_t per_axis) {
  if (per_axis < 2) throw ParameterError("eval_grid_2d: need at least 2 per axis");
  PointSet out;
  out.dim = 2;
  out.coords.reserve(2 * per_axis * per_axis);
  for (std::size_t qx = 0; qx < per_axis; ++qx) {
    const double x =
        -1.0 + 2.0 * static_cast<double>(qx) / static_cast<double>(per_axis - 1);
    for (std::size_t qy = 0; qy < per_axis; ++qy) {
      const double y = -1.0 + 2.0 * static_cast<double>(qy) /
                                  static_cast<double>(per_axis - 1);
      out.coords.push_back(x);
      out.coords.push_back(y);
    }
  }
  return out;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo))
    throw ParameterError("log_spaced: need 0 < lo <= hi");
  if (count == 0) throw ParameterError("log_spaced: count must be positive");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t q = 0; q < count; ++q)
    out[q] = std::exp(llo + (lhi - llo) * static_cast<double>(q) /
                                static_cast<double>(count - 1));
  out[0] = lo;
  out[count - 1] = hi;
  return out;
}

std::vector<BenchRow> theta_sweep(const SweepConfig& config) {
  if (config.n_values.empty() || config.methods.empty())
    throw ParameterError("theta_sweep: nothing to run");
  const std::vector<double> thetas =
      log_spaced(config.theta_min, config.theta_max, config.theta_count);

  const bool one_d = config.function == BenchFunction::F1;
  std::map<std::size_t, PointSet> samples;
  std::map<std::size_t, std::vector<double>> values;
  for (std::size_t n : config.n_values) {
    PointSet X = one_d ? midpoint_points_1d(n) : midpoint_grid_2d(n);
    values[n] = evaluate(config.function, X);
    samples[n] = std::move(X);
  }
  const PointSet test =
      one_d ? eval_points_1d(config.test_points)
            : eval_grid_2d(static_cast<std::size_t>(std::lround(
                  std::sqrt(static_cast<double>(config.test_points)))));
  const std::vector<double> truth = evaluate(config.function, test);

  std::vector<Cell> cells;
  for (std::size_t n : config.n_values)
    for (double theta : thetas)
      for (FitMethod method : config.methods)
        cells.push_back({config.function, method, n, theta});

  std::vector<BenchRow> rows;
  run_cells(cells, samples, values, test, truth, rows);
  return rows;
}

std::vector<BenchRow> convergence_study(const ConvergeConfig& config) {
  if (config.n_values.empty() || config.methods.empty())
    throw ParameterError("convergence_study: nothing to run");
  if (config.reps == 0)
    throw ParameterError("convergence_study: reps must be positive");

  const bool one_d = config.function == BenchFunction::F1;
  const PointSet test =
      one_d ? eval_points_1d(config.test_points)
            : eval_grid_2d(static_cast<std::size_t>(std::lround(
                  std::sqrt(static_cast<double>(config.test_points)))));
  const std::vector<double> truth = evaluate(config.function, test);

  std::vector<BenchRow> rows;
  for (std::size_t n : config.n_values) {
    const PointSet X = one_d ? midpoint_points_1d(n) : midpoint_grid_2d(n);
    const std::vector<double> f = evaluate(config.function, X);
    for (FitMethod method : config.methods) {
      const Cell cell{config.function, method, n, config.theta};
      std::vector<double> times;
      BenchRow row;
      for (std::size_t rep = 0; rep < config.reps; ++rep) {
        row = run_cell(cell, X, f, test, truth);
        if (row.status != "ok") break;
        times.push_back(row.fit_seconds);
      }
      if (!times.empty()) {
        std::sort(times.begin(), times.end());
        row.fit_seconds = times[times.size() / 2];
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows,
                     const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ParseError(path.string() + ": cannot open file");
  os << "function,method,n,theta,k,rmse,fit_seconds,status\n";
  for (const BenchRow& r : rows) {
    os << r.function << ',' << r.method << ',' << r.n << ','
       << format_full(r.theta) << ',' << r.k << ',' << format_full(r.rmse)
       << ',' << format_full(r.fit_seconds) << ',' << r.status << '\n';
  }
  if (!os) throw ParseError(path.string() + ": write failed");
}

void write_plot_script(const std::vector<BenchRow>& rows,
                       const std::filesystem::path& script_path) {
  std::map<std::string, std::vector<const BenchRow*>> groups;
  for (const BenchRow& r : rows)
    groups[r.function + "_" + r.method + "_n" + std::to_string(r.n)].push_back(
        &r);

  const std::filesystem::path dir = script_path.parent_path();
  const std::string stem = script_path.stem().string();

  std::ofstream os(script_path, std::ios::trunc);
  if (!os) throw ParseError(script_path.string() + ": cannot open file");
  os << "# columns: theta rmse k n fit_seconds\n";
  os << "set logscale x\nset logscale y\n";
  os << "set xlabel 'theta'\nset ylabel 'rmse'\nset key outside\n";

  std::vector<std::string> plots;
  for (const auto& [name, group] : groups) {
    const std::string datname = stem + "_" + name + ".dat";
    std::ofstream data(dir / datname, std::ios::trunc);
    if (!data) throw ParseError((dir / datname).string() + ": cannot open file");
    data << "# theta rmse k n fit_seconds\n";
    for (const BenchRow* r : group)
      data << format_full(r->theta) << ' ' << format_full(r->rmse) << ' '
           << r->k << ' ' << r->n << ' ' << format_full(r->fit_seconds)
           << '\n';
    plots.push_back("'" + datname + "' using 1:2 with lines title '" + name +
                    "'");
  }
  os << "plot ";
  for (std::size_t q = 0; q < plots.size(); ++q)
    os << (q ? ", \\\n     " : "") << plots[q];
  os << '\n';
  if (!os) throw ParseError(script_path.string() + ": write failed");
}

std::size_t thread_cap() {
  const char* env = std::getenv("PIVOTAL_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || v == 0) return 1;
  return static_cast<std::size_t>(v);
}

}  // namespace pivotal
