//
// Project     : pivotal
// Module      : rbfmodel
// Description : fit drivers and JSON model round-trip
//

#include "pivotal/rbf_model.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "pivotal/dense_solve.hpp"
#include "pivotal/pivoted_cholesky.hpp"

namespace pivotal {

namespace {

using json = nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void check_fit_input(const PointSet& X, std::span<const double> f) {
  if (X.size() == 0) throw ParameterError("rbf fit: empty point set");
  if (f.size() != X.size())
    throw DimensionError("rbf fit: one value per point required");
}

RBFModel base_model(FitMethod method, const PointSet& X,
                    const GaussianRBF& kernel) {
  RBFModel m;
  m.method = method;
  m.theta = kernel.theta();
  m.centers = X;
  m.centers.sigma.clear();
  return m;
}

}  // namespace

std::string to_string(FitMethod m) {
  switch (m) {
    case FitMethod::Pcd: return "pcd";
    case FitMethod::Chol: return "chol";
    case FitMethod::Lu: return "lu";
  }
  return "pcd";
}

FitMethod fit_method_from_string(const std::string& s) {
  if (s == "pcd") return FitMethod::Pcd;
  if (s == "chol") return FitMethod::Chol;
  if (s == "lu") return FitMethod::Lu;
  throw ParameterError("unknown fit method '" + s + "'");
}

RBFModel rbf_fit_pcd(const PointSet& X, std::span<const double> f,
                     const GaussianRBF& kernel, const StopRule& stop) {
  check_fit_input(X, f);
  RBFModel m = base_model(FitMethod::Pcd, X, kernel);
  const auto t0 = std::chrono::steady_clock::now();
  KernelMatrixOracle oracle(kernel, X);
  const PivotedCholesky fac = pcd_lowrank(oracle, stop);
  m.weights = reduced_solve(fac, f);
  m.diag.fit_seconds = seconds_since(t0);
  m.beta = fac.beta;
  m.diag.epsilon = fac.epsilon;
  m.diag.k = fac.k();
  m.diag.negative_diagonal = fac.negative_diagonal;
  return m;
}

RBFModel rbf_fit_chol(const PointSet& X, std::span<const double> f,
                      const GaussianRBF& kernel, double lambda_override) {
  check_fit_input(X, f);
  RBFModel m = base_model(FitMethod::Chol, X, kernel);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = X.size();
  DenseMatrix Phi = KernelMatrixOracle(kernel, X).dense();

  double lambda = lambda_override;
  if (lambda < 0.0) {
    double sum_abs = 0.0;
    for (double v : Phi.data()) sum_abs += std::abs(v);
    const double mean_abs = sum_abs / static_cast<double>(n * n);
    lambda = static_cast<double>(n) *
             std::numeric_limits<double>::epsilon() * mean_abs;
  }
  for (std::size_t i = 0; i < n; ++i) Phi(i, i) += lambda;

  m.weights = cholesky_solve(std::move(Phi), f);
  m.diag.fit_seconds = seconds_since(t0);
  m.diag.lambda = lambda;
  m.diag.k = n;
  return m;
}

RBFModel rbf_fit_lu(const PointSet& X, std::span<const double> f,
                    const GaussianRBF& kernel) {
  check_fit_input(X, f);
  RBFModel m = base_model(FitMethod::Lu, X, kernel);
  const auto t0 = std::chrono::steady_clock::now();
  DenseMatrix Phi = KernelMatrixOracle(kernel, X).dense();
  m.weights = lu_solve(std::move(Phi), f);
  m.diag.fit_seconds = seconds_since(t0);
  m.diag.k = X.size();
  return m;
}

std::vector<double> rbf_predict(const RBFModel& model, const PointSet& query) {
  if (query.size() > 0 && query.dim != model.centers.dim)
    throw DimensionError("rbf_predict: query dimension mismatch");
  const GaussianRBF kernel = model.kernel();
  std::vector<double> out(query.size(), 0.0);
  for (std::size_t q = 0; q < query.size(); ++q) {
    const auto xq = query.point(q);
    double s = 0.0;
    for (std::size_t i = 0; i < model.centers.size(); ++i) {
      const double w = model.weights[i];
      if (w == 0.0) continue;
      s += w * kernel(xq, model.centers.point(i));
    }
    out[q] = s;
  }
  return out;
}

double rmse(std::span<const double> predicted, std::span<const double> truth) {
  if (predicted.size() != truth.size())
    throw DimensionError("rmse: lengths differ");
  if (predicted.empty()) throw ParameterError("rmse: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - truth[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(predicted.size()));
}

void save_model(const RBFModel& model, const std::filesystem::path& path) {
  json j;
  j["method"] = to_string(model.method);
  j["theta"] = model.theta;
  j["dim"] = model.centers.dim;
  json centers = json::array();
  for (std::size_t i = 0; i < model.centers.size(); ++i) {
    const auto p = model.centers.point(i);
    centers.push_back(std::vector<double>(p.begin(), p.end()));
  }
  j["centers"] = std::move(centers);
  j["weights"] = model.weights;
  j["beta"] = model.beta;
  j["diagnostics"] = {{"epsilon", model.diag.epsilon},
                      {"lambda", model.diag.lambda},
                      {"k", model.diag.k},
                      {"fit_seconds", model.diag.fit_seconds},
                      {"negative_diagonal", model.diag.negative_diagonal}};
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ParseError(path.string() + ": cannot open file");
  os << j.dump(2) << '\n';
  if (!os) throw ParseError(path.string() + ": write failed");
}

RBFModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError(path.string() + ": cannot open file");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }

  try {
    RBFModel m;
    m.method = fit_method_from_string(j.at("method").get<std::string>());
    m.theta = j.at("theta").get<std::vector<double>>();
    m.centers.dim = j.at("dim").get<std::size_t>();
    const auto& centers = j.at("centers");
    m.centers.coords.reserve(centers.size() * m.centers.dim);
    for (const auto& c : centers) {
      if (c.size() != m.centers.dim)
        throw ParseError(path.string() + ": center arity mismatch");
      for (const auto& v : c) m.centers.coords.push_back(v.get<double>());
    }
    m.weights = j.at("weights").get<std::vector<double>>();
    m.beta = j.at("beta").get<std::vector<std::size_t>>();
    if (m.weights.size() != m.centers.size())
      throw ParseError(path.string() + ": one weight per center required");
    const auto& d = j.at("diagnostics");
    m.diag.epsilon = d.at("epsilon").get<double>();
    m.diag.lambda = d.at("lambda").get<double>();
    m.diag.k = d.at("k").get<std::size_t>();
    m.diag.fit_seconds = d.at("fit_seconds").get<double>();
    m.diag.negative_diagonal = d.at("negative_diagonal").get<bool>();
    m.kernel();  // validates the widths
    return m;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace pivotal
