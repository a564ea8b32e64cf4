//
// Project     : pivotal
// Module      : cli
// Description : command-line front end for factorization, fitting, sampling
//

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pivotal/bench.hpp"
#include "pivotal/cross_approx.hpp"
#include "pivotal/dense_matrix.hpp"
#include "pivotal/kernels.hpp"
#include "pivotal/low_rank_eigen.hpp"
#include "pivotal/matrix_io.hpp"
#include "pivotal/pivoted_cholesky.hpp"
#include "pivotal/rbf_model.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace pivotal;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const std::string& tok : split_list(s)) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end)
      throw ParameterError(std::string(what) + ": expected number, got '" +
                           tok + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s, const char* what) {
  std::vector<std::size_t> out;
  for (const std::string& tok : split_list(s)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end || tok.find('-') != std::string::npos)
      throw ParameterError(std::string(what) + ": expected count, got '" +
                           tok + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// Shared stop-rule flags. Without --rank or --tol the factorizations use the
// adaptive stop with the rank-proportional roundoff threshold.
struct StopFlags {
  std::size_t rank = 0;
  double tol = 0.0;
  CLI::Option* rank_opt = nullptr;
  CLI::Option* tol_opt = nullptr;

  void attach(CLI::App* cmd) {
    rank_opt = cmd->add_option("--rank", rank, "Fixed factorization rank");
    tol_opt = cmd->add_option(
        "--tol", tol, "Adaptive stop threshold on the pivot magnitude");
    rank_opt->excludes(tol_opt);
    tol_opt->excludes(rank_opt);
  }

  StopRule rule() const {
    if (rank_opt && rank_opt->count()) return StopRule::fixed_rank(rank);
    if (tol_opt && tol_opt->count()) return StopRule::adaptive(tol);
    return StopRule::adaptive_dynamic();
  }

  json describe() const {
    json j;
    if (rank_opt && rank_opt->count()) {
      j["mode"] = "fixed-rank";
      j["rank"] = rank;
    } else if (tol_opt && tol_opt->count()) {
      j["mode"] = "adaptive";
      j["tol"] = tol;
    } else {
      j["mode"] = "adaptive-dynamic";
    }
    return j;
  }
};

MatrixFileFormat parse_format(const std::string& s) {
  if (s == "csv") return MatrixFileFormat::Csv;
  if (s == "bin") return MatrixFileFormat::Binary;
  throw ParameterError("--format must be csv or bin");
}

std::string matrix_ext(MatrixFileFormat f) {
  return f == MatrixFileFormat::Binary ? ".pcdm" : ".csv";
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ParseError(path.string() + ": cannot open file");
  os << j.dump(2) << '\n';
  if (!os) throw ParseError(path.string() + ": write failed");
}

double wall_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

PointSet load_points(const fs::path& path, bool with_sigma) {
  const DenseMatrix A = read_matrix(path);
  if (A.rows() == 0 || A.cols() == 0)
    throw ParameterError(path.string() + ": empty point set");
  if (with_sigma && A.cols() < 2)
    throw ParameterError(path.string() +
                         ": need coordinates plus a sigma column");
  PointSet out;
  out.dim = A.cols() - (with_sigma ? 1 : 0);
  out.coords.resize(A.rows() * out.dim);
  if (with_sigma) out.sigma.resize(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t p = 0; p < out.dim; ++p)
      out.coords[i * out.dim + p] = A(i, p);
    if (with_sigma) {
      if (A(i, out.dim) < 0.0)
        throw ParameterError(path.string() + ": negative sigma in row " +
                             std::to_string(i + 1));
      out.sigma[i] = A(i, out.dim);
    }
  }
  return out;
}

// ---- subcommand payloads ----------------------------------------------

struct CaArgs {
  std::string input, out, format = "csv";
  StopFlags stop;
};

int run_ca(const CaArgs& a) {
  const DenseMatrix M = read_matrix(a.input);
  const auto t0 = std::chrono::steady_clock::now();
  const CAResult r = fully_pivoted_ca(M, a.stop.rule());
  const double secs = wall_seconds(t0);

  const MatrixFileFormat fmt = parse_format(a.format);
  fs::create_directories(a.out);
  const fs::path dir(a.out);
  write_matrix(r.A, dir / ("A" + matrix_ext(fmt)), fmt);
  write_matrix(r.B, dir / ("B" + matrix_ext(fmt)), fmt);

  json meta;
  meta["input"] = a.input;
  meta["n_rows"] = M.rows();
  meta["n_cols"] = M.cols();
  meta["k"] = r.rank();
  meta["epsilon"] = r.epsilon;
  meta["row_pivots"] = r.row_pivots;
  meta["col_pivots"] = r.col_pivots;
  meta["gammas"] = r.gammas;
  meta["stop"] = a.stop.describe();
  meta["seconds"] = secs;
  write_json(meta, dir / "meta.json");

  std::cout << "k " << r.rank() << "\nepsilon " << format_full(r.epsilon)
            << '\n';
  return 0;
}

struct PcdArgs {
  std::string input, out, mode = "lowrank", format = "csv";
  StopFlags stop;
};

int run_pcd(const PcdArgs& a) {
  if (a.mode != "lowrank" && a.mode != "fullrank")
    throw ParameterError("--mode must be lowrank or fullrank");
  const DenseMatrix M = read_matrix(a.input);
  const DenseColumnOracle oracle{M};

  const MatrixFileFormat fmt = parse_format(a.format);
  fs::create_directories(a.out);
  const fs::path dir(a.out);

  json meta;
  meta["input"] = a.input;
  meta["n"] = M.rows();
  meta["mode"] = a.mode;
  meta["stop"] = a.stop.describe();

  const auto t0 = std::chrono::steady_clock::now();
  if (a.mode == "lowrank") {
    const PivotedCholesky f = pcd_lowrank(oracle, a.stop.rule());
    meta["seconds"] = wall_seconds(t0);
    write_matrix(f.L, dir / ("L" + matrix_ext(fmt)), fmt);
    write_matrix(f.L_star, dir / ("L_star" + matrix_ext(fmt)), fmt);
    write_permutation(f.p, dir / "perm.txt");
    meta["k"] = f.k();
    meta["epsilon"] = f.epsilon;
    meta["pivots"] = f.beta;
    meta["gammas"] = f.gammas;
    meta["negative_diagonal"] = f.negative_diagonal;
    std::cout << "k " << f.k() << "\nepsilon " << format_full(f.epsilon)
              << '\n';
  } else {
    const FullPivotedCholesky f = pcd_fullrank(oracle, a.stop.rule());
    meta["seconds"] = wall_seconds(t0);
    write_matrix(f.L_n, dir / ("L_n" + matrix_ext(fmt)), fmt);
    write_permutation(f.p, dir / "perm.txt");
    meta["k"] = f.rank_used;
    meta["epsilon"] = f.epsilon;
    meta["gammas"] = f.gammas;
    meta["negative_diagonal"] = f.negative_diagonal;
    std::cout << "k " << f.rank_used << "\nepsilon "
              << format_full(f.epsilon) << '\n';
  }
  write_json(meta, dir / "meta.json");
  return 0;
}

struct LogdetArgs {
  std::string input;
  StopFlags stop;
};

int run_logdet(const LogdetArgs& a) {
  const DenseMatrix M = read_matrix(a.input);
  const DenseColumnOracle oracle{M};
  const FullPivotedCholesky f = pcd_fullrank(oracle, a.stop.rule());
  const LogDetResult r = logdet_approx(f);
  std::cout << "logdet " << format_full(r.log_value) << "\nzero_count "
            << r.zero_count << '\n';
  return 0;
}

struct RbfFitArgs {
  std::string points, values, theta, method = "pcd", out;
  double lambda = -1.0;
  StopFlags stop;
};

int run_rbf_fit(const RbfFitArgs& a) {
  const PointSet X = load_points(a.points, false);
  const std::vector<double> f = read_vector(a.values);
  const GaussianRBF kernel(parse_doubles(a.theta, "--theta"));

  RBFModel model;
  switch (fit_method_from_string(a.method)) {
    case FitMethod::Pcd:
      model = rbf_fit_pcd(X, f, kernel, a.stop.rule());
      break;
    case FitMethod::Chol:
      model = rbf_fit_chol(X, f, kernel, a.lambda);
      break;
    case FitMethod::Lu:
      model = rbf_fit_lu(X, f, kernel);
      break;
  }
  save_model(model, a.out);
  std::cout << "k " << model.diag.k << "\nepsilon "
            << format_full(model.diag.epsilon) << "\nfit_seconds "
            << format_full(model.diag.fit_seconds) << '\n';
  return 0;
}

struct RbfPredictArgs {
  std::string model, points, out, format = "csv";
};

int run_rbf_predict(const RbfPredictArgs& a) {
  const RBFModel model = load_model(a.model);
  const PointSet query = load_points(a.points, false);
  const std::vector<double> yhat = rbf_predict(model, query);
  write_vector(yhat, a.out, parse_format(a.format));
  std::cout << "predicted " << yhat.size() << '\n';
  return 0;
}

struct EigenArgs {
  std::string input, out, format = "csv";
  StopFlags stop;
};

int run_eigen(const EigenArgs& a) {
  const DenseMatrix M = read_matrix(a.input);
  const DenseColumnOracle oracle{M};
  const auto t0 = std::chrono::steady_clock::now();
  const KLEModes km = kle_modes(oracle, a.stop.rule());
  const double secs = wall_seconds(t0);

  const MatrixFileFormat fmt = parse_format(a.format);
  fs::create_directories(a.out);
  const fs::path dir(a.out);
  write_vector(km.modes.values, dir / "values.csv", MatrixFileFormat::Csv);
  write_matrix(km.modes.vectors, dir / ("vectors" + matrix_ext(fmt)), fmt);

  json meta;
  meta["input"] = a.input;
  meta["n"] = M.rows();
  meta["k"] = km.rank;
  meta["epsilon"] = km.epsilon;
  meta["pivots"] = km.beta;
  meta["negative_diagonal"] = km.negative_diagonal;
  meta["stop"] = a.stop.describe();
  meta["seconds"] = secs;
  write_json(meta, dir / "meta.json");

  std::cout << "k " << km.rank << "\nepsilon " << format_full(km.epsilon)
            << '\n';
  return 0;
}

struct KleArgs {
  std::string points, theta, out;
  std::size_t synth_n = 0;
  std::uint64_t synth_seed = 0;
  std::size_t kprime = 0;
  std::size_t samples = 1;
  std::uint64_t seed = 0;
  StopFlags stop;
};

int run_kle_sample(const KleArgs& a) {
  if (a.points.empty() == (a.synth_n == 0))
    throw ParameterError("give exactly one of --points or --synth");
  const PointSet X = a.synth_n ? synth_surface(a.synth_n, a.synth_seed)
                               : load_points(a.points, true);
  const std::vector<double> theta = parse_doubles(a.theta, "--theta");
  if (theta.size() != 3)
    throw ParameterError("--theta needs exactly 3 correlation lengths");
  const CovarianceOracle cov(CovarianceModel(theta[0], theta[1], theta[2]), X);

  const auto t0 = std::chrono::steady_clock::now();
  const KLEModes km = kle_modes(cov, a.stop.rule());
  if (a.kprime > km.modes.count())
    throw ParameterError("--kprime exceeds the factorization rank " +
                         std::to_string(km.modes.count()));
  const std::size_t kprime = a.kprime ? a.kprime : km.modes.count();

  std::ofstream os(a.out, std::ios::trunc);
  if (!os) throw ParseError(a.out + ": cannot open file");
  os << "# seed=" << a.seed << " kprime=" << kprime << " n=" << X.size()
     << '\n';
  GaussianStream xi(a.seed);
  for (std::size_t s = 0; s < a.samples; ++s) {
    const std::vector<double> r = kle_sample(km.modes, kprime, xi);
    for (std::size_t i = 0; i < r.size(); ++i)
      os << (i ? "," : "") << format_full(r[i]);
    os << '\n';
  }
  if (!os) throw ParseError(a.out + ": write failed");
  os.close();

  json meta;
  meta["n"] = X.size();
  meta["k"] = km.rank;
  meta["kprime"] = kprime;
  meta["samples"] = a.samples;
  meta["seed"] = a.seed;
  meta["epsilon"] = km.epsilon;
  meta["pivots"] = km.beta;
  meta["negative_diagonal"] = km.negative_diagonal;
  meta["stop"] = a.stop.describe();
  meta["seconds"] = wall_seconds(t0);
  write_json(meta, fs::path(a.out + ".meta.json"));

  std::cout << "samples " << a.samples << "\nk " << km.rank << "\nepsilon "
            << format_full(km.epsilon) << '\n';
  return 0;
}

struct BenchSweepArgs {
  std::string function = "f1", n = "50,100", methods = "pcd,chol,lu", out;
  std::string plot;
  double theta_min = 0.001, theta_max = 1.5;
  std::size_t theta_count = 200;
  std::size_t test_points = 10000;
};

std::vector<FitMethod> parse_methods(const std::string& s) {
  std::vector<FitMethod> out;
  for (const std::string& tok : split_list(s))
    out.push_back(fit_method_from_string(tok));
  return out;
}

int run_bench_sweep(const BenchSweepArgs& a) {
  SweepConfig cfg;
  cfg.function = bench_function_from_string(a.function);
  cfg.n_values = parse_sizes(a.n, "--n");
  cfg.theta_min = a.theta_min;
  cfg.theta_max = a.theta_max;
  cfg.theta_count = a.theta_count;
  cfg.methods = parse_methods(a.methods);
  cfg.test_points = a.test_points;
  const std::vector<BenchRow> rows = theta_sweep(cfg);
  write_bench_csv(rows, a.out);
  if (!a.plot.empty()) write_plot_script(rows, a.plot);
  std::cout << "rows " << rows.size() << '\n';
  return 0;
}

struct BenchConvergeArgs {
  std::string function = "f1", n = "200,400,800,1600", methods = "pcd,chol",
              out;
  std::string plot;
  double theta = 0.2;
  std::size_t reps = 3;
  std::size_t test_points = 10000;
};

int run_bench_converge(const BenchConvergeArgs& a) {
  ConvergeConfig cfg;
  cfg.function = bench_function_from_string(a.function);
  cfg.n_values = parse_sizes(a.n, "--n");
  cfg.theta = a.theta;
  cfg.methods = parse_methods(a.methods);
  cfg.reps = a.reps;
  cfg.test_points = a.test_points;
  const std::vector<BenchRow> rows = convergence_study(cfg);
  write_bench_csv(rows, a.out);
  if (!a.plot.empty()) write_plot_script(rows, a.plot);
  std::cout << "rows " << rows.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pivoted low-rank factorizations, RBF fitting and sampling"};
  app.require_subcommand(1);

  CaArgs ca;
  CLI::App* ca_cmd = app.add_subcommand(
      "ca", "Cross approximation of a dense matrix with full pivoting");
  ca_cmd->add_option("--input", ca.input, "Matrix file (auto-detected format)")
      ->required()
      ->check(CLI::ExistingFile);
  ca_cmd->add_option("--out", ca.out, "Output directory")->required();
  ca_cmd->add_option("--format", ca.format, "Matrix output format: csv|bin");
  ca.stop.attach(ca_cmd);

  PcdArgs pcd;
  CLI::App* pcd_cmd = app.add_subcommand(
      "pcd", "Pivoted Cholesky factorization of a symmetric matrix");
  pcd_cmd->add_option("--input", pcd.input, "Matrix file")->required()
      ->check(CLI::ExistingFile);
  pcd_cmd->add_option("--out", pcd.out, "Output directory")->required();
  pcd_cmd->add_option("--mode", pcd.mode, "lowrank|fullrank");
  pcd_cmd->add_option("--format", pcd.format, "Matrix output format: csv|bin");
  pcd.stop.attach(pcd_cmd);

  LogdetArgs logdet;
  CLI::App* logdet_cmd = app.add_subcommand(
      "logdet", "Log-determinant through the square pivoted factor");
  logdet_cmd->add_option("--input", logdet.input, "Matrix file")->required()
      ->check(CLI::ExistingFile);
  logdet.stop.attach(logdet_cmd);

  CLI::App* rbf_cmd = app.add_subcommand("rbf", "Gaussian RBF interpolation");
  rbf_cmd->require_subcommand(1);

  RbfFitArgs rfit;
  CLI::App* rfit_cmd =
      rbf_cmd->add_subcommand("fit", "Fit interpolation weights");
  rfit_cmd->add_option("--points", rfit.points, "Sample points CSV, one per row")
      ->required()
      ->check(CLI::ExistingFile);
  rfit_cmd->add_option("--values", rfit.values, "Sample values, one column")
      ->required()
      ->check(CLI::ExistingFile);
  rfit_cmd->add_option("--theta", rfit.theta, "Kernel widths, comma separated")
      ->required();
  rfit_cmd->add_option("--method", rfit.method, "pcd|chol|lu");
  rfit_cmd->add_option("--lambda", rfit.lambda,
                       "Ridge for the chol method (default: proportional)");
  rfit_cmd->add_option("--out", rfit.out, "Model JSON path")->required();
  rfit.stop.attach(rfit_cmd);

  RbfPredictArgs rpred;
  CLI::App* rpred_cmd =
      rbf_cmd->add_subcommand("predict", "Evaluate a fitted model");
  rpred_cmd->add_option("--model", rpred.model, "Model JSON path")->required()
      ->check(CLI::ExistingFile);
  rpred_cmd->add_option("--points", rpred.points, "Query points CSV")
      ->required()
      ->check(CLI::ExistingFile);
  rpred_cmd->add_option("--out", rpred.out, "Prediction output path")
      ->required();
  rpred_cmd->add_option("--format", rpred.format, "Output format: csv|bin");

  EigenArgs eig;
  CLI::App* eig_cmd = app.add_subcommand(
      "eigen", "Low-rank eigendecomposition of a symmetric matrix");
  eig_cmd->add_option("--input", eig.input, "Matrix file")->required()
      ->check(CLI::ExistingFile);
  eig_cmd->add_option("--out", eig.out, "Output directory")->required();
  eig_cmd->add_option("--format", eig.format, "Matrix output format: csv|bin");
  eig.stop.attach(eig_cmd);

  CLI::App* kle_cmd =
      app.add_subcommand("kle", "Karhunen-Loeve expansion sampling");
  kle_cmd->require_subcommand(1);

  KleArgs kle;
  CLI::App* ksample_cmd =
      kle_cmd->add_subcommand("sample", "Draw correlated field realizations");
  ksample_cmd->add_option("--points", kle.points,
                          "3-d points CSV with a trailing sigma column")
      ->check(CLI::ExistingFile);
  ksample_cmd->add_option("--synth", kle.synth_n,
                          "Generate the built-in surface with this many points");
  ksample_cmd->add_option("--synth-seed", kle.synth_seed,
                          "Seed for the built-in surface");
  ksample_cmd->add_option("--theta", kle.theta,
                          "Correlation lengths tx,ty,tz")
      ->required();
  ksample_cmd->add_option("--kprime", kle.kprime,
                          "Modes kept in the expansion (default: all)");
  ksample_cmd->add_option("--samples", kle.samples, "Number of realizations");
  ksample_cmd->add_option("--seed", kle.seed, "Sampling seed");
  ksample_cmd->add_option("--out", kle.out, "Samples CSV path")->required();
  kle.stop.attach(ksample_cmd);

  CLI::App* bench_cmd = app.add_subcommand("bench", "Fitting studies");
  bench_cmd->require_subcommand(1);

  BenchSweepArgs sweep;
  CLI::App* sweep_cmd =
      bench_cmd->add_subcommand("sweep", "RMSE over a kernel width grid");
  sweep_cmd->add_option("--function", sweep.function, "f1|f2");
  sweep_cmd->add_option("--n", sweep.n, "Sample counts, comma separated");
  sweep_cmd->add_option("--theta-min", sweep.theta_min, "Grid lower end");
  sweep_cmd->add_option("--theta-max", sweep.theta_max, "Grid upper end");
  sweep_cmd->add_option("--theta-count", sweep.theta_count, "Grid size");
  sweep_cmd->add_option("--methods", sweep.methods, "Subset of pcd,chol,lu");
  sweep_cmd->add_option("--test-points", sweep.test_points,
                        "Held-out evaluation points");
  sweep_cmd->add_option("--out", sweep.out, "Result CSV path")->required();
  sweep_cmd->add_option("--plot", sweep.plot, "Also emit a gnuplot script");

  BenchConvergeArgs conv;
  CLI::App* conv_cmd = bench_cmd->add_subcommand(
      "converge", "Rank and fit time versus sample count at fixed width");
  conv_cmd->add_option("--function", conv.function, "f1|f2");
  conv_cmd->add_option("--n", conv.n, "Sample counts, comma separated");
  conv_cmd->add_option("--theta", conv.theta, "Kernel width");
  conv_cmd->add_option("--methods", conv.methods, "Subset of pcd,chol,lu");
  conv_cmd->add_option("--reps", conv.reps, "Timing repetitions");
  conv_cmd->add_option("--test-points", conv.test_points,
                       "Held-out evaluation points");
  conv_cmd->add_option("--out", conv.out, "Result CSV path")->required();
  conv_cmd->add_option("--plot", conv.plot, "Also emit a gnuplot script");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 1;
  }

  try {
    if (ca_cmd->parsed()) return run_ca(ca);
    if (pcd_cmd->parsed()) return run_pcd(pcd);
    if (logdet_cmd->parsed()) return run_logdet(logdet);
    if (rbf_cmd->parsed() && rfit_cmd->parsed()) return run_rbf_fit(rfit);
    if (rbf_cmd->parsed() && rpred_cmd->parsed()) return run_rbf_predict(rpred);
    if (eig_cmd->parsed()) return run_eigen(eig);
    if (kle_cmd->parsed() && ksample_cmd->parsed()) return run_kle_sample(kle);
    if (bench_cmd->parsed() && sweep_cmd->parsed()) return run_bench_sweep(sweep);
    if (bench_cmd->parsed() && conv_cmd->parsed())
      return run_bench_converge(conv);
    std::cerr << "error: usage: no subcommand\n";
    return 1;
  } catch (const SingularError& e) {
    std::cerr << "error: singular: " << e.what() << '\n';
    return 2;
  } catch (const FactorizationError& e) {
    std::cerr << "error: factorization: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: parse: " << e.what() << '\n';
    return 1;
  } catch (const DimensionError& e) {
    std::cerr << "error: dimension: " << e.what() << '\n';
    return 1;
  } catch (const ParameterError& e) {
    std::cerr << "error: parameter: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 2;
  }
}
