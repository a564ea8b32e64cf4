#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

//
// Project     : pivotal
// Module      : tests
// Description : end-to-end checks of the command line driver via subprocess
//

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pivotal/cross_approx.hpp"
#include "pivotal/dense_matrix.hpp"
#include "pivotal/kernels.hpp"
#include "pivotal/matrix_io.hpp"
#include "pivotal/pivoted_cholesky.hpp"
#include "pivotal/rbf_model.hpp"

namespace {

namespace fs = std::filesystem;
using namespace pivotal;

fs::path work_root() {
  const fs::path dir = fs::temp_directory_path() / "pivotal_cli_tests";
  fs::create_directories(dir);
  return dir;
}

// Fresh per-case directory so reruns never see stale outputs.
fs::path case_dir(const std::string& name) {
  const fs::path dir = work_root() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct CliRun {
  int code = -1;
  std::string out, err;
};

CliRun run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = work_root();
  const fs::path so = dir / ("stdout_" + std::to_string(counter) + ".txt");
  const fs::path se = dir / ("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string("'") + PIVOTAL_CLI_PATH + "' " + args +
                          " > '" + so.string() + "' 2> '" + se.string() + "'";
  const int rc = std::system(cmd.c_str());
  CliRun r;
  if (rc != -1 && WIFEXITED(rc)) r.code = WEXITSTATUS(rc);
  r.out = slurp(so);
  r.err = slurp(se);
  return r;
}

// Remainder of the first stdout line starting with the given prefix.
std::string line_after(const std::string& text, const std::string& prefix) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  return {};
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

DenseMatrix make2x2(double a, double b, double c, double d) {
  DenseMatrix M(2, 2);
  M(0, 0) = a;
  M(0, 1) = b;
  M(1, 0) = c;
  M(1, 1) = d;
  return M;
}

void write_raw(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  os << text;
}

}  // namespace

TEST_CASE("help text and bare invocation") {
  const CliRun help = run_cli("--help");
  CHECK(help.code == 0);
  CHECK(contains(help.out, "RBF"));
  CHECK(contains(help.out, "pcd"));

  const CliRun bare = run_cli("");
  CHECK(bare.code == 1);
  CHECK(contains(bare.err, "error: usage:"));
}

TEST_CASE("cross approximation writes panels and metadata") {
  const fs::path dir = case_dir("ca");
  const fs::path input = dir / "m.csv";
  write_matrix(make2x2(4.0, 2.0, 2.0, 2.0), input, MatrixFileFormat::Csv);

  const fs::path out = dir / "fac";
  const CliRun r = run_cli("ca --input '" + input.string() + "' --out '" +
                           out.string() + "' --rank 2");
  REQUIRE(r.code == 0);
  CHECK(line_after(r.out, "k ") == "2");
  CHECK(line_after(r.out, "epsilon ") == "0");

  const DenseMatrix A = read_matrix(out / "A.csv");
  const DenseMatrix B = read_matrix(out / "B.csv");
  REQUIRE(A.rows() == 2);
  REQUIRE(A.cols() == 2);
  CHECK(A(0, 0) == 4.0);
  CHECK(A(1, 0) == 2.0);
  CHECK(A(0, 1) == 0.0);
  CHECK(A(1, 1) == 1.0);
  CHECK(B(0, 0) == 1.0);
  CHECK(B(0, 1) == 0.5);
  CHECK(B(1, 0) == 0.0);
  CHECK(B(1, 1) == 1.0);
  CHECK(max_abs_diff(matmul(A, B), make2x2(4.0, 2.0, 2.0, 2.0)) == 0.0);

  const std::string meta = slurp(out / "meta.json");
  CHECK(contains(meta, "\"k\": 2"));
  CHECK(contains(meta, "\"mode\": \"fixed-rank\""));

  // The binary format must round-trip the same factor bit for bit.
  const fs::path out2 = dir / "facbin";
  const CliRun r2 = run_cli("ca --input '" + input.string() + "' --out '" +
                            out2.string() + "' --rank 2 --format bin");
  REQUIRE(r2.code == 0);
  const DenseMatrix A2 = read_matrix(out2 / "A.pcdm");
  CHECK(max_abs_diff(A, A2) == 0.0);
}

TEST_CASE("pivoted factorization subcommand") {
  const fs::path dir = case_dir("pcd");
  const fs::path input = dir / "m.csv";
  write_matrix(make2x2(2.0, 2.0, 2.0, 4.0), input, MatrixFileFormat::Csv);

  const fs::path out = dir / "fac";
  const CliRun r =
      run_cli("pcd --input '" + input.string() + "' --out '" + out.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(line_after(r.out, "k ") == "2");

  const DenseMatrix L = read_matrix(out / "L.csv");
  const DenseMatrix Ls = read_matrix(out / "L_star.csv");
  CHECK(L(0, 0) == 2.0);
  CHECK(L(0, 1) == 0.0);
  CHECK(L(1, 0) == 1.0);
  CHECK(L(1, 1) == 1.0);
  CHECK(max_abs_diff(L, Ls) == 0.0);

  const PermutationIndex p = read_permutation(out / "perm.txt");
  REQUIRE(p.size() == 2);
  CHECK(p[0] == 1);
  CHECK(p[1] == 0);
  CHECK(contains(slurp(out / "meta.json"), "\"negative_diagonal\": false"));

  SUBCASE("square mode pads vanished directions with zeros") {
    const fs::path sing = dir / "sing.csv";
    write_matrix(make2x2(4.0, 0.0, 0.0, 0.0), sing, MatrixFileFormat::Csv);
    const fs::path out2 = dir / "full";
    const CliRun rf = run_cli("pcd --input '" + sing.string() + "' --out '" +
                              out2.string() + "' --mode fullrank");
    REQUIRE(rf.code == 0);
    CHECK(line_after(rf.out, "k ") == "1");
    const DenseMatrix Ln = read_matrix(out2 / "L_n.csv");
    CHECK(Ln(0, 0) == 2.0);
    CHECK(Ln(1, 1) == 0.0);
  }

  SUBCASE("stop rule flags exclude each other") {
    const CliRun bad = run_cli("pcd --input '" + input.string() + "' --out '" +
                               (dir / "x").string() + "' --rank 1 --tol 0.5");
    CHECK(bad.code == 1);
    CHECK(contains(bad.err, "error: usage:"));
  }

  SUBCASE("unknown mode is a parameter error") {
    const CliRun bad = run_cli("pcd --input '" + input.string() + "' --out '" +
                               (dir / "y").string() + "' --mode upper");
    CHECK(bad.code == 1);
    CHECK(contains(bad.err, "error: parameter:"));
  }
}

TEST_CASE("logdet subcommand matches the library path") {
  const fs::path dir = case_dir("logdet");
  const fs::path input = dir / "m.csv";
  const DenseMatrix M = make2x2(4.0, 0.0, 0.0, 1.0);
  write_matrix(M, input, MatrixFileFormat::Csv);

  const CliRun r = run_cli("logdet --input '" + input.string() + "'");
  REQUIRE(r.code == 0);
  const std::string val = line_after(r.out, "logdet ");
  REQUIRE(!val.empty());

  const DenseColumnOracle oracle{M};
  const LogDetResult want =
      logdet_approx(pcd_fullrank(oracle, StopRule::adaptive_dynamic()));
  CHECK(std::strtod(val.c_str(), nullptr) == want.log_value);
  CHECK(line_after(r.out, "zero_count ") == "0");

  SUBCASE("rank deficiency shows up in the zero count") {
    const fs::path sing = dir / "sing.csv";
    const DenseMatrix S = make2x2(4.0, 0.0, 0.0, 0.0);
    write_matrix(S, sing, MatrixFileFormat::Csv);
    const CliRun rs = run_cli("logdet --input '" + sing.string() + "'");
    REQUIRE(rs.code == 0);
    CHECK(line_after(rs.out, "zero_count ") == "1");
    const DenseColumnOracle so{S};
    const LogDetResult sw =
        logdet_approx(pcd_fullrank(so, StopRule::adaptive_dynamic()));
    CHECK(std::strtod(line_after(rs.out, "logdet ").c_str(), nullptr) ==
          sw.log_value);
  }
}

TEST_CASE("rbf fit and predict round-trip through a model file") {
  const fs::path dir = case_dir("rbf");
  const fs::path pts = dir / "points.csv";
  const fs::path vals = dir / "values.csv";

  DenseMatrix P(5, 1);
  std::vector<double> f(5);
  for (std::size_t i = 0; i < 5; ++i) {
    P(i, 0) = 0.5 * static_cast<double>(i);
    f[i] = std::sin(3.0 * P(i, 0)) + 0.25;
  }
  write_matrix(P, pts, MatrixFileFormat::Csv);
  write_vector(f, vals, MatrixFileFormat::Csv);

  const fs::path model_path = dir / "model.json";
  const CliRun fit = run_cli("rbf fit --points '" + pts.string() +
                             "' --values '" + vals.string() +
                             "' --theta 1.0 --method pcd --out '" +
                             model_path.string() + "'");
  REQUIRE(fit.code == 0);
  REQUIRE(!line_after(fit.out, "k ").empty());
  CHECK(std::stoul(line_after(fit.out, "k ")) >= 1);
  CHECK(!line_after(fit.out, "fit_seconds ").empty());

  DenseMatrix Q(3, 1);
  Q(0, 0) = 0.25;
  Q(1, 0) = 0.75;
  Q(2, 0) = 1.25;
  const fs::path qpts = dir / "query.csv";
  write_matrix(Q, qpts, MatrixFileFormat::Csv);

  const fs::path yhat_path = dir / "yhat.csv";
  const CliRun pred = run_cli("rbf predict --model '" + model_path.string() +
                              "' --points '" + qpts.string() + "' --out '" +
                              yhat_path.string() + "'");
  REQUIRE(pred.code == 0);
  CHECK(line_after(pred.out, "predicted ") == "3");

  const RBFModel model = load_model(model_path);
  PointSet query;
  query.dim = 1;
  query.coords = {0.25, 0.75, 1.25};
  const std::vector<double> want = rbf_predict(model, query);
  const std::vector<double> got = read_vector(yhat_path);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);

  SUBCASE("unknown method is a parameter error") {
    const CliRun bad = run_cli("rbf fit --points '" + pts.string() +
                               "' --values '" + vals.string() +
                               "' --theta 1.0 --method qr --out '" +
                               (dir / "m2.json").string() + "'");
    CHECK(bad.code == 1);
    CHECK(contains(bad.err, "error: parameter:"));
  }
}

TEST_CASE("lu fit on coincident centers reports a singular system") {
  const fs::path dir = case_dir("singular");
  DenseMatrix P(3, 1);
  P(0, 0) = 0.0;
  P(1, 0) = 0.0;
  P(2, 0) = 1.0;
  const fs::path pts = dir / "points.csv";
  write_matrix(P, pts, MatrixFileFormat::Csv);
  const std::vector<double> f = {1.0, 1.0, 2.0};
  const fs::path vals = dir / "values.csv";
  write_vector(f, vals, MatrixFileFormat::Csv);

  const CliRun r = run_cli("rbf fit --points '" + pts.string() +
                           "' --values '" + vals.string() +
                           "' --theta 1.0 --method lu --out '" +
                           (dir / "model.json").string() + "'");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "error: singular:"));
}

TEST_CASE("eigen subcommand writes ordered modes") {
  const fs::path dir = case_dir("eigen");
  const fs::path input = dir / "m.csv";
  write_matrix(make2x2(2.0, 2.0, 2.0, 4.0), input, MatrixFileFormat::Csv);

  const fs::path out = dir / "modes";
  const CliRun r = run_cli("eigen --input '" + input.string() + "' --out '" +
                           out.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(line_after(r.out, "k ") == "2");

  const std::vector<double> values = read_vector(out / "values.csv");
  REQUIRE(values.size() == 2);
  const double s5 = std::sqrt(5.0);
  CHECK(values[0] == doctest::Approx(3.0 + s5).epsilon(1e-12));
  CHECK(values[1] == doctest::Approx(3.0 - s5).epsilon(1e-12));

  const DenseMatrix V = read_matrix(out / "vectors.csv");
  REQUIRE(V.rows() == 2);
  REQUIRE(V.cols() == 2);
  DenseMatrix I2(2, 2);
  I2(0, 0) = I2(1, 1) = 1.0;
  CHECK(max_abs_diff(matmul(V.transposed(), V), I2) <= 1e-10);
  CHECK(contains(slurp(out / "meta.json"), "\"k\": 2"));
}

TEST_CASE("kle sampling is seed-reproducible") {
  const fs::path dir = case_dir("kle");
  const std::string base =
      "kle sample --synth 30 --synth-seed 5 --theta 0.4,0.4,0.02 "
      "--kprime 4 --samples 3 ";

  const fs::path s1 = dir / "s1.csv";
  const fs::path s2 = dir / "s2.csv";
  const fs::path s3 = dir / "s3.csv";
  const CliRun r1 = run_cli(base + "--seed 42 --out '" + s1.string() + "'");
  const CliRun r2 = run_cli(base + "--seed 42 --out '" + s2.string() + "'");
  const CliRun r3 = run_cli(base + "--seed 43 --out '" + s3.string() + "'");
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  REQUIRE(r3.code == 0);
  CHECK(line_after(r1.out, "samples ") == "3");

  const std::string b1 = slurp(s1);
  CHECK(b1 == slurp(s2));
  CHECK(b1 != slurp(s3));

  std::istringstream is(b1);
  std::string header;
  REQUIRE(std::getline(is, header));
  CHECK(header == "# seed=42 kprime=4 n=30");
  std::string row;
  std::size_t rows = 0;
  while (std::getline(is, row)) {
    CHECK(std::count(row.begin(), row.end(), ',') == 29);
    ++rows;
  }
  CHECK(rows == 3);
  CHECK(contains(slurp(dir / "s1.csv.meta.json"), "\"kprime\": 4"));

  SUBCASE("a point source is required") {
    const CliRun bad =
        run_cli("kle sample --theta 0.4,0.4,0.02 --out '" +
                (dir / "none.csv").string() + "'");
    CHECK(bad.code == 1);
    CHECK(contains(bad.err, "error: parameter:"));
  }
}

TEST_CASE("bench sweep emits the result table and plot data") {
  const fs::path dir = case_dir("bench");
  const fs::path csv = dir / "sweep.csv";
  const fs::path plot = dir / "plot.gp";
  const CliRun r = run_cli(
      "bench sweep --function f1 --n 10 --theta-min 0.3 --theta-max 0.8 "
      "--theta-count 2 --methods pcd --test-points 32 --out '" +
      csv.string() + "' --plot '" + plot.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(line_after(r.out, "rows ") == "2");

  std::istringstream is(slurp(csv));
  std::string header;
  REQUIRE(std::getline(is, header));
  CHECK(header == "function,method,n,theta,k,rmse,fit_seconds,status");
  CHECK(contains(slurp(csv), "f1,pcd,10,"));
  CHECK(fs::exists(plot));
  // Data files share the script's stem, one per function/method/n group.
  CHECK(fs::exists(dir / "plot_f1_pcd_n10.dat"));
}

TEST_CASE("input failures map to distinct exit codes") {
  const fs::path dir = case_dir("failures");

  SUBCASE("missing input file is rejected by the parser") {
    const CliRun r = run_cli("pcd --input '" + (dir / "missing.csv").string() +
                             "' --out '" + (dir / "x").string() + "'");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "error: usage:"));
  }

  SUBCASE("non-numeric matrix content") {
    const fs::path bad = dir / "garbage.csv";
    write_raw(bad, "1.0,2.0\nfoo,3.0\n");
    const CliRun r = run_cli("pcd --input '" + bad.string() + "' --out '" +
                             (dir / "y").string() + "'");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "error: parse:"));
  }

  SUBCASE("ragged matrix rows") {
    const fs::path bad = dir / "ragged.csv";
    write_raw(bad, "1.0,2.0\n3.0\n");
    const CliRun r = run_cli("ca --input '" + bad.string() + "' --out '" +
                             (dir / "z").string() + "'");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "error: parse:"));
  }

  SUBCASE("unknown output format") {
    const fs::path input = dir / "ok.csv";
    write_matrix(make2x2(4.0, 2.0, 2.0, 2.0), input, MatrixFileFormat::Csv);
    const CliRun r = run_cli("ca --input '" + input.string() + "' --out '" +
                             (dir / "w").string() + "' --format xml");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "error: parameter:"));
  }
}
