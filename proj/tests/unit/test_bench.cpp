#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "svdlab/bench.hpp"
#include "svdlab/jacobi.hpp"
#include "svdlab/tridiag_qr.hpp"

using namespace svdlab;

TEST_CASE("generated matrices are deterministic") {
  for (MatrixKind k : {MatrixKind::RandomSymmetric, MatrixKind::RandomSpd, MatrixKind::Graded}) {
    CAPTURE(to_string(k));
    CHECK(parse_matrix_kind(to_string(k)) == k);
    const SymmetricMatrix a = generate_symmetric(30, 42, k), b = generate_symmetric(30, 42, k);
    CHECK(a.dense() == b.dense());
    CHECK_FALSE(generate_symmetric(30, 43, k).dense() == a.dense());
  }
  CHECK_FALSE(parse_matrix_kind("hilbert").has_value());
  const SymmetricMatrix small = generate_symmetric(4, 42, MatrixKind::RandomSymmetric);
  CHECK(small.dense().max_abs() <= 1.0);
  CHECK_FALSE(small.dense() == generate_symmetric(5, 42, MatrixKind::RandomSymmetric).dense());
}

TEST_CASE("matrix kinds have their defining properties") {
  const EigResult spd = symmetric_qr_eig(tridiagonalize(generate_symmetric(40, 1, MatrixKind::RandomSpd)).t);
  CHECK(*std::min_element(spd.lambda.begin(), spd.lambda.end()) > 0.0);
  CHECK(generate_symmetric(6, 1, MatrixKind::Identity).dense() == DenseMatrix::identity(6));
  const SymmetricMatrix g = generate_symmetric(9, 1, MatrixKind::Graded);
  CHECK(std::abs(g(8, 8)) <= 1e-16);
  CHECK(std::abs(g(0, 0)) <= 1.0);
}

TEST_CASE("run_benchmark") {
  BenchSpec spec;
  spec.algorithms = {Algorithm::Jacobi, Algorithm::TridiagQr, Algorithm::DivideConquer};
  spec.sizes = {10, 40};
  spec.reps = 3;
  const BenchResult r = run_benchmark(spec);
  REQUIRE(r.cells.size() == 6);
  CHECK(r.all_valid());
  CHECK_FALSE(r.any_convergence_failure());
  for (const BenchCell& c : r.cells) {
    REQUIRE(c.runs.size() == 3);
    CHECK(c.min_s <= c.median_s);
    CHECK(c.median_s <= c.max_s);
    CHECK(c.residual <= 1e-8);
    // same input and same code path: residuals repeat exactly
    for (const BenchRun& run : c.runs) CHECK(run.residual == c.runs[0].residual);
  }

  std::ostringstream csv;
  write_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "alg,n,rep_median_s,rep_min_s,rep_max_s,residual,orth_defect");
  std::getline(lines, line);
  CHECK(line.rfind("jacobi,10,", 0) == 0);
  CHECK(std::count(line.begin(), line.end(), ',') == 6);

  std::ostringstream table;
  write_table(table, r);
  CHECK(table.str().find("ok") != std::string::npos);
}

TEST_CASE("a failing residual gate marks the cell invalid") {
  BenchSpec spec;
  spec.algorithms = {Algorithm::TridiagQr};
  spec.sizes = {20};
  spec.reps = 1;
  spec.residual_limit = 0.0;
  const BenchResult r = run_benchmark(spec);
  CHECK_FALSE(r.all_valid());
  std::ostringstream csv;
  write_csv(csv, r);
  CHECK(csv.str().find("qr,20,nan,nan,nan,") != std::string::npos);
}

TEST_CASE("QR timing grows between quadratically and quartically") {
  BenchSpec spec;
  spec.algorithms = {Algorithm::TridiagQr};
  spec.sizes = {200, 400, 800};
  spec.reps = 3;
  const BenchResult r = run_benchmark(spec);
  REQUIRE(r.all_valid());
  // least-squares slope of log t against log n
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const BenchCell& c : r.cells) {
    const double x = std::log(static_cast<double>(c.n)), y = std::log(c.median_s);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  CAPTURE(slope);
  CHECK(slope >= 2.0);
  CHECK(slope <= 4.0);
  for (std::size_t i = 1; i < r.cells.size(); ++i) CHECK(r.cells[i].median_s > r.cells[i - 1].median_s);
}
