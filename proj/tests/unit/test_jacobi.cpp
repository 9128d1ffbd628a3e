#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "svdlab/errors.hpp"
#include "svdlab/jacobi.hpp"

using namespace svdlab;

namespace {

const SymmetricMatrix kExample = SymmetricMatrix::from_rows({{16.7118, 10.7270}, {10.7270, 34.2341}});

Vector sorted(Vector v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("jacobi_rotation diagonalizes a 2x2 block") {
  oracle::Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const double app = rng.uniform(), aqq = t % 7 == 0 ? app : rng.uniform(), apq = rng.uniform();
    const GivensPair g = jacobi_rotation(app, aqq, apq);
    const DenseMatrix j = DenseMatrix::from_rows({{g.c, g.s}, {-g.s, g.c}});
    const DenseMatrix a = DenseMatrix::from_rows({{app, apq}, {apq, aqq}});
    const DenseMatrix r = multiply_tn(j, multiply(a, j));
    CHECK(std::abs(r(0, 1)) <= 16 * kEps);
    // smaller root: |theta| <= pi/4
    CHECK(std::abs(g.s) <= g.c + 4 * kEps);
  }
}

TEST_CASE("jacobi identity needs no rotations") {
  std::size_t rotations = 0;
  JacobiConfig cfg;
  cfg.on_sweep = [&](const JacobiSweepStats& s) { rotations += s.rotations; };
  const EigResult e = jacobi_eig(SymmetricMatrix::identity(3), cfg);
  CHECK(e.lambda == Vector{1, 1, 1});
  CHECK(e.x == DenseMatrix::identity(3));
  CHECK(rotations == 0);
}

TEST_CASE("jacobi 2x2 worked example") {
  const SvdResult r = jacobi_svd(kExample);
  CHECK(std::abs(r.sigma[0] - 39.3231) <= 5e-5);
  CHECK(std::abs(r.sigma[1] - 11.6228) <= 5e-5);
  CHECK(reconstruction_residual(kExample, r) <= orth_tol(2));
}

TEST_CASE("jacobi eigenvalues match characteristic polynomial roots") {
  oracle::Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const DenseMatrix a = oracle::random_symmetric(6, rng);
    const Vector roots = oracle::char_poly_roots(a);
    REQUIRE(roots.size() == 6);
    const EigResult e = jacobi_eig(SymmetricMatrix(a));
    const Vector lam = sorted(e.lambda);
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(lam[i] - roots[i]) <= 1e-9);
    CHECK(orthogonality_defect(e.x) <= orth_tol(6));
    CHECK(reconstruction_residual(a, e) <= orth_tol(6));
  }
}

TEST_CASE("jacobi sweeps shrink the off-norm and preserve invariants") {
  oracle::Rng rng(9);
  const SymmetricMatrix a(oracle::random_symmetric(30, rng));
  double trace = 0.0;
  for (std::size_t i = 0; i < 30; ++i) trace += a(i, i);
  const double fro = a.frobenius_norm();
  std::vector<JacobiSweepStats> sweeps;
  JacobiConfig cfg;
  cfg.on_sweep = [&](const JacobiSweepStats& s) { sweeps.push_back(s); };
  (void)jacobi_eig(a, cfg);
  REQUIRE(sweeps.size() >= 2);
  CHECK(sweeps.front().sweep == 0);
  for (std::size_t k = 1; k < sweeps.size(); ++k) {
    CHECK(sweeps[k].off_norm <= sweeps[k - 1].off_norm);
  }
  for (const JacobiSweepStats& s : sweeps) {
    CHECK(std::abs(s.trace - trace) <= 1e-12 * fro * 30);
    CHECK(std::abs(s.frobenius - fro) <= 1e-12 * fro * 30);
  }
  CHECK(sweeps.back().off_norm <= 1e-12 * fro);
}

TEST_CASE("jacobi reports non-convergence") {
  oracle::Rng rng(2);
  const SymmetricMatrix a(oracle::random_symmetric(10, rng));
  JacobiConfig cfg;
  cfg.max_sweeps = 1;
  CHECK_THROWS_AS(jacobi_svd(a, cfg), NoConvergence);
}

TEST_CASE("jacobi svd of diagonal and negative definite input") {
  const SvdResult r = jacobi_svd(SymmetricMatrix::from_rows({{-2, 0}, {0, 5}}));
  CHECK(r.sigma == Vector{5, 2});
  CHECK(reconstruction_residual(SymmetricMatrix::from_rows({{-2, 0}, {0, 5}}), r) == 0.0);
}
