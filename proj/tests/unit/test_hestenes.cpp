#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "svdlab/hestenes.hpp"
#include "svdlab/jacobi.hpp"

using namespace svdlab;

TEST_CASE("hestenes diagonal input") {
  const SymmetricMatrix a = SymmetricMatrix::from_rows({{4, 0}, {0, 9}});
  const SvdResult r = hestenes_svd(a);
  CHECK(r.sigma == Vector{9, 4});
  CHECK(reconstruction_residual(a, r) == 0.0);
}

TEST_CASE("hestenes 2x2 worked example") {
  const SymmetricMatrix a = SymmetricMatrix::from_rows({{16.7118, 10.7270}, {10.7270, 34.2341}});
  const SvdResult r = hestenes_svd(a);
  CHECK(std::abs(r.sigma[0] - 39.3231) <= 5e-5);
  CHECK(std::abs(r.sigma[1] - 11.6228) <= 5e-5);
  CHECK(reconstruction_residual(a, r) <= orth_tol(2));
}

TEST_CASE("hestenes agrees with two-sided jacobi") {
  oracle::Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const SymmetricMatrix a(oracle::random_symmetric(8, rng));
    const SvdResult h = hestenes_svd(a);
    const SvdResult j = jacobi_svd(a);
    CHECK(oracle::max_rel_diff(h.sigma, j.sigma) <= 1e-10);
    CHECK(reconstruction_residual(a, h) <= orth_tol(8));
    CHECK(orthogonality_defect(h.u) <= orth_tol(8));
    CHECK(orthogonality_defect(h.v) <= orth_tol(8));
    double ss = 0.0;
    for (double s : h.sigma) ss += s * s;
    const double f = a.frobenius_norm();
    CHECK(std::abs(ss - f * f) <= 1e-12 * f * f);
  }
}

TEST_CASE("hestenes completes U for rank-deficient input") {
  // rank 1: all ones
  const SymmetricMatrix a(DenseMatrix(4, 4, 1.0));
  const SvdResult r = hestenes_svd(a);
  CHECK(std::abs(r.sigma[0] - 4.0) <= 1e-14);
  for (std::size_t i = 1; i < 4; ++i) CHECK(r.sigma[i] <= 1e-14);
  CHECK(orthogonality_defect(r.u) <= orth_tol(4));
  CHECK(reconstruction_residual(a, r) <= orth_tol(4));

  const SvdResult z = hestenes_svd(SymmetricMatrix(DenseMatrix(3, 3)));
  CHECK(z.sigma == Vector{0, 0, 0});
  CHECK(orthogonality_defect(z.u) <= orth_tol(3));
}
