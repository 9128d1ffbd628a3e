#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "svdlab/golub_kahan.hpp"
#include "svdlab/jacobi.hpp"

using namespace svdlab;

TEST_CASE("rot zeroes the second component") {
  SUBCASE("f = 0") {
    const RotResult r = rot(0.0, 7.0);
    CHECK(r.c == 0.0);
    CHECK(r.s == 1.0);
    CHECK(r.r == 7.0);
  }
  SUBCASE("g = 0") {
    const RotResult r = rot(1.0, 0.0);
    CHECK(r.c == 1.0);
    CHECK(r.s == 0.0);
    CHECK(r.r == 1.0);
  }
  SUBCASE("3, 4") {
    const RotResult r = rot(3.0, 4.0);
    CHECK(std::abs(r.c - 0.6) <= 4 * kEps);
    CHECK(std::abs(r.s - 0.8) <= 4 * kEps);
    CHECK(std::abs(r.r - 5.0) <= 8 * kEps);
    CHECK(std::abs(-r.s * 3.0 + r.c * 4.0) <= 8 * kEps);
  }
}

TEST_CASE("bidiagonalize") {
  SUBCASE("diagonal input needs no reflectors") {
    const Bidiagonalization b = bidiagonalize(SymmetricMatrix::from_rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}}));
    CHECK(b.u1 == DenseMatrix::identity(3));
    CHECK(b.v1 == DenseMatrix::identity(3));
    CHECK(b.b.diag == Vector{1, 2, 3});
    CHECK(b.b.super == Vector{0, 0});
  }
  SUBCASE("random 5x5 postconditions") {
    oracle::Rng rng(5);
    const SymmetricMatrix a(oracle::random_symmetric(5, rng));
    const Bidiagonalization b = bidiagonalize(a);
    CHECK(orthogonality_defect(b.u1) <= orth_tol(5));
    CHECK(orthogonality_defect(b.v1) <= orth_tol(5));
    const DenseMatrix r = multiply_tn(b.u1, multiply(a.dense(), b.v1));
    CHECK(oracle::max_diff(r, b.b.dense()) <= orth_tol(5) * a.frobenius_norm());
    CHECK(std::abs(b.b.dense().frobenius_norm() - a.frobenius_norm()) <= orth_tol(5) * a.frobenius_norm());
  }
  SUBCASE("2x2 is already bidiagonal after one column reflector") {
    const SymmetricMatrix a = SymmetricMatrix::from_rows({{1, 2}, {2, 3}});
    const Bidiagonalization b = bidiagonalize(a);
    CHECK(b.v1 == DenseMatrix::identity(2));
    const DenseMatrix r = multiply_tn(b.u1, multiply(a.dense(), b.v1));
    CHECK(std::abs(r(1, 0)) <= 1e-15);
  }
}

TEST_CASE("gk_svd") {
  SUBCASE("identity") {
    const SvdResult r = gk_svd(SymmetricMatrix::identity(4));
    CHECK(r.sigma == Vector{1, 1, 1, 1});
    CHECK(reconstruction_residual(SymmetricMatrix::identity(4), r) == 0.0);
  }
  SUBCASE("2x2 worked example") {
    const SymmetricMatrix a = SymmetricMatrix::from_rows({{16.7118, 10.7270}, {10.7270, 34.2341}});
    const SvdResult r = gk_svd(a);
    CHECK(std::abs(r.sigma[0] - 39.3231) <= 5e-5);
    CHECK(std::abs(r.sigma[1] - 11.6228) <= 5e-5);
  }
  SUBCASE("random 10x10 agrees with jacobi") {
    oracle::Rng rng(10);
    for (int t = 0; t < 5; ++t) {
      const SymmetricMatrix a(oracle::random_symmetric(10, rng));
      const SvdResult g = gk_svd(a);
      CHECK(oracle::max_rel_diff(g.sigma, jacobi_svd(a).sigma) <= 1e-9);
      CHECK(reconstruction_residual(a, g) <= orth_tol(10));
      CHECK(orthogonality_defect(g.u) <= orth_tol(10));
      CHECK(orthogonality_defect(g.v) <= orth_tol(10));
    }
  }
  SUBCASE("sweeps keep the bidiagonal norm and shrink the superdiagonal") {
    oracle::Rng rng(12);
    const SymmetricMatrix a(oracle::random_symmetric(12, rng));
    std::vector<GkSweepStats> s;
    GkConfig cfg;
    cfg.on_sweep = [&](const GkSweepStats& x) { s.push_back(x); };
    (void)gk_svd(a, cfg);
    REQUIRE(!s.empty());
    for (const GkSweepStats& x : s) CHECK(std::abs(x.frobenius - a.frobenius_norm()) <= 1e-12 * a.frobenius_norm());
    CHECK(s.back().super_abs_sum <= s.front().super_abs_sum);
  }
}
