#include <algorithm>
#include <cmath>
#include <cstring>

#include "doctest.h"
#include "oracles.hpp"
#include "svdlab/divide_conquer.hpp"
#include "svdlab/jacobi.hpp"
#include "svdlab/tridiag_qr.hpp"
#include "testing.hpp"

using namespace svdlab;
using testing::error_of;

namespace {

TridiagonalMatrix random_tridiagonal(std::size_t n, oracle::Rng& rng) {
  Vector d(n), e(n > 0 ? n - 1 : 0);
  for (double& x : d) x = rng.uniform();
  for (double& x : e) x = rng.uniform();
  return {d, e};
}

bool bit_identical(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.rows() * a.cols()) == 0;
}

}  // namespace

TEST_CASE("split_rank_one") {
  SUBCASE("worked example with negative coupling") {
    const TridiagonalMatrix t({16.7118, 34.2341}, {-10.7270});
    const RankOneSplit s = split_rank_one(t, 1);
    CHECK(s.rho == -10.7270);
    CHECK(std::abs(s.t1.diag[0] - 27.4388) <= 1e-12);
    CHECK(std::abs(s.t2.diag[0] - 44.9611) <= 1e-12);
    CHECK(s.v == Vector{1, 1});
  }
  SUBCASE("positive coupling") {
    const RankOneSplit s = split_rank_one(TridiagonalMatrix({16.7118, 34.2341}, {10.7270}), 1);
    CHECK(std::abs(s.t1.diag[0] - 5.9848) <= 1e-12);
    CHECK(std::abs(s.t2.diag[0] - 23.5071) <= 1e-12);
  }
  SUBCASE("blocks plus the rank-one term rebuild T") {
    oracle::Rng rng(1);
    const TridiagonalMatrix t = random_tridiagonal(9, rng);
    const RankOneSplit s = split_rank_one(t, 4);
    CHECK(s.t1.n() == 4);
    CHECK(s.t2.n() == 5);
    DenseMatrix r(9, 9);
    const DenseMatrix a = s.t1.dense(), b = s.t2.dense();
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < 4; ++i) r(i, j) = a(i, j);
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t i = 0; i < 5; ++i) r(i + 4, j + 4) = b(i, j);
    for (std::size_t j = 0; j < 9; ++j)
      for (std::size_t i = 0; i < 9; ++i) r(i, j) += s.rho * s.v[i] * s.v[j];
    CHECK(oracle::max_diff(r, t.dense()) <= 1e-15);
  }
  SUBCASE("errors") {
    CHECK(error_of([] { split_rank_one(TridiagonalMatrix({1, 2}, {0}), 1); }) == Errc::ZeroCoupling);
    CHECK(error_of([] { split_rank_one(TridiagonalMatrix({1, 2}, {1}), 2); }) == Errc::InvalidInput);
  }
}

TEST_CASE("build_merge_weights") {
  CHECK(build_merge_weights(DenseMatrix::identity(1), DenseMatrix::identity(1)) == Vector{1, 1});
  CHECK(build_merge_weights(DenseMatrix::identity(2), DenseMatrix::identity(2)) == Vector{0, 1, 1, 0});
  oracle::Rng rng(2);
  const EigResult a = symmetric_qr_eig(random_tridiagonal(7, rng));
  const EigResult b = symmetric_qr_eig(random_tridiagonal(6, rng));
  const Vector u = build_merge_weights(a.x, b.x);
  CHECK(u.size() == 13);
  CHECK(std::abs(dot(u, u) - 2.0) <= 1e-14);
}

TEST_CASE("dc_eig") {
  SUBCASE("below the cutoff it is the QR result") {
    oracle::Rng rng(3);
    const TridiagonalMatrix t = random_tridiagonal(20, rng);
    const EigResult a = dc_eig(t, 25);
    const EigResult b = symmetric_qr_eig(t);
    CHECK(a.lambda == b.lambda);
    CHECK(a.x == b.x);
  }
  SUBCASE("2x2 example with cutoff 1") {
    for (double e : {10.7270, -10.7270}) {
      const EigResult r = dc_eig(TridiagonalMatrix({16.7118, 34.2341}, {e}), 1);
      CHECK(std::abs(r.lambda[0] - 11.6228) <= 5e-5);
      CHECK(std::abs(r.lambda[1] - 39.3231) <= 5e-5);
    }
  }
  SUBCASE("random 100 against QR with several cutoffs and schemes") {
    oracle::Rng rng(100);
    const TridiagonalMatrix t = random_tridiagonal(100, rng);
    const EigResult q = symmetric_qr_eig(t);
    for (std::size_t cutoff : {1u, 4u, 25u}) {
      for (SolverScheme s : {SolverScheme::Hybrid, SolverScheme::MiddleWay, SolverScheme::FixedWeight}) {
        DcConfig cfg;
        cfg.cutoff = cutoff;
        cfg.scheme = s;
        const EigResult d = dc_eig(t, cfg);
        CHECK(oracle::max_rel_diff(q.lambda, d.lambda) <= 1e-9);
        CHECK(orthogonality_defect(d.x) <= orth_tol(100));
        CHECK(reconstruction_residual(t.dense(), d) <= orth_tol(100));
      }
    }
  }
  SUBCASE("zero couplings and repeated eigenvalues") {
    const TridiagonalMatrix t(Vector(40, 2.0), Vector(39, 0.0));
    const EigResult r = dc_eig(t, 4);
    CHECK(r.lambda == Vector(40, 2.0));
    CHECK(orthogonality_defect(r.x) <= orth_tol(40));
    const TridiagonalMatrix w(Vector(60, 1.0), Vector(59, 1.0));
    const EigResult s = dc_eig(w, 5);
    CHECK(orthogonality_defect(s.x) <= orth_tol(60));
    CHECK(reconstruction_residual(w.dense(), s) <= orth_tol(60));
  }
  SUBCASE("merges see interlacing roots and the parallel path is bit-identical") {
    oracle::Rng rng(7);
    const TridiagonalMatrix t = random_tridiagonal(300, rng);
    DcConfig cfg;
    cfg.cutoff = 10;
    bool interlaced = true;
    std::size_t merges = 0;
    cfg.on_merge = [&](const MergeInfo& m) {
      ++merges;
      const SecularProblem& p = m.reduced;
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p.rho > 0) {
          interlaced = interlaced && m.roots[j] >= p.d[j] && (j + 1 == p.size() || m.roots[j] <= p.d[j + 1]);
        } else {
          interlaced = interlaced && m.roots[j] <= p.d[j] && (j == 0 || m.roots[j] >= p.d[j - 1]);
        }
      }
    };
    const EigResult a = dc_eig(t, cfg);
    CHECK(merges > 0);
    CHECK(interlaced);
    cfg.on_merge = nullptr;
    cfg.parallel = true;
    const EigResult b = dc_eig(t, cfg);
    CHECK(bit_identical(a.x, b.x));
    CHECK(std::memcmp(a.lambda.data(), b.lambda.data(), sizeof(double) * 300) == 0);
  }
}

TEST_CASE("dc_svd") {
  SUBCASE("identity") {
    const SvdResult r = dc_svd(SymmetricMatrix::identity(8), 2);
    CHECK(r.sigma == Vector(8, 1.0));
    CHECK(reconstruction_residual(SymmetricMatrix::identity(8), r) <= orth_tol(8));
  }
  SUBCASE("random 200 against QR") {
    oracle::Rng rng(200);
    const SymmetricMatrix a(oracle::random_symmetric(200, rng));
    const SvdResult d = dc_svd(a);
    const SvdResult q = tridiag_qr_svd(a);
    CHECK(oracle::max_rel_diff(q.sigma, d.sigma) <= 1e-8);
    CHECK(reconstruction_residual(a, d) <= 1e-12);
    CHECK(orthogonality_defect(d.u) <= orth_tol(200));
    CHECK(orthogonality_defect(d.v) <= orth_tol(200));
  }
  SUBCASE("corrected weights keep the vectors orthonormal") {
    oracle::Rng rng(5);
    const SymmetricMatrix a(oracle::random_symmetric(120, rng));
    DcConfig on, off;
    on.cutoff = off.cutoff = 8;
    off.correct_weights = false;
    const double good = orthogonality_defect(dc_svd(a, on).u);
    const double plain = orthogonality_defect(dc_svd(a, off).u);
    CHECK(good <= orth_tol(120));
    CHECK(good <= plain * 10.0 + orth_tol(120));
  }
}
