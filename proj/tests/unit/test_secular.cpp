#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "oracles.hpp"
#include "svdlab/jacobi.hpp"
#include "svdlab/secular.hpp"
#include "testing.hpp"

using namespace svdlab;
using testing::error_of;

namespace {

constexpr SolverScheme kSchemes[] = {SolverScheme::ApproachLeft, SolverScheme::ApproachRight,
                                     SolverScheme::MiddleWay, SolverScheme::FixedWeight, SolverScheme::Hybrid};

// The worked 2x2 matrix split at m = 1 with rho of either sign.
const SecularProblem kPositive{{5.9848, 23.5071}, {1.0, 1.0}, 10.7270};
const SecularProblem kNegative{{27.4388, 44.9611}, {1.0, 1.0}, -10.7270};

Vector sorted_eigs(const DenseMatrix& a) {
  Vector l = jacobi_eig(SymmetricMatrix(a)).lambda;
  std::sort(l.begin(), l.end());
  return l;
}

}  // namespace

TEST_CASE("scheme names round-trip") {
  for (SolverScheme s : kSchemes) CHECK(parse_scheme(to_string(s)) == s);
  CHECK_FALSE(parse_scheme("newton").has_value());
}

TEST_CASE("secular_eval") {
  const SecularValue v = secular_eval(kPositive, 11.6228);
  CHECK(std::abs(v.f) <= 1e-4);
  CHECK(v.fprime > 0.0);
  CHECK(v.psi < 0.0);
  CHECK(v.phi > 0.0);
  CHECK(error_of([] { secular_eval(kPositive, 5.9848); }) == Errc::PoleEvaluation);
}

TEST_CASE("require_deflated") {
  CHECK(error_of([] { require_deflated({{1, 1}, {1, 1}, 1}); }) == Errc::InvalidInput);
  CHECK(error_of([] { require_deflated({{1, 2}, {0, 1}, 1}); }) == Errc::InvalidInput);
  CHECK(error_of([] { require_deflated({{1, 2}, {1, 1}, 0}); }) == Errc::InvalidInput);
  CHECK_FALSE(error_of([] { require_deflated(kNegative); }).has_value());
}

TEST_CASE("secular roots of the worked examples") {
  for (SolverScheme s : kSchemes) {
    CAPTURE(to_string(s));
    for (const SecularProblem* p : {&kPositive, &kNegative}) {
      const Vector r = secular_roots(*p, s);
      REQUIRE(r.size() == 2);
      CHECK(std::abs(r[0] - 11.6228) <= 5e-5);
      CHECK(std::abs(r[1] - 39.3231) <= 5e-5);
    }
  }
}

TEST_CASE("a single pole has the closed-form root") {
  for (SolverScheme s : kSchemes) {
    for (double rho : {2.0, -2.0}) {
      const Vector r = secular_roots({{3.0}, {1.5}, rho}, s);
      CHECK(std::abs(r[0] - (3.0 + rho * 2.25)) <= 4 * kEps * 8.0);
    }
  }
}

TEST_CASE("random 15-pole problem: schemes agree with the dense oracle") {
  oracle::Rng rng(15);
  for (double rho : {0.7, -1.3}) {
    const SecularProblem p = oracle::random_deflated(15, rho, rng);
    const Vector want = sorted_eigs(oracle::rank_one_dense(p));
    for (SolverScheme s : kSchemes) {
      CAPTURE(to_string(s));
      SecularOptions opt;
      opt.scheme = s;
      opt.fallback = true;
      const auto roots = secular_solve(p, opt);
      for (std::size_t j = 0; j < 15; ++j) {
        CHECK(std::abs(roots[j].lambda - want[j]) <= 1e-12 * (1.0 + std::abs(want[j])));
        // interlacing
        if (rho > 0) {
          CHECK(roots[j].lambda > p.d[j]);
          if (j + 1 < 15) CHECK(roots[j].lambda < p.d[j + 1]);
        } else {
          CHECK(roots[j].lambda < p.d[j]);
          if (j > 0) CHECK(roots[j].lambda > p.d[j - 1]);
        }
        CHECK(root_gap(p, roots[j], j) == doctest::Approx(roots[j].lambda - p.d[j]).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("origin shifting off still converges") {
  oracle::Rng rng(4);
  const SecularProblem p = oracle::random_deflated(10, 1.0, rng);
  SecularOptions opt;
  opt.shift_origin = false;
  const auto a = secular_solve(p, opt);
  const auto b = secular_solve(p);
  for (std::size_t j = 0; j < 10; ++j) CHECK(std::abs(a[j].lambda - b[j].lambda) <= 1e-13 * (1 + std::abs(b[j].lambda)));
}

TEST_CASE("approach-from-left iterates move monotonically towards the root") {
  oracle::Rng rng(77);
  int checked = 0;
  for (int t = 0; t < 20 && checked < 5; ++t) {
    const SecularProblem p = oracle::random_deflated(12, 1.0, rng);
    std::map<std::size_t, Vector> iterates;
    SecularOptions opt;
    opt.scheme = SolverScheme::ApproachLeft;
    opt.on_iterate = [&](std::size_t k, std::size_t, double x) { iterates[k].push_back(x); };
    std::vector<SecularRoot> roots;
    try {
      roots = secular_solve(p, opt);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SchemeFailure);
      continue;
    }
    ++checked;
    for (auto& [k, xs] : iterates) {
      // skip the bracketing bisection that moves the start left of the root
      std::size_t first = 0;
      while (first < xs.size() && oracle::secular_f(p, xs[first]) > 0.0L) ++first;
      for (std::size_t i = first + 1; i < xs.size(); ++i) CHECK(xs[i] >= xs[i - 1]);
      for (std::size_t i = first; i < xs.size(); ++i) CHECK(xs[i] <= roots[k].lambda);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("corrected_weights") {
  SUBCASE("n = 1") {
    const Vector w = corrected_weights(Vector{2.0}, Vector{-3.0}, Vector{11.0}, 1.0);
    CHECK(std::abs(w[0] + 3.0) <= 8 * kEps * 3);
  }
  SUBCASE("2x2 example gives back unit weights") {
    for (const SecularProblem* p : {&kPositive, &kNegative}) {
      const auto roots = secular_solve(*p);
      const Vector w = corrected_weights(*p, roots);
      CHECK(std::abs(w[0] - 1.0) <= 1e-10);
      CHECK(std::abs(w[1] - 1.0) <= 1e-10);
    }
  }
  SUBCASE("computed roots are exact for the corrected weights") {
    oracle::Rng rng(31);
    for (double rho : {1.0, -0.5}) {
      const SecularProblem p = oracle::random_deflated(20, rho, rng);
      const auto roots = secular_solve(p);
      const Vector w = corrected_weights(p, roots);
      const SecularProblem q{p.d, w, p.rho};
      for (std::size_t j = 0; j < 20; ++j) {
        CHECK(std::abs(w[j] - p.u[j]) <= 1e-10);
        CHECK(std::signbit(w[j]) == std::signbit(p.u[j]));
      }
      const Vector want = sorted_eigs(oracle::rank_one_dense(q));
      for (std::size_t j = 0; j < 20; ++j) CHECK(std::abs(roots[j].lambda - want[j]) <= 1e-12 * (1 + std::abs(want[j])));
    }
  }
  SUBCASE("lengths are checked") {
    CHECK(error_of([] { corrected_weights(Vector{1, 2}, Vector{1}, Vector{1, 2}, 1.0); }) == Errc::LengthMismatch);
  }
}

TEST_CASE("secular eigenvectors are orthonormal eigenvectors") {
  oracle::Rng rng(10);
  for (double rho : {2.0, -2.0}) {
    const SecularProblem p = oracle::random_deflated(10, rho, rng);
    const auto roots = secular_solve(p);
    const Vector w = corrected_weights(p, roots);
    const DenseMatrix x = secular_eigenvectors(p, w, roots);
    CHECK(orthogonality_defect(x) <= 1e-10);
    Vector lam;
    for (const auto& r : roots) lam.push_back(r.lambda);
    CHECK(reconstruction_residual(oracle::rank_one_dense(p), EigResult{x, lam}) <= 1e-12);
    // the plain overload on lambdas agrees
    const DenseMatrix y = secular_eigenvectors(p.d, w, lam);
    CHECK(oracle::max_diff(x, y) <= 1e-8);
  }
}

TEST_CASE("deflate") {
  SUBCASE("zero weight") {
    const SecularProblem p{{1, 2, 3}, {1, 0, 1}, 1.0};
    const DeflationResult r = deflate(p);
    CHECK(r.deflation.kept == std::vector<std::size_t>{0, 2});
    REQUIRE(r.deflation.deflated.size() == 1);
    CHECK(r.deflation.deflated[0].index == 1);
    CHECK(r.deflation.deflated[0].lambda == 2.0);
    CHECK(r.deflation.deflated[0].vec == Vector{0, 1, 0});
    CHECK(r.reduced.d == Vector{1, 3});
    CHECK(r.reduced.rho == 1.0);
  }
  SUBCASE("equal poles merge with a rotation") {
    const SecularProblem p{{1, 2, 2, 4}, {0.5, 0.6, 0.8, 0.3}, 1.0};
    const DeflationResult r = deflate(p);
    REQUIRE(r.deflation.rotations.size() == 1);
    REQUIRE(r.deflation.deflated.size() == 1);
    CHECK(r.deflation.deflated[0].lambda == doctest::Approx(2.0));
    CHECK(r.reduced.size() == 3);
    CHECK(std::abs(r.reduced.u[1]) == doctest::Approx(1.0));
    // the deflated pair is an exact eigenpair of the original problem
    const DenseMatrix a = oracle::rank_one_dense(p);
    const Vector& v = r.deflation.deflated[0].vec;
    const Vector av = multiply(a, v);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(av[i] - 2.0 * v[i]) <= 1e-15);
    CHECK(std::abs(norm2(v) - 1.0) <= 1e-15);
  }
  SUBCASE("tiny weights deflate") {
    oracle::Rng rng(3);
    SecularProblem p = oracle::random_deflated(10, 1.0, rng);
    for (std::size_t i = 0; i < 10; i += 2) p.u[i] = 1e-16;
    const DeflationResult r = deflate(p);
    CHECK(r.reduced.size() == 5);
    CHECK(r.deflation.deflated.size() == 5);
    for (const auto& dp : r.deflation.deflated) CHECK(dp.index % 2 == 0);
    // eigenvalues of the full problem are the union, to within the dropped weights
    Vector all(r.reduced.d.size());
    all = secular_roots(r.reduced, SolverScheme::Hybrid);
    for (const auto& dp : r.deflation.deflated) all.push_back(dp.lambda);
    std::sort(all.begin(), all.end());
    const Vector want = sorted_eigs(oracle::rank_one_dense(p));
    for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(all[i] - want[i]) <= 1e-13);
  }
  SUBCASE("negligible rho deflates everything") {
    const DeflationResult r = deflate({{1, 2}, {1, 1}, 1e-20});
    CHECK(r.reduced.size() == 0);
    CHECK(r.deflation.deflated.size() == 2);
  }
  SUBCASE("unsorted poles are rejected") {
    CHECK(error_of([] { deflate({{2, 1}, {1, 1}, 1}); }) == Errc::InvalidInput);
  }
}
