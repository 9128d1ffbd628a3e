#pragma once

// Secular equation f(lambda) = 1 + rho * sum_i u_i^2 / (d_i - lambda) for the
// rank-one update D + rho u u^T, plus the deflation that prepares it and the
// eigenvector assembly that consumes its roots.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "svdlab/matrix.hpp"

namespace svdlab {

enum class SolverScheme { ApproachLeft, ApproachRight, MiddleWay, FixedWeight, Hybrid };

const char* to_string(SolverScheme s) noexcept;
/// Accepts left | right | middle | fixed | hybrid.
std::optional<SolverScheme> parse_scheme(std::string_view name);

struct SecularProblem {
  Vector d;    // poles
  Vector u;    // weights
  double rho;

  std::size_t size() const noexcept { return d.size(); }
};

/// Throws Errc::InvalidInput unless d is strictly ascending, every weight is
/// nonzero, rho != 0 and all entries are finite.
void require_deflated(const SecularProblem& p);

struct SecularValue {
  double f;
  double fprime;
  double psi;  // sum of the terms with d_i < lambda (each negative)
  double phi;  // sum of the terms with d_i > lambda (each positive)
};

/// Throws Errc::PoleEvaluation when lambda coincides with a pole.
SecularValue secular_eval(const SecularProblem& p, double lambda);

/// A root held in shifted form: lambda = base + tau, where base is the pole
/// d[origin] (or 0 when origin shifting is disabled). Gaps lambda - d_i are
/// formed as (base - d_i) + tau to avoid cancellation next to a pole.
struct SecularRoot {
  double lambda;
  double base;
  double tau;
  std::size_t origin;
  std::size_t iterations;
  SolverScheme scheme;  // scheme that produced the root (after any fallback)
};

inline double root_gap(const SecularProblem& p, const SecularRoot& r, std::size_t i) {
  return (r.base - p.d[i]) + r.tau;
}

struct SecularOptions {
  SolverScheme scheme = SolverScheme::Hybrid;
  double rtol = 0.0;  // 0 selects 4 * n * eps
  std::size_t max_iter = 100;
  bool shift_origin = true;
  /// Retry a root with MiddleWay when ApproachLeft/ApproachRight overshoot.
  bool fallback = false;
  /// Called with (root index, iteration, current approximation) for every
  /// model step, starting from the initial guess at iteration 0.
  std::function<void(std::size_t, std::size_t, double)> on_iterate;
};

/// Roots of a deflated problem in ascending order, one per interlacing
/// interval. Throws NoConvergence (where = root index) or Errc::SchemeFailure.
std::vector<SecularRoot> secular_solve(const SecularProblem& p, const SecularOptions& opt = {});

Vector secular_roots(const SecularProblem& p, SolverScheme scheme, double rtol = 0.0,
                     std::size_t max_iter = 100);

/// Weights for which the computed roots are exact eigenvalues of
/// D + rho * uhat * uhat^T (Loewner formula); signs follow u.
/// Throws Errc::InterlacingViolation when a radicand is clearly negative.
Vector corrected_weights(std::span<const double> d, std::span<const double> u,
                         std::span<const double> lambdas, double rho);
Vector corrected_weights(const SecularProblem& p, std::span<const SecularRoot> roots);

/// Column j = (lambda_j I - D)^{-1} uhat, normalized.
DenseMatrix secular_eigenvectors(std::span<const double> d, std::span<const double> uhat,
                                 std::span<const double> lambdas);
DenseMatrix secular_eigenvectors(const SecularProblem& p, std::span<const double> uhat,
                                 std::span<const SecularRoot> roots);

// --- deflation ------------------------------------------------------------

/// Plane rotation merging two (nearly) equal poles, applied to basis columns:
///   b_i <- c b_i - s b_j,  b_j <- s b_i + c b_j
/// after which the weight of i is zero.
struct DeflationRotation {
  std::size_t i;
  std::size_t j;
  double c;
  double s;
};

struct DeflatedPair {
  std::size_t index;
  double lambda;
  Vector vec;  // eigenvector of D + rho u u^T in the input coordinates
};

struct Deflation {
  std::vector<std::size_t> kept;
  std::vector<DeflatedPair> deflated;
  std::vector<DeflationRotation> rotations;
};

struct DeflationResult {
  SecularProblem reduced;
  Deflation deflation;
};

/// Deflates a problem whose poles are sorted ascending. dtol <= 0 selects
/// 8 * n * eps. Zero or negligible weights, merged poles and a negligible
/// rho all remove indices; rho itself is kept on the reduced problem.
DeflationResult deflate(const SecularProblem& p, double dtol = 0.0, bool with_vectors = true);

}  // namespace svdlab
