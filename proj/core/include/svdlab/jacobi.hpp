#pragma once

#include <cstddef>
#include <functional>

#include "svdlab/matrix.hpp"
#include "svdlab/transforms.hpp"

namespace svdlab {

/// Snapshot of the rotated iterate taken before the first sweep (sweep = 0)
/// and after every completed sweep.
struct JacobiSweepStats {
  std::size_t sweep;
  std::size_t rotations;
  double off_norm;   // Frobenius norm of the off-diagonal part
  double trace;
  double frobenius;
};

struct JacobiConfig {
  double tol = 1e-12;  // stop once off_norm <= tol * ||A||_F
  std::size_t max_sweeps = 30;
  std::function<void(const JacobiSweepStats&)> on_sweep;
};

/// Rotation (c, s) with J = [[c, s], [-s, c]] such that J^T [[app, apq], [apq, aqq]] J
/// is diagonal; the tangent is the smaller root, sign(0) = 1.
GivensPair jacobi_rotation(double app, double aqq, double apq);

/// Cyclic-by-row two-sided Jacobi. Eigenvalues are the diagonal of the final
/// iterate in original index order (unsorted, signed).
EigResult jacobi_eig(const SymmetricMatrix& a, const JacobiConfig& cfg = {});

/// Two-sided Jacobi SVD: sigma_k = |A(k,k)|, U = Q, v_k = sign(A(k,k)) u_k,
/// sorted non-increasing. Throws NoConvergence when max_sweeps is exhausted.
SvdResult jacobi_svd(const SymmetricMatrix& a, const JacobiConfig& cfg = {});

}  // namespace svdlab
