#pragma once

#include <cstddef>
#include <functional>

#include "svdlab/matrix.hpp"

namespace svdlab {

/// Upper bidiagonal: diag[i] = b(i,i), super[i] = b(i,i+1).
struct BidiagonalMatrix {
  Vector diag;
  Vector super;

  DenseMatrix dense() const;
};

struct RotResult {
  double c;
  double s;
  double r;
};

/// [c s; -s c] (f, g)^T = (r, 0)^T. f == 0 gives (0, 1, g).
RotResult rot(double f, double g);

struct Bidiagonalization {
  DenseMatrix u1;
  BidiagonalMatrix b;
  DenseMatrix v1;
};

/// Householder bidiagonalization: U1^T A V1 = B. Columns or rows whose
/// trailing part is already zero get no reflector.
Bidiagonalization bidiagonalize(const SymmetricMatrix& a);

struct GkSweepStats {
  std::size_t sweep;
  double super_abs_sum;  // sum of |super| over the whole bidiagonal
  double frobenius;      // of the whole bidiagonal
};

struct GkConfig {
  // Zeroing a superdiagonal entry perturbs the reconstruction by its size,
  // so the split threshold sits near rounding level.
  double tol = 1e-15;
  std::size_t max_iter = 0;  // 0 means 30 * n^2 sweeps
  std::function<void(const GkSweepStats&)> on_sweep;
};

/// Bidiagonalization followed by unshifted (zero-shift) chasing with
/// splitting on negligible superdiagonal entries. Sigma = |diag| with the
/// matching V column negated for negative entries; sorted non-increasing.
SvdResult gk_svd(const SymmetricMatrix& a, const GkConfig& cfg = {});

}  // namespace svdlab
