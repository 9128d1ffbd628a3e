#pragma once

#include <cstddef>
#include <functional>

#include "svdlab/matrix.hpp"

namespace svdlab {

enum class Reduction { Householder, Givens };

/// Which chase direction to run on an unreduced block. Auto runs QR when
/// |first diagonal| > |last diagonal| and QL otherwise.
enum class QrBranch { Auto, ForceQR, ForceQL };

/// Reported after every implicit step on the active block [lo, hi].
struct QrStepInfo {
  std::size_t lo;
  std::size_t hi;
  bool ql;
  double shift;
  double trace_before;
  double trace_after;
  double fro_before;
  double fro_after;
};

struct QrConfig {
  // Same reasoning as the bidiagonal split: an entry set to zero is an
  // error of its own size, and the shifted iteration reaches this cheaply.
  double tol = 1e-15;
  std::size_t max_iter_per_eig = 40;
  Reduction reduction = Reduction::Householder;
  QrBranch branch = QrBranch::Auto;
  std::function<void(const QrStepInfo&)> on_step;
};

struct Tridiagonalization {
  DenseMatrix q;  // Q^T A Q = T
  TridiagonalMatrix t;
};

Tridiagonalization tridiagonalize(const SymmetricMatrix& a, Reduction method = Reduction::Householder);

/// Eigenvalue of the trailing 2x2 block closer to t(n,n); sign(0) = 1.
double wilkinson_shift(double prev_diag, double last_diag, double last_sub);
double wilkinson_shift(const TridiagonalMatrix& t);

/// Implicit Wilkinson-shifted QR/QL on a symmetric tridiagonal matrix.
/// Eigenvalues ascending; the eigenvector matrix is identity-seeded.
EigResult symmetric_qr_eig(const TridiagonalMatrix& t, const QrConfig& cfg = {});

/// Same iteration with the plane rotations accumulated into `z` (any row
/// count, t.n() columns), so a reduction basis can be carried through.
EigResult symmetric_qr_eig(const TridiagonalMatrix& t, DenseMatrix z, const QrConfig& cfg);

SvdResult tridiag_qr_svd(const SymmetricMatrix& a, const QrConfig& cfg = {});

}  // namespace svdlab
