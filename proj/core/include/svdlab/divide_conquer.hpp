#pragma once

#include <cstddef>
#include <functional>

#include "svdlab/matrix.hpp"
#include "svdlab/secular.hpp"
#include "svdlab/tridiag_qr.hpp"

namespace svdlab {

struct RankOneSplit {
  TridiagonalMatrix t1;
  TridiagonalMatrix t2;
  double rho;
  Vector v;
};

/// T = blkdiag(t1, t2) + rho v v^T with t1 the leading m rows.
/// Throws Errc::ZeroCoupling when the coupling entry is already zero.
RankOneSplit split_rank_one(const TridiagonalMatrix& t, std::size_t m);

/// Last row of q1 followed by the first row of q2.
Vector build_merge_weights(const DenseMatrix& q1, const DenseMatrix& q2);

/// What a merge saw and produced; poles and weights are in sorted order.
struct MergeInfo {
  std::size_t size;
  double rho;
  Vector d;
  Vector u;
  SecularProblem reduced;
  Vector roots;
  Vector deflated;
};

struct DcConfig {
  std::size_t cutoff = 25;
  SolverScheme scheme = SolverScheme::Hybrid;
  QrConfig leaf;
  /// Build eigenvectors from the Loewner-corrected weights (false uses u).
  bool correct_weights = true;
  /// Solve the two halves on separate threads; results are identical.
  bool parallel = false;
  std::function<void(const MergeInfo&)> on_merge;
};

EigResult dc_eig(const TridiagonalMatrix& t, const DcConfig& cfg);
EigResult dc_eig(const TridiagonalMatrix& t, std::size_t cutoff = 25, const QrConfig& cfg = {});

SvdResult dc_svd(const SymmetricMatrix& a, const DcConfig& cfg);
SvdResult dc_svd(const SymmetricMatrix& a, std::size_t cutoff = 25);

}  // namespace svdlab
