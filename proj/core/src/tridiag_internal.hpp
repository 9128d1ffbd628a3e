#pragma once

// Householder tridiagonalization with the reflectors kept, so the
// orthogonal factor can be applied in blocked form instead of formed.

#include <cstddef>

#include "svdlab/matrix.hpp"

namespace svdlab::detail {

struct HouseholderTridiag {
  DenseMatrix v;  // reflector c in column c, rows c+1..n-1
  Vector beta;    // H_c = I - beta_c v_c v_c^T; beta 0 means identity
  TridiagonalMatrix t;
};

HouseholderTridiag householder_tridiag(const SymmetricMatrix& a);

/// x <- Q x with Q = H_0 H_1 ... H_{n-3}.
void apply_q(const HouseholderTridiag& h, DenseMatrix& x);

DenseMatrix form_q(const HouseholderTridiag& h);

}  // namespace svdlab::detail
