#pragma once

#include <cstddef>

#include "svdlab/matrix.hpp"

namespace svdlab {

struct HestenesConfig {
  double tol = 1e-12;  // |<w_p, w_q>| <= tol * ||w_p|| * ||w_q|| counts as orthogonal
  std::size_t max_sweeps = 30;
};

/// One-sided Jacobi: right rotations orthogonalize the columns of W = A V;
/// sigma_i = ||w_i||, U = W Sigma^-1 with Gram-Schmidt completion for
/// columns whose sigma_i <= n * eps * sigma_max.
SvdResult hestenes_svd(const SymmetricMatrix& a, const HestenesConfig& cfg = {});

}  // namespace svdlab
