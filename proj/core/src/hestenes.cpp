#include "svdlab/hestenes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kernels.hpp"
#include "svdlab/errors.hpp"

namespace svdlab {

namespace {

// Orthonormal completion: fills column `target` of u with a unit vector
// orthogonal to every column listed in `basis`.
void complete_column(DenseMatrix& u, std::size_t target, const std::vector<std::size_t>& basis) {
  const std::size_t n = u.rows();
  Vector cand(n);
  for (std::size_t e = 0; e < n; ++e) {
    std::fill(cand.begin(), cand.end(), 0.0);
    cand[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t b : basis) {
        const double proj = kernels::dot(u.col(b).data(), cand.data(), n);
        kernels::axpy(-proj, u.col(b).data(), cand.data(), n);
      }
    }
    const double nrm = norm2(cand);
    if (nrm > 0.5) {
      for (std::size_t i = 0; i < n; ++i) u(i, target) = cand[i] / nrm;
      return;
    }
  }
  throw Error(Errc::InvalidInput, "hestenes: orthonormal completion failed");
}

}  // namespace

SvdResult hestenes_svd(const SymmetricMatrix& a, const HestenesConfig& cfg) {
  if (!(cfg.tol > 0.0) || cfg.max_sweeps == 0) throw Error(Errc::InvalidInput, "hestenes config");
  const std::size_t n = a.n();
  DenseMatrix w = a.dense();
  DenseMatrix v = DenseMatrix::identity(n);

  bool converged = false;
  for (std::size_t sweep = 0; sweep < cfg.max_sweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* wp = w.col(p).data();
        double* wq = w.col(q).data();
        const double alpha = kernels::dot(wp, wp, n);
        const double beta = kernels::dot(wq, wq, n);
        const double gamma = kernels::dot(wp, wq, n);
        const double scale = std::sqrt(alpha * beta);
        // Pairs below tol still get rotated on the last sweep, so the exit
        // orthogonality is quadratically below tol instead of at it.
        if (std::abs(gamma) > cfg.tol * scale) converged = false;
        if (std::abs(gamma) <= kEps * scale) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = sign_of(zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- A J, V <- V J with J(p,p) = J(q,q) = c, J(p,q) = s, J(q,p) = -s.
        kernels::rotate(wp, wq, n, c, -s);
        kernels::rotate(v.col(p).data(), v.col(q).data(), n, c, -s);
      }
    }
  }
  if (!converged) {
    throw NoConvergence(cfg.max_sweeps, "hestenes: columns not orthogonal after " +
                                            std::to_string(cfg.max_sweeps) + " sweeps");
  }

  Vector norms(n);
  for (std::size_t k = 0; k < n; ++k) norms[k] = norm2(w.col(k));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });
  const Permutation perm(order);

  SvdResult r{perm.apply_to_columns(w), perm.apply(norms), perm.apply_to_columns(v)};
  const double cutoff = static_cast<double>(n) * kEps * r.sigma.front();
  std::vector<std::size_t> good;
  std::vector<std::size_t> deficient;
  for (std::size_t k = 0; k < n; ++k) {
    if (r.sigma[k] > cutoff) {
      for (double& x : r.u.col(k)) x /= r.sigma[k];
      good.push_back(k);
    } else {
      deficient.push_back(k);
    }
  }
  for (std::size_t k : deficient) {
    complete_column(r.u, k, good);
    good.push_back(k);
  }
  return r;
}

}  // namespace svdlab
