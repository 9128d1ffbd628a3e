#include "svdlab/tridiag_qr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kernels.hpp"
#include "svdlab/errors.hpp"
#include "svdlab/transforms.hpp"
#include "tridiag_internal.hpp"

namespace svdlab {

namespace {

Tridiagonalization givens_reduce(const SymmetricMatrix& input) {
  const std::size_t n = input.n();
  DenseMatrix a = input.dense();
  DenseMatrix q = DenseMatrix::identity(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    for (std::size_t i = n - 1; i >= k + 2; --i) {
      if (a(i, k) == 0.0) continue;
      const std::size_t r = i - 1;
      const auto [c, s] = givens(a(r, k), a(i, k));
      // A <- G^T A G on indices (r, i).
      for (std::size_t j = 0; j < n; ++j) {
        const double x = a(r, j), y = a(i, j);
        a(r, j) = c * x - s * y;
        a(i, j) = s * x + c * y;
      }
      kernels::rotate(a.col(r).data(), a.col(i).data(), n, c, -s);
      a(i, k) = 0.0;
      a(k, i) = 0.0;
      kernels::rotate(q.col(r).data(), q.col(i).data(), n, c, -s);
    }
  }
  Vector d(n), e(n - 1);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = 0.5 * (a(i + 1, i) + a(i, i + 1));
  return {std::move(q), TridiagonalMatrix(std::move(d), std::move(e))};
}

struct BlockNorms {
  double trace;
  double fro;
};

BlockNorms block_norms(const Vector& d, const Vector& e, std::size_t lo, std::size_t hi) {
  double tr = 0.0, f = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    tr += d[i];
    f += d[i] * d[i];
  }
  for (std::size_t i = lo; i < hi; ++i) f += 2.0 * e[i] * e[i];
  return {tr, std::sqrt(f)};
}

// One implicit shifted step on block [lo, hi]. Reverse = true is the QL step,
// run as the QR step on the index-reversed block.
template <bool Reverse>
double implicit_step(Vector& d, Vector& e, std::size_t lo, std::size_t hi, DenseMatrix& z) {
  const std::size_t m = hi - lo;
  auto di = [&](std::size_t j) -> double& { return d[Reverse ? hi - j : lo + j]; };
  auto ei = [&](std::size_t j) -> double& { return e[Reverse ? hi - j - 1 : lo + j]; };
  auto col = [&](std::size_t j) { return z.col(Reverse ? hi - j : lo + j).data(); };
  const std::size_t rows = z.rows();

  const double mu = wilkinson_shift(di(m - 1), di(m), ei(m - 1));
  double x = di(0) - mu;
  double zz = ei(0);
  double bulge = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const auto [c, s] = givens(x, zz);
    if (j > 0) ei(j - 1) = c * ei(j - 1) - s * bulge;
    const double a = di(j);
    const double b = ei(j);
    const double dd = di(j + 1);
    const double cc = c * c, ss = s * s, cs = c * s;
    di(j) = cc * a - 2.0 * cs * b + ss * dd;
    di(j + 1) = ss * a + 2.0 * cs * b + cc * dd;
    ei(j) = cs * (a - dd) + (cc - ss) * b;
    if (j + 1 < m) {
      bulge = -s * ei(j + 1);
      ei(j + 1) *= c;
    }
    kernels::rotate(col(j), col(j + 1), rows, c, -s);
    x = ei(j);
    zz = bulge;
  }
  return mu;
}

}  // namespace

Tridiagonalization tridiagonalize(const SymmetricMatrix& a, Reduction method) {
  if (method == Reduction::Givens) return givens_reduce(a);
  detail::HouseholderTridiag h = detail::householder_tridiag(a);
  return {detail::form_q(h), std::move(h.t)};
}

double wilkinson_shift(double prev_diag, double last_diag, double last_sub) {
  if (last_sub == 0.0) return last_diag;
  const double d = 0.5 * (prev_diag - last_diag);
  return last_diag - last_sub * last_sub / (d + sign_of(d) * std::hypot(d, last_sub));
}

double wilkinson_shift(const TridiagonalMatrix& t) {
  const std::size_t n = t.n();
  if (n < 2) throw Error(Errc::InvalidInput, "wilkinson_shift needs n >= 2");
  return wilkinson_shift(t.diag[n - 2], t.diag[n - 1], t.sub[n - 2]);
}

EigResult symmetric_qr_eig(const TridiagonalMatrix& t, const QrConfig& cfg) {
  return symmetric_qr_eig(t, DenseMatrix::identity(t.n()), cfg);
}

EigResult symmetric_qr_eig(const TridiagonalMatrix& t, DenseMatrix z, const QrConfig& cfg) {
  if (!(cfg.tol > 0.0) || cfg.max_iter_per_eig == 0) throw Error(Errc::InvalidInput, "qr config");
  const std::size_t n = t.n();
  if (z.cols() != n) throw Error(Errc::DimensionMismatch, "accumulator columns must equal t.n()");
  Vector d = t.diag;
  Vector e = t.sub;
  constexpr double kFloor = std::numeric_limits<double>::min();

  std::size_t since_deflation = 0;
  std::size_t zeros = 0;
  std::size_t block_lo = n, block_hi = n;
  bool block_ql = false;
  while (n > 1) {
    std::size_t now_zero = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (e[i] != 0.0 && std::abs(e[i]) <= std::max(cfg.tol * (std::abs(d[i]) + std::abs(d[i + 1])), kFloor)) {
        e[i] = 0.0;
      }
      if (e[i] == 0.0) ++now_zero;
    }
    if (now_zero != zeros) {
      zeros = now_zero;
      since_deflation = 0;
    }
    std::size_t hi = n - 1;
    while (hi > 0 && e[hi - 1] == 0.0) --hi;
    if (hi == 0) break;
    std::size_t lo = hi - 1;
    while (lo > 0 && e[lo - 1] != 0.0) --lo;

    if (lo != block_lo || hi != block_hi) {
      block_lo = lo;
      block_hi = hi;
      switch (cfg.branch) {
        case QrBranch::ForceQR: block_ql = false; break;
        case QrBranch::ForceQL: block_ql = true; break;
        case QrBranch::Auto: block_ql = !(std::abs(d[lo]) > std::abs(d[hi])); break;
      }
    }
    if (++since_deflation > cfg.max_iter_per_eig) {
      throw NoConvergence(block_ql ? lo : hi, "qr: no deflation within " +
                                                  std::to_string(cfg.max_iter_per_eig) +
                                                  " iterations on block [" + std::to_string(lo) +
                                                  ", " + std::to_string(hi) + "]");
    }
    BlockNorms before{};
    if (cfg.on_step) before = block_norms(d, e, lo, hi);
    const double mu = block_ql ? implicit_step<true>(d, e, lo, hi, z) : implicit_step<false>(d, e, lo, hi, z);
    if (cfg.on_step) {
      const BlockNorms after = block_norms(d, e, lo, hi);
      cfg.on_step({lo, hi, block_ql, mu, before.trace, after.trace, before.fro, after.fro});
    }
  }

  const Permutation p = Permutation::sorting(d);
  return {p.apply_to_columns(z), p.apply(d)};
}

SvdResult tridiag_qr_svd(const SymmetricMatrix& a, const QrConfig& cfg) {
  Tridiagonalization tri = tridiagonalize(a, cfg.reduction);
  return svd_from_eig(symmetric_qr_eig(tri.t, std::move(tri.q), cfg));
}

}  // namespace svdlab
