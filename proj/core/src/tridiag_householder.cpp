#include <algorithm>

#include "kernels.hpp"
#include "svdlab/transforms.hpp"
#include "tridiag_internal.hpp"

namespace svdlab::detail {

namespace {

constexpr std::size_t kPanel = 32;
constexpr std::size_t kCrossover = 128;
constexpr std::size_t kUpdateCols = 64;
constexpr std::size_t kApplyBlock = 96;

// Turns x into a reflector vector; returns beta, 0 when x(1:) is already 0.
double make_reflector(double* x, std::size_t m, double& sub) {
  bool aligned = true;
  for (std::size_t i = 1; i < m; ++i) aligned = aligned && x[i] == 0.0;
  if (aligned) {
    sub = x[0];
    x[0] = 0.0;
    return 0.0;
  }
  Householder h = houszero({x, m});
  double uu = 0.0;
  for (double v : h.u) uu += v * v;
  sub = h.sigma;
  std::copy(h.u.begin(), h.u.end(), x);
  return 2.0 / uu;
}

// w = S u for the m x m symmetric block at (off, off), lower triangle only.
void symv_lower(const double* a, std::size_t lda, std::size_t off, std::size_t m, const double* u, double* w) {
  std::fill_n(w, m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double* col = a + off + (off + j) * lda;
    const double uj = u[j];
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t i = j + 1; i < m; ++i) {
      w[i] += col[i] * uj;
      acc += col[i] * u[i];
    }
    w[j] += col[j] * uj + acc;
  }
}

// Panel of nb columns starting at k (LAPACK's latrd scheme). On return the
// panel columns hold their reflectors and w holds the matching W columns;
// the trailing block is not yet updated.
void reduce_panel(double* a, std::size_t n, std::size_t k, std::size_t nb, Vector& beta, Vector& e, double* w) {
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t c = k + i;
    double* col = a + c * n;
    for (std::size_t q = 0; q < i; ++q) {
      kernels::axpy(-w[c + q * n], a + c + (k + q) * n, col + c, n - c);
      kernels::axpy(-a[c + (k + q) * n], w + c + q * n, col + c, n - c);
    }
    const std::size_t m = n - c - 1;
    double* u = col + c + 1;
    double* wi = w + c + 1 + i * n;
    beta[c] = make_reflector(u, m, e[c]);
    if (beta[c] == 0.0) {
      std::fill_n(wi, m, 0.0);
      continue;
    }
    symv_lower(a, n, c + 1, m, u, wi);
    for (std::size_t q = 0; q < i; ++q) {
      const double* vq = a + c + 1 + (k + q) * n;
      const double* wq = w + c + 1 + q * n;
      const double t1 = kernels::dot(wq, u, m);
      const double t2 = kernels::dot(vq, u, m);
      kernels::axpy(-t1, vq, wi, m);
      kernels::axpy(-t2, wq, wi, m);
    }
    const double b = beta[c];
    for (std::size_t r = 0; r < m; ++r) wi[r] *= b;
    const double alpha = -0.5 * b * kernels::dot(wi, u, m);
    kernels::axpy(alpha, u, wi, m);
  }
}

// One column at a time with an immediate rank-two update, for the tail.
void reduce_unblocked(double* a, std::size_t n, std::size_t k0, Vector& beta, Vector& e) {
  Vector p(n), w(n);
  for (std::size_t k = k0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    double* u = a + k + 1 + k * n;
    beta[k] = make_reflector(u, m, e[k]);
    if (beta[k] == 0.0) continue;
    const double b = beta[k];
    symv_lower(a, n, k + 1, m, u, p.data());
    double pu = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      p[i] *= b;
      pu += p[i] * u[i];
    }
    const double kappa = 0.5 * b * pu;
    for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - kappa * u[i];
    for (std::size_t j = 0; j < m; ++j) {
      double* col = a + (k + 1) + (k + 1 + j) * n;
      const double wj = w[j];
      const double uj = u[j];
      const double* ww = w.data();
      for (std::size_t i = j; i < m; ++i) col[i] -= u[i] * wj + ww[i] * uj;
    }
  }
}

// Reflectors [b0, b1) applied to columns [c0, n) of x.
void apply_block(const HouseholderTridiag& h, std::size_t b0, std::size_t b1, DenseMatrix& x, std::size_t c0) {
  const std::size_t n = h.v.rows();
  const std::size_t r0 = b0 + 1;
  const std::size_t m = n - r0;
  const std::size_t nb = b1 - b0;
  const std::size_t ncols = x.cols() - c0;
  if (ncols == 0) return;
  DenseMatrix v(m, nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t c = b0 + i;
    std::copy_n(h.v.data() + (c + 1) + c * n, n - c - 1, v.col(i).data() + (c + 1 - r0));
  }
  // Forward column-wise T with H_b0 ... H_b1-1 = I - V T V^T.
  DenseMatrix t(nb, nb);
  Vector z(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const double b = h.beta[b0 + i];
    t(i, i) = b;
    if (b == 0.0 || i == 0) continue;
    for (std::size_t q = 0; q < i; ++q) z[q] = kernels::dot(v.col(q).data(), v.col(i).data(), m);
    for (std::size_t r = 0; r < i; ++r) {
      double s = 0.0;
      for (std::size_t q = r; q < i; ++q) s += t(r, q) * z[q];
      t(r, i) = -b * s;
    }
  }
  DenseMatrix y(nb, ncols), ty(nb, ncols);
  double* xb = x.data() + r0 + c0 * n;
  kernels::gemm(true, false, nb, ncols, m, 1.0, v.data(), m, xb, n, y.data(), nb);
  kernels::gemm(false, false, nb, ncols, nb, 1.0, t.data(), nb, y.data(), nb, ty.data(), nb);
  kernels::gemm(false, false, m, ncols, nb, -1.0, v.data(), m, ty.data(), nb, xb, n);
}

template <class ColumnStart>
void apply_all(const HouseholderTridiag& h, DenseMatrix& x, ColumnStart&& start) {
  const std::size_t n = h.v.rows();
  if (n < 3) return;
  const std::size_t nref = n - 2;
  for (std::size_t b0 = ((nref - 1) / kApplyBlock) * kApplyBlock;; b0 -= kApplyBlock) {
    apply_block(h, b0, std::min(b0 + kApplyBlock, nref), x, start(b0));
    if (b0 == 0) break;
  }
}

}  // namespace

HouseholderTridiag householder_tridiag(const SymmetricMatrix& s) {
  const std::size_t n = s.n();
  DenseMatrix a = s.dense();
  Vector beta(n, 0.0), d(n), e(n > 0 ? n - 1 : 0);
  double* p = a.data();
  std::size_t k = 0;
  if (n > kCrossover) {
    DenseMatrix w(n, kPanel);
    while (n - k > kCrossover) {
      const std::size_t nb = kPanel;
      reduce_panel(p, n, k, nb, beta, e, w.data());
      // Trailing lower triangle -= V W^T + W V^T, one column block at a time.
      for (std::size_t jb = k + nb; jb < n; jb += kUpdateCols) {
        const std::size_t je = std::min(jb + kUpdateCols, n);
        double* cblk = p + jb + jb * n;
        kernels::gemm(false, true, n - jb, je - jb, nb, -1.0, p + jb + k * n, n, w.data() + jb, n, cblk, n);
        kernels::gemm(false, true, n - jb, je - jb, nb, -1.0, w.data() + jb, n, p + jb + k * n, n, cblk, n);
      }
      k += nb;
    }
  }
  reduce_unblocked(p, n, k, beta, e);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  if (n >= 2) e[n - 2] = a(n - 1, n - 2);
  return {std::move(a), std::move(beta), TridiagonalMatrix(std::move(d), std::move(e))};
}

void apply_q(const HouseholderTridiag& h, DenseMatrix& x) {
  apply_all(h, x, [](std::size_t) { return std::size_t{0}; });
}

DenseMatrix form_q(const HouseholderTridiag& h) {
  DenseMatrix q = DenseMatrix::identity(h.v.rows());
  // Applied last-to-first, columns up to b0 are still unit vectors that the
  // block cannot touch.
  apply_all(h, q, [](std::size_t b0) { return b0 + 1; });
  return q;
}

}  // namespace svdlab::detail
