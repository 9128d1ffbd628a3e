#include "svdlab/golub_kahan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kernels.hpp"
#include "svdlab/errors.hpp"
#include "svdlab/jacobi.hpp"
#include "svdlab/transforms.hpp"

namespace svdlab {

DenseMatrix BidiagonalMatrix::dense() const {
  const std::size_t n = diag.size();
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = super[i];
  return m;
}

RotResult rot(double f, double g) {
  if (f == 0.0) return {0.0, 1.0, g};
  if (std::abs(f) > std::abs(g)) {
    const double t = g / f;
    const double tt = std::sqrt(1.0 + t * t);
    const double c = 1.0 / tt;
    return {c, t * c, tt * f};
  }
  const double t = f / g;
  const double tt = std::sqrt(1.0 + t * t);
  const double s = 1.0 / tt;
  return {t * s, s, tt * g};
}

namespace {

// rows [r0, r1) of columns [c0, c1) of m <- H * block, H = I - beta u u^T
void reflect_left(DenseMatrix& m, std::size_t r0, std::size_t c0, std::size_t c1, const Vector& u,
                  double beta) {
  const std::size_t len = u.size();
  for (std::size_t j = c0; j < c1; ++j) {
    double* col = m.col(j).data() + r0;
    const double w = beta * kernels::dot(u.data(), col, len);
    kernels::axpy(-w, u.data(), col, len);
  }
}

// rows [r0, rows) of columns [c0, c0 + len) of m <- block * H
void reflect_right(DenseMatrix& m, std::size_t r0, std::size_t c0, const Vector& u, double beta) {
  const std::size_t rows = m.rows() - r0;
  Vector y(rows, 0.0);
  for (std::size_t j = 0; j < u.size(); ++j) kernels::axpy(u[j], m.col(c0 + j).data() + r0, y.data(), rows);
  for (std::size_t j = 0; j < u.size(); ++j) {
    kernels::axpy(-beta * u[j], y.data(), m.col(c0 + j).data() + r0, rows);
  }
}

bool trailing_zero(std::span<const double> x) {
  return std::all_of(x.begin() + 1, x.end(), [](double v) { return v == 0.0; });
}

double beta_of(const Vector& u) {
  double uu = 0.0;
  for (double v : u) uu += v * v;
  return 2.0 / uu;
}

// Closed-form SVD of the 2x2 block at (i, i+1): a left symmetrizing rotation
// followed by one symmetric Jacobi rotation.
void solve_2x2(Vector& d, Vector& e, std::size_t i, DenseMatrix& u, DenseMatrix& v) {
  const double a = d[i], b = e[i], c = 0.0, dd = d[i + 1];
  double cp = 1.0, sp = 0.0;
  const double num = c - b;
  const double den = a + dd;
  const double rr = std::hypot(num, den);
  if (rr != 0.0) {
    cp = den / rr;
    sp = num / rr;
  }
  // S = P M, symmetric.
  const double x = cp * a + sp * c;
  const double y = cp * b + sp * dd;
  const double z = -sp * b + cp * dd;
  const auto [cj, sj] = jacobi_rotation(x, z, y);
  const double cl = cj * cp + sj * sp;
  const double sl = cj * sp - sj * cp;
  // B' = L M J with L = [[cl, sl], [-sl, cl]], J = [[cj, sj], [-sj, cj]].
  const double lm00 = cl * a + sl * c;
  const double lm01 = cl * b + sl * dd;
  const double lm10 = -sl * a + cl * c;
  const double lm11 = -sl * b + cl * dd;
  d[i] = lm00 * cj - lm01 * sj;
  d[i + 1] = lm10 * sj + lm11 * cj;
  e[i] = 0.0;
  const std::size_t n = u.rows();
  kernels::rotate(u.col(i).data(), u.col(i + 1).data(), n, cl, sl);
  kernels::rotate(v.col(i).data(), v.col(i + 1).data(), v.rows(), cj, -sj);
}

// One zero-shift sweep over the unreduced block [lo, hi].
void chase(Vector& d, Vector& e, std::size_t lo, std::size_t hi, DenseMatrix& u, DenseMatrix& v) {
  const std::size_t n = u.rows();
  double bulge = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double f = i == lo ? d[i] : e[i - 1];
    const double g = i == lo ? e[i] : bulge;
    const auto [c, s, r] = rot(f, g);
    if (i > lo) e[i - 1] = r;
    const double di = d[i];
    const double ei = e[i];
    d[i] = c * di + s * ei;
    e[i] = c * ei - s * di;
    const double low = s * d[i + 1];
    d[i + 1] *= c;
    kernels::rotate(v.col(i).data(), v.col(i + 1).data(), n, c, s);

    const auto [c2, s2, r2] = rot(d[i], low);
    d[i] = r2;
    const double ei2 = e[i];
    e[i] = c2 * ei2 + s2 * d[i + 1];
    d[i + 1] = c2 * d[i + 1] - s2 * ei2;
    if (i + 1 < hi) {
      bulge = s2 * e[i + 1];
      e[i + 1] *= c2;
    }
    kernels::rotate(u.col(i).data(), u.col(i + 1).data(), n, c2, s2);
  }
}

}  // namespace

Bidiagonalization bidiagonalize(const SymmetricMatrix& input) {
  const std::size_t n = input.n();
  DenseMatrix a = input.dense();
  DenseMatrix u1 = DenseMatrix::identity(n);
  DenseMatrix v1 = DenseMatrix::identity(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::span<const double> x(a.col(k).data() + k, n - k);
    if (!trailing_zero(x)) {
      const Householder h = houszero(x);
      const double beta = beta_of(h.u);
      reflect_left(a, k, k + 1, n, h.u, beta);
      a(k, k) = h.sigma;
      for (std::size_t i = k + 1; i < n; ++i) a(i, k) = 0.0;
      reflect_right(u1, 0, k, h.u, beta);
    }
    if (k + 2 < n) {
      Vector row(n - k - 1);
      for (std::size_t j = k + 1; j < n; ++j) row[j - k - 1] = a(k, j);
      if (!trailing_zero(row)) {
        const Householder h = houszero(row);
        const double beta = beta_of(h.u);
        reflect_right(a, k + 1, k + 1, h.u, beta);
        a(k, k + 1) = h.sigma;
        for (std::size_t j = k + 2; j < n; ++j) a(k, j) = 0.0;
        reflect_right(v1, 0, k + 1, h.u, beta);
      }
    }
  }
  BidiagonalMatrix b{Vector(n), Vector(n - 1)};
  for (std::size_t i = 0; i < n; ++i) b.diag[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) b.super[i] = a(i, i + 1);
  return {std::move(u1), std::move(b), std::move(v1)};
}

SvdResult gk_svd(const SymmetricMatrix& a, const GkConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error(Errc::InvalidInput, "gk config");
  const std::size_t n = a.n();
  auto [u, b, v] = bidiagonalize(a);
  Vector& d = b.diag;
  Vector& e = b.super;
  const std::size_t max_iter = cfg.max_iter ? cfg.max_iter : 30 * n * n;

  double scale = 0.0;
  for (double x : d) scale = std::max(scale, std::abs(x));
  for (double x : e) scale = std::max(scale, std::abs(x));
  const double floor = kEps * scale;

  auto report = [&](std::size_t sweep) {
    if (!cfg.on_sweep) return;
    double sum = 0.0, fro = 0.0;
    for (double x : e) {
      sum += std::abs(x);
      fro += x * x;
    }
    for (double x : d) fro += x * x;
    cfg.on_sweep({sweep, sum, std::sqrt(fro)});
  };
  report(0);

  std::size_t sweeps = 0;
  while (n > 1) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(e[i]) <= std::max(cfg.tol * (std::abs(d[i]) + std::abs(d[i + 1])), floor)) {
        e[i] = 0.0;
      }
    }
    std::size_t hi = n - 1;
    while (hi > 0 && e[hi - 1] == 0.0) --hi;
    if (hi == 0) break;
    std::size_t lo = hi - 1;
    while (lo > 0 && e[lo - 1] != 0.0) --lo;
    if (hi - lo == 1) {
      solve_2x2(d, e, lo, u, v);
      continue;
    }
    if (sweeps == max_iter) {
      throw NoConvergence(sweeps, "gk: superdiagonal not negligible after " + std::to_string(sweeps) +
                                      " sweeps");
    }
    chase(d, e, lo, hi, u, v);
    ++sweeps;
    report(sweeps);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] < 0.0) {
      d[i] = -d[i];
      for (double& x : v.col(i)) x = -x;
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });
  const Permutation p(std::move(order));
  return {p.apply_to_columns(u), p.apply(d), p.apply_to_columns(v)};
}

}  // namespace svdlab
