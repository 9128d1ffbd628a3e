#include "svdlab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kernels.hpp"
#include "svdlab/errors.hpp"

namespace svdlab {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(Errc::NonFinite, std::string(what) + " has a non-finite entry");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<Vector>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(Errc::DimensionMismatch, "ragged row list");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j) {
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  }
  return t;
}

double DenseMatrix::frobenius_norm() const { return norm2(data_); }

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

SymmetricMatrix::SymmetricMatrix(DenseMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw Error(Errc::DimensionMismatch, "symmetric matrix must be square with n >= 1");
  }
  require_finite({m_.data(), m_.rows() * m_.cols()}, "matrix");
  const std::size_t n = m_.rows();
  const double scale = m_.max_abs();
  double asym = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) asym = std::max(asym, std::abs(m_(i, j) - m_(j, i)));
  }
  if (asym > 1e-12 * scale) {
    throw Error(Errc::NotSymmetric, "max |a_ij - a_ji| = " + std::to_string(asym));
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) m_(j, i) = m_(i, j);
  }
}

SymmetricMatrix SymmetricMatrix::from_rows(const std::vector<Vector>& rows) {
  return SymmetricMatrix(DenseMatrix::from_rows(rows));
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  return SymmetricMatrix(DenseMatrix::identity(n));
}

TridiagonalMatrix::TridiagonalMatrix(Vector diag_in, Vector sub_in)
    : diag(std::move(diag_in)), sub(std::move(sub_in)) {
  if (diag.empty() || sub.size() + 1 != diag.size()) {
    throw Error(Errc::LengthMismatch, "tridiagonal needs n >= 1 diagonal and n-1 subdiagonal entries");
  }
  require_finite(diag, "diagonal");
  require_finite(sub, "subdiagonal");
}

DenseMatrix TridiagonalMatrix::dense() const {
  const std::size_t n = diag.size();
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    m(i + 1, i) = sub[i];
    m(i, i + 1) = sub[i];
  }
  return m;
}

double TridiagonalMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double d : diag) s += d * d;
  for (double e : sub) s += 2.0 * e * e;
  return std::sqrt(s);
}

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
  std::vector<bool> seen(map_.size(), false);
  for (std::size_t idx : map_) {
    if (idx >= map_.size() || seen[idx]) throw Error(Errc::InvalidInput, "not a permutation");
    seen[idx] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return Permutation(std::move(m));
}

Permutation Permutation::sorting(std::span<const double> keys) {
  std::vector<std::size_t> m(keys.size());
  std::iota(m.begin(), m.end(), std::size_t{0});
  std::stable_sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
  return Permutation(std::move(inv));
}

Vector Permutation::apply(std::span<const double> v) const {
  if (v.size() != map_.size()) throw Error(Errc::LengthMismatch, "permutation/vector length");
  Vector out(v.size());
  for (std::size_t i = 0; i < map_.size(); ++i) out[i] = v[map_[i]];
  return out;
}

DenseMatrix Permutation::apply_to_columns(const DenseMatrix& m) const {
  if (m.cols() != map_.size()) throw Error(Errc::LengthMismatch, "permutation/column count");
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < map_.size(); ++j) {
    std::copy_n(m.col(map_[j]).data(), m.rows(), out.col(j).data());
  }
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::DimensionMismatch, "multiply: inner dimensions");
  DenseMatrix c(a.rows(), b.cols());
  if (c.empty() || a.cols() == 0) return c;
  kernels::gemm_nn_acc(a.rows(), b.cols(), a.cols(), a.data(), a.rows(), b.data(), b.rows(),
                       c.data(), c.rows());
  return c;
}

DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw Error(Errc::DimensionMismatch, "multiply_tn: inner dimensions");
  DenseMatrix c(a.cols(), b.cols());
  if (c.empty() || a.rows() == 0) return c;
  kernels::gemm_tn(a.cols(), b.cols(), a.rows(), a.data(), a.rows(), b.data(), b.rows(), c.data(),
                   c.rows());
  return c;
}

DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b) {
  return multiply(a, b.transposed());
}

Vector multiply(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(Errc::DimensionMismatch, "matrix-vector: inner dimensions");
  Vector y(a.rows(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j) kernels::axpy(x[j], a.col(j).data(), y.data(), a.rows());
  return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::LengthMismatch, "dot");
  return kernels::dot(x.data(), y.data(), x.size());
}

double norm2(std::span<const double> x) {
  double ss = 0.0;
#pragma omp simd reduction(+ : ss)
  for (std::size_t i = 0; i < x.size(); ++i) ss += x[i] * x[i];
  if (ss > 1e-280 && ss < 1e280) return std::sqrt(ss);
  // Scaled accumulation so tiny and huge entries neither underflow nor overflow.
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : x) {
    const double r = v / scale;
    s += r * r;
  }
  return scale * std::sqrt(s);
}

double orthogonality_defect(const DenseMatrix& q) {
  const DenseMatrix g = multiply_tn(q, q);
  double d = 0.0;
  for (std::size_t j = 0; j < g.cols(); ++j) {
    for (std::size_t i = 0; i < g.rows(); ++i) {
      d = std::max(d, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    }
  }
  return d;
}

double reconstruction_residual(const SymmetricMatrix& a, const SvdResult& r) {
  const std::size_t n = a.n();
  if (r.u.rows() != n || r.v.rows() != n || r.sigma.size() != r.u.cols()) {
    throw Error(Errc::DimensionMismatch, "svd result does not match matrix");
  }
  DenseMatrix us = r.u;
  for (std::size_t j = 0; j < us.cols(); ++j) {
    for (double& x : us.col(j)) x *= r.sigma[j];
  }
  DenseMatrix diff = multiply_nt(us, r.v);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) diff(i, j) -= a(i, j);
  }
  const double na = a.frobenius_norm();
  const double nd = diff.frobenius_norm();
  return na > 0.0 ? nd / na : nd;
}

double reconstruction_residual(const DenseMatrix& a, const EigResult& r) {
  DenseMatrix xl = r.x;
  for (std::size_t j = 0; j < xl.cols(); ++j) {
    for (double& x : xl.col(j)) x *= r.lambda[j];
  }
  DenseMatrix diff = multiply_nt(xl, r.x);
  if (diff.rows() != a.rows() || diff.cols() != a.cols()) {
    throw Error(Errc::DimensionMismatch, "eig result does not match matrix");
  }
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) diff(i, j) -= a(i, j);
  }
  const double na = a.frobenius_norm();
  const double nd = diff.frobenius_norm();
  return na > 0.0 ? nd / na : nd;
}

}  // namespace svdlab
