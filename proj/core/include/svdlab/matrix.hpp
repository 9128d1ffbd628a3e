#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace svdlab {

using Vector = std::vector<double>;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Tolerance used by every orthogonality and reconstruction claim in the
/// library: 64 * n * machine epsilon.
inline double orth_tol(std::size_t n) { return 64.0 * static_cast<double>(n) * kEps; }

/// sign with the sign(0) = 1 convention used throughout.
inline double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

/// Dense real matrix, column-major. Columns are contiguous so that plane
/// rotations of eigenvector columns stream through memory.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static DenseMatrix identity(std::size_t n);
  /// Builds from a list of rows (row-major nested input).
  static DenseMatrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i + j * rows_]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * rows_]; }

  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  DenseMatrix transposed() const;
  double frobenius_norm() const;
  double max_abs() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense n x n real symmetric matrix. Construction rejects inputs whose
/// asymmetry exceeds 1e-12 * max|a_ij|; accepted inputs are stored exactly
/// symmetric (the lower triangle is mirrored into the upper).
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(DenseMatrix entries);
  static SymmetricMatrix from_rows(const std::vector<Vector>& rows);
  static SymmetricMatrix identity(std::size_t n);

  std::size_t n() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  const DenseMatrix& dense() const noexcept { return m_; }
  double frobenius_norm() const { return m_.frobenius_norm(); }

 private:
  DenseMatrix m_;
};

/// Symmetric tridiagonal matrix: diag[i] = t(i,i), sub[i] = t(i+1,i).
struct TridiagonalMatrix {
  TridiagonalMatrix(Vector diag_in, Vector sub_in);

  std::size_t n() const noexcept { return diag.size(); }
  DenseMatrix dense() const;
  double frobenius_norm() const;

  Vector diag;
  Vector sub;
};

struct SvdResult {
  DenseMatrix u;
  Vector sigma;
  DenseMatrix v;
};

struct EigResult {
  DenseMatrix x;
  Vector lambda;
};

/// Bijection on {0..n-1}. Applying it gathers: out[i] = in[map[i]].
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> map);
  static Permutation identity(std::size_t n);
  /// Stable permutation that sorts `keys` ascending.
  static Permutation sorting(std::span<const double> keys);

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t operator[](std::size_t i) const noexcept { return map_[i]; }
  const std::vector<std::size_t>& map() const noexcept { return map_; }
  Permutation inverse() const;

  Vector apply(std::span<const double> v) const;
  /// Column gather: result column i = m column map[i].
  DenseMatrix apply_to_columns(const DenseMatrix& m) const;

 private:
  std::vector<std::size_t> map_;
};

// Products. Shapes are checked; mismatch throws Errc::DimensionMismatch.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// a^T * b
DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a * b^T
DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b);
Vector multiply(const DenseMatrix& a, std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

/// max |Q^T Q - I|
double orthogonality_defect(const DenseMatrix& q);
/// ||A - U diag(sigma) V^T||_F / ||A||_F (absolute when ||A||_F = 0).
double reconstruction_residual(const SymmetricMatrix& a, const SvdResult& r);
/// ||A - X diag(lambda) X^T||_F / ||A||_F.
double reconstruction_residual(const DenseMatrix& a, const EigResult& r);

}  // namespace svdlab
