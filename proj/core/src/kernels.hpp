#pragma once

// Internal dense kernels shared by the algorithm modules. Column-major,
// leading dimension passed explicitly so sub-blocks can be addressed in place.

#include <cstddef>

namespace svdlab::kernels {

/// C(m x n) += alpha * op(A) * op(B), op(X) = X^T when the flag is set.
void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, double alpha,
          const double* a, std::size_t lda, const double* b, std::size_t ldb, double* c, std::size_t ldc);

/// C(m x n) += A(m x k) * B(k x n)
void gemm_nn_acc(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                 const double* b, std::size_t ldb, double* c, std::size_t ldc);

/// C(m x n) = A(k x m)^T * B(k x n)
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc);

/// Plane rotation of two contiguous vectors:
///   x <- c*x + s*y,  y <- -s*x + c*y
inline void rotate(double* __restrict x, double* __restrict y, std::size_t n, double c,
                   double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - s * xi;
  }
}

inline double dot(const double* __restrict x, const double* __restrict y, std::size_t n) {
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

inline void axpy(double alpha, const double* __restrict x, double* __restrict y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace svdlab::kernels
