#include "kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>

namespace svdlab::kernels {

namespace {

#if defined(__AVX512F__)
constexpr std::size_t W = 8;
constexpr std::size_t NR = 12;
#elif defined(__AVX__)
constexpr std::size_t W = 4;
constexpr std::size_t NR = 6;
#else
constexpr std::size_t W = 2;
constexpr std::size_t NR = 6;
#endif
constexpr std::size_t MR = 2 * W;
constexpr std::size_t KC = 256;
constexpr std::size_t MC = MR * 12;
constexpr std::size_t NC = NR * 340;

typedef double vec __attribute__((vector_size(W * sizeof(double))));

inline vec load(const double* p) {
  vec v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

struct Buffers {
  double* a = nullptr;
  double* b = nullptr;
  Buffers()
      : a(static_cast<double*>(::operator new[](MC * KC * sizeof(double), std::align_val_t(64)))),
        b(static_cast<double*>(::operator new[](KC * NC * sizeof(double), std::align_val_t(64)))) {}
  ~Buffers() {
    ::operator delete[](a, std::align_val_t(64));
    ::operator delete[](b, std::align_val_t(64));
  }
  Buffers(const Buffers&) = delete;
  Buffers& operator=(const Buffers&) = delete;
};

Buffers& buffers() {
  thread_local Buffers buf;
  return buf;
}

// op(A) element (i, p): A(i, p) or A(p, i).
inline double at(const double* a, std::size_t ld, bool trans, std::size_t i, std::size_t p) {
  return trans ? a[p + i * ld] : a[i + p * ld];
}

// mc x kc block of op(A) into MR-row slivers, zero padded.
void pack_a(std::size_t mc, std::size_t kc, const double* a, std::size_t lda, bool trans, double* out) {
  for (std::size_t i0 = 0; i0 < mc; i0 += MR) {
    const std::size_t mr = std::min(MR, mc - i0);
    if (!trans && mr == MR) {
      for (std::size_t p = 0; p < kc; ++p) {
        std::memcpy(out, a + i0 + p * lda, MR * sizeof(double));
        out += MR;
      }
      continue;
    }
    if (trans) {
      // rows of op(A) are contiguous columns of A
      for (std::size_t i = 0; i < mr; ++i) {
        const double* src = a + (i0 + i) * lda;
        for (std::size_t p = 0; p < kc; ++p) out[p * MR + i] = src[p];
      }
      for (std::size_t i = mr; i < MR; ++i) {
        for (std::size_t p = 0; p < kc; ++p) out[p * MR + i] = 0.0;
      }
      out += kc * MR;
      continue;
    }
    for (std::size_t p = 0; p < kc; ++p) {
      for (std::size_t i = 0; i < mr; ++i) out[i] = at(a, lda, trans, i0 + i, p);
      for (std::size_t i = mr; i < MR; ++i) out[i] = 0.0;
      out += MR;
    }
  }
}

// kc x nc block of op(B) into NR-column slivers, zero padded.
void pack_b(std::size_t kc, std::size_t nc, const double* b, std::size_t ldb, bool trans, double* out) {
  for (std::size_t j0 = 0; j0 < nc; j0 += NR) {
    const std::size_t nr = std::min(NR, nc - j0);
    if (!trans) {
      const double* cols[NR];
      for (std::size_t j = 0; j < nr; ++j) cols[j] = b + (j0 + j) * ldb;
      for (std::size_t p = 0; p < kc; ++p) {
        for (std::size_t j = 0; j < nr; ++j) out[j] = cols[j][p];
        for (std::size_t j = nr; j < NR; ++j) out[j] = 0.0;
        out += NR;
      }
    } else {
      for (std::size_t p = 0; p < kc; ++p) {
        const double* row = b + j0 + p * ldb;
        for (std::size_t j = 0; j < nr; ++j) out[j] = row[j];
        for (std::size_t j = nr; j < NR; ++j) out[j] = 0.0;
        out += NR;
      }
    }
  }
}

// C(mr x nr) += alpha * packed A sliver * packed B sliver.
void micro(std::size_t kc, const double* __restrict pa, const double* __restrict pb, double alpha,
           double* c, std::size_t ldc, std::size_t mr, std::size_t nr) {
  vec acc0[NR], acc1[NR];
  for (std::size_t j = 0; j < NR; ++j) {
    acc0[j] = vec{} ;
    acc1[j] = vec{};
  }
  pa = static_cast<const double*>(__builtin_assume_aligned(pa, 64));
  pb = static_cast<const double*>(__builtin_assume_aligned(pb, 8));
  for (std::size_t p = 0; p < kc; ++p) {
    const vec a0 = load(pa);
    const vec a1 = load(pa + W);
#pragma GCC unroll 16
    for (std::size_t j = 0; j < NR; ++j) {
      const double bj = pb[j];
      acc0[j] += a0 * bj;
      acc1[j] += a1 * bj;
    }
    pa += MR;
    pb += NR;
  }
  if (mr == MR && nr == NR) {
#pragma GCC unroll 16
    for (std::size_t j = 0; j < NR; ++j) {
      double* cj = c + j * ldc;
      vec c0 = load(cj), c1 = load(cj + W);
      c0 += alpha * acc0[j];
      c1 += alpha * acc1[j];
      std::memcpy(cj, &c0, sizeof c0);
      std::memcpy(cj + W, &c1, sizeof c1);
    }
    return;
  }
  double tmp[MR];
  for (std::size_t j = 0; j < nr; ++j) {
    std::memcpy(tmp, &acc0[j], sizeof(vec));
    std::memcpy(tmp + W, &acc1[j], sizeof(vec));
    double* cj = c + j * ldc;
    for (std::size_t i = 0; i < mr; ++i) cj[i] += alpha * tmp[i];
  }
}

}  // namespace

void gemm(bool ta, bool tb, std::size_t m, std::size_t n, std::size_t k, double alpha, const double* a,
          std::size_t lda, const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  if (m == 0 || n == 0 || k == 0 || alpha == 0.0) return;
  Buffers& buf = buffers();
  for (std::size_t j0 = 0; j0 < n; j0 += NC) {
    const std::size_t nc = std::min(NC, n - j0);
    for (std::size_t p0 = 0; p0 < k; p0 += KC) {
      const std::size_t kc = std::min(KC, k - p0);
      const double* bblk = tb ? b + j0 + p0 * ldb : b + p0 + j0 * ldb;
      pack_b(kc, nc, bblk, ldb, tb, buf.b);
      for (std::size_t i0 = 0; i0 < m; i0 += MC) {
        const std::size_t mc = std::min(MC, m - i0);
        const double* ablk = ta ? a + p0 + i0 * lda : a + i0 + p0 * lda;
        pack_a(mc, kc, ablk, lda, ta, buf.a);
        for (std::size_t jr = 0; jr < nc; jr += NR) {
          const std::size_t nr = std::min(NR, nc - jr);
          for (std::size_t ir = 0; ir < mc; ir += MR) {
            const std::size_t mr = std::min(MR, mc - ir);
            micro(kc, buf.a + ir * kc, buf.b + jr * kc, alpha, c + (i0 + ir) + (j0 + jr) * ldc, ldc, mr, nr);
          }
        }
      }
    }
  }
}

void gemm_nn_acc(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                 const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  gemm(false, false, m, n, k, 1.0, a, lda, b, ldb, c, ldc);
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
             const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  for (std::size_t j = 0; j < n; ++j) std::fill_n(c + j * ldc, m, 0.0);
  gemm(true, false, m, n, k, 1.0, a, lda, b, ldb, c, ldc);
}

}  // namespace svdlab::kernels
