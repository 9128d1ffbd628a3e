#include "svdlab/divide_conquer.hpp"

#include <algorithm>
#include <future>
#include <string>

#include "kernels.hpp"
#include "svdlab/errors.hpp"
#include "svdlab/transforms.hpp"
#include "tridiag_internal.hpp"

namespace svdlab {

RankOneSplit split_rank_one(const TridiagonalMatrix& t, std::size_t m) {
  const std::size_t n = t.n();
  if (m < 1 || m >= n) throw Error(Errc::InvalidInput, "split point must satisfy 1 <= m < n");
  const double rho = t.sub[m - 1];
  if (rho == 0.0) throw Error(Errc::ZeroCoupling, "subdiagonal entry " + std::to_string(m - 1) + " is zero");
  Vector d1(t.diag.begin(), t.diag.begin() + m);
  Vector e1(t.sub.begin(), t.sub.begin() + (m - 1));
  Vector d2(t.diag.begin() + m, t.diag.end());
  Vector e2(t.sub.begin() + m, t.sub.end());
  d1.back() -= rho;
  d2.front() -= rho;
  Vector v(n, 0.0);
  v[m - 1] = 1.0;
  v[m] = 1.0;
  return {TridiagonalMatrix(std::move(d1), std::move(e1)), TridiagonalMatrix(std::move(d2), std::move(e2)), rho,
          std::move(v)};
}

Vector build_merge_weights(const DenseMatrix& q1, const DenseMatrix& q2) {
  Vector u;
  u.reserve(q1.cols() + q2.cols());
  for (std::size_t j = 0; j < q1.cols(); ++j) u.push_back(q1(q1.rows() - 1, j));
  for (std::size_t j = 0; j < q2.cols(); ++j) u.push_back(q2(0, j));
  return u;
}

namespace {

enum class Part : unsigned char { Upper, Mixed, Lower };

EigResult sorted(const EigResult& r) {
  const Permutation p = Permutation::sorting(r.lambda);
  return {p.apply_to_columns(r.x), p.apply(r.lambda)};
}

// Merged eigenpairs of blkdiag(T1, T2) + rho v v^T from the halves' pairs.
// Children may arrive in any column order; the result is not sorted either.
EigResult merge(const EigResult& r1, const EigResult& r2, double rho, const DcConfig& cfg) {
  const std::size_t m1 = r1.lambda.size();
  const std::size_t n = m1 + r2.lambda.size();
  Vector lam(r1.lambda);
  lam.insert(lam.end(), r2.lambda.begin(), r2.lambda.end());
  auto source = [&](std::size_t src, double* dst) {
    if (src < m1) {
      std::copy_n(r1.x.col(src).data(), m1, dst);
    } else {
      std::copy_n(r2.x.col(src - m1).data(), n - m1, dst + m1);
    }
  };
  if (rho == 0.0) {
    DenseMatrix x(n, n);
    for (std::size_t j = 0; j < n; ++j) source(j, x.col(j).data());
    return {std::move(x), std::move(lam)};
  }

  const Permutation perm = Permutation::sorting(lam);
  const SecularProblem p{perm.apply(lam), perm.apply(build_merge_weights(r1.x, r2.x)), rho};
  const DeflationResult dr = deflate(p, 8.0 * static_cast<double>(n) * kEps, false);
  const Deflation& defl = dr.deflation;

  std::vector<Part> part(n);
  for (std::size_t j = 0; j < n; ++j) part[j] = perm[j] < m1 ? Part::Upper : Part::Lower;
  for (const auto& g : defl.rotations) {
    if (part[g.i] != part[g.j]) part[g.i] = part[g.j] = Part::Mixed;
  }
  // Basis columns: kept ones grouped upper | mixed | lower, then deflated.
  const std::size_t k = defl.kept.size();
  std::vector<std::size_t> pos(n), order;  // order[t] = kept position c
  order.reserve(k);
  for (Part want : {Part::Upper, Part::Mixed, Part::Lower}) {
    for (std::size_t c = 0; c < k; ++c) {
      if (part[defl.kept[c]] == want) {
        pos[defl.kept[c]] = order.size();
        order.push_back(c);
      }
    }
  }
  for (std::size_t t = 0; t < defl.deflated.size(); ++t) pos[defl.deflated[t].index] = k + t;
  std::size_t nu = 0, nl = 0;
  for (std::size_t c : order) {
    nu += part[defl.kept[c]] == Part::Upper;
    nl += part[defl.kept[c]] == Part::Lower;
  }

  DenseMatrix b(n, n);
  for (std::size_t j = 0; j < n; ++j) source(perm[j], b.col(pos[j]).data());
  for (const auto& g : defl.rotations) {
    kernels::rotate(b.col(pos[g.i]).data(), b.col(pos[g.j]).data(), n, g.c, -g.s);
  }

  EigResult out{DenseMatrix(n, n), Vector(n)};
  Vector roots_lam(k);
  if (k > 0) {
    SecularOptions opt;
    opt.scheme = cfg.scheme;
    opt.fallback = true;
    const std::vector<SecularRoot> roots = secular_solve(dr.reduced, opt);
    const Vector uhat = cfg.correct_weights ? corrected_weights(dr.reduced, roots) : dr.reduced.u;
    const DenseMatrix s = secular_eigenvectors(dr.reduced, uhat, roots);
    DenseMatrix sb(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      const double* sj = s.col(j).data();
      double* dj = sb.col(j).data();
      for (std::size_t t = 0; t < k; ++t) dj[t] = sj[order[t]];
    }
    const std::size_t nm = k - nu - nl;
    double* x = out.x.data();
    kernels::gemm_nn_acc(m1, k, nu + nm, b.data(), n, sb.data(), k, x, n);
    kernels::gemm_nn_acc(n - m1, k, nm + nl, b.data() + m1 + nu * n, n, sb.data() + nu, k, x + m1, n);
    for (std::size_t j = 0; j < k; ++j) {
      out.lambda[j] = roots[j].lambda;
      roots_lam[j] = roots[j].lambda;
    }
  }
  Vector defl_lam(defl.deflated.size());
  for (std::size_t t = 0; t < defl.deflated.size(); ++t) {
    std::copy_n(b.col(k + t).data(), n, out.x.col(k + t).data());
    out.lambda[k + t] = defl_lam[t] = defl.deflated[t].lambda;
  }
  if (cfg.on_merge) cfg.on_merge({n, rho, p.d, p.u, dr.reduced, std::move(roots_lam), std::move(defl_lam)});
  return out;
}

EigResult solve(const Vector& d, const Vector& e, std::size_t lo, std::size_t hi, const DcConfig& cfg) {
  const std::size_t n = hi - lo;
  if (n <= cfg.cutoff) {
    TridiagonalMatrix t(Vector(d.begin() + lo, d.begin() + hi), Vector(e.begin() + lo, e.begin() + hi - 1));
    return symmetric_qr_eig(t, cfg.leaf);
  }
  const std::size_t m = n / 2;
  const std::size_t mid = lo + m;
  const double rho = e[mid - 1];
  Vector dd = d;  // the two halves touch disjoint entries
  dd[mid - 1] -= rho;
  dd[mid] -= rho;
  EigResult r1, r2;
  if (cfg.parallel && n >= 200) {
    auto left = std::async(std::launch::async, [&] { return solve(dd, e, lo, mid, cfg); });
    r2 = solve(dd, e, mid, hi, cfg);
    r1 = left.get();
  } else {
    r1 = solve(dd, e, lo, mid, cfg);
    r2 = solve(dd, e, mid, hi, cfg);
  }
  return merge(r1, r2, rho, cfg);
}

}  // namespace

EigResult dc_eig(const TridiagonalMatrix& t, const DcConfig& cfg) {
  if (cfg.cutoff < 1) throw Error(Errc::InvalidInput, "cutoff must be >= 1");
  if (t.n() <= cfg.cutoff) return symmetric_qr_eig(t, cfg.leaf);
  return sorted(solve(t.diag, t.sub, 0, t.n(), cfg));
}

EigResult dc_eig(const TridiagonalMatrix& t, std::size_t cutoff, const QrConfig& cfg) {
  DcConfig c;
  c.cutoff = cutoff;
  c.leaf = cfg;
  return dc_eig(t, c);
}

SvdResult dc_svd(const SymmetricMatrix& a, const DcConfig& cfg) {
  if (cfg.leaf.reduction == Reduction::Givens) {
    Tridiagonalization tri = tridiagonalize(a, Reduction::Givens);
    EigResult e = dc_eig(tri.t, cfg);
    e.x = multiply(tri.q, e.x);
    return svd_from_eig(e);
  }
  // The reflectors are applied to the eigenvectors directly; Q is never formed.
  detail::HouseholderTridiag h = detail::householder_tridiag(a);
  EigResult e = dc_eig(h.t, cfg);
  detail::apply_q(h, e.x);
  return svd_from_eig(e);
}

SvdResult dc_svd(const SymmetricMatrix& a, std::size_t cutoff) {
  DcConfig c;
  c.cutoff = cutoff;
  return dc_svd(a, c);
}

}  // namespace svdlab
