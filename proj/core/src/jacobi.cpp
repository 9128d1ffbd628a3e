#include "svdlab/jacobi.hpp"

#include <cmath>
#include <string>

#include "kernels.hpp"
#include "svdlab/errors.hpp"

namespace svdlab {

namespace {

JacobiSweepStats snapshot(const DenseMatrix& a, std::size_t sweep, std::size_t rotations) {
  const std::size_t n = a.rows();
  double off = 0.0;
  double diag = 0.0;
  double trace = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = a(i, j);
      if (i == j) {
        diag += v * v;
        trace += v;
      } else {
        off += v * v;
      }
    }
  }
  return {sweep, rotations, std::sqrt(off), trace, std::sqrt(off + diag)};
}

}  // namespace

GivensPair jacobi_rotation(double app, double aqq, double apq) {
  if (apq == 0.0) return {1.0, 0.0};
  const double xi = (aqq - app) / (2.0 * apq);
  const double t = sign_of(xi) / (std::abs(xi) + std::sqrt(1.0 + xi * xi));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, c * t};
}

EigResult jacobi_eig(const SymmetricMatrix& input, const JacobiConfig& cfg) {
  if (!(cfg.tol > 0.0) || cfg.max_sweeps == 0) throw Error(Errc::InvalidInput, "jacobi config");
  const std::size_t n = input.n();
  DenseMatrix a = input.dense();
  DenseMatrix q = DenseMatrix::identity(n);
  const double target = cfg.tol * input.frobenius_norm();

  JacobiSweepStats stats = snapshot(a, 0, 0);
  if (cfg.on_sweep) cfg.on_sweep(stats);
  std::size_t sweep = 0;
  while (stats.off_norm > target) {
    if (sweep == cfg.max_sweeps) {
      throw NoConvergence(sweep, "jacobi: off-diagonal norm still " + std::to_string(stats.off_norm) +
                                     " after " + std::to_string(sweep) + " sweeps");
    }
    ++sweep;
    std::size_t rotations = 0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const double ajk = a(j, k);
        if (std::abs(ajk) <= kEps * std::sqrt(std::abs(a(j, j) * a(k, k)))) continue;
        const auto [c, s] = jacobi_rotation(a(j, j), a(k, k), ajk);
        const double t = s / c;
        // A <- J^T A J on rows/columns j and k; the targeted pair becomes 0.
        double* colj = a.col(j).data();
        double* colk = a.col(k).data();
        for (std::size_t r = 0; r < n; ++r) {
          if (r == j || r == k) continue;
          const double arj = colj[r];
          const double ark = colk[r];
          colj[r] = c * arj - s * ark;
          colk[r] = s * arj + c * ark;
          a(j, r) = colj[r];
          a(k, r) = colk[r];
        }
        a(j, j) -= t * ajk;
        a(k, k) += t * ajk;
        a(j, k) = 0.0;
        a(k, j) = 0.0;
        kernels::rotate(q.col(j).data(), q.col(k).data(), n, c, -s);
        ++rotations;
      }
    }
    stats = snapshot(a, sweep, rotations);
    if (cfg.on_sweep) cfg.on_sweep(stats);
  }

  EigResult r{std::move(q), Vector(n)};
  for (std::size_t i = 0; i < n; ++i) r.lambda[i] = a(i, i);
  return r;
}

SvdResult jacobi_svd(const SymmetricMatrix& a, const JacobiConfig& cfg) {
  return svd_from_eig(jacobi_eig(a, cfg));
}

}  // namespace svdlab
