#include "svdlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "svdlab/errors.hpp"

namespace svdlab {

GivensPair givens(double a, double b) {
  if (b == 0.0) return {1.0, 0.0};
  if (std::abs(b) > std::abs(a)) {
    const double tau = -a / b;
    const double s = 1.0 / std::sqrt(1.0 + tau * tau);
    return {s * tau, s};
  }
  const double tau = -b / a;
  const double c = 1.0 / std::sqrt(1.0 + tau * tau);
  return {c, c * tau};
}

Householder houszero(std::span<const double> x) {
  if (x.empty()) throw Error(Errc::ZeroVector, "houszero on an empty vector");
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0) throw Error(Errc::ZeroVector, "houszero on a zero vector");
  Householder h{Vector(x.begin(), x.end()), 0.0};
  double ss = 0.0;
  for (double& v : h.u) {
    v /= m;
    ss += v * v;
  }
  const double sigma = sign_of(h.u[0]) * std::sqrt(ss);
  h.u[0] += sigma;
  h.sigma = -m * sigma;
  return h;
}

DenseMatrix householder_matrix(std::span<const double> u) {
  const std::size_t n = u.size();
  double uu = 0.0;
  for (double v : u) uu += v * v;
  DenseMatrix h = DenseMatrix::identity(n);
  if (uu == 0.0) return h;
  const double beta = 2.0 / uu;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) h(i, j) -= beta * u[i] * u[j];
  }
  return h;
}

std::pair<Vector, Vector> apply_permutation(const Permutation& p, std::span<const double> d,
                                            std::span<const double> u) {
  if (d.size() != u.size() || d.size() != p.size()) {
    throw Error(Errc::LengthMismatch, "apply_permutation: d, u and permutation lengths differ");
  }
  return {p.apply(d), p.apply(u)};
}

Permutation sort_ascending(std::span<const double> d, std::span<const double> u, Vector& d_out,
                           Vector& u_out) {
  if (d.size() != u.size()) throw Error(Errc::LengthMismatch, "sort_ascending: d and u lengths differ");
  Permutation p = Permutation::sorting(d);
  auto [ds, us] = apply_permutation(p, d, u);
  d_out = std::move(ds);
  u_out = std::move(us);
  return p;
}

SvdResult svd_from_eig(const EigResult& e) {
  const std::size_t n = e.lambda.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(e.lambda[a]) > std::abs(e.lambda[b]);
  });
  const Permutation p(std::move(order));
  SvdResult r{p.apply_to_columns(e.x), Vector(n), DenseMatrix(e.x.rows(), n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double lam = e.lambda[p[i]];
    r.sigma[i] = std::abs(lam);
    const double s = sign_of(lam);
    auto src = r.u.col(i);
    auto dst = r.v.col(i);
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = s * src[k];
  }
  return r;
}

}  // namespace svdlab
