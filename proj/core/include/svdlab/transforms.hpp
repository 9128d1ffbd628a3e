#pragma once

// Elementary orthogonal transforms and the EVD -> SVD conversion shared by
// every decomposition backend.

#include <span>
#include <utility>

#include "svdlab/matrix.hpp"

namespace svdlab {

struct GivensPair {
  double c;
  double s;
};

/// Rotation G = [[c, s], [-s, c]] with G^T (a, b)^T = (r, 0)^T.
/// b == 0 gives the identity pair (1, 0).
GivensPair givens(double a, double b);

struct Householder {
  Vector u;      // unnormalized reflector direction
  double sigma;  // H x = (sigma, 0, ..., 0)^T with H = I - 2 u u^T / (u^T u)
};

/// Householder vector zeroing all but the first entry of x. Scales by
/// max|x_i| before forming the norm; throws Errc::ZeroVector for x == 0.
Householder houszero(std::span<const double> x);

/// Dense I - 2 u u^T / (u^T u).
DenseMatrix householder_matrix(std::span<const double> u);

/// Gathers d and u through p: d'[i] = d[p[i]], u'[i] = u[p[i]].
std::pair<Vector, Vector> apply_permutation(const Permutation& p, std::span<const double> d,
                                            std::span<const double> u);

/// Stable ascending sort of d carrying u along; returns the permutation used.
Permutation sort_ascending(std::span<const double> d, std::span<const double> u, Vector& d_out,
                           Vector& u_out);

/// sigma_i = |lambda_pi(i)| sorted non-increasing, U = X permuted,
/// v_i = sign(lambda_pi(i)) u_i with sign(0) = 1.
SvdResult svd_from_eig(const EigResult& e);

}  // namespace svdlab
