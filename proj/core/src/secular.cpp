#include "svdlab/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "svdlab/errors.hpp"

namespace svdlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool inside(double x, double a, double b) { return x > a && x < b; }

// Real roots of a x^2 + b x + c = 0; the one inside (lo, hi), else NaN.
double quadratic_root_in(double a, double b, double c, double lo, double hi) {
  if (a == 0.0) {
    if (b == 0.0) return kNaN;
    const double r = -c / b;
    return inside(r, lo, hi) ? r : kNaN;
  }
  const double disc = std::max(b * b - 4.0 * a * c, 0.0);
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  const double r1 = q / a;
  const double r2 = q != 0.0 ? c / q : r1;
  if (inside(r2, lo, hi)) return r2;
  if (inside(r1, lo, hi)) return r1;
  return kNaN;
}

// Root of h(eta) = c + a/(g1 - eta) + b/(g2 - eta), given h(0) = f, inside
// (lo, hi). A pole with zero weight drops out.
double two_pole_root(double f, double c, double a, double g1, double b, double g2, double lo,
                     double hi) {
  if (b == 0.0) {
    // c (g1 - eta) + a = 0
    if (c == 0.0) return kNaN;
    const double r = g1 + a / c;
    return inside(r, lo, hi) ? r : kNaN;
  }
  if (a == 0.0) return two_pole_root(f, c, b, g2, 0.0, 0.0, lo, hi);
  const double qa = c;
  const double qb = -(c * (g1 + g2) + a + b);
  const double qc = g1 * g2 * f;
  return quadratic_root_in(qa, qb, qc, lo, hi);
}

// Everything about the current iterate, in coordinates shifted by base.
struct Eval {
  double f = 0.0;
  double fp = 0.0;
  double psi = 0.0, psip = 0.0;  // poles 0..k
  double phi = 0.0, phip = 0.0;  // poles k+1..n-1
  double erretm = 0.0;
  // psi and phi without the interval's own poles k and k+1
  double psi_far = 0.0, psi_farp = 0.0;
  double phi_far = 0.0, phi_farp = 0.0;
};

class RootSolver {
 public:
  RootSolver(const SecularProblem& p, const SecularOptions& opt, double rtol)
      : p_(p), opt_(opt), rtol_(rtol), n_(p.size()), w_(n_), pd_(n_) {
    for (std::size_t i = 0; i < n_; ++i) w_[i] = p.rho * p.u[i] * p.u[i];
    unorm2_ = 0.0;
    for (double x : p.u) unorm2_ += x * x;
  }

  // Root k of a problem with rho > 0; report(iter, lambda) observes iterates.
  template <class Report>
  SecularRoot solve(std::size_t k, SolverScheme scheme, Report&& report) {
    const bool last = k + 1 == n_;
    if (n_ == 1) {
      const double tau = w_[0];
      const double base = opt_.shift_origin ? p_.d[0] : 0.0;
      const double t = opt_.shift_origin ? tau : p_.d[0] + tau;
      report(0, base + t);
      return {base + t, base, t, 0, 0, scheme};
    }
    k_ = k;
    // Origin: the pole nearer to the root, decided by the sign of f at the
    // interval midpoint (or at d_{n-1} + rho|u|^2 / 2 for the last root).
    double lo, hi;
    std::size_t origin;
    double mid_tau;
    Eval at_mid;
    if (!last) {
      const double delta = p_.d[k + 1] - p_.d[k];
      set_base(k);
      mid_tau = 0.5 * delta;
      at_mid = eval(mid_tau);
      const Eval& e = at_mid;
      if (e.f > 0.0) {
        origin = k;
        lo = 0.0;
        hi = mid_tau;
      } else {
        origin = k + 1;
        set_base(k + 1);
        lo = -0.5 * delta;
        hi = 0.0;
        mid_tau = lo;
        if (e.f == 0.0) {
          const double lam = base_ + mid_tau;
          report(0, lam);
          return {lam, base_, mid_tau, origin, 0, scheme};
        }
      }
      if (!opt_.shift_origin) {
        lo += base_;
        hi += base_;
        mid_tau += base_;
        set_base_zero();
      }
    } else {
      origin = k;
      set_base(k);
      lo = 0.0;
      hi = p_.rho * unorm2_;
      if (!opt_.shift_origin) {
        lo += base_;
        hi += base_;
        set_base_zero();
      }
    }

    double tau = last ? initial_guess(lo, hi, 0.5 * (lo + hi), eval(0.5 * (lo + hi)))
                      : initial_guess(lo, hi, mid_tau, at_mid);
    std::size_t iter = 0;
    report(iter, base_ + tau);
    Eval e = eval(tau);

    // The one-sided schemes need their start on the proper side of the root.
    const bool left = scheme == SolverScheme::ApproachLeft;
    const bool right = scheme == SolverScheme::ApproachRight;
    while ((left || right) && !converged(e, lo, hi) && ((left && e.f > 0.0) || (right && e.f < 0.0))) {
      if (e.f > 0.0) hi = tau; else lo = tau;
      tau = 0.5 * (lo + hi);
      if (++iter > opt_.max_iter) fail(k);
      report(iter, base_ + tau);
      e = eval(tau);
    }

    while (!converged(e, lo, hi)) {
      if (e.f < 0.0) lo = tau; else hi = tau;
      if (converged(e, lo, hi)) break;
      if (++iter > opt_.max_iter) fail(k);
      double next = step(scheme, last, tau, e, lo, hi);
      if (!inside(next, lo, hi)) {
        if (left || right) {
          throw Error(Errc::SchemeFailure, std::string(to_string(scheme)) + " overshoots root " +
                                               std::to_string(k));
        }
        next = 0.5 * (lo + hi);
      }
      if (next == tau) break;
      tau = next;
      report(iter, base_ + tau);
      e = eval(tau);
      if (((left && e.f > 0.0) || (right && e.f < 0.0)) && !converged(e, lo, hi)) {
        throw Error(Errc::SchemeFailure, std::string(to_string(scheme)) + " overshoots root " +
                                             std::to_string(k));
      }
    }
    return {base_ + tau, base_, tau, origin, iter, scheme};
  }

 private:
  void set_base(std::size_t o) {
    base_ = p_.d[o];
    for (std::size_t i = 0; i < n_; ++i) pd_[i] = p_.d[i] - base_;
    pd_[o] = 0.0;
  }
  void set_base_zero() {
    base_ = 0.0;
    for (std::size_t i = 0; i < n_; ++i) pd_[i] = p_.d[i];
  }
  double gap(std::size_t i, double tau) const { return pd_[i] - tau; }  // d_i - lambda

  Eval eval(double tau) const {
    const double* pd = pd_.data();
    const double* w = w_.data();
    const std::size_t k = k_;
    double a = 0.0, ap = 0.0, b = 0.0, bp = 0.0;
#pragma omp simd reduction(+ : a, ap)
    for (std::size_t i = 0; i < k; ++i) {
      const double r = 1.0 / (pd[i] - tau);
      const double t = w[i] * r;
      a += t;
      ap += t * r;
    }
#pragma omp simd reduction(+ : b, bp)
    for (std::size_t i = k + 2; i < n_; ++i) {
      const double r = 1.0 / (pd[i] - tau);
      const double t = w[i] * r;
      b += t;
      bp += t * r;
    }
    Eval e;
    e.psi_far = a;
    e.psi_farp = ap;
    e.phi_far = b;
    e.phi_farp = bp;
    const double tk = w[k] / (pd[k] - tau);
    e.psi = a + tk;
    e.psip = ap + tk / (pd[k] - tau);
    e.phi = b;
    e.phip = bp;
    if (k + 1 < n_) {
      const double t1 = w[k + 1] / (pd[k + 1] - tau);
      e.phi += t1;
      e.phip += t1 / (pd[k + 1] - tau);
    }
    e.f = 1.0 + e.psi + e.phi;
    e.fp = e.psip + e.phip;
    e.erretm = e.phi - e.psi;
    if (!std::isfinite(e.fp)) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (gap(i, tau) == 0.0) throw Error(Errc::PoleEvaluation, "iterate hit pole " + std::to_string(i));
      }
    }
    return e;
  }

  bool converged(const Eval& e, double lo, double hi) const {
    if (std::abs(e.f) <= rtol_ * (1.0 + e.erretm)) return true;
    // Width measured against the shifted gap, not lambda: the gap is what the
    // weight correction and the eigenvectors consume.
    return hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi));
  }

  [[noreturn]] void fail(std::size_t k) const {
    throw NoConvergence(k, "secular root " + std::to_string(k) + " not converged in " +
                               std::to_string(opt_.max_iter) + " iterations");
  }

  // Two-pole quadratic on the interval's own poles fitted at the bracket
  // midpoint; the midpoint itself when the model gives nothing usable.
  double initial_guess(double lo, double hi, double mid, const Eval& e) const {
    const bool last = k_ + 1 == n_;
    const std::size_t a = last ? n_ - 2 : k_;
    const std::size_t b = last ? n_ - 1 : k_ + 1;
    const double ga = gap(a, mid), gb = gap(b, mid);
    const double c = e.f - w_[a] / ga - w_[b] / gb;
    const double eta = two_pole_root(e.f, c, w_[a], ga, w_[b], gb, lo - mid, hi - mid);
    if (std::isnan(eta)) return 0.5 * (lo + hi);
    const double guess = mid + eta;
    return inside(guess, lo, hi) ? guess : 0.5 * (lo + hi);
  }

  double step(SolverScheme scheme, bool last, double tau, const Eval& e, double lo, double hi) const {
    const double elo = lo - tau, ehi = hi - tau;
    double eta = kNaN;
    switch (scheme) {
      case SolverScheme::MiddleWay: {
        if (!last) {
          const double g1 = gap(k_, tau), g2 = gap(k_ + 1, tau);
          const double a = e.psip * g1 * g1, b = e.phip * g2 * g2;
          const double c = e.f - a / g1 - b / g2;
          eta = two_pole_root(e.f, c, a, g1, b, g2, elo, ehi);
        } else {
          eta = last_root_step(tau, e, elo, ehi);
        }
        break;
      }
      case SolverScheme::FixedWeight: {
        const std::size_t o =
            last ? n_ - 1 : (std::abs(gap(k_, tau)) <= std::abs(gap(k_ + 1, tau)) ? k_ : k_ + 1);
        const std::size_t other = last ? n_ - 2 : (o == k_ ? k_ + 1 : k_);
        const double go = gap(o, tau), gt = gap(other, tau);
        const double b = (e.fp - w_[o] / (go * go)) * gt * gt;
        const double c = e.f - w_[o] / go - b / gt;
        eta = two_pole_root(e.f, c, w_[o], go, b, gt, elo, ehi);
        break;
      }
      case SolverScheme::Hybrid:
        eta = hybrid_step(last, tau, e, elo, ehi);
        break;
      case SolverScheme::ApproachLeft: {
        // Psi through a free pole matching value and slope, Phi through d_{k+1}.
        const double gq = e.psi / e.psip;
        const double pw = e.psi * e.psi / e.psip;
        if (last) {
          eta = gq + pw;
        } else {
          const double g2 = gap(k_ + 1, tau);
          const double b = e.phip * g2 * g2;
          const double c = 1.0 + e.phi - b / g2;
          eta = two_pole_root(e.f, c, pw, gq, b, g2, gq, g2);
        }
        break;
      }
      case SolverScheme::ApproachRight: {
        if (last) {
          eta = last_root_step(tau, e, 0.0 - tau + pd_[n_ - 1], kInf);
        } else {
          const double gs = e.phi / e.phip;
          const double rw = e.phi * e.phi / e.phip;
          const double g1 = gap(k_, tau);
          const double a = e.psip * g1 * g1;
          const double c = 1.0 + e.psi - a / g1;
          eta = two_pole_root(e.f, c, a, g1, rw, gs, g1, gs);
        }
        break;
      }
    }
    return tau + eta;
  }

  static constexpr double kInf = std::numeric_limits<double>::infinity();

  // Last root: terms below n-1 fitted at pole n-2, last term exact.
  double last_root_step(double tau, const Eval& e, double elo, double ehi) const {
    const double g1 = gap(n_ - 2, tau), g2 = gap(n_ - 1, tau);
    const double t2 = w_[n_ - 1] / g2;
    const double a = (e.fp - t2 / g2) * g1 * g1;
    const double c = e.f - a / g1 - t2;
    return two_pole_root(e.f, c, a, g1, w_[n_ - 1], g2, elo, ehi);
  }

  // c + A/(g_{o-1} - eta) + w_o/(g_o - eta) + B/(g_{o+1} - eta), increasing
  // on the bracket; solved by Newton safeguarded with bisection.
  double hybrid_step(bool last, double tau, const Eval& e, double elo, double ehi) const {
    std::size_t o;
    if (last) {
      o = n_ - 1;
    } else {
      o = std::abs(gap(k_, tau)) <= std::abs(gap(k_ + 1, tau)) ? k_ : k_ + 1;
    }
    const double dl = o == k_ ? e.psi_farp : e.psip;
    const double dr = o == k_ ? e.phip : e.phi_farp;
    const bool has_l = o > 0, has_r = o + 1 < n_;
    const double gl = has_l ? gap(o - 1, tau) : 0.0;
    const double gr = has_r ? gap(o + 1, tau) : 0.0;
    const double go = gap(o, tau);
    const double a = has_l ? dl * gl * gl : 0.0;
    const double b = has_r ? dr * gr * gr : 0.0;
    const double c = e.f - (has_l ? a / gl : 0.0) - w_[o] / go - (has_r ? b / gr : 0.0);
    auto h = [&](double x, double& hp) {
      double v = c, d = 0.0;
      if (has_l) {
        const double t = a / (gl - x);
        v += t;
        d += t / (gl - x);
      }
      {
        const double t = w_[o] / (go - x);
        v += t;
        d += t / (go - x);
      }
      if (has_r) {
        const double t = b / (gr - x);
        v += t;
        d += t / (gr - x);
      }
      hp = d;
      return v;
    };
    double x0 = elo, x1 = ehi;
    if (!std::isfinite(x1)) return kNaN;
    double hp;
    const double h0 = (elo == go || (has_l && elo == gl)) ? -kInf : h(elo, hp);
    const double h1 = (ehi == go || (has_r && ehi == gr)) ? kInf : h(ehi, hp);
    if (!(h0 < 0.0) || !(h1 > 0.0)) return kNaN;
    double x = 0.0;  // current iterate is inside the bracket
    for (int it = 0; it < 100; ++it) {
      const double v = h(x, hp);
      if (v == 0.0) return x;
      if (v < 0.0) x0 = x; else x1 = x;
      double nx = x - v / hp;
      if (!inside(nx, x0, x1)) nx = 0.5 * (x0 + x1);
      if (nx == x || x1 - x0 <= 2.0 * kEps * std::max(std::abs(x0 + tau), std::abs(x1 + tau))) return nx;
      x = nx;
    }
    return x;
  }

  const SecularProblem& p_;
  const SecularOptions& opt_;
  double rtol_;
  std::size_t n_;
  Vector w_;
  Vector pd_;
  double base_ = 0.0;
  double unorm2_ = 0.0;
  std::size_t k_ = 0;
};

SolverScheme mirrored(SolverScheme s) {
  if (s == SolverScheme::ApproachLeft) return SolverScheme::ApproachRight;
  if (s == SolverScheme::ApproachRight) return SolverScheme::ApproachLeft;
  return s;
}

}  // namespace

const char* to_string(SolverScheme s) noexcept {
  switch (s) {
    case SolverScheme::ApproachLeft: return "left";
    case SolverScheme::ApproachRight: return "right";
    case SolverScheme::MiddleWay: return "middle";
    case SolverScheme::FixedWeight: return "fixed";
    case SolverScheme::Hybrid: return "hybrid";
  }
  return "?";
}

std::optional<SolverScheme> parse_scheme(std::string_view name) {
  for (SolverScheme s : {SolverScheme::ApproachLeft, SolverScheme::ApproachRight, SolverScheme::MiddleWay,
                         SolverScheme::FixedWeight, SolverScheme::Hybrid}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

void require_deflated(const SecularProblem& p) {
  const std::size_t n = p.size();
  if (p.u.size() != n) throw Error(Errc::LengthMismatch, "secular problem: d and u lengths differ");
  if (p.rho == 0.0 || !std::isfinite(p.rho)) throw Error(Errc::InvalidInput, "secular problem: rho must be finite and nonzero");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p.d[i]) || !std::isfinite(p.u[i])) throw Error(Errc::NonFinite, "secular problem entry");
    if (p.u[i] == 0.0) throw Error(Errc::InvalidInput, "secular problem: zero weight at " + std::to_string(i));
    if (i > 0 && !(p.d[i] > p.d[i - 1])) {
      throw Error(Errc::InvalidInput, "secular problem: poles not strictly ascending at " + std::to_string(i));
    }
  }
}

SecularValue secular_eval(const SecularProblem& p, double lambda) {
  if (p.u.size() != p.size()) throw Error(Errc::LengthMismatch, "secular_eval: d and u lengths differ");
  SecularValue v{1.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double g = p.d[i] - lambda;
    if (g == 0.0) throw Error(Errc::PoleEvaluation, "lambda equals pole " + std::to_string(i));
    const double t = p.rho * p.u[i] * p.u[i] / g;
    if (p.d[i] < lambda) v.psi += t; else v.phi += t;
    v.fprime += t / g;
  }
  v.f += v.psi + v.phi;
  return v;
}

std::vector<SecularRoot> secular_solve(const SecularProblem& p, const SecularOptions& opt) {
  require_deflated(p);
  const std::size_t n = p.size();
  const double rtol = opt.rtol > 0.0 ? opt.rtol : 4.0 * static_cast<double>(n) * kEps;
  std::vector<SecularRoot> roots(n);
  if (n == 0) return roots;

  // rho < 0 is solved as the mirrored problem -D' with reversed order.
  const bool flip = p.rho < 0.0;
  SecularProblem q = p;
  if (flip) {
    for (std::size_t i = 0; i < n; ++i) {
      q.d[i] = -p.d[n - 1 - i];
      q.u[i] = p.u[n - 1 - i];
    }
    q.rho = -p.rho;
  }
  RootSolver solver(q, opt, rtol);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t out = flip ? n - 1 - k : k;
    auto report = [&](std::size_t it, double lam) {
      if (opt.on_iterate) opt.on_iterate(out, it, flip ? -lam : lam);
    };
    SolverScheme scheme = flip ? mirrored(opt.scheme) : opt.scheme;
    SecularRoot r;
    try {
      r = solver.solve(k, scheme, report);
    } catch (const Error& e) {
      if (e.code() != Errc::SchemeFailure || !opt.fallback) throw;
      r = solver.solve(k, SolverScheme::MiddleWay, report);
    }
    if (flip) {
      r.lambda = -r.lambda;
      r.base = -r.base;
      r.tau = -r.tau;
      r.origin = n - 1 - r.origin;
      r.scheme = mirrored(r.scheme);
    }
    roots[out] = r;
  }
  return roots;
}

Vector secular_roots(const SecularProblem& p, SolverScheme scheme, double rtol, std::size_t max_iter) {
  SecularOptions opt;
  opt.scheme = scheme;
  opt.rtol = rtol;
  opt.max_iter = max_iter;
  const auto roots = secular_solve(p, opt);
  Vector out(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) out[i] = roots[i].lambda;
  return out;
}

namespace {

// uhat_i^2 = prod_j (lambda_j - d_i) / (rho prod_{j != i} (d_j - d_i))
template <class Gap>
Vector loewner(std::span<const double> d, std::span<const double> u, double rho, Gap&& gap) {
  const std::size_t n = d.size();
  double unorm2 = 0.0;
  for (double x : u) unorm2 += x * x;
  Vector uhat(n);
  for (std::size_t i = 0; i < n; ++i) {
    double prod = gap(i, i) / rho;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) prod *= gap(j, i) / (d[j] - d[i]);
    }
    if (prod < 0.0) {
      if (prod < -static_cast<double>(n) * kEps * std::max(unorm2, 1.0)) {
        throw Error(Errc::InterlacingViolation, "negative radicand for weight " + std::to_string(i));
      }
      prod = 0.0;
    }
    uhat[i] = std::copysign(std::sqrt(prod), u[i]);
  }
  return uhat;
}

// base[j] + tau[j] - d[i] as (base[j] - d[i]) + tau[j].
DenseMatrix eigvecs(std::span<const double> d, std::span<const double> uhat, std::span<const double> base,
                    std::span<const double> tau) {
  const std::size_t n = d.size();
  DenseMatrix x(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double* c = x.col(j).data();
    const double bj = base[j], tj = tau[j];
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) c[i] = uhat[i] / ((bj - d[i]) + tj);
    const double nrm = norm2({c, n});
    if (nrm > 0.0) {
      const double inv = 1.0 / nrm;
      for (std::size_t i = 0; i < n; ++i) c[i] *= inv;
    }
  }
  return x;
}

}  // namespace

Vector corrected_weights(std::span<const double> d, std::span<const double> u,
                         std::span<const double> lambdas, double rho) {
  if (d.size() != u.size() || d.size() != lambdas.size()) {
    throw Error(Errc::LengthMismatch, "corrected_weights: d, u and lambdas lengths differ");
  }
  return loewner(d, u, rho, [&](std::size_t j, std::size_t i) { return lambdas[j] - d[i]; });
}

Vector corrected_weights(const SecularProblem& p, std::span<const SecularRoot> roots) {
  if (roots.size() != p.size()) throw Error(Errc::LengthMismatch, "corrected_weights: root count");
  return loewner(p.d, p.u, p.rho, [&](std::size_t j, std::size_t i) { return root_gap(p, roots[j], i); });
}

DenseMatrix secular_eigenvectors(std::span<const double> d, std::span<const double> uhat,
                                 std::span<const double> lambdas) {
  if (d.size() != uhat.size() || d.size() != lambdas.size()) {
    throw Error(Errc::LengthMismatch, "secular_eigenvectors: d, uhat and lambdas lengths differ");
  }
  return eigvecs(d, uhat, lambdas, Vector(d.size(), 0.0));
}

DenseMatrix secular_eigenvectors(const SecularProblem& p, std::span<const double> uhat,
                                 std::span<const SecularRoot> roots) {
  if (uhat.size() != p.size() || roots.size() != p.size()) {
    throw Error(Errc::LengthMismatch, "secular_eigenvectors: sizes differ");
  }
  Vector base(p.size()), tau(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    base[j] = roots[j].base;
    tau[j] = roots[j].tau;
  }
  return eigvecs(p.d, uhat, base, tau);
}

DeflationResult deflate(const SecularProblem& p, double dtol, bool with_vectors) {
  const std::size_t n = p.size();
  if (p.u.size() != n) throw Error(Errc::LengthMismatch, "deflate: d and u lengths differ");
  for (std::size_t i = 1; i < n; ++i) {
    if (p.d[i] < p.d[i - 1]) throw Error(Errc::InvalidInput, "deflate: poles must be sorted ascending");
  }
  if (dtol <= 0.0) dtol = 8.0 * static_cast<double>(n) * kEps;

  Vector d = p.d, u = p.u;
  double dmax = 0.0;
  for (double x : d) dmax = std::max(dmax, std::abs(x));
  const double unorm = norm2(u);
  const double arho = std::abs(p.rho);
  const double update = arho * unorm * unorm;

  DeflationResult out{{{}, {}, p.rho}, {}};
  Deflation& defl = out.deflation;
  std::vector<bool> gone(n, false);

  if (update <= dtol * dmax || p.rho == 0.0) {
    std::fill(gone.begin(), gone.end(), true);
  } else {
    // Weight rule, linear in |u_i| (see README).
    const double wtol = dtol * std::max(dmax, update);
    for (std::size_t i = 0; i < n; ++i) {
      if (arho * std::abs(u[i]) * unorm <= wtol) gone[i] = true;
    }
    // Pole merges among the survivors.
    std::size_t prev = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (gone[j]) continue;
      if (prev != n && std::abs(d[j] - d[prev]) <= dtol * dmax) {
        const double r = std::hypot(u[prev], u[j]);
        const double c = u[j] / r, s = u[prev] / r;
        const double dp = d[prev], dj = d[j];
        d[prev] = c * c * dp + s * s * dj;
        d[j] = s * s * dp + c * c * dj;
        u[prev] = 0.0;
        u[j] = r;
        gone[prev] = true;
        defl.rotations.push_back({prev, j, c, s});
      }
      prev = j;
    }
  }

  DenseMatrix basis;
  if (with_vectors) {
    basis = DenseMatrix::identity(n);
    for (const auto& g : defl.rotations) {
      auto bi = basis.col(g.i);
      auto bj = basis.col(g.j);
      for (std::size_t r = 0; r < n; ++r) {
        const double x = bi[r], y = bj[r];
        bi[r] = g.c * x - g.s * y;
        bj[r] = g.s * x + g.c * y;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (gone[i]) {
      DeflatedPair dp{i, d[i], {}};
      if (with_vectors) dp.vec.assign(basis.col(i).begin(), basis.col(i).end());
      defl.deflated.push_back(std::move(dp));
    } else {
      defl.kept.push_back(i);
      out.reduced.d.push_back(d[i]);
      out.reduced.u.push_back(u[i]);
    }
  }
  return out;
}

}  // namespace svdlab
