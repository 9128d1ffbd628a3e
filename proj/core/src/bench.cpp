#include "svdlab/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "svdlab/errors.hpp"

namespace svdlab {

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not,
// so uniforms are formed from the raw bits.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : g_(seed) {}
  double operator()() { return static_cast<double>(g_() >> 11) * 0x1p-53 * 2.0 - 1.0; }

 private:
  std::mt19937_64 g_;
};

// Mixes the order and kind into the seed so cells of one run differ.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t n, MatrixKind kind) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(kind)};
  std::array<std::uint32_t, 2> out;
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

DenseMatrix random_symmetric(std::size_t n, Uniform& rng) {
  DenseMatrix b(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) b(i, j) = rng();
  }
  DenseMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) a(i, j) = a(j, i) = 0.5 * (b(i, j) + b(j, i));
  }
  return a;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

const char* to_string(MatrixKind k) noexcept {
  switch (k) {
    case MatrixKind::RandomSymmetric: return "random-symmetric";
    case MatrixKind::RandomSpd: return "random-spd";
    case MatrixKind::Graded: return "graded";
    case MatrixKind::Identity: return "identity";
  }
  return "?";
}

std::optional<MatrixKind> parse_matrix_kind(std::string_view name) {
  for (MatrixKind k : {MatrixKind::RandomSymmetric, MatrixKind::RandomSpd, MatrixKind::Graded, MatrixKind::Identity}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

SymmetricMatrix generate_symmetric(std::size_t n, std::uint64_t seed, MatrixKind kind) {
  if (n < 1) throw Error(Errc::InvalidInput, "matrix order must be >= 1");
  Uniform rng(cell_seed(seed, n, kind));
  switch (kind) {
    case MatrixKind::RandomSymmetric:
      return SymmetricMatrix(random_symmetric(n, rng));
    case MatrixKind::RandomSpd: {
      DenseMatrix b(n, n);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) b(i, j) = rng();
      }
      DenseMatrix a = multiply_nt(b, b);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = j; i < n; ++i) {
          a(i, j) = a(i, j) / static_cast<double>(n) + (i == j ? 1e-3 : 0.0);
          a(j, i) = a(i, j);
        }
      }
      return SymmetricMatrix(std::move(a));
    }
    case MatrixKind::Graded: {
      DenseMatrix a = random_symmetric(n, rng);
      Vector g(n, 1.0);
      for (std::size_t i = 1; i < n; ++i) {
        g[i] = std::pow(10.0, -8.0 * static_cast<double>(i) / static_cast<double>(n - 1));
      }
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) a(i, j) *= g[i] * g[j];
      }
      return SymmetricMatrix(std::move(a));
    }
    case MatrixKind::Identity:
      return SymmetricMatrix::identity(n);
  }
  throw Error(Errc::InvalidInput, "unknown matrix kind");
}

double svd_orth_defect(const SvdResult& r) {
  return std::max(orthogonality_defect(r.u), orthogonality_defect(r.v));
}

bool BenchResult::all_valid() const {
  return std::all_of(cells.begin(), cells.end(), [](const BenchCell& c) { return c.valid; });
}

bool BenchResult::any_convergence_failure() const {
  return std::any_of(cells.begin(), cells.end(), [](const BenchCell& c) { return c.convergence_failure; });
}

BenchResult run_benchmark(const BenchSpec& spec) {
  if (spec.reps < 1) throw Error(Errc::InvalidInput, "reps must be >= 1");
  for (std::size_t n : spec.sizes) {
    if (n < 2) throw Error(Errc::InvalidInput, "benchmark sizes must be >= 2");
  }
  DecomposeOptions opt = spec.options;
  opt.parallel = false;
  BenchResult out;
  for (std::size_t n : spec.sizes) {
    const SymmetricMatrix a = generate_symmetric(n, spec.seed, spec.kind);
    for (Algorithm alg : spec.algorithms) {
      BenchCell cell;
      cell.alg = alg;
      cell.n = n;
      try {
        (void)decompose(alg, a, opt);
        for (std::size_t rep = 0; rep < spec.reps; ++rep) {
          const auto t0 = std::chrono::steady_clock::now();
          const SvdResult r = decompose(alg, a, opt);
          const auto t1 = std::chrono::steady_clock::now();
          BenchRun run{std::chrono::duration<double>(t1 - t0).count(), reconstruction_residual(a, r),
                       svd_orth_defect(r), false};
          run.valid = run.residual <= spec.residual_limit && run.orth_defect <= spec.residual_limit;
          cell.runs.push_back(run);
        }
      } catch (const NoConvergence& e) {
        cell.failure = e.what();
        cell.convergence_failure = true;
      } catch (const Error& e) {
        cell.failure = e.what();
        cell.convergence_failure = e.code() == Errc::SchemeFailure;
      }
      std::vector<double> times;
      for (const BenchRun& r : cell.runs) {
        cell.residual = std::max(cell.residual, r.residual);
        cell.orth_defect = std::max(cell.orth_defect, r.orth_defect);
        if (r.valid) times.push_back(r.seconds);
      }
      cell.valid = !times.empty() && cell.failure.empty();
      if (!times.empty()) {
        cell.median_s = median_of(times);
        cell.min_s = *std::min_element(times.begin(), times.end());
        cell.max_s = *std::max_element(times.begin(), times.end());
      }
      out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

void write_csv(std::ostream& out, const BenchResult& r) {
  out << "alg,n,rep_median_s,rep_min_s,rep_max_s,residual,orth_defect\n";
  for (const BenchCell& c : r.cells) {
    out << to_string(c.alg) << ',' << c.n << ',';
    if (c.valid) {
      out << fmt("%.9f", c.median_s) << ',' << fmt("%.9f", c.min_s) << ',' << fmt("%.9f", c.max_s);
    } else {
      out << "nan,nan,nan";
    }
    out << ',' << fmt("%.3e", c.runs.empty() ? NAN : c.residual) << ','
        << fmt("%.3e", c.runs.empty() ? NAN : c.orth_defect) << '\n';
  }
}

void write_table(std::ostream& out, const BenchResult& r) {
  char line[160];
  std::snprintf(line, sizeof line, "%-9s %6s %14s %14s %14s %11s %11s  %s\n", "alg", "n", "median_s", "min_s",
                "max_s", "residual", "orth_defect", "status");
  out << line;
  for (const BenchCell& c : r.cells) {
    const std::string status = c.valid ? "ok" : (c.failure.empty() ? "residual check failed" : c.failure);
    const double nan = NAN;
    std::snprintf(line, sizeof line, "%-9s %6zu %14.9f %14.9f %14.9f %11.3e %11.3e  ", to_string(c.alg), c.n,
                  c.valid ? c.median_s : nan, c.valid ? c.min_s : nan, c.valid ? c.max_s : nan,
                  c.runs.empty() ? nan : c.residual, c.runs.empty() ? nan : c.orth_defect);
    out << line << status << '\n';
  }
}

}  // namespace svdlab
