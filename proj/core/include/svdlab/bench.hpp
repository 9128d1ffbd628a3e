#pragma once

// Deterministic test matrices and the timing harness behind `svdlab bench`.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svdlab/decompose.hpp"
#include "svdlab/matrix.hpp"

namespace svdlab {

enum class MatrixKind { RandomSymmetric, RandomSpd, Graded, Identity };

/// random-symmetric | random-spd | graded | identity
const char* to_string(MatrixKind k) noexcept;
std::optional<MatrixKind> parse_matrix_kind(std::string_view name);

/// Bitwise reproducible for fixed (n, seed, kind) on every platform.
///   random-symmetric: (B + B^T) / 2, B uniform in [-1, 1]
///   random-spd:       B B^T / n + 1e-3 I
///   graded:           G S G with S random-symmetric, G = diag(10^(-8 i / (n - 1)))
///   identity:         I
SymmetricMatrix generate_symmetric(std::size_t n, std::uint64_t seed, MatrixKind kind);

struct BenchSpec {
  std::vector<Algorithm> algorithms;
  std::vector<std::size_t> sizes;
  std::size_t reps = 5;
  std::uint64_t seed = 42;
  MatrixKind kind = MatrixKind::RandomSymmetric;
  double residual_limit = 1e-8;  // also applied to the orthogonality defect
  DecomposeOptions options;      // parallel is forced off
};

struct BenchRun {
  double seconds;
  double residual;
  double orth_defect;
  bool valid;
};

struct BenchCell {
  Algorithm alg;
  std::size_t n;
  std::vector<BenchRun> runs;
  bool valid = false;     // at least one run passed validation
  double median_s = 0.0;  // over valid runs only
  double min_s = 0.0;
  double max_s = 0.0;
  double residual = 0.0;     // worst over all runs
  double orth_defect = 0.0;  // worst over all runs
  std::string failure;       // backend exception, if any
  bool convergence_failure = false;
};

struct BenchResult {
  std::vector<BenchCell> cells;

  bool all_valid() const;
  bool any_convergence_failure() const;
};

/// One untimed warm-up run, then reps timed runs of the decomposition call
/// alone, strictly sequential. Backend failures are recorded per cell.
BenchResult run_benchmark(const BenchSpec& spec);

/// max(|U^T U - I|, |V^T V - I|)
double svd_orth_defect(const SvdResult& r);

void write_csv(std::ostream& out, const BenchResult& r);
void write_table(std::ostream& out, const BenchResult& r);

}  // namespace svdlab
