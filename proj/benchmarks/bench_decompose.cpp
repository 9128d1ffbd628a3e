#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>

#include "svdlab/bench.hpp"
#include "svdlab/decompose.hpp"
#include "svdlab/divide_conquer.hpp"
#include "svdlab/secular.hpp"
#include "svdlab/tridiag_qr.hpp"

namespace {

using namespace svdlab;

void BM_Decompose(benchmark::State& state, Algorithm alg) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SymmetricMatrix a = generate_symmetric(n, 42, MatrixKind::RandomSymmetric);
  for (auto _ : state) {
    SvdResult r = decompose(alg, a);
    benchmark::DoNotOptimize(r.sigma.data());
  }
  state.SetComplexityN(state.range(0));
}

BENCHMARK_CAPTURE(BM_Decompose, jacobi, Algorithm::Jacobi)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decompose, hestenes, Algorithm::Hestenes)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decompose, gk, Algorithm::GolubKahan)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decompose, qr, Algorithm::TridiagQr)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decompose, dc, Algorithm::DivideConquer)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

TridiagonalMatrix random_tridiagonal(std::size_t n) {
  const SymmetricMatrix a = generate_symmetric(n, 7, MatrixKind::RandomSymmetric);
  Vector d(n), e(n - 1);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = a(i + 1, i);
  return TridiagonalMatrix(std::move(d), std::move(e));
}

void BM_TridiagonalQr(benchmark::State& state) {
  const TridiagonalMatrix t = random_tridiagonal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_qr_eig(t).lambda.data());
}
BENCHMARK(BM_TridiagonalQr)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_TridiagonalDc(benchmark::State& state) {
  const TridiagonalMatrix t = random_tridiagonal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dc_eig(t).lambda.data());
}
BENCHMARK(BM_TridiagonalDc)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_Secular(benchmark::State& state, SolverScheme scheme) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SymmetricMatrix a = generate_symmetric(n, 11, MatrixKind::RandomSymmetric);
  SecularProblem p{Vector(n), Vector(n), 0.5};
  for (std::size_t i = 0; i < n; ++i) {
    p.d[i] = a(i, i);
    p.u[i] = std::abs(a(i, (i + 1) % n)) + 0.01;
  }
  std::sort(p.d.begin(), p.d.end());
  p.d.erase(std::unique(p.d.begin(), p.d.end()), p.d.end());
  p.u.resize(p.d.size());
  SecularOptions opt;
  opt.scheme = scheme;
  opt.fallback = true;
  for (auto _ : state) benchmark::DoNotOptimize(secular_solve(p, opt).data());
}
BENCHMARK_CAPTURE(BM_Secular, hybrid, SolverScheme::Hybrid)->Arg(100)->Arg(400);
BENCHMARK_CAPTURE(BM_Secular, middle, SolverScheme::MiddleWay)->Arg(100)->Arg(400);
BENCHMARK_CAPTURE(BM_Secular, fixed, SolverScheme::FixedWeight)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
