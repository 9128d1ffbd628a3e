#pragma once

// One entry point over the five SVD backends.

#include <optional>
#include <string_view>

#include "svdlab/matrix.hpp"
#include "svdlab/secular.hpp"

namespace svdlab {

enum class Algorithm { Jacobi, Hestenes, GolubKahan, TridiagQr, DivideConquer };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Jacobi, Algorithm::Hestenes, Algorithm::GolubKahan,
                                               Algorithm::TridiagQr, Algorithm::DivideConquer};

/// jacobi | hestenes | gk | qr | dc
const char* to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct DecomposeOptions {
  double tol = 0.0;  // 0 keeps the backend default
  std::size_t cutoff = 25;
  SolverScheme scheme = SolverScheme::Hybrid;
  bool parallel = false;
};

SvdResult decompose(Algorithm alg, const SymmetricMatrix& a, const DecomposeOptions& opt = {});

}  // namespace svdlab
