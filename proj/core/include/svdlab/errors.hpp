#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace svdlab {

enum class Errc {
  InvalidInput,
  NotSymmetric,
  NonFinite,
  LengthMismatch,
  DimensionMismatch,
  ZeroVector,
  ZeroCoupling,
  PoleEvaluation,
  NoConvergence,
  SchemeFailure,
  InterlacingViolation,
  RankDeficient,
  EmptyModel,
  EmptyWindow,
  ParseError,
  IoError,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Iterative solvers report where they stalled (sweep count, eigenvalue
// index or secular interval, depending on the producer).
class NoConvergence : public Error {
 public:
  NoConvergence(std::size_t where, const std::string& what)
      : Error(Errc::NoConvergence, what), where_(where) {}

  std::size_t where() const noexcept { return where_; }

 private:
  std::size_t where_;
};

}  // namespace svdlab
