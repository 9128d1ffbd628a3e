#pragma once

#include <optional>

#include "svdlab/errors.hpp"

namespace testing {

/// Error code thrown by f, or nullopt when it returns normally.
template <class F>
std::optional<svdlab::Errc> error_of(F&& f) {
  try {
    f();
  } catch (const svdlab::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing
