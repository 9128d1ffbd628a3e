#pragma once

// Plain-text matrix format: first line the order n, then n lines of n
// whitespace-separated decimals. Reading accepts scientific notation;
// writing emits 17 significant digits so values round-trip exactly.

#include <filesystem>
#include <iosfwd>

#include "svdlab/matrix.hpp"

namespace svdlab {

DenseMatrix read_matrix_text(std::istream& in);
DenseMatrix read_matrix_text(const std::filesystem::path& path);

void write_matrix_text(std::ostream& out, const DenseMatrix& m);
void write_matrix_text(const std::filesystem::path& path, const DenseMatrix& m);

}  // namespace svdlab
