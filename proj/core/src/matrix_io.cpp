#include "svdlab/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "svdlab/errors.hpp"

namespace svdlab {

namespace {

double parse_double(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw Error(Errc::ParseError, "bad number '" + token + "'");
  return value;
}

}  // namespace

DenseMatrix read_matrix_text(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw Error(Errc::ParseError, "missing matrix order");
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), n);
  if (ec != std::errc() || ptr != token.data() + token.size() || n == 0) {
    throw Error(Errc::ParseError, "matrix order must be a positive integer, got '" + token + "'");
  }
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(in >> token)) throw Error(Errc::ParseError, "matrix ends early at row " + std::to_string(i));
      m(i, j) = parse_double(token);
    }
  }
  if (in >> token) throw Error(Errc::ParseError, "trailing data after " + std::to_string(n) + " rows");
  return m;
}

DenseMatrix read_matrix_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return read_matrix_text(in);
}

void write_matrix_text(std::ostream& out, const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::DimensionMismatch, "text format holds square matrices");
  const std::size_t n = m.rows();
  out << n << '\n';
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, m(i, j), std::chars_format::general, 17);
      if (j) out << ' ';
      out.write(buf, end - buf);
    }
    out << '\n';
  }
}

void write_matrix_text(const std::filesystem::path& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  write_matrix_text(out, m);
}

}  // namespace svdlab
