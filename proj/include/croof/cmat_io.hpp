#pragma once

// "cmat v1" text format:
//   cmat <rows> <cols>
//   <re> <im>        (rows*cols lines, row-major)

#include "croof/types.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace croof {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  // 17 significant digits is round-trip exact for binary64
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
  if (res.ec != std::errc()) throw std::runtime_error("cmat: failed to format value");
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& tok, int line) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError("cmat: bad number '" + tok + "' on line " + std::to_string(line));
  return v;
}

}  // namespace detail

inline void write_cmat(std::ostream& os, const ComplexMatrix& m) {
  os << "cmat " << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << detail::format_double(m(i, j).real()) << ' ' << detail::format_double(m(i, j).imag()) << '\n';
}

inline ComplexMatrix read_cmat(std::istream& is) {
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("cmat: empty input");
  std::istringstream header(line);
  std::string magic;
  long rows = -1, cols = -1;
  header >> magic >> rows >> cols;
  if (!header || magic != "cmat" || rows < 1 || cols < 1) throw ParseError("cmat: bad header on line " + std::to_string(lineno));

  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!next_line()) throw ParseError("cmat: truncated data, expected " + std::to_string(rows * cols) + " entries");
      std::istringstream ls(line);
      std::string re, im, extra;
      if (!(ls >> re >> im) || (ls >> extra)) throw ParseError("cmat: expected 're im' on line " + std::to_string(lineno));
      m(i, j) = Complex(detail::parse_double(re, lineno), detail::parse_double(im, lineno));
    }
  return m;
}

inline ComplexMatrix load_cmat(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_cmat(in);
}

inline void save_cmat(const std::string& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_cmat(out, m);
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace croof
