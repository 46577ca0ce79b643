// Copyright 2026 The alnewton Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Matrix Market coordinate reader/writer. Only the
// "matrix coordinate real general" flavor (and "integer general") is
// accepted. Indices are 1-based on disk; duplicates are summed on read.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "alnewton/errors.hpp"
#include "alnewton/sparse_core.hpp"

namespace alnewton {

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Parses one real (decimal or scientific); the whole token must be consumed.
inline bool parse_real(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline bool parse_index(std::string_view tok, Index& out) {
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

// Shortest decimal text that reads back to the same double.
inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline SparseMatrix read_matrix_market(std::istream& in,
                                       const std::string& source = "<stream>") {
  auto fail = [&](std::size_t line, const std::string& msg) -> ParseError {
    return ParseError(source + ":" + std::to_string(line) + ": " + msg);
  };
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw fail(1, "empty file, expected %%MatrixMarket header");
  ++lineno;
  {
    const auto toks = detail::split_ws(line);
    if (toks.size() != 5 || detail::lower(std::string(toks[0])) != "%%matrixmarket" ||
        detail::lower(std::string(toks[1])) != "matrix" ||
        detail::lower(std::string(toks[2])) != "coordinate") {
      throw fail(lineno, "expected '%%MatrixMarket matrix coordinate real general'");
    }
    const auto field = detail::lower(std::string(toks[3]));
    const auto sym = detail::lower(std::string(toks[4]));
    if ((field != "real" && field != "integer") || sym != "general") {
      throw fail(lineno, "unsupported field/symmetry '" + field + " " + sym + "'");
    }
  }

  Index rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '%') continue;
    const auto toks = detail::split_ws(t);
    if (toks.size() != 3 || !detail::parse_index(toks[0], rows) ||
        !detail::parse_index(toks[1], cols) || !detail::parse_index(toks[2], nnz) ||
        rows < 0 || cols < 0 || nnz < 0) {
      throw fail(lineno, "malformed size line, expected 'rows cols nnz'");
    }
    break;
  }
  if (rows < 0) throw fail(lineno, "missing size line");

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(nnz));
  while (static_cast<Index>(triplets.size()) < nnz && std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '%') continue;
    const auto toks = detail::split_ws(t);
    Index i = 0, j = 0;
    double v = 0.0;
    if (toks.size() != 3 || !detail::parse_index(toks[0], i) ||
        !detail::parse_index(toks[1], j) || !detail::parse_real(toks[2], v)) {
      throw fail(lineno, "malformed entry, expected 'row col value'");
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw fail(lineno, "entry index out of range");
    }
    if (!std::isfinite(v)) throw fail(lineno, "non-finite value");
    triplets.push_back({i - 1, j - 1, v});
  }
  if (static_cast<Index>(triplets.size()) < nnz) {
    throw fail(lineno, "truncated: expected " + std::to_string(nnz) +
                           " entries, found " + std::to_string(triplets.size()));
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

inline SparseMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_matrix_market(in, path);
}

inline void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  std::string buf;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index p = offsets[i]; p < offsets[i + 1]; ++p) {
      buf.clear();
      buf += std::to_string(i + 1);
      buf += ' ';
      buf += std::to_string(cols[p] + 1);
      buf += ' ';
      buf += detail::format_real(vals[p]);
      buf += '\n';
      out << buf;
    }
  }
}

inline void write_matrix_market_file(const std::string& path, const SparseMatrix& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_matrix_market(out, a);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace alnewton
