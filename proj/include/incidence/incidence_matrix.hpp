#pragma once

// Zero-one matrices with no zero rows or columns, plus the plain-text block
// format shared between the sampler and the CLI:
//
//   k l
//   <k lines of l characters from {0,1}>
//
// with consecutive blocks separated by a single blank line.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace incidence {

struct incidence_matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> bits;  // row-major, values 0/1

  std::uint8_t at(std::size_t r, std::size_t c) const {
    return bits[r * cols + c];
  }
  std::uint8_t& at(std::size_t r, std::size_t c) { return bits[r * cols + c]; }

  std::size_t ones() const {
    return std::accumulate(bits.begin(), bits.end(), std::size_t{0});
  }

  // Every row and every column contains at least one 1.
  bool valid() const {
    if (rows == 0 || cols == 0 || bits.size() != rows * cols) return false;
    for (std::size_t r = 0; r < rows; ++r) {
      bool any = false;
      for (std::size_t c = 0; c < cols; ++c) any |= at(r, c) != 0;
      if (!any) return false;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      bool any = false;
      for (std::size_t r = 0; r < rows; ++r) any |= at(r, c) != 0;
      if (!any) return false;
    }
    return true;
  }

  // Canonical string key, usable as a category label in frequency tests.
  std::string key() const {
    std::string k = std::to_string(rows) + "x" + std::to_string(cols) + ":";
    for (auto b : bits) k.push_back(b ? '1' : '0');
    return k;
  }

  friend bool operator==(const incidence_matrix& a, const incidence_matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.bits == b.bits;
  }
};

inline void write_matrix_block(std::ostream& os, const incidence_matrix& m) {
  os << m.rows << ' ' << m.cols << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) os.put(m.at(r, c) ? '1' : '0');
    os.put('\n');
  }
}

// Reads every block in the stream; throws on malformed input.
inline std::vector<incidence_matrix> read_matrix_blocks(std::istream& is) {
  std::vector<incidence_matrix> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t pos = line.find(' ');
    if (pos == std::string::npos) {
      throw std::runtime_error("matrix block: bad header '" + line + "'");
    }
    incidence_matrix m;
    m.rows = std::stoul(line.substr(0, pos));
    m.cols = std::stoul(line.substr(pos + 1));
    m.bits.reserve(m.rows * m.cols);
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (!std::getline(is, line) || line.size() != m.cols) {
        throw std::runtime_error("matrix block: truncated row");
      }
      for (char ch : line) {
        if (ch != '0' && ch != '1') {
          throw std::runtime_error("matrix block: bad character");
        }
        m.bits.push_back(ch == '1' ? 1 : 0);
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace incidence
