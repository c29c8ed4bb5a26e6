#include "amalgam/smith.hpp"

#include <cstdlib>
#include <numeric>
#include <sstream>
#include <utility>

namespace amalgam {

std::vector<std::int64_t> smith_diagonal(IntMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<std::int64_t> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Pivot: the smallest nonzero absolute value in the remaining block.
    bool done = false;
    while (!done) {
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (m[i][j] != 0 && (pr == rows || std::llabs(m[i][j]) < std::llabs(m[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) return diag;
      std::swap(m[t], m[pr]);
      for (auto& row : m) std::swap(row[t], row[pc]);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        std::int64_t q = m[i][t] / m[t][t];
        if (q)
          for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t]) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        std::int64_t q = m[t][j] / m[t][t];
        if (q)
          for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j]) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold any offending row into row t and retry.
      done = true;
      for (std::size_t i = t + 1; i < rows && done; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
            done = false;
            break;
          }
    }
    diag.push_back(std::llabs(m[t][t]));
  }
  return diag;
}

AbelianInvariants abelian_invariants(int num_generators, const IntMatrix& relations) {
  AbelianInvariants out;
  auto diag = smith_diagonal(relations);
  out.free_rank = num_generators - static_cast<int>(diag.size());
  for (auto d : diag)
    if (d > 1) out.torsion.push_back(d);
  return out;
}

std::string AbelianInvariants::str() const {
  std::ostringstream os;
  bool any = false;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    any = true;
  }
  for (auto t : torsion) {
    os << (any ? " + " : "") << "Z/" << t;
    any = true;
  }
  if (!any) os << "0";
  return os.str();
}

}  // namespace amalgam
