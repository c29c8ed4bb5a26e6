#pragma once

// Independent reference implementations used as test oracles. None of them
// touches the library's normal forms.

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "amalgam/smith.hpp"

namespace amalgam::oracle {

/// Free product of cyclic groups Z/n_1 * ... * Z/n_k (n = 0 for Z), elements
/// as reduced syllable lists (factor, exponent).
struct FreeProduct {
  std::vector<int> orders;
  /// Letter per library generator, in generator order.
  std::vector<std::pair<int, int>> letters;

  using Reduced = std::vector<std::pair<int, int>>;

  int normalize(int factor, int e) const {
    const int n = orders[factor];
    return n == 0 ? e : ((e % n) + n) % n;
  }

  void push(Reduced& w, int factor, int e) const {
    e = normalize(factor, e);
    if (e == 0) return;
    if (!w.empty() && w.back().first == factor) {
      const int sum = normalize(factor, w.back().second + e);
      if (sum == 0) w.pop_back();
      else w.back().second = sum;
    } else {
      w.emplace_back(factor, e);
    }
  }

  /// Signed 1-based generator word, as in the library's Word.
  Reduced reduce(const std::vector<int>& word) const {
    Reduced w;
    for (int l : word) {
      const auto [f, e] = letters[std::abs(l) - 1];
      push(w, f, l > 0 ? e : -e);
    }
    return w;
  }

  /// |ball(n)| for n = 0..radius by enumerating every string over the
  /// symmetric letters and reducing it.
  std::vector<std::int64_t> ball_sizes(int radius) const {
    std::vector<int> alphabet;
    for (int k = 1; k <= static_cast<int>(letters.size()); ++k) {
      alphabet.push_back(k);
      // Involutions appear once in the symmetric generating set.
      const auto [f, e] = letters[k - 1];
      if (normalize(f, -e) != normalize(f, e)) alphabet.push_back(-k);
    }
    std::set<Reduced> seen;
    std::vector<std::int64_t> sizes;
    std::vector<std::vector<int>> layer = {{}};
    seen.insert(Reduced{});
    sizes.push_back(1);
    for (int n = 1; n <= radius; ++n) {
      std::vector<std::vector<int>> next;
      for (const auto& w : layer)
        for (int a : alphabet) {
          auto v = w;
          v.push_back(a);
          seen.insert(reduce(v));
          next.push_back(std::move(v));
        }
      layer = std::move(next);
      sizes.push_back(static_cast<std::int64_t>(seen.size()));
    }
    return sizes;
  }
};

/// The free product decompositions of the free-product corpus inputs, with
/// letters listed in the library's generator order.
inline std::map<std::string, FreeProduct> free_product_corpus() {
  return {
      {"dinf", {{2, 2}, {{0, 1}, {1, 1}}}},
      {"z2z3", {{2, 3}, {{0, 1}, {1, 1}}}},
      {"f2", {{0, 0}, {{0, 1}, {1, 1}}}},
      {"zz2", {{0, 2}, {{0, 1}, {1, 1}}}},
  };
}

/// Smith invariants through determinantal divisors: d_k = gcd of all k x k
/// minors, invariant factor k is d_k / d_{k-1}. Exponential, small inputs only.
inline std::int64_t determinant(std::vector<std::vector<std::int64_t>> m) {
  // Fraction-free Bareiss elimination.
  const int n = static_cast<int>(m.size());
  std::int64_t sign = 1, prev = 1;
  for (int k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n && swap < 0; ++i)
        if (m[i][k] != 0) swap = i;
      if (swap < 0) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

inline std::vector<std::int64_t> invariant_factors(const IntMatrix& a) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  std::vector<std::int64_t> out;
  std::int64_t prev = 1;
  for (int k = 1; k <= std::min(rows, cols); ++k) {
    std::int64_t g = 0;
    std::vector<int> ri(k), ci(k);
    // Iterate over all k-subsets of rows and columns.
    std::function<void(int, int)> pick_cols;
    std::function<void(int, int)> pick_rows = [&](int start, int depth) {
      if (depth == k) {
        pick_cols(0, 0);
        return;
      }
      for (int r = start; r < rows; ++r) {
        ri[depth] = r;
        pick_rows(r + 1, depth + 1);
      }
    };
    pick_cols = [&](int start, int depth) {
      if (depth == k) {
        std::vector<std::vector<std::int64_t>> m(k, std::vector<std::int64_t>(k));
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) m[i][j] = a[ri[i]][ci[j]];
        g = std::gcd(g, std::abs(determinant(m)));
        return;
      }
      for (int c = start; c < cols; ++c) {
        ci[depth] = c;
        pick_cols(c + 1, depth + 1);
      }
    };
    pick_rows(0, 0);
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

}  // namespace amalgam::oracle
