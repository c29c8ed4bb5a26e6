#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "amalgam/fundgroup.hpp"

namespace amalgam {

inline constexpr std::size_t kDefaultBudget = 2'000'000;

/// Exact ball of radius r around the identity in the Cayley graph of
/// pi_1 over the symmetric generating set.
struct CayleyBall {
  int radius = 0;
  std::vector<NormalForm> elements;   // BFS order, so layers are contiguous
  std::vector<int> dist;              // d_S to the identity
  std::vector<std::vector<int>> adj;  // x -- x*s for s in S^{+-1}, both ends inside
  std::unordered_map<NormalForm, int, NormalFormHash> index;

  int size() const { return static_cast<int>(elements.size()); }
  /// Index of x, or -1.
  int find(const NormalForm& x) const;
  std::vector<int> layer_sizes() const;
  /// Graph distances inside the ball from one element (-1 if unreachable).
  std::vector<int> bfs_from(int source) const;
};

/// Throws BudgetExceeded once more than `budget` elements are discovered.
CayleyBall word_metric_ball(const FundamentalGroup& fg, int radius,
                            std::size_t budget = kDefaultBudget);

/// d_S via lengths looked up in a precomputed ball: d(x, y) = |x^-1 y|.
class WordMetric {
 public:
  WordMetric(const FundamentalGroup& fg, int radius, std::size_t budget = kDefaultBudget);

  const FundamentalGroup& group() const { return *fg_; }
  const CayleyBall& ball() const { return ball_; }
  int radius() const { return ball_.radius; }
  /// nullopt when |x| exceeds the radius.
  std::optional<int> length(const NormalForm& x) const;
  std::optional<int> distance(const NormalForm& x, const NormalForm& y) const;

 private:
  const FundamentalGroup* fg_;
  CayleyBall ball_;
};

}  // namespace amalgam
