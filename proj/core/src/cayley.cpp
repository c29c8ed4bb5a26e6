#include "amalgam/cayley.hpp"

#include <algorithm>
#include <deque>

#include "amalgam/error.hpp"

namespace amalgam {

int CayleyBall::find(const NormalForm& x) const {
  auto it = index.find(x);
  return it == index.end() ? -1 : it->second;
}

std::vector<int> CayleyBall::layer_sizes() const {
  std::vector<int> out(radius + 1, 0);
  for (int d : dist) ++out[d];
  return out;
}

std::vector<int> CayleyBall::bfs_from(int source) const {
  std::vector<int> d(elements.size(), -1);
  std::deque<int> q{source};
  d[source] = 0;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : adj[x])
      if (d[y] < 0) {
        d[y] = d[x] + 1;
        q.push_back(y);
      }
  }
  return d;
}

CayleyBall word_metric_ball(const FundamentalGroup& fg, int radius, std::size_t budget) {
  if (radius < 0) throw Error("InvalidArgument", "negative radius");
  CayleyBall b;
  b.radius = radius;
  const auto& gens = fg.symmetric_generators();
  auto add = [&](NormalForm x, int d) {
    if (b.elements.size() >= budget)
      throw Error("BudgetExceeded", "Cayley ball passed " + std::to_string(budget) + " elements");
    int id = b.size();
    b.index.emplace(x, id);
    b.elements.push_back(std::move(x));
    b.dist.push_back(d);
    b.adj.emplace_back();
    return id;
  };
  add(fg.identity(), 0);
  for (std::size_t i = 0; i < b.elements.size(); ++i) {
    const int d = b.dist[i];
    for (const auto& s : gens) {
      NormalForm y = fg.multiply(b.elements[i], s);
      int j = b.find(y);
      if (j < 0) {
        if (d == radius) continue;
        j = add(std::move(y), d + 1);
      }
      b.adj[i].push_back(j);
    }
  }
  for (auto& a : b.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return b;
}

WordMetric::WordMetric(const FundamentalGroup& fg, int radius, std::size_t budget)
    : fg_(&fg), ball_(word_metric_ball(fg, radius, budget)) {}

std::optional<int> WordMetric::length(const NormalForm& x) const {
  int i = ball_.find(x);
  if (i < 0) return std::nullopt;
  return ball_.dist[i];
}

std::optional<int> WordMetric::distance(const NormalForm& x, const NormalForm& y) const {
  return length(fg_->multiply(fg_->invert(x), y));
}

}  // namespace amalgam
