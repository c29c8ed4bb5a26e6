#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <queue>
#include <random>

#include "amalgam/error.hpp"
#include "amalgam/separation.hpp"
#include "support.hpp"

using namespace amalgam;
using amalgam::testing::corpus_group;
using amalgam::testing::evaluate;

namespace {

/// Explicit distance matrix, for arbitrary finite metric spaces and their
/// subspaces.
class MatrixMetric : public MetricView {
 public:
  explicit MatrixMetric(std::vector<std::vector<int>> d) : d_(std::move(d)) {}
  int size() const override { return static_cast<int>(d_.size()); }
  std::vector<int> within(int x, int r) const override {
    std::vector<int> out;
    for (int y = 0; y < size(); ++y)
      if (y != x && d_[x][y] <= r) out.push_back(y);
    return out;
  }
  std::vector<int> distances_to(const std::vector<char>& set, int cap) const override {
    std::vector<int> out(size(), cap + 1);
    for (int x = 0; x < size(); ++x)
      for (int y = 0; y < size(); ++y)
        if (set[y]) out[x] = std::min(out[x], d_[x][y]);
    return out;
  }
  int at(int x, int y) const { return d_[x][y]; }
  MatrixMetric restrict_to(const std::vector<int>& keep) const {
    std::vector<std::vector<int>> d(keep.size(), std::vector<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = 0; j < keep.size(); ++j) d[i][j] = d_[keep[i]][keep[j]];
    return MatrixMetric(std::move(d));
  }

 private:
  std::vector<std::vector<int>> d_;
};

/// Random points of a grid under the L1 metric.
MatrixMetric random_space(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> coord(0, 14);
  std::vector<std::pair<int, int>> p(n);
  for (auto& q : p) q = {coord(rng), coord(rng)};
  std::vector<std::vector<int>> d(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = std::abs(p[i].first - p[j].first) + std::abs(p[i].second - p[j].second);
  return MatrixMetric(std::move(d));
}

/// All-pairs union-find; labels are the least member of each class.
std::vector<int> union_find_components(int n, const std::vector<char>& excluded,
                                       const std::function<int(int, int)>& dist, int R) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (!excluded[x] && !excluded[y] && dist(x, y) <= R) {
        const int a = root(x), b = root(y);
        parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<int> label(n, -1);
  for (int x = 0; x < n; ++x)
    if (!excluded[x]) label[x] = root(x);
  return label;
}

std::vector<std::vector<int>> all_pairs_bfs(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> d(n, std::vector<int>(n, 1 << 20));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    q.push(s);
    d[s][s] = 0;
    while (!q.empty()) {
      const int x = q.front();
      q.pop();
      for (int y : adj[x])
        if (d[s][y] > d[s][x] + 1) {
          d[s][y] = d[s][x] + 1;
          q.push(y);
        }
    }
  }
  return d;
}

int count_components(const std::vector<int>& labels) {
  int n = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) n += labels[i] == static_cast<int>(i);
  return n;
}

std::vector<char> mask(int n, const std::vector<int>& members) {
  std::vector<char> m(n, 0);
  for (int x : members) m[x] = 1;
  return m;
}

}  // namespace

TEST(RComponents, Examples) {
  const FundamentalGroup dinf = corpus_group("dinf");
  const CayleyBall line = word_metric_ball(dinf, 6);
  const GraphMetric g(line.adj);
  EXPECT_EQ(count_components(r_components(g, std::vector<char>(line.size(), 0), 20)), 1);
  EXPECT_EQ(count_components(r_components(g, mask(line.size(), {0}), 1)), 2);

  const CayleyBall plane = word_metric_ball(corpus_group("z2"), 6);
  EXPECT_EQ(count_components(r_components(GraphMetric(plane.adj), mask(plane.size(), {0}), 1)), 1);
}

TEST(RComponentsProperty, AgreesWithUnionFind) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const MatrixMetric space = random_space(rng, 80);
    std::vector<char> excluded(80);
    for (auto& e : excluded) e = rng() % 4 == 0;
    const int R = 1 + static_cast<int>(rng() % 4);
    EXPECT_EQ(r_components(space, excluded, R),
              union_find_components(80, excluded, [&](int x, int y) { return space.at(x, y); }, R));
  }
  for (const auto& name : {"dinf", "z2z3", "f2", "zz2", "z2"}) {
    const FundamentalGroup fg = corpus_group(name);
    const CayleyBall ball = word_metric_ball(fg, 4);
    const auto d = all_pairs_bfs(ball.adj);
    const GraphMetric graph(ball.adj);
    for (int R = 1; R <= 3; ++R) {
      std::vector<char> excluded(ball.size());
      for (auto& e : excluded) e = rng() % 5 == 0;
      EXPECT_EQ(r_components(graph, excluded, R),
                union_find_components(ball.size(), excluded, [&](int x, int y) { return d[x][y]; }, R))
          << name;
    }
  }
}

TEST(RSeparates, Examples) {
  const FundamentalGroup dinf = corpus_group("dinf");
  const CayleyBall ball = word_metric_ball(dinf, 8);
  const GroupMetric gm(dinf, ball);
  const int e = ball.find(dinf.identity());
  const int a = ball.find(evaluate(dinf, {1}));
  const int x0 = ball.find(evaluate(dinf, {2, 1, 2}));
  const int x1 = ball.find(evaluate(dinf, {1, 2, 1, 2}));
  EXPECT_FALSE(r_separates(gm, std::vector<char>(ball.size(), 0), x0, x1, 1));
  const auto I = mask(ball.size(), {e, a});
  EXPECT_TRUE(r_separates(gm, I, x0, x1, 1));
  // At R = 3 the gap left by I is bridged by b -- ab; both witnesses are
  // still 3 away from I.
  EXPECT_FALSE(r_separates(gm, I, x0, x1, 3));
  const auto d = gm.distances_to(I, 5);
  EXPECT_EQ(d[x0], 3);
  EXPECT_EQ(d[x1], 3);
}

TEST(SeparationProperty, RestrictionToSubspaces) {
  std::mt19937_64 rng(22);
  int instances = 0;
  for (int attempt = 0; attempt < 20000 && instances < 200; ++attempt) {
    const MatrixMetric space = random_space(rng, 40);
    std::vector<char> K(40);
    for (auto& k : K) k = rng() % 3 == 0;
    const int R = 1 + static_cast<int>(rng() % 3);
    const int x0 = static_cast<int>(rng() % 40), x1 = static_cast<int>(rng() % 40);
    if (K[x0] || K[x1] || x0 == x1 || !r_separates(space, K, x0, x1, R)) continue;
    ++instances;
    std::vector<int> keep;
    for (int p = 0; p < 40; ++p)
      if (p == x0 || p == x1 || rng() % 3 != 0) keep.push_back(p);
    std::vector<char> K2;
    int y0 = 0, y1 = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      K2.push_back(K[keep[i]]);
      if (keep[i] == x0) y0 = static_cast<int>(i);
      if (keep[i] == x1) y1 = static_cast<int>(i);
    }
    EXPECT_TRUE(r_separates(space.restrict_to(keep), K2, y0, y1, R));
  }
  EXPECT_EQ(instances, 200);
}

TEST(SeparationProperty, EnlargingKeepsSeparation) {
  std::mt19937_64 rng(23);
  int instances = 0;
  for (int attempt = 0; attempt < 20000 && instances < 200; ++attempt) {
    const MatrixMetric space = random_space(rng, 40);
    std::vector<char> K(40);
    for (auto& k : K) k = rng() % 3 == 0;
    const int R = 1 + static_cast<int>(rng() % 3);
    const int x0 = static_cast<int>(rng() % 40), x1 = static_cast<int>(rng() % 40);
    if (K[x0] || K[x1] || x0 == x1 || !r_separates(space, K, x0, x1, R)) continue;
    ++instances;
    auto bigger = K;
    for (int p = 0; p < 40; ++p)
      if (rng() % 2 && space.at(p, x0) >= R && space.at(p, x1) >= R) bigger[p] = 1;
    EXPECT_TRUE(r_separates(space, bigger, x0, x1, R));
  }
  EXPECT_EQ(instances, 200);
}

TEST(Thickening, Examples) {
  const FundamentalGroup dinf = corpus_group("dinf");
  const CayleyBall line = word_metric_ball(dinf, 10);
  const GraphMetric g(line.adj);
  const int e = line.find(dinf.identity());
  const int left = line.find(evaluate(dinf, {1, 2, 1, 2, 1, 2}));
  const int right = line.find(evaluate(dinf, {2, 1, 2, 1, 2, 1}));
  EXPECT_TRUE(verify_thickening_lemma(g, mask(line.size(), {e}), left, right, 2).holds());

  const int close = line.find(evaluate(dinf, {1}));
  try {
    verify_thickening_lemma(g, mask(line.size(), {e}), close, right, 2);
    FAIL() << "expected PreconditionUnmet";
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), "PreconditionUnmet");
  }

  const FundamentalGroup f2 = corpus_group("f2");
  const CayleyBall tree = word_metric_ball(f2, 8);
  std::vector<int> branch;
  const NormalForm s = evaluate(f2, {1});
  for (int i = 0; i < tree.size(); ++i)
    if (tree.dist[i] == 2 && tree.dist[tree.find(f2.multiply(f2.invert(s), tree.elements[i]))] == 1)
      branch.push_back(i);
  ASSERT_EQ(branch.size(), 3u);
  const int x0 = tree.find(evaluate(f2, {1, 1, 1, 1, 1}));
  const int x1 = tree.find(evaluate(f2, {2, 2, 2}));
  EXPECT_TRUE(verify_thickening_lemma(GraphMetric(tree.adj), mask(tree.size(), branch), x0, x1, 2).holds());
}

TEST(CayleySeparation, InfiniteDihedral) {
  const FundamentalGroup fg = corpus_group("dinf");
  for (int R : {1, 2}) {
    SamplingOptions opt;
    opt.ball_radius = 10;
    opt.R = R;
    opt.samples = 100;
    const SeparationReport rep = verify_cayley_separation(fg, opt);
    EXPECT_TRUE(rep.holds()) << rep.to_text();
    EXPECT_GT(rep.pairs_tested, 0);
    EXPECT_GT(rep.not_applicable, 0);
  }
}

TEST(CayleySeparation, ModularGroup) {
  SamplingOptions opt;
  opt.ball_radius = 8;
  opt.samples = 50;
  const SeparationReport rep = verify_cayley_separation(corpus_group("z2z3"), opt);
  EXPECT_TRUE(rep.holds()) << rep.to_text();
  EXPECT_GT(rep.pairs_tested, 0);
}

TEST(CayleySeparation, WorkerCountDoesNotChangeTheReport) {
  SamplingOptions opt;
  opt.ball_radius = 7;
  opt.samples = 40;
  opt.seed = 11;
  const FundamentalGroup fg = corpus_group("z2z3");
  const std::string serial = verify_cayley_separation(fg, opt).to_json();
  opt.jobs = 4;
  EXPECT_EQ(verify_cayley_separation(fg, opt).to_json(), serial);
}

TEST(KConstruction, BothCorpora) {
  for (const auto& [name, radius] : std::vector<std::pair<std::string, int>>{{"dinf", 12}, {"z2z3", 10}}) {
    KOptions opt;
    opt.ball_radius = radius;
    opt.edges = 20;
    const SeparationReport rep = verify_K_construction(corpus_group(name), opt);
    EXPECT_TRUE(rep.holds()) << rep.to_text();
    EXPECT_LE(rep.diagnostics.at("R0_max"), rep.diagnostics.at("diam_bound")) << name;
    EXPECT_GT(rep.diagnostics.at("probe_pairs"), 0) << name;
  }
}

TEST(KConstruction, WorkerCountDoesNotChangeTheReport) {
  KOptions opt;
  opt.ball_radius = 9;
  opt.edges = 8;
  const FundamentalGroup fg = corpus_group("z2z3");
  const std::string serial = verify_K_construction(fg, opt).to_json();
  opt.jobs = 3;
  EXPECT_EQ(verify_K_construction(fg, opt).to_json(), serial);
}

TEST(Ends, Verdicts) {
  EXPECT_EQ(ends_estimate(corpus_group("trivial"), {2, 3}).verdict, EndsVerdict::Zero);
  EXPECT_EQ(ends_estimate(corpus_group("z2"), {4, 5, 6, 7, 8}).verdict, EndsVerdict::One);
  EXPECT_EQ(ends_estimate(corpus_group("dinf"), {4, 5, 6, 7, 8, 9, 10}).verdict, EndsVerdict::Two);
  const EndsEstimate f2 = ends_estimate(corpus_group("f2"), {0, 1, 2});
  EXPECT_EQ(f2.counts, (std::vector<int>{4, 12, 36}));
  EXPECT_EQ(f2.verdict, EndsVerdict::Infinite);
  EXPECT_EQ(ends_estimate(corpus_group("z2z3"), {2, 4, 6, 8}).verdict, EndsVerdict::Infinite);
  EXPECT_THROW(ends_estimate(corpus_group("dinf"), {4, 3}), Error);
}

TEST(Report, HoldsIffNoFailures) {
  SeparationReport rep;
  EXPECT_TRUE(rep.holds());
  rep.failures.push_back({"a", "b", "same R-component"});
  EXPECT_FALSE(rep.holds());
  EXPECT_NE(rep.to_json().find("\"failures\""), std::string::npos);
}
