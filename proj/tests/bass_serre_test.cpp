#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "amalgam/bass_serre.hpp"
#include "amalgam/cayley.hpp"
#include "amalgam/error.hpp"
#include "support.hpp"

using namespace amalgam;
using amalgam::testing::corpus_group;
using amalgam::testing::evaluate;

namespace {

const std::vector<std::string> kWithEdges = {"dinf", "f2", "z2z3", "zz2", "z2z2", "amalgam_z4", "hnn_z2"};
const std::vector<std::string> kFinite = {"dinf", "f2", "z2z3", "amalgam_z4", "hnn_z2"};

std::vector<int> degrees(const TreeBall& t) {
  std::vector<int> d(t.vertices.size(), 0);
  for (const auto& e : t.edges) {
    ++d[e.parent];
    ++d[e.child];
  }
  return d;
}

// Star size of a coset vertex of type v from group orders alone.
int degree_by_index(const GraphOfGroups& g, VertexId v) {
  int total = 0;
  for (EdgeId y = 0; y < g.num_oriented(); ++y)
    if (g.omega(y) == v) total += g.vertex_group(v).order() / g.edge_group(y).order();
  return total;
}

}  // namespace

TEST(TreeBall, InfiniteDihedralIsALine) {
  const FundamentalGroup fg = corpus_group("dinf");
  for (int n = 0; n <= 12; ++n) {
    const TreeBall t = tree_ball(fg, n);
    EXPECT_EQ(t.vertices.size(), static_cast<std::size_t>(2 * n + 1));
    const auto d = degrees(t);
    for (std::size_t v = 0; v < d.size(); ++v)
      EXPECT_EQ(d[v], t.vertices[v].depth < n ? 2 : 1 - (n == 0)) << "radius " << n;
  }
}

TEST(TreeBall, ModularGroupIsBiregular) {
  const FundamentalGroup fg = corpus_group("z2z3");
  const TreeBall t = tree_ball(fg, 2);
  const auto d = degrees(t);
  EXPECT_EQ(d[0], 2);
  for (std::size_t v = 0; v < d.size(); ++v)
    if (t.vertices[v].depth < 2) EXPECT_EQ(d[v], t.vertices[v].type == 0 ? 2 : 3);
}

TEST(TreeBall, SingleVertex) {
  const TreeBall t = tree_ball(FundamentalGroup(parse_gog("group C2 cyclic 2\nvertex v C2 gens [a]\n")), 5);
  EXPECT_EQ(t.vertices.size(), 1u);
  EXPECT_TRUE(t.edges.empty());
}

TEST(TreeBallProperty, TreeShapeAndDegreeFormula) {
  for (const auto& name : kFinite) {
    const FundamentalGroup fg = corpus_group(name);
    for (int n = 0; n <= 5; ++n) {
      const TreeBall t = tree_ball(fg, n);
      EXPECT_EQ(t.vertices.size(), t.edges.size() + 1) << name;
      // Connected: every vertex but the root hangs off an earlier one.
      for (std::size_t v = 1; v < t.vertices.size(); ++v) EXPECT_LT(t.vertices[v].parent, static_cast<int>(v));
      // Keys are distinct, so no coset appears twice.
      std::set<std::pair<VertexId, std::string>> seen;
      for (const auto& v : t.vertices) EXPECT_TRUE(seen.emplace(v.type, fg.format(v.key)).second) << name;
      const auto d = degrees(t);
      for (std::size_t v = 0; v < d.size(); ++v)
        if (t.vertices[v].depth < n) EXPECT_EQ(d[v], degree_by_index(fg.graph(), t.vertices[v].type)) << name;
    }
  }
}

TEST(TreeBallProperty, GroupActionPreservesAdjacency) {
  std::mt19937_64 rng(3);
  for (const auto& name : kWithEdges) {
    const FundamentalGroup fg = corpus_group(name);
    const TreeBall t = tree_ball(fg, 4);
    const CayleyBall c = word_metric_ball(fg, 3);
    std::uniform_int_distribution<int> pick_g(0, c.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_e(0, t.edges.size() - 1);
    for (int trial = 0; trial < 100; ++trial) {
      const NormalForm& g = c.elements[pick_g(rng)];
      const TreeEdge& e = t.edges[pick_e(rng)];
      const NormalForm p = translate_key(fg, g, t.vertices[e.parent].key);
      const NormalForm q = translate_key(fg, g, t.vertices[e.child].key);
      EXPECT_EQ(key_distance(p, q), 1) << name;
      const int pi = t.find(p), qi = t.find(q);
      if (pi >= 0 && qi >= 0) EXPECT_EQ(tree_geodesic(t, pi, qi).size(), 1u) << name;
    }
  }
}

TEST(TreeBallProperty, EdgeCosetsSitInsideEndpoints) {
  for (const auto& name : kWithEdges) {
    const FundamentalGroup fg = corpus_group(name);
    const TreeBall t = tree_ball(fg, 4);
    for (const auto& e : t.edges) {
      const TreeVertex& a = t.vertices[e.parent];
      const TreeVertex& w = t.vertices[e.child];
      EXPECT_EQ(edge_alpha(fg, e.gamma, e.type), a.key) << name;
      EXPECT_EQ(edge_omega(fg, e.gamma, e.type), w.key) << name;
      for (const auto& x : edge_coset(fg, e.gamma, e.type))
        EXPECT_TRUE(fg.vertex_key(x, a.type) == a.key || fg.vertex_key(x, w.type) == w.key) << name;
      // The reversed edge is the same coset read backwards.
      EXPECT_EQ(edge_omega(fg, e.gamma, bar(e.type)), a.key) << name;
    }
  }
}

TEST(Geodesic, Examples) {
  const FundamentalGroup dinf = corpus_group("dinf");
  const TreeBall line = tree_ball(dinf, 3);
  EXPECT_TRUE(tree_geodesic(line, 2, 2).empty());
  std::vector<int> ends;
  for (std::size_t v = 0; v < line.vertices.size(); ++v)
    if (line.vertices[v].depth == 3) ends.push_back(static_cast<int>(v));
  ASSERT_EQ(ends.size(), 2u);
  EXPECT_EQ(tree_geodesic(line, ends[0], ends[1]).size(), 6u);
  EXPECT_THROW(tree_geodesic(line, 0, 99), Error);

  const TreeBall m = tree_ball(corpus_group("z2z3"), 2);
  const auto first = m.children(0);
  ASSERT_EQ(first.size(), 2u);
  const int u = m.children(first[0]).front(), w = m.children(first[1]).front();
  const auto path = tree_geodesic(m, u, w);
  EXPECT_EQ(path.size(), 4u);
}

TEST(SplitByEdge, Examples) {
  const TreeBall line = tree_ball(corpus_group("dinf"), 3);
  const auto [near, far] = split_by_edge(line, 0);
  EXPECT_EQ(near.size(), 4u);
  EXPECT_EQ(far.size(), 3u);
  EXPECT_EQ(near.front(), 0);
  const int leaf_edge = static_cast<int>(line.edges.size()) - 1;
  EXPECT_EQ(split_by_edge(line, leaf_edge).second.size(), 1u);

  const TreeBall m = tree_ball(corpus_group("z2z3"), 3);
  const auto [a, b] = split_by_edge(m, 0);
  for (const auto& side : {a, b}) {
    std::set<VertexId> types;
    for (int v : side) types.insert(m.vertices[v].type);
    EXPECT_EQ(types.size(), 2u);
  }
}

TEST(Tiling, Examples) {
  const FundamentalGroup dinf = corpus_group("dinf");
  const auto line = tiling_tree(dinf);
  ASSERT_EQ(line.size(), 1u);
  EXPECT_EQ(line[0].alpha_key, dinf.vertex_key(dinf.identity(), 0));
  EXPECT_EQ(line[0].omega_key, dinf.vertex_key(dinf.identity(), 1));

  const FundamentalGroup f2 = corpus_group("f2");
  const auto star = tiling_tree(f2);
  ASSERT_EQ(star.size(), 2u);
  EXPECT_EQ(star[0].alpha_key, star[1].alpha_key);
  EXPECT_NE(star[0].omega_key, star[1].omega_key);

  EXPECT_THROW(tiling_tree(corpus_group("trivial")), Error);
}

TEST(TilingProperty, GeneratorTranslatesMeetTheTile) {
  for (const auto& name : kWithEdges) {
    const FundamentalGroup fg = corpus_group(name);
    const auto tile = tiling_tree(fg);
    for (const NormalForm& s : fg.symmetric_generators()) EXPECT_TRUE(tiling_meets_translate(fg, tile, s)) << name;
  }
}

TEST(TilingProperty, EdgeToVertexDistanceBound) {
  for (const auto& name : kWithEdges) {
    const FundamentalGroup fg = corpus_group(name);
    const int bound = fg.graph().num_edges();
    TreeOptions opt;
    opt.star_radius = 1;
    const TreeBall t = tree_ball(fg, 5, opt);
    for (const auto& e : t.edges)
      for (VertexId v = 0; v < fg.graph().num_vertices(); ++v) {
        const NormalForm target = fg.vertex_key(e.gamma, v);
        const int d = std::min(key_distance(target, t.vertices[e.parent].key),
                               key_distance(target, t.vertices[e.child].key));
        EXPECT_LE(d, bound) << name;
      }
  }
}

TEST(Phi, CanonicalAndRandomChoicesStayClose) {
  std::mt19937_64 rng(17);
  for (const auto& name : {"amalgam_z4", "hnn_z2", "z2z3", "dinf"}) {
    const FundamentalGroup fg = corpus_group(name);
    const GraphOfGroups& g = fg.graph();
    const WordMetric metric(fg, 10);
    int D = 0;
    for (EdgeId y = 0; y < g.num_oriented(); ++y) {
      const auto coset = edge_coset(fg, fg.identity(), y);
      for (const auto& a : coset)
        for (const auto& b : coset) D = std::max(D, *metric.distance(a, b));
    }
    const TreeBall t = tree_ball(fg, 4);
    std::uniform_int_distribution<std::size_t> pick(0, t.edges.size() - 1);
    for (int trial = 0; trial < 500; ++trial) {
      const TreeEdge& e = t.edges[pick(rng)];
      const NormalForm p = phi(fg, e.gamma, e.type);
      const NormalForm q = phi_random(fg, e.gamma, e.type, rng);
      const auto coset = edge_coset(fg, e.gamma, e.type);
      EXPECT_NE(std::find(coset.begin(), coset.end(), p), coset.end());
      const auto d = metric.distance(p, q);
      ASSERT_TRUE(d.has_value());
      EXPECT_LE(*d, D) << name;
    }
  }
}

TEST(Phi, UniformlyFiniteToOne) {
  for (const auto& name : kWithEdges) {
    const FundamentalGroup fg = corpus_group(name);
    const GraphOfGroups& g = fg.graph();
    const CayleyBall c = word_metric_ball(fg, 4);
    // An edge gG_y is named by (y, phi); every element lies in one coset per y.
    std::map<std::string, std::set<EdgeId>> preimages;
    for (const auto& x : c.elements)
      for (EdgeId y = 0; y < g.num_oriented(); ++y) preimages[fg.format(phi(fg, x, y))].insert(y);
    for (const auto& [value, types] : preimages)
      EXPECT_LE(static_cast<int>(types.size()), g.num_oriented()) << name << " " << value;
  }
}

TEST(Render, DotAndJson) {
  const FundamentalGroup fg = corpus_group("dinf");
  const TreeBall t = tree_ball(fg, 1);
  const std::string dot = tree_to_dot(fg, t);
  EXPECT_EQ(dot.rfind("graph tree {", 0), 0u);
  EXPECT_NE(dot.find("label=\"v1:0\""), std::string::npos) << dot;
  EXPECT_NE(tree_to_json(fg, t).find("\"schema_version\": 1"), std::string::npos);
}
