#include "amalgam/bass_serre.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "amalgam/error.hpp"
#include "json.hpp"

namespace amalgam {

namespace {

// Element preceding the i-th edge of a path (the head for i == 0).
const Elem& before(const NormalForm& k, std::size_t i) { return i == 0 ? k.head : k.tail[i - 1].elem; }

std::size_t common_depth(const NormalForm& a, const NormalForm& b) {
  std::size_t k = 0;
  const std::size_t n = std::min(a.tail.size(), b.tail.size());
  while (k < n && a.tail[k].edge == b.tail[k].edge && before(a, k) == before(b, k)) ++k;
  return k;
}

}  // namespace

int TreeBall::find(const NormalForm& key) const {
  if (index.empty()) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].key == key) return static_cast<int>(i);
    return -1;
  }
  auto it = index.find(key);
  return it == index.end() ? -1 : it->second;
}

std::vector<int> TreeBall::children(int v) const {
  std::vector<int> out;
  for (int e : incident[v])
    if (edges[e].parent == v) out.push_back(edges[e].child);
  return out;
}

int key_depth(const NormalForm& key) { return static_cast<int>(key.tail.size()); }

int key_distance(const NormalForm& a, const NormalForm& b) {
  if (a.base != b.base) throw Error("BaseMismatch", "keys rooted at different vertices");
  const int k = static_cast<int>(common_depth(a, b));
  return key_depth(a) + key_depth(b) - 2 * k;
}

bool key_descends(const NormalForm& key, const NormalForm& ancestor) {
  return key.base == ancestor.base && key.tail.size() >= ancestor.tail.size() &&
         common_depth(key, ancestor) == ancestor.tail.size();
}

NormalForm coset_representative(const FundamentalGroup& fg, const NormalForm& key) {
  const VertexId v = fg.end_vertex(key);
  return fg.multiply(fg.normalize(key), fg.reverse_path(fg.tree_path(v)));
}

NormalForm translate_key(const FundamentalGroup& fg, const NormalForm& gamma,
                         const NormalForm& key) {
  return fg.vertex_key(fg.multiply(gamma, coset_representative(fg, key)), fg.end_vertex(key));
}

NormalForm edge_omega(const FundamentalGroup& fg, const NormalForm& gamma, EdgeId y) {
  const auto& sd = fg.spanning();
  const VertexId w = fg.graph().omega(y);
  if (sd.in_A(y) && !sd.in_tree(y)) return fg.vertex_key(fg.multiply(gamma, fg.edge_loop(y)), w);
  return fg.vertex_key(gamma, w);
}

NormalForm edge_alpha(const FundamentalGroup& fg, const NormalForm& gamma, EdgeId y) {
  return edge_omega(fg, gamma, bar(y));
}

std::vector<NormalForm> edge_coset(const FundamentalGroup& fg, const NormalForm& gamma, EdgeId y) {
  const EdgeId h = fg.spanning().hat(y);
  const VertexId w = fg.graph().omega(h);
  std::vector<NormalForm> out;
  for (const auto& c : fg.graph().embed(h).images())
    out.push_back(fg.multiply(gamma, fg.vertex_element(w, c)));
  return out;
}

TreeBall tree_ball(const FundamentalGroup& fg, int radius, const TreeOptions& opt) {
  if (radius < 0) throw Error("InvalidArgument", "negative radius");
  const GraphOfGroups& g = fg.graph();
  const auto& sd = fg.spanning();
  TreeBall b;
  b.radius = radius;

  std::vector<std::vector<Elem>> transversal(g.num_oriented());
  for (EdgeId y = 0; y < g.num_oriented(); ++y)
    transversal[y] = fg.left_transversal(y, opt.star_radius);

  TreeVertex root;
  root.key = fg.vertex_key(fg.identity(), fg.root());
  root.type = fg.root();
  if (opt.index_keys) b.index.emplace(root.key, 0);
  b.vertices.push_back(std::move(root));
  b.incident.emplace_back();

  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    if (b.vertices[i].depth == radius) continue;
    const VertexId v = b.vertices[i].type;
    const GroupBackend& gv = g.vertex_group(v);
    const EdgeId in = b.vertices[i].parent_edge >= 0 ? b.edges[b.vertices[i].parent_edge].type : -1;
    if (!gv.is_finite()) {
      b.vertices[i].truncated = true;
      b.truncated = true;
    }
    for (EdgeId y : g.out_edges(v)) {
      for (const Elem& t : transversal[y]) {
        if (y == bar(in) && in >= 0 && gv.is_identity(t)) continue;
        if (b.vertices.size() >= opt.budget)
          throw Error("BudgetExceeded", "tree ball passed " + std::to_string(opt.budget) + " vertices");
        const NormalForm& parent_key = b.vertices[i].key;
        NormalForm at_exit = parent_key;
        (at_exit.tail.empty() ? at_exit.head : at_exit.tail.back().elem) = t;
        NormalForm key = at_exit;
        key.tail.push_back({y, g.vertex_group(g.omega(y)).identity()});

        TreeEdge e;
        e.parent = static_cast<int>(i);
        e.child = static_cast<int>(b.vertices.size());
        e.type = y;
        e.exit = t;
        e.frontier = !gv.is_finite() && gv.length(t) == opt.star_radius;
        // The edge coset sits inside the child's coset when y is outside A,
        // inside the parent's otherwise.
        if (opt.edge_cosets)
          e.gamma = sd.in_A(y) ? coset_representative(fg, at_exit) : coset_representative(fg, key);

        TreeVertex c;
        c.key = std::move(key);
        c.type = g.omega(y);
        c.depth = b.vertices[i].depth + 1;
        c.parent = static_cast<int>(i);
        c.parent_edge = static_cast<int>(b.edges.size());
        if (opt.index_keys) b.index.emplace(c.key, e.child);
        b.incident[i].push_back(c.parent_edge);
        b.incident.push_back({c.parent_edge});
        b.vertices.push_back(std::move(c));
        b.edges.push_back(std::move(e));
      }
    }
  }
  return b;
}

std::vector<int> tree_geodesic(const TreeBall& ball, int u, int w) {
  const int n = static_cast<int>(ball.vertices.size());
  if (u < 0 || u >= n || w < 0 || w >= n) throw Error("NotInBall", "vertex index out of range");
  std::vector<int> up, down;
  while (u != w) {
    if (ball.vertices[u].depth >= ball.vertices[w].depth) {
      up.push_back(ball.vertices[u].parent_edge);
      u = ball.vertices[u].parent;
    } else {
      down.push_back(ball.vertices[w].parent_edge);
      w = ball.vertices[w].parent;
    }
  }
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

std::pair<std::vector<int>, std::vector<int>> split_by_edge(const TreeBall& ball, int edge) {
  if (edge < 0 || edge >= static_cast<int>(ball.edges.size()))
    throw Error("NotInBall", "edge index out of range");
  std::vector<char> below(ball.vertices.size(), 0);
  below[ball.edges[edge].child] = 1;
  // BFS order puts parents before children.
  for (std::size_t v = 0; v < ball.vertices.size(); ++v) {
    int p = ball.vertices[v].parent;
    if (p >= 0 && below[p]) below[v] = 1;
  }
  std::pair<std::vector<int>, std::vector<int>> out;
  for (std::size_t v = 0; v < ball.vertices.size(); ++v)
    (below[v] ? out.second : out.first).push_back(static_cast<int>(v));
  return out;
}

std::vector<TilingEdge> tiling_tree(const FundamentalGroup& fg) {
  const GraphOfGroups& g = fg.graph();
  if (g.num_edges() == 0) throw Error("NoEdges", "the tiling tree needs at least one edge");
  std::vector<TilingEdge> out;
  for (int k = 0; k < g.num_edges(); ++k) {
    EdgeId y = 2 * k;
    out.push_back({y, edge_alpha(fg, fg.identity(), y), edge_omega(fg, fg.identity(), y)});
  }
  // Connectivity over the endpoint keys.
  std::vector<NormalForm> keys;
  auto id = [&](const NormalForm& k) {
    auto it = std::find(keys.begin(), keys.end(), k);
    if (it != keys.end()) return static_cast<int>(it - keys.begin());
    keys.push_back(k);
    return static_cast<int>(keys.size()) - 1;
  };
  std::vector<std::pair<int, int>> links;
  for (const auto& e : out) links.emplace_back(id(e.alpha_key), id(e.omega_key));
  std::vector<int> parent(keys.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, c] : links) parent[root(a)] = root(c);
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (root(static_cast<int>(i)) != root(0)) throw Error("NotConnected", "tiling tree is disconnected");
  return out;
}

bool tiling_meets_translate(const FundamentalGroup& fg, const std::vector<TilingEdge>& tiling,
                            const NormalForm& s) {
  std::vector<NormalForm> keys;
  for (const auto& e : tiling) {
    keys.push_back(e.alpha_key);
    keys.push_back(e.omega_key);
  }
  for (const auto& k : keys) {
    NormalForm moved = translate_key(fg, s, k);
    if (std::find(keys.begin(), keys.end(), moved) != keys.end()) return true;
  }
  return false;
}

NormalForm phi(const FundamentalGroup& fg, const NormalForm& gamma, EdgeId y) {
  auto coset = edge_coset(fg, gamma, y);
  return *std::min_element(coset.begin(), coset.end(), [&](const auto& a, const auto& b) {
    return nf_less(fg.graph(), a, b);
  });
}

NormalForm phi_random(const FundamentalGroup& fg, const NormalForm& gamma, EdgeId y,
                      std::mt19937_64& rng) {
  auto coset = edge_coset(fg, gamma, y);
  std::uniform_int_distribution<std::size_t> pick(0, coset.size() - 1);
  return coset[pick(rng)];
}

namespace {

std::string vertex_label(const FundamentalGroup& fg, const TreeVertex& v) {
  return fg.graph().vertices()[v.type].name + ":" + fg.format(coset_representative(fg, v.key));
}

}  // namespace

std::string tree_to_dot(const FundamentalGroup& fg, const TreeBall& ball) {
  std::ostringstream os;
  os << "graph tree {\n";
  for (std::size_t i = 0; i < ball.vertices.size(); ++i)
    os << "  n" << i << " [label=\"" << vertex_label(fg, ball.vertices[i]) << "\"];\n";
  for (const auto& e : ball.edges)
    os << "  n" << e.parent << " -- n" << e.child << " [label=\""
       << fg.graph().edge_label(e.type) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string tree_to_json(const FundamentalGroup& fg, const TreeBall& ball) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["radius"] = ball.radius;
  j["truncated"] = ball.truncated;
  j["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : ball.vertices) {
    nlohmann::ordered_json vj;
    vj["label"] = vertex_label(fg, v);
    vj["type"] = fg.graph().vertices()[v.type].name;
    vj["depth"] = v.depth;
    vj["parent"] = v.parent;
    vj["truncated"] = v.truncated;
    j["vertices"].push_back(vj);
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : ball.edges) {
    nlohmann::ordered_json ej;
    ej["from"] = e.parent;
    ej["to"] = e.child;
    ej["type"] = fg.graph().edge_label(e.type);
    ej["coset_rep"] = fg.format(e.gamma);
    j["edges"].push_back(ej);
  }
  return j.dump(2) + "\n";
}

}  // namespace amalgam
