#include "amalgam/gog.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

#include "amalgam/error.hpp"
#include "json.hpp"

namespace amalgam {

GraphOfGroups::GraphOfGroups(std::vector<GroupDecl> groups, std::vector<VertexData> vertices,
                             std::vector<EdgeData> edges)
    : groups_(std::move(groups)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
  if (vertices_.empty()) throw Error("SyntaxError", "graph of groups has no vertices");
  for (const auto& e : edges_) {
    if (e.left < 0 || e.left >= num_vertices() || e.right < 0 || e.right >= num_vertices())
      throw Error("SyntaxError", "edge " + e.name + " has an unknown endpoint");
    if (&e.fwd.source() != e.group.get() || &e.bwd.source() != e.group.get())
      throw Error("SyntaxError", "edge " + e.name + " embeddings disagree on the edge group");
    if (&e.fwd.target() != vertices_[e.right].group.get() ||
        &e.bwd.target() != vertices_[e.left].group.get())
      throw Error("SyntaxError", "edge " + e.name + " embeds into the wrong vertex group");
  }
}

std::vector<EdgeId> GraphOfGroups::out_edges(VertexId v) const {
  std::vector<EdgeId> out;
  for (EdgeId y = 0; y < num_oriented(); ++y)
    if (alpha(y) == v) out.push_back(y);
  return out;
}

std::string GraphOfGroups::edge_label(EdgeId y) const {
  return edges_[unoriented(y)].name + ((y & 1) ? "~" : "");
}

VertexId GraphOfGroups::find_vertex(std::string_view name) const {
  for (int v = 0; v < num_vertices(); ++v)
    if (vertices_[v].name == name) return v;
  return -1;
}

EdgeId GraphOfGroups::find_edge(std::string_view name) const {
  bool reversed = !name.empty() && name.back() == '~';
  if (reversed) name.remove_suffix(1);
  for (int k = 0; k < num_edges(); ++k)
    if (edges_[k].name == name) return 2 * k + (reversed ? 1 : 0);
  return -1;
}

bool GraphOfGroups::connected() const {
  std::vector<char> seen(num_vertices(), 0);
  std::deque<VertexId> q{0};
  seen[0] = 1;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop_front();
    for (EdgeId y : out_edges(v))
      if (!seen[omega(y)]) {
        seen[omega(y)] = 1;
        q.push_back(omega(y));
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

// ---------------------------------------------------------------------------

std::vector<EdgeId> SpanningData::tree_path(VertexId v) const {
  std::vector<EdgeId> path;
  for (; parent_edge[v] >= 0; v = parent[v]) path.push_back(parent_edge[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

int SpanningData::num_tree_edges() const {
  return static_cast<int>(std::count(tree_edge.begin(), tree_edge.end(), true));
}

SpanningData spanning_tree(const GraphOfGroups& g, VertexId root) {
  if (root < 0 || root >= g.num_vertices()) throw Error("UnknownVertex", "root out of range");
  SpanningData sd;
  sd.root = root;
  sd.tree_edge.assign(g.num_edges(), false);
  sd.in_orientation.assign(g.num_oriented(), false);
  sd.parent_edge.assign(g.num_vertices(), -1);
  sd.parent.assign(g.num_vertices(), -1);
  sd.depth.assign(g.num_vertices(), -1);
  sd.depth[root] = 0;
  std::deque<VertexId> q{root};
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop_front();
    for (EdgeId y : g.out_edges(v)) {
      VertexId w = g.omega(y);
      if (sd.depth[w] >= 0) continue;
      sd.depth[w] = sd.depth[v] + 1;
      sd.parent_edge[w] = y;
      sd.parent[w] = v;
      sd.tree_edge[unoriented(y)] = true;
      sd.in_orientation[y] = true;
      q.push_back(w);
    }
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (sd.depth[v] < 0)
      throw Error("GraphDisconnected", "vertex " + g.vertices()[v].name + " is unreachable");
  for (int k = 0; k < g.num_edges(); ++k)
    if (!sd.tree_edge[k]) sd.in_orientation[2 * k] = true;
  return sd;
}

// ---------------------------------------------------------------------------

namespace {

EdgeData rebuild_edge(const EdgeData& e, VertexId left, VertexId right,
                      const std::vector<VertexData>& vertices, std::vector<Elem> fwd,
                      std::vector<Elem> bwd) {
  EdgeData out;
  out.name = e.name;
  out.left = left;
  out.right = right;
  out.group_name = e.group_name;
  out.group = e.group;
  out.fwd = check_monomorphism(e.group, vertices[right].group, std::move(fwd));
  out.bwd = check_monomorphism(e.group, vertices[left].group, std::move(bwd));
  return out;
}

}  // namespace

GraphOfGroups elementary_collapse(const GraphOfGroups& g, EdgeId y) {
  if (y < 0 || y >= g.num_oriented()) throw Error("UnknownEdge", "edge id out of range");
  if (g.is_loop(y)) throw Error("EdgeIsLoop", g.edge_label(y));
  const Monomorphism& iy = g.embed(y);
  if (!iy.is_onto()) throw Error("NotIsomorphism", g.edge_label(y) + " is not onto");
  const Monomorphism& iybar = g.embed(bar(y));
  const VertexId a = g.alpha(y);
  const VertexId w = g.omega(y);

  std::vector<VertexData> vertices;
  std::vector<VertexId> remap(g.num_vertices(), -1);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (v == w) continue;
    remap[v] = static_cast<VertexId>(vertices.size());
    vertices.push_back(g.vertices()[v]);
  }
  remap[w] = remap[a];

  auto transport = [&](const Elem& e) {
    auto pre = iy.preimage(e);
    return iybar(*pre);
  };

  std::vector<EdgeData> edges;
  for (int k = 0; k < g.num_edges(); ++k) {
    if (k == unoriented(y)) continue;
    const EdgeData& e = g.edges()[k];
    std::vector<Elem> fwd = e.fwd.images();
    std::vector<Elem> bwd = e.bwd.images();
    if (e.right == w)
      for (auto& x : fwd) x = transport(x);
    if (e.left == w)
      for (auto& x : bwd) x = transport(x);
    edges.push_back(rebuild_edge(e, remap[e.left], remap[e.right], vertices, std::move(fwd),
                                 std::move(bwd)));
  }
  return GraphOfGroups(g.groups(), std::move(vertices), std::move(edges));
}

int simply_elementary_case(const GraphOfGroups& g) {
  if (g.num_vertices() == 1 && g.num_edges() == 0) return 1;
  if (g.num_edges() != 1) return 0;
  const EdgeId y = 0;
  if (g.num_vertices() == 2 && !g.is_loop(y)) {
    auto index2 = [&](EdgeId z) {
      const auto& target = g.vertex_group(g.omega(z));
      return target.is_finite() && target.order() == 2 * g.edge_group(z).order();
    };
    return index2(y) && index2(bar(y)) ? 2 : 0;
  }
  if (g.num_vertices() == 1 && g.is_loop(y)) {
    return g.embed(y).is_onto() && g.embed(bar(y)).is_onto() ? 3 : 0;
  }
  return 0;
}

ElementaryVerdict is_non_elementary(const GraphOfGroups& g) {
  ElementaryVerdict v;
  if (int c = simply_elementary_case(g)) {
    v.kind = ElementaryKind::SimplyElementary;
    v.simple_case = c;
    return v;
  }
  std::vector<std::string> seq;
  std::function<int(const GraphOfGroups&)> search = [&](const GraphOfGroups& h) -> int {
    if (int c = simply_elementary_case(h)) return c;
    for (EdgeId y = 0; y < h.num_oriented(); ++y) {
      if (h.is_loop(y) || !h.embed(y).is_onto()) continue;
      seq.push_back(h.edge_label(y));
      if (int c = search(elementary_collapse(h, y))) return c;
      seq.pop_back();
    }
    return 0;
  };
  if (int c = search(g)) {
    v.kind = ElementaryKind::ReducesTo;
    v.simple_case = c;
    v.collapses = seq;
  }
  return v;
}

// ---------------------------------------------------------------------------

namespace {

std::string group_dsl(const GroupBackend& b) {
  std::ostringstream os;
  switch (b.kind()) {
    case GroupKind::FreeAbelian: os << "free_abelian " << b.rank(); break;
    case GroupKind::Free: os << "free " << b.rank(); break;
    case GroupKind::Finite: {
      const auto& t = b.table().table();
      os << "table [";
      for (std::size_t r = 0; r < t.size(); ++r) {
        os << (r ? "," : "") << '[';
        for (std::size_t c = 0; c < t[r].size(); ++c) os << (c ? "," : "") << t[r][c];
        os << ']';
      }
      os << "] labels [";
      const auto& l = b.table().labels();
      for (std::size_t i = 0; i < l.size(); ++i) os << (i ? "," : "") << l[i];
      os << ']';
      break;
    }
  }
  return os.str();
}

std::string map_dsl(const Monomorphism& m) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int gen : m.source().canonical_generators()) {
    os << (first ? "" : ",") << m.source().labels()[gen] << ':' << m.target().format(m(gen));
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace

std::string to_dsl(const GraphOfGroups& g) {
  std::ostringstream os;
  for (const auto& d : g.groups()) os << "group " << d.name << ' ' << group_dsl(*d.group) << '\n';
  for (const auto& v : g.vertices()) {
    os << "vertex " << v.name << ' ' << v.group_name << " gens [";
    for (std::size_t i = 0; i < v.gens.size(); ++i)
      os << (i ? ", " : "") << v.gen_names[i] << '=' << v.group->format(v.gens[i]);
    os << "]\n";
  }
  for (const auto& e : g.edges()) {
    os << "edge " << e.name << ' ' << g.vertices()[e.left].name << " -- "
       << g.vertices()[e.right].name << " group " << e.group_name << " embed_fwd "
       << map_dsl(e.fwd) << " embed_bwd " << map_dsl(e.bwd) << '\n';
  }
  return os.str();
}

namespace {

using nlohmann::ordered_json;

ordered_json group_json(const GroupBackend& b) {
  ordered_json j;
  switch (b.kind()) {
    case GroupKind::Finite:
      j["kind"] = "finite";
      j["table"] = b.table().table();
      j["labels"] = b.table().labels();
      break;
    case GroupKind::FreeAbelian:
      j["kind"] = "free_abelian";
      j["rank"] = b.rank();
      break;
    case GroupKind::Free:
      j["kind"] = "free";
      j["rank"] = b.rank();
      break;
  }
  return j;
}

std::shared_ptr<const GroupBackend> group_from_json(const ordered_json& j) {
  const std::string kind = j.at("kind");
  if (kind == "finite")
    return std::make_shared<const GroupBackend>(GroupBackend::finite(
        check_group(j.at("table").get<std::vector<std::vector<int>>>(),
                    j.at("labels").get<std::vector<std::string>>())));
  if (kind == "free_abelian")
    return std::make_shared<const GroupBackend>(GroupBackend::free_abelian(j.at("rank")));
  if (kind == "free") return std::make_shared<const GroupBackend>(GroupBackend::free(j.at("rank")));
  throw Error("SyntaxError", "unknown group kind " + kind);
}

}  // namespace

std::string to_json(const GraphOfGroups& g) {
  ordered_json j;
  j["schema_version"] = 1;
  j["groups"] = ordered_json::array();
  for (const auto& d : g.groups()) {
    ordered_json gj = group_json(*d.group);
    gj["name"] = d.name;
    j["groups"].push_back(gj);
  }
  j["vertices"] = ordered_json::array();
  for (const auto& v : g.vertices()) {
    ordered_json vj;
    vj["name"] = v.name;
    vj["group"] = v.group_name;
    vj["gen_names"] = v.gen_names;
    vj["gens"] = v.gens;
    j["vertices"].push_back(vj);
  }
  j["edges"] = ordered_json::array();
  for (const auto& e : g.edges()) {
    ordered_json ej;
    ej["name"] = e.name;
    ej["left"] = g.vertices()[e.left].name;
    ej["right"] = g.vertices()[e.right].name;
    ej["group"] = e.group_name;
    ej["embed_fwd"] = e.fwd.images();
    ej["embed_bwd"] = e.bwd.images();
    j["edges"].push_back(ej);
  }
  return j.dump(2);
}

GraphOfGroups gog_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& ex) {
    throw Error("SyntaxError", ex.what());
  }
  try {
    std::map<std::string, std::shared_ptr<const GroupBackend>> by_name;
    std::vector<GroupDecl> groups;
    for (const auto& gj : j.at("groups")) {
      auto b = group_from_json(gj);
      by_name[gj.at("name")] = b;
      groups.push_back({gj.at("name"), b});
    }
    auto lookup = [&](const std::string& name) {
      auto it = by_name.find(name);
      if (it == by_name.end()) throw Error("UnknownGroupRef", name);
      return it->second;
    };
    std::vector<VertexData> vertices;
    for (const auto& vj : j.at("vertices")) {
      VertexData v;
      v.name = vj.at("name");
      v.group_name = vj.at("group");
      v.group = lookup(v.group_name);
      v.gen_names = vj.at("gen_names").get<std::vector<std::string>>();
      v.gens = vj.at("gens").get<std::vector<Elem>>();
      vertices.push_back(std::move(v));
    }
    auto vid = [&](const std::string& name) {
      for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].name == name) return static_cast<VertexId>(i);
      throw Error("SyntaxError", "unknown vertex " + name);
    };
    std::vector<EdgeData> edges;
    for (const auto& ej : j.at("edges")) {
      EdgeData e;
      e.name = ej.at("name");
      e.left = vid(ej.at("left"));
      e.right = vid(ej.at("right"));
      e.group_name = ej.at("group");
      if (e.group_name == "trivial") {
        e.group = std::make_shared<const FiniteGroup>(trivial_group());
      } else {
        auto gb = lookup(e.group_name);
        if (!gb->is_finite()) throw Error("EdgeGroupInfinite", e.name);
        e.group = std::shared_ptr<const FiniteGroup>(gb, &gb->table());
      }
      e.fwd = check_monomorphism(e.group, vertices[e.right].group,
                                 ej.at("embed_fwd").get<std::vector<Elem>>());
      e.bwd = check_monomorphism(e.group, vertices[e.left].group,
                                 ej.at("embed_bwd").get<std::vector<Elem>>());
      edges.push_back(std::move(e));
    }
    return GraphOfGroups(std::move(groups), std::move(vertices), std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw Error("SyntaxError", ex.what());
  }
}

}  // namespace amalgam
