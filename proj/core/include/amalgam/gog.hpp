#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "amalgam/groups.hpp"

namespace amalgam {

/// Oriented edge id. Unoriented edge k owns ids 2k (declared direction,
/// left -- right) and 2k+1 (its reverse), so bar(y) == y ^ 1.
using EdgeId = int;
using VertexId = int;

inline EdgeId bar(EdgeId y) { return y ^ 1; }
inline int unoriented(EdgeId y) { return y >> 1; }

/// A named group declaration as it appeared in the DSL; kept so the
/// structure can be re-emitted.
struct GroupDecl {
  std::string name;
  std::shared_ptr<const GroupBackend> group;
};

struct VertexData {
  std::string name;
  std::string group_name;
  std::shared_ptr<const GroupBackend> group;
  /// Designated generating set S_v with display names.
  std::vector<std::string> gen_names;
  std::vector<Elem> gens;
};

struct EdgeData {
  std::string name;
  VertexId left = 0;
  VertexId right = 0;
  std::string group_name;
  std::shared_ptr<const FiniteGroup> group;
  Monomorphism fwd;  // i_y for y = 2k, into the right vertex group
  Monomorphism bwd;  // i_{bar y}, into the left vertex group
};

class GraphOfGroups {
 public:
  GraphOfGroups() = default;
  GraphOfGroups(std::vector<GroupDecl> groups, std::vector<VertexData> vertices,
                std::vector<EdgeData> edges);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_oriented() const { return 2 * num_edges(); }

  VertexId alpha(EdgeId y) const {
    const auto& e = edges_[unoriented(y)];
    return (y & 1) ? e.right : e.left;
  }
  VertexId omega(EdgeId y) const { return alpha(bar(y)); }
  bool is_loop(EdgeId y) const { return alpha(y) == omega(y); }

  const GroupBackend& vertex_group(VertexId v) const { return *vertices_[v].group; }
  const FiniteGroup& edge_group(EdgeId y) const { return *edges_[unoriented(y)].group; }
  /// i_y : G_y -> G_omega(y).
  const Monomorphism& embed(EdgeId y) const {
    const auto& e = edges_[unoriented(y)];
    return (y & 1) ? e.bwd : e.fwd;
  }

  /// Oriented edges leaving v, ascending by id.
  std::vector<EdgeId> out_edges(VertexId v) const;
  std::string edge_label(EdgeId y) const;

  const std::vector<GroupDecl>& groups() const { return groups_; }
  const std::vector<VertexData>& vertices() const { return vertices_; }
  const std::vector<EdgeData>& edges() const { return edges_; }
  VertexId find_vertex(std::string_view name) const;
  /// Oriented id for "name" or "name~" (reverse); -1 when absent.
  EdgeId find_edge(std::string_view name) const;
  bool connected() const;

 private:
  std::vector<GroupDecl> groups_;
  std::vector<VertexData> vertices_;
  std::vector<EdgeData> edges_;
};

/// Parses the line-oriented DSL; see README for the grammar. Throws Error
/// with kinds SyntaxError (with line:column), UnknownGroupRef,
/// EmbeddingNotInjective, EdgeGroupInfinite, NotHomomorphism.
GraphOfGroups parse_gog(std::string_view text);

/// Canonical DSL rendering; parse_gog(to_dsl(g)) reproduces g.
std::string to_dsl(const GraphOfGroups& g);
std::string to_json(const GraphOfGroups& g);
GraphOfGroups gog_from_json(std::string_view json_text);

struct SpanningData {
  VertexId root = 0;
  std::vector<bool> tree_edge;       // per unoriented edge
  std::vector<bool> in_orientation;  // per oriented edge: y in A
  std::vector<EdgeId> parent_edge;   // per vertex: tree edge entering it, -1 at root
  std::vector<VertexId> parent;      // per vertex, -1 at root
  std::vector<int> depth;            // per vertex, in T

  bool in_tree(EdgeId y) const { return tree_edge[unoriented(y)]; }
  bool in_A(EdgeId y) const { return in_orientation[y]; }
  /// Oriented edge of the pair {y, bar y} that is not in A.
  EdgeId hat(EdgeId y) const { return in_A(y) ? bar(y) : y; }
  /// T-geodesic from the root to v as oriented edges.
  std::vector<EdgeId> tree_path(VertexId v) const;
  int num_tree_edges() const;
};

/// BFS spanning tree from root, ties broken by edge id. Tree edges are
/// oriented away from the root; every other edge keeps its lesser id in A.
/// Throws GraphDisconnected.
SpanningData spanning_tree(const GraphOfGroups& g, VertexId root = 0);

/// Contracts the non-loop edge y whose embedding i_y is onto. The merged
/// vertex carries G_alpha(y); embeddings that landed in G_omega(y) are
/// transported by i_{bar y} o i_y^{-1}. Throws EdgeIsLoop, NotIsomorphism.
GraphOfGroups elementary_collapse(const GraphOfGroups& g, EdgeId y);

enum class ElementaryKind { NonElementary, SimplyElementary, ReducesTo };

struct ElementaryVerdict {
  ElementaryKind kind = ElementaryKind::NonElementary;
  /// 1: single vertex, 2: one segment with index-2 images, 3: one loop with
  /// both embeddings onto. 0 when non-elementary.
  int simple_case = 0;
  /// Collapsed edges (labels at the time of the collapse), in order.
  std::vector<std::string> collapses;
};

/// Which of the three simply elementary shapes g has, 0 if none.
int simply_elementary_case(const GraphOfGroups& g);

/// Exhaustive search over every sequence of elementary collapses.
ElementaryVerdict is_non_elementary(const GraphOfGroups& g);

}  // namespace amalgam
