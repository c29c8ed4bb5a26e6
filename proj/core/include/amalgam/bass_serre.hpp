#pragma once

#include <cstddef>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "amalgam/cayley.hpp"
#include "amalgam/fundgroup.hpp"

namespace amalgam {

/// Coset vertex gamma G_v, identified by its canonical key (see
/// FundamentalGroup::vertex_key).
struct TreeVertex {
  NormalForm key;
  VertexId type = 0;
  int depth = 0;
  int parent = -1;       // vertex index, -1 at the root
  int parent_edge = -1;  // edge index, -1 at the root
  /// Star enumerated only up to the backend exit radius.
  bool truncated = false;
};

/// Edge stored in root-outward orientation: from `parent` through the exit
/// element `exit` of G_type(parent) along the oriented Y-edge `type`.
struct TreeEdge {
  int parent = 0;
  int child = 0;
  EdgeId type = 0;
  Elem exit;
  /// Exit label on the truncation radius of an infinite vertex group.
  bool frontier = false;
  /// gamma with this edge equal to gamma G_type.
  NormalForm gamma;
};

struct TreeOptions {
  /// Backend vertex groups: exits of word length <= star_radius only.
  int star_radius = 1;
  std::size_t budget = kDefaultBudget;
  /// Large balls used only for their shape can skip the key index and the
  /// per-edge coset representatives.
  bool index_keys = true;
  bool edge_cosets = true;
};

struct TreeBall {
  int radius = 0;
  std::vector<TreeVertex> vertices;  // BFS order
  std::vector<TreeEdge> edges;       // edges[i] enters vertices[i + 1]
  std::vector<std::vector<int>> incident;
  std::unordered_map<NormalForm, int, NormalFormHash> index;
  bool truncated = false;

  int find(const NormalForm& key) const;
  /// Child vertex indices of v, in discovery order.
  std::vector<int> children(int v) const;
};

/// Radius-n ball around 1 G_root. Throws BudgetExceeded.
TreeBall tree_ball(const FundamentalGroup& fg, int radius, const TreeOptions& opt = {});

/// Tree distance between coset keys (root-based right-normal keys).
int key_distance(const NormalForm& a, const NormalForm& b);
/// True when `key` lies in the subtree hanging from `ancestor`, seen from the root.
bool key_descends(const NormalForm& key, const NormalForm& ancestor);
int key_depth(const NormalForm& key);

/// Some gamma with gamma G_v equal to the coset keyed by `key`.
NormalForm coset_representative(const FundamentalGroup& fg, const NormalForm& key);
/// Key of gamma' . (coset of key).
NormalForm translate_key(const FundamentalGroup& fg, const NormalForm& gamma,
                         const NormalForm& key);

/// Terminal and initial vertex of the edge gamma G_y, by the stable-letter rule.
NormalForm edge_omega(const FundamentalGroup& fg, const NormalForm& gamma, EdgeId y);
NormalForm edge_alpha(const FundamentalGroup& fg, const NormalForm& gamma, EdgeId y);
/// Elements of gamma G_y, where G_y sits in Gamma through i_{hat y}.
std::vector<NormalForm> edge_coset(const FundamentalGroup& fg, const NormalForm& gamma, EdgeId y);

/// Edge indices from u to w along the unique simple path. Throws NotInBall.
std::vector<int> tree_geodesic(const TreeBall& ball, int u, int w);

/// Vertex sets of the two sides of an edge; the first holds its parent end.
std::pair<std::vector<int>, std::vector<int>> split_by_edge(const TreeBall& ball, int edge);

struct TilingEdge {
  EdgeId y = 0;
  NormalForm alpha_key;
  NormalForm omega_key;
};

/// Edges G_y for every unoriented Y-edge plus their endpoints. Throws NoEdges,
/// and NotConnected if the union fails to be a tree (never expected).
std::vector<TilingEdge> tiling_tree(const FundamentalGroup& fg);
/// Whether s T and T share a vertex.
bool tiling_meets_translate(const FundamentalGroup& fg, const std::vector<TilingEdge>& tiling,
                            const NormalForm& s);

/// Canonical choice inside an edge coset: the nf_less-least element.
NormalForm phi(const FundamentalGroup& fg, const NormalForm& gamma, EdgeId y);
NormalForm phi_random(const FundamentalGroup& fg, const NormalForm& gamma, EdgeId y,
                      std::mt19937_64& rng);

/// DOT and JSON renderings with labels "<type>:<key>".
std::string tree_to_dot(const FundamentalGroup& fg, const TreeBall& ball);
std::string tree_to_json(const FundamentalGroup& fg, const TreeBall& ball);

}  // namespace amalgam
