#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amalgam/gog.hpp"
#include "amalgam/smith.hpp"

namespace amalgam {

struct Syllable {
  EdgeId edge;
  Elem elem;  // in G_omega(edge)

  bool operator==(const Syllable&) const = default;
};

/// A path g0 y1 g1 ... yn gn in the graph of groups starting at `base`.
/// Group elements are loops at the spanning-tree root kept left-normalized:
/// every gi with i >= 1 is the designated representative of its right coset
/// i_{yi}(G_{yi}) gi, and no yi 1 bar(yi) occurs. Paths that end elsewhere
/// appear as coset keys (see FundamentalGroup::vertex_key).
struct NormalForm {
  VertexId base = 0;
  Elem head;
  std::vector<Syllable> tail;

  bool operator==(const NormalForm&) const = default;
};

struct NormalFormHash {
  std::size_t operator()(const NormalForm& x) const noexcept;
};

/// Total order: fewer edges first, then edge ids and elements in order.
bool nf_less(const GraphOfGroups& g, const NormalForm& a, const NormalForm& b);

struct Generator {
  std::string label;
  VertexId vertex = -1;   // vertex generator, or -1
  EdgeId stable = -1;     // stable letter s_y with y in A outside the tree, or -1
  NormalForm element;
};

/// Words in a presentation: letter k+1 is generator k, -(k+1) its inverse.
using Word = std::vector<int>;

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
};

/// pi_1 of a graph of groups relative to a fixed spanning tree, with exact
/// arithmetic on normal forms. Immutable after construction.
class FundamentalGroup {
 public:
  explicit FundamentalGroup(GraphOfGroups g, VertexId root = 0);

  const GraphOfGroups& graph() const { return g_; }
  const SpanningData& spanning() const { return sd_; }
  VertexId root() const { return sd_.root; }

  NormalForm identity() const;
  bool is_identity(const NormalForm& x) const;
  /// Throws BaseMismatch when the end of x is not the start of y.
  NormalForm multiply(const NormalForm& x, const NormalForm& y) const;
  NormalForm invert(const NormalForm& x) const;
  NormalForm power(const NormalForm& x, int n) const;

  VertexId end_vertex(const NormalForm& x) const;
  /// Image of a vertex-group element: p_v x p_v^-1 along the tree path.
  NormalForm vertex_element(VertexId v, const Elem& x) const;
  /// p_alpha(y) y p_omega(y)^-1; trivial for tree edges.
  NormalForm edge_loop(EdgeId y) const;
  /// Tree path from the root to v, as a path (not a loop).
  NormalForm tree_path(VertexId v) const;

  /// Brings an arbitrary path to left-normal form.
  NormalForm normalize(const NormalForm& path) const;
  /// Literal reversal of a path, without normalizing.
  NormalForm reverse_path(const NormalForm& path) const;
  /// Right-normal form: every element but the last is the designated
  /// representative of its left coset g i_{bar y}(G_y).
  NormalForm right_normal(const NormalForm& path) const;

  /// Canonical key for the coset gamma G_v: right-normal form of gamma p_v
  /// with the trailing element reset to the identity.
  NormalForm vertex_key(const NormalForm& gamma, VertexId v) const;
  bool coset_membership(const NormalForm& x, VertexId v, const NormalForm& gamma) const;

  /// Left transversal of i_{bar y}(G_y) in G_alpha(y). Backends list the
  /// representatives of word length <= radius.
  std::vector<Elem> left_transversal(EdgeId y, int radius = 0) const;

  /// The generating set S: vertex generators then stable letters.
  const std::vector<Generator>& generators() const { return gens_; }
  /// S together with inverses, duplicates removed; used for Cayley graphs.
  const std::vector<NormalForm>& symmetric_generators() const { return sym_; }
  const std::vector<std::string>& symmetric_labels() const { return sym_labels_; }

  /// Number of nontrivial vertex-group elements plus non-tree edge letters.
  int syllable_length(const NormalForm& x) const;
  std::string format(const NormalForm& x) const;

  /// Expresses a vertex-group element as a word in S_v (local indices).
  Word vertex_word(VertexId v, const Elem& x) const;

 private:
  struct Decomposition {
    int edge_elem;  // a with h = i_y(a) r
    Elem rep;       // r
  };
  Decomposition decompose(EdgeId y, const Elem& h) const;
  bool is_right_rep(EdgeId y, const Elem& h) const;
  void push_elem(NormalForm& p, const Elem& x) const;
  void push_edge(NormalForm& p, EdgeId y) const;
  void append(NormalForm& p, const NormalForm& q) const;

  GraphOfGroups g_;
  SpanningData sd_;
  // Finite targets: per oriented edge, per element index of G_omega(y).
  std::vector<std::vector<int>> rep_index_;
  std::vector<std::vector<int>> edge_part_;
  // Per finite vertex: BFS words over S_v, indexed by element.
  std::vector<std::vector<Word>> vertex_words_;
  std::vector<Generator> gens_;
  std::vector<NormalForm> sym_;
  std::vector<std::string> sym_labels_;
};

/// Relators of the standard presentation over S: vertex-group relators,
/// tree-edge identifications and stable-letter conjugations. Empty relators
/// are dropped.
Presentation emit_presentation(const FundamentalGroup& fg);

std::string format_word(const Presentation& p, const Word& w);
/// Formats: "text", "gap", "json".
std::string render_presentation(const Presentation& p, const std::string& format);

/// Exponent-sum relation matrix and its Smith normal form invariants.
AbelianInvariants abelianization(const Presentation& p);

}  // namespace amalgam
