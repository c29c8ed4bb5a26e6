#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "amalgam/bass_serre.hpp"

namespace amalgam {

/// Depth-d approximation of the boundary of the Bass-Serre tree: every
/// immersed edge path of length d from the root coset 1 G_root.
class BoundaryApprox {
 public:
  BoundaryApprox(TreeBall tree, int depth);

  int depth() const { return depth_; }
  const TreeBall& tree() const { return tree_; }
  int size() const { return static_cast<int>(leaves_.size()); }
  /// No tree edges at all (a single vertex group).
  bool degenerate() const { return tree_.edges.empty(); }

  /// Tree vertex where branch i ends.
  int leaf(int i) const { return leaves_[i]; }
  /// Tree vertex at depth k along branch i (k = 0 is the root).
  int vertex_at(int i, int k) const { return ancestors_[i * (depth_ + 1) + k]; }
  /// Edge index of the k-th step (k in [0, d)).
  int edge_at(int i, int k) const { return tree_.vertices[vertex_at(i, k + 1)].parent_edge; }
  /// Length of the common prefix.
  int split(int a, int b) const;
  /// Visual metric 2^-split, 0 on the diagonal.
  double distance(int a, int b) const;
  /// Clopen basis set U_e: branches through the given tree edge, ascending.
  std::vector<int> basis(int edge) const;

 private:
  TreeBall tree_;
  int depth_;
  std::vector<int> leaves_;
  std::vector<int> ancestors_;
};

/// Backend stars are cut at `star_radius`; exits of exactly that length
/// are the frontier.
BoundaryApprox boundary_approx(const FundamentalGroup& fg, int depth, int star_radius = 2,
                               std::size_t budget = kDefaultBudget);

enum class Verdict { Pass, Fail, NotApplicable };
std::string to_string(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::Pass;
  std::vector<std::string> witnesses;
  std::map<std::string, double> diagnostics;
};

/// Perfectness with branching inside every window of 3 levels plus a dead
/// end check, and pairwise separation by the clopen basis. Throws
/// DepthTooSmall for d < 3.
CheckResult cantor_check(const BoundaryApprox& b);

/// Directions through a vertex gamma G_v that leave that vertex through the
/// frontier of its star and never again: the deepest frontier exit of each
/// branch names the limit set it belongs to.
struct LimitSet {
  int vertex = -1;  // tree vertex of the coset
  VertexId type = 0;
  std::vector<int> branches;  // ascending
};

/// Limit set of one coset vertex; empty for finite vertex groups.
LimitSet limit_set_approx(const BoundaryApprox& b, int tree_vertex);
/// The family of all nonempty approximate limit sets in the ball.
std::vector<LimitSet> limit_set_family(const BoundaryApprox& b);

struct AmalgamCertificate {
  int depth = 0;
  std::map<std::string, CheckResult> conditions;  // "a1" .. "a5"
  /// Largest member diameter among members at tree depth >= k, per k.
  std::vector<double> max_diameter;
  bool passed() const;
  std::string to_json() const;
};

/// Checks (a1)-(a5) at the approximation depth with density threshold
/// 2^(-d+2). Throws DepthTooSmall for d < 4.
AmalgamCertificate amalgam_check(const BoundaryApprox& b, const std::vector<LimitSet>& family,
                                 std::uint64_t seed = 1, int pairs = 200);

/// Every direction of every member has, within 2^(-d+2), a direction whose
/// last step is not a frontier exit.
CheckResult branch_density_check(const BoundaryApprox& b, const std::vector<LimitSet>& family);

enum class PointKind { BranchPoint, VertexPoint, Inconclusive };
std::string to_string(PointKind k);

struct DirectionClass {
  PointKind kind = PointKind::Inconclusive;
  /// Coset key of the vertex point, or the last projection along the ray.
  NormalForm key;
  VertexId type = 0;
};

/// Projects each element to its coset vertices and looks for either a coset
/// vertex all projections stay within r of, or a ray the root-type
/// projections follow monotonically.
DirectionClass classify_direction(const FundamentalGroup& fg,
                                  const std::vector<NormalForm>& sequence, int r = 2);

}  // namespace amalgam
