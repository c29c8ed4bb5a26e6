#include "amalgam/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "amalgam/error.hpp"
#include "json.hpp"

namespace amalgam {

BoundaryApprox::BoundaryApprox(TreeBall tree, int depth) : tree_(std::move(tree)), depth_(depth) {
  for (std::size_t v = 0; v < tree_.vertices.size(); ++v)
    if (tree_.vertices[v].depth == depth_) leaves_.push_back(static_cast<int>(v));
  ancestors_.resize(leaves_.size() * (depth_ + 1));
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    int v = leaves_[i];
    for (int k = depth_; k >= 0; --k) {
      ancestors_[i * (depth_ + 1) + k] = v;
      v = tree_.vertices[v].parent;
    }
  }
}

int BoundaryApprox::split(int a, int b) const {
  int k = 0;
  while (k < depth_ && vertex_at(a, k + 1) == vertex_at(b, k + 1)) ++k;
  return k;
}

double BoundaryApprox::distance(int a, int b) const {
  return a == b ? 0.0 : std::ldexp(1.0, -split(a, b));
}

std::vector<int> BoundaryApprox::basis(int edge) const {
  const int child = tree_.edges[edge].child;
  const int k = tree_.vertices[child].depth;
  std::vector<int> out;
  if (k > depth_) return out;
  for (int i = 0; i < size(); ++i)
    if (vertex_at(i, k) == child) out.push_back(i);
  return out;
}

BoundaryApprox boundary_approx(const FundamentalGroup& fg, int depth, int star_radius,
                               std::size_t budget) {
  if (depth < 0) throw Error("InvalidArgument", "negative depth");
  TreeOptions opt;
  opt.star_radius = star_radius;
  opt.budget = budget;
  opt.index_keys = false;
  opt.edge_cosets = false;
  return BoundaryApprox(tree_ball(fg, depth, opt), depth);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "fail";
}

namespace {

constexpr std::size_t kMaxWitnesses = 20;

void witness(CheckResult& r, const std::string& w) {
  r.verdict = Verdict::Fail;
  if (r.witnesses.size() < kMaxWitnesses) r.witnesses.push_back(w);
  r.diagnostics["violations"] += 1;
}

std::string branch_name(const BoundaryApprox& b, int i) {
  std::string s = "branch " + std::to_string(i) + " [";
  for (int k = 0; k < b.depth(); ++k) {
    const TreeEdge& e = b.tree().edges[b.edge_at(i, k)];
    s += (k ? "," : "") + std::to_string(e.type);
  }
  return s + "] -> vertex " + std::to_string(b.leaf(i));
}

std::vector<int> child_counts(const TreeBall& t) {
  std::vector<int> c(t.vertices.size(), 0);
  for (const auto& e : t.edges) ++c[e.parent];
  return c;
}

// Deepest tree vertex at which a branch leaves through a frontier exit, or -1.
std::vector<int> deepest_frontier(const BoundaryApprox& b) {
  std::vector<int> out(b.size(), -1);
  for (int i = 0; i < b.size(); ++i)
    for (int k = b.depth() - 1; k >= 0; --k)
      if (b.tree().edges[b.edge_at(i, k)].frontier) {
        out[i] = b.vertex_at(i, k);
        break;
      }
  return out;
}

// Branches grouped by their ancestor at depth d - 2; groups are contiguous.
std::vector<std::pair<int, int>> density_groups(const BoundaryApprox& b, std::vector<int>& group_of) {
  std::vector<std::pair<int, int>> groups;
  group_of.assign(b.size(), -1);
  const int k = b.depth() - 2;
  for (int i = 0; i < b.size(); ++i) {
    if (i == 0 || b.vertex_at(i, k) != b.vertex_at(i - 1, k)) groups.emplace_back(i, i);
    groups.back().second = i + 1;
    group_of[i] = static_cast<int>(groups.size()) - 1;
  }
  return groups;
}

}  // namespace

CheckResult cantor_check(const BoundaryApprox& b) {
  const int d = b.depth();
  if (d < 3) throw Error("DepthTooSmall", "cantor_check needs depth >= 3");
  CheckResult r;
  r.diagnostics["branches"] = b.size();
  r.diagnostics["violations"] = 0;
  if (b.size() == 0) {
    witness(r, "empty boundary");
    return r;
  }
  const TreeBall& t = b.tree();
  const auto children = child_counts(t);
  for (std::size_t v = 0; v < t.vertices.size(); ++v)
    if (t.vertices[v].depth < d && children[v] == 0)
      witness(r, "prefix ending at vertex " + std::to_string(v) + " does not extend");

  constexpr int window = 3;
  for (int i = 0; i < b.size(); ++i)
    for (int s = 0; s + window <= d; ++s) {
      bool branching = false;
      for (int k = s; k < s + window && !branching; ++k) branching = children[b.vertex_at(i, k)] >= 2;
      if (!branching) {
        witness(r, branch_name(b, i) + " has no branching in levels " + std::to_string(s) + ".." +
                       std::to_string(s + window - 1));
        break;
      }
    }

  // Distinct branches end in distinct edges, whose basis sets separate them.
  std::set<int> last_edges;
  for (int i = 0; i < b.size(); ++i)
    if (!last_edges.insert(b.edge_at(i, d - 1)).second)
      witness(r, branch_name(b, i) + " shares its last edge with another branch");
  return r;
}

LimitSet limit_set_approx(const BoundaryApprox& b, int tree_vertex) {
  LimitSet ls;
  ls.vertex = tree_vertex;
  ls.type = b.tree().vertices[tree_vertex].type;
  const auto deepest = deepest_frontier(b);
  for (int i = 0; i < b.size(); ++i)
    if (deepest[i] == tree_vertex) ls.branches.push_back(i);
  return ls;
}

std::vector<LimitSet> limit_set_family(const BoundaryApprox& b) {
  const auto deepest = deepest_frontier(b);
  std::map<int, LimitSet> by_vertex;
  for (int i = 0; i < b.size(); ++i) {
    if (deepest[i] < 0) continue;
    LimitSet& ls = by_vertex[deepest[i]];
    ls.vertex = deepest[i];
    ls.type = b.tree().vertices[deepest[i]].type;
    ls.branches.push_back(i);
  }
  std::vector<LimitSet> out;
  for (auto& [v, ls] : by_vertex) out.push_back(std::move(ls));
  return out;
}

bool AmalgamCertificate::passed() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const auto& kv) { return kv.second.verdict != Verdict::Fail; });
}

std::string AmalgamCertificate::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["depth"] = depth;
  j["verdict"] = passed() ? "pass" : "fail";
  j["max_diameter_by_depth"] = max_diameter;
  j["conditions"] = nlohmann::ordered_json::object();
  for (const auto& [name, c] : conditions) {
    nlohmann::ordered_json cj;
    cj["verdict"] = to_string(c.verdict);
    cj["diagnostics"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.diagnostics) cj["diagnostics"][k] = v;
    cj["witnesses"] = c.witnesses;
    j["conditions"][name] = cj;
  }
  return j.dump(2) + "\n";
}

AmalgamCertificate amalgam_check(const BoundaryApprox& b, const std::vector<LimitSet>& family,
                                 std::uint64_t seed, int pairs) {
  const int d = b.depth();
  if (d < 4) throw Error("DepthTooSmall", "amalgam_check needs depth >= 4");
  AmalgamCertificate cert;
  cert.depth = d;
  for (const char* name : {"a1", "a2", "a3", "a4", "a5"}) cert.conditions[name].diagnostics["violations"] = 0;
  if (b.degenerate()) {
    for (auto& [name, c] : cert.conditions) c.verdict = Verdict::NotApplicable;
    return cert;
  }
  const TreeBall& t = b.tree();
  const int n = b.size();

  // (a1) pairwise disjointness.
  {
    CheckResult& r = cert.conditions["a1"];
    std::vector<int> owner(n, -1);
    for (std::size_t m = 0; m < family.size(); ++m)
      for (int i : family[m].branches) {
        if (owner[i] >= 0)
          witness(r, branch_name(b, i) + " lies in the members at vertices " +
                         std::to_string(family[owner[i]].vertex) + " and " +
                         std::to_string(family[m].vertex));
        else
          owner[i] = static_cast<int>(m);
      }
    r.diagnostics["members"] = static_cast<double>(family.size());
  }

  // (a2) nullness.
  {
    CheckResult& r = cert.conditions["a2"];
    std::vector<double> at_depth(d + 1, 0.0);
    for (const auto& m : family) {
      double diam = 0;
      for (std::size_t j = 1; j < m.branches.size(); ++j)
        diam = std::max(diam, b.distance(m.branches[j - 1], m.branches[j]));
      const int k = t.vertices[m.vertex].depth;
      at_depth[k] = std::max(at_depth[k], diam);
    }
    cert.max_diameter.assign(d + 1, 0.0);
    double running = 0;
    for (int k = d; k >= 0; --k) cert.max_diameter[k] = running = std::max(running, at_depth[k]);
    for (int k = 0; k <= d; ++k) {
      if (cert.max_diameter[k] > std::ldexp(1.0, -k + 1))
        witness(r, "members at tree depth >= " + std::to_string(k) + " reach diameter " +
                       std::to_string(cert.max_diameter[k]));
      if (k > 0 && cert.max_diameter[k] > cert.max_diameter[k - 1])
        witness(r, "diameter increases at tree depth " + std::to_string(k));
    }
  }

  std::vector<int> group_of;
  const auto groups = density_groups(b, group_of);
  const double eps = std::ldexp(1.0, -d + 2);

  // (a3) each member has an eps-dense complement.
  {
    CheckResult& r = cert.conditions["a3"];
    r.diagnostics["epsilon"] = eps;
    for (const auto& m : family) {
      std::map<int, int> hits;
      for (int i : m.branches) ++hits[group_of[i]];
      for (const auto& [g, c] : hits)
        if (c == groups[g].second - groups[g].first)
          witness(r, "member at vertex " + std::to_string(m.vertex) + " fills the eps-ball around " +
                         branch_name(b, groups[g].first));
    }
  }

  // (a4) each union over a vertex type is eps-dense.
  {
    CheckResult& r = cert.conditions["a4"];
    r.diagnostics["epsilon"] = eps;
    std::set<VertexId> infinite_types;
    for (const auto& v : t.vertices)
      if (v.truncated) infinite_types.insert(v.type);
    for (VertexId type : infinite_types) {
      std::vector<char> covered(groups.size(), 0);
      for (const auto& m : family)
        if (m.type == type)
          for (int i : m.branches) covered[group_of[i]] = 1;
      for (std::size_t g = 0; g < groups.size(); ++g)
        if (!covered[g])
          witness(r, "union for vertex type " + std::to_string(type) + " misses the eps-ball around " +
                         branch_name(b, groups[g].first));
    }
  }

  // (a5) saturated clopen sets from edge splits separate members.
  {
    CheckResult& r = cert.conditions["a5"];
    std::vector<int> member_of(n, -1);
    for (std::size_t m = 0; m < family.size(); ++m)
      for (int i : family[m].branches) member_of[i] = static_cast<int>(m);
    std::vector<std::pair<int, int>> chosen;
    const int nm = static_cast<int>(family.size());
    const std::int64_t all = static_cast<std::int64_t>(nm) * (nm - 1) / 2;
    if (all <= pairs) {
      for (int a = 0; a < nm; ++a)
        for (int c = a + 1; c < nm; ++c) chosen.emplace_back(a, c);
    } else {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<int> pick(0, nm - 1);
      while (static_cast<int>(chosen.size()) < pairs) {
        int a = pick(rng), c = pick(rng);
        if (a != c) chosen.emplace_back(a, c);
      }
    }
    r.diagnostics["pairs"] = static_cast<double>(chosen.size());
    for (auto [m1, m2] : chosen) {
      const int c1 = family[m1].vertex, c2 = family[m2].vertex;
      const auto path = tree_geodesic(t, c1, c2);
      const TreeEdge& e = t.edges[path[path.size() / 2]];
      const int child_depth = t.vertices[e.child].depth;
      auto below = [&](int v) {
        while (t.vertices[v].depth > child_depth) v = t.vertices[v].parent;
        return v == e.child;
      };
      const bool c1_below = below(c1);
      auto in_H = [&](int i) {
        const int loc = member_of[i] >= 0 ? family[member_of[i]].vertex : b.leaf(i);
        return below(loc) == c1_below;
      };
      bool ok = true;
      for (int i : family[m1].branches) ok = ok && in_H(i);
      for (int i : family[m2].branches) ok = ok && !in_H(i);
      for (const auto& m : family) {
        std::size_t inside = 0;
        for (int i : m.branches) inside += in_H(i);
        ok = ok && (inside == 0 || inside == m.branches.size());
      }
      if (!ok)
        witness(r, "split at edge " + std::to_string(path[path.size() / 2]) +
                       " does not separate members at vertices " + std::to_string(c1) + " and " +
                       std::to_string(c2));
    }
  }
  return cert;
}

CheckResult branch_density_check(const BoundaryApprox& b, const std::vector<LimitSet>& family) {
  const int d = b.depth();
  if (d < 4) throw Error("DepthTooSmall", "branch_density_check needs depth >= 4");
  CheckResult r;
  r.diagnostics["violations"] = 0;
  if (b.degenerate()) {
    r.verdict = Verdict::NotApplicable;
    return r;
  }
  std::vector<int> group_of;
  const auto groups = density_groups(b, group_of);
  const TreeBall& t = b.tree();
  // A branch whose last step is not a frontier exit keeps moving through the
  // tree; those stand in for branch points at this depth.
  std::vector<char> open_group(groups.size(), 0);
  for (int j = 0; j < b.size(); ++j)
    if (!t.edges[b.edge_at(j, d - 1)].frontier) open_group[group_of[j]] = 1;
  for (const auto& m : family)
    for (int i : m.branches)
      if (!open_group[group_of[i]])
        witness(r, branch_name(b, i) + " has no branch direction within epsilon");
  r.diagnostics["epsilon"] = std::ldexp(1.0, -d + 2);
  return r;
}

std::string to_string(PointKind k) {
  switch (k) {
    case PointKind::BranchPoint: return "branch_point";
    case PointKind::VertexPoint: return "vertex_point";
    case PointKind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

DirectionClass classify_direction(const FundamentalGroup& fg,
                                  const std::vector<NormalForm>& sequence, int r) {
  DirectionClass out;
  if (sequence.empty()) return out;
  const int nv = fg.graph().num_vertices();
  const std::size_t n = sequence.size();
  std::vector<std::vector<NormalForm>> proj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (VertexId v = 0; v < nv; ++v) proj[i].push_back(fg.vertex_key(sequence[i], v));

  for (std::size_t i = 0; i < n; ++i)
    for (VertexId v = 0; v < nv; ++v) {
      const NormalForm& cand = proj[i][v];
      bool close = true;
      for (std::size_t m = 0; m < n && close; ++m) close = key_distance(cand, proj[m][v]) <= r;
      if (close) {
        out.kind = PointKind::VertexPoint;
        out.key = cand;
        out.type = v;
        return out;
      }
    }

  const VertexId v0 = fg.root();
  const NormalForm& a = proj.front()[v0];
  const NormalForm& z = proj.back()[v0];
  const int span = key_distance(a, z);
  if (span <= 2 * r) return out;
  int furthest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int da = key_distance(a, proj[i][v0]);
    const int dz = key_distance(z, proj[i][v0]);
    // Gromov products: offset from the a-z geodesic and position along it.
    if (da + dz - span > 2 * r) return out;
    const int pos = (da + span - dz) / 2;
    if (pos < furthest - 2 * r) return out;
    furthest = std::max(furthest, pos);
  }
  out.kind = PointKind::BranchPoint;
  out.key = z;
  out.type = v0;
  return out;
}

}  // namespace amalgam
