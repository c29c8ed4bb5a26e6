#include "amalgam/separation.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "amalgam/error.hpp"
#include "json.hpp"

namespace amalgam {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the least index as the root so labels are canonical.
    if (a < b)
      parent_[b] = a;
    else
      parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

constexpr std::size_t kMaxListedFailures = 100;

// Runs body(0..n-1) on up to `jobs` threads; callers write to slot i only.
template <class Body>
void parallel_for(int n, int jobs, Body body) {
  const int workers = std::max(1, std::min(jobs, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Outcome of one sample, merged into the report in sample order.
struct SampleResult {
  bool not_applicable = false;
  int separating_set_size = 0;
  std::int64_t pairs = 0;
  std::int64_t probe_pairs = 0;
  int R0 = 0;
  std::int64_t failure_count = 0;
  std::vector<SeparationFailure> failures;

  void fail(SeparationFailure f) {
    ++failure_count;
    if (failures.size() < kMaxListedFailures) failures.push_back(std::move(f));
  }
};

void merge(SeparationReport& rep, std::int64_t& failure_count, std::vector<SampleResult>& results) {
  for (auto& r : results) {
    ++rep.samples;
    rep.not_applicable += r.not_applicable;
    rep.separating_set_size = std::max(rep.separating_set_size, r.separating_set_size);
    rep.pairs_tested += r.pairs;
    failure_count += r.failure_count;
    for (auto& f : r.failures)
      if (rep.failures.size() < kMaxListedFailures) rep.failures.push_back(std::move(f));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<int> GraphMetric::within(int x, int r) const {
  std::vector<int> d(adj_.size(), -1);
  std::vector<int> out;
  std::deque<int> q{x};
  d[x] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    if (d[u] == r) continue;
    for (int w : adj_[u])
      if (d[w] < 0) {
        d[w] = d[u] + 1;
        out.push_back(w);
        q.push_back(w);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> GraphMetric::distances_to(const std::vector<char>& set, int cap) const {
  std::vector<int> d(adj_.size(), cap + 1);
  std::deque<int> q;
  for (std::size_t i = 0; i < set.size(); ++i)
    if (set[i]) {
      d[i] = 0;
      q.push_back(static_cast<int>(i));
    }
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    if (d[u] >= cap) continue;
    for (int w : adj_[u])
      if (d[w] > d[u] + 1) {
        d[w] = d[u] + 1;
        q.push_back(w);
      }
  }
  return d;
}

const std::vector<std::vector<int>>& GroupMetric::table(int r) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = tables_.find(r);
  if (it != tables_.end()) return *it->second;
  if (r > ball_->radius) throw Error("InvalidArgument", "metric radius exceeds the ball radius");
  auto t = std::make_unique<std::vector<std::vector<int>>>(ball_->size());
  for (int x = 0; x < ball_->size(); ++x) {
    for (const auto& [y, d] : around(ball_->elements[x], r))
      if (y != x) (*t)[x].push_back(y);
    std::sort((*t)[x].begin(), (*t)[x].end());
  }
  return *(tables_[r] = std::move(t));
}

std::vector<int> GroupMetric::within(int x, int r) const { return table(r)[x]; }

std::vector<std::pair<int, int>> GroupMetric::around(const NormalForm& x, int r) const {
  if (r > ball_->radius) throw Error("InvalidArgument", "metric radius exceeds the ball radius");
  std::vector<std::pair<int, int>> out;
  for (int w = 0; w < ball_->size() && ball_->dist[w] <= r; ++w) {
    int y = ball_->find(fg_->multiply(x, ball_->elements[w]));
    if (y >= 0) out.emplace_back(y, ball_->dist[w]);
  }
  return out;
}

std::vector<int> GroupMetric::distances_to(const std::vector<char>& set, int cap) const {
  std::vector<int> d(ball_->size(), cap + 1);
  for (int s = 0; s < ball_->size(); ++s) {
    if (!set[s]) continue;
    for (const auto& [y, k] : around(ball_->elements[s], cap)) d[y] = std::min(d[y], k);
  }
  return d;
}

std::vector<int> r_components(const MetricView& space, const std::vector<char>& excluded, int R) {
  if (R <= 0) throw Error("InvalidArgument", "R must be positive");
  const int n = space.size();
  UnionFind uf(n);
  for (int x = 0; x < n; ++x) {
    if (excluded[x]) continue;
    for (int y : space.within(x, R))
      if (!excluded[y]) uf.unite(x, y);
  }
  std::vector<int> label(n, -1);
  for (int x = 0; x < n; ++x)
    if (!excluded[x]) label[x] = uf.find(x);
  return label;
}

bool r_separates(const MetricView& space, const std::vector<char>& I, int x0, int x1, int R) {
  if (I[x0] || I[x1]) return false;
  auto d = space.distances_to(I, R - 1);
  if (d[x0] < R || d[x1] < R) return false;
  auto comp = r_components(space, I, R);
  return comp[x0] != comp[x1];
}

std::vector<char> neighbourhood(const GroupMetric& metric, const std::vector<NormalForm>& centers,
                                int r) {
  std::vector<char> mask(metric.size(), 0);
  for (const auto& c : centers)
    for (const auto& [y, d] : metric.around(c, r)) mask[y] = 1;
  return mask;
}

// ---------------------------------------------------------------------------

std::string SeparationReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["instance"] = instance;
  j["R"] = R;
  j["verdict"] = holds() ? "holds" : "fails";
  j["samples"] = samples;
  j["not_applicable"] = not_applicable;
  j["pairs_tested"] = pairs_tested;
  j["separating_set_size"] = separating_set_size;
  j["diagnostics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : diagnostics) j["diagnostics"][k] = v;
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : failures)
    j["failures"].push_back({{"first", f.first}, {"second", f.second}, {"reason", f.reason}});
  return j.dump(2) + "\n";
}

std::string SeparationReport::to_text() const {
  std::ostringstream os;
  os << instance << ": " << (holds() ? "holds" : "FAILS") << "\n"
     << "  R = " << R << ", samples = " << samples << ", not applicable = " << not_applicable
     << ", pairs tested = " << pairs_tested << "\n";
  for (const auto& [k, v] : diagnostics) os << "  " << k << " = " << v << "\n";
  for (const auto& f : failures) os << "  failure: " << f.first << " | " << f.second << " (" << f.reason << ")\n";
  return os.str();
}

SeparationReport verify_thickening_lemma(const GraphMetric& space, const std::vector<char>& I,
                                         int x0, int x1, int R) {
  if (I[x0] || I[x1]) throw Error("PreconditionUnmet", "witness lies in I");
  auto graph_comp = r_components(space, I, 1);
  if (graph_comp[x0] == graph_comp[x1])
    throw Error("PreconditionUnmet", "I does not separate the witnesses in the graph");
  const int far = three_halves_up(R);
  auto d = space.distances_to(I, far);
  for (int x : {x0, x1})
    if (d[x] < far)
      throw Error("PreconditionUnmet", "d(x, I) = " + std::to_string(d[x]) + " < " + std::to_string(far));

  SeparationReport rep;
  rep.instance = "thickening";
  rep.R = R;
  rep.samples = 1;
  rep.pairs_tested = 1;
  std::vector<char> thick(I.size(), 0);
  for (std::size_t i = 0; i < I.size(); ++i) thick[i] = d[i] <= half_up(R);
  rep.separating_set_size = static_cast<int>(std::count(thick.begin(), thick.end(), 1));
  if (!r_separates(space, thick, x0, x1, R))
    rep.failures.push_back({std::to_string(x0), std::to_string(x1), "thickened set does not R-separate"});
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// Ball elements grouped by the coset key they have for each vertex type.
struct CosetIndex {
  std::vector<std::vector<NormalForm>> keys;  // [type][element]
  std::vector<std::unordered_map<NormalForm, std::vector<int>, NormalFormHash>> members;

  CosetIndex(const FundamentalGroup& fg, const CayleyBall& b) {
    const int nv = fg.graph().num_vertices();
    keys.assign(nv, {});
    members.assign(nv, {});
    for (int v = 0; v < nv; ++v)
      for (int i = 0; i < b.size(); ++i) {
        keys[v].push_back(fg.vertex_key(b.elements[i], v));
        members[v][keys[v].back()].push_back(i);
      }
  }
  const std::vector<int>& of(VertexId v, const NormalForm& key) const {
    static const std::vector<int> none;
    auto it = members[v].find(key);
    return it == members[v].end() ? none : it->second;
  }
};

}  // namespace

SeparationReport verify_cayley_separation(const FundamentalGroup& fg, const SamplingOptions& opt) {
  if (opt.R <= 0) throw Error("InvalidArgument", "R must be positive");
  const int N = opt.ball_radius;
  const CayleyBall ball = word_metric_ball(fg, N, opt.budget);
  const GroupMetric gm(fg, ball);
  const TreeBall tree = tree_ball(fg, opt.tree_radius > 0 ? opt.tree_radius : N, {1, opt.budget});
  const CosetIndex cosets(fg, ball);
  const int near = half_up(opt.R);
  const int far = three_halves_up(opt.R);
  const int interior = N - opt.R - 1;

  SeparationReport rep;
  rep.instance = "cayley-separation";
  rep.R = opt.R;
  std::int64_t failure_count = 0;
  // Only cosets with an element inside the witness margin can contribute.
  std::vector<int> candidates;
  for (std::size_t t = 0; t < tree.vertices.size(); ++t)
    for (int x : cosets.of(tree.vertices[t].type, tree.vertices[t].key))
      if (ball.dist[x] <= interior) {
        candidates.push_back(static_cast<int>(t));
        break;
      }
  if (candidates.size() < 2) throw Error("PreconditionUnmet", "ball too small for the witness margin");

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick_vertex(0, candidates.size() - 1);
  struct Draw {
    int u, w;
    std::uint64_t edge_seed;
  };
  std::vector<Draw> draws;
  for (int s = 0; s < opt.samples; ++s) {
    const int u = candidates[pick_vertex(rng)];
    const int w = candidates[pick_vertex(rng)];
    draws.push_back({u, w, rng()});
  }

  std::vector<SampleResult> results(draws.size());
  parallel_for(static_cast<int>(draws.size()), opt.jobs, [&](int s) {
    SampleResult& out = results[s];
    const auto [u, w, edge_seed] = draws[s];
    if (u == w) {
      out.not_applicable = true;
      return;
    }
    const auto path = tree_geodesic(tree, u, w);
    const TreeEdge& e = tree.edges[path[edge_seed % path.size()]];
    const auto coset = edge_coset(fg, e.gamma, e.type);
    const auto sep = neighbourhood(gm, coset, near);
    const auto thick = neighbourhood(gm, coset, far);
    out.separating_set_size = static_cast<int>(std::count(sep.begin(), sep.end(), 1));

    auto witnesses = [&](int t) {
      std::vector<int> found;
      for (int x : cosets.of(tree.vertices[t].type, tree.vertices[t].key))
        if (ball.dist[x] <= interior && !thick[x]) found.push_back(x);
      return found;
    };
    const auto A = witnesses(u);
    const auto B = witnesses(w);
    if (A.empty() || B.empty()) return;
    const auto dist = gm.distances_to(sep, opt.R - 1);
    const auto comp = r_components(gm, sep, opt.R);
    for (int x : A)
      for (int y : B) {
        ++out.pairs;
        std::string why;
        if (dist[x] < opt.R || dist[y] < opt.R)
          why = "witness within R of the separating set";
        else if (comp[x] == comp[y])
          why = "same R-component";
        if (!why.empty()) out.fail({fg.format(ball.elements[x]), fg.format(ball.elements[y]), why});
      }
  });
  merge(rep, failure_count, results);
  rep.diagnostics["ball_size"] = ball.size();
  rep.diagnostics["candidate_cosets"] = static_cast<double>(candidates.size());
  rep.diagnostics["samples_with_pairs"] = static_cast<double>(
      std::count_if(results.begin(), results.end(), [](const SampleResult& r) { return r.pairs > 0; }));
  rep.diagnostics["tree_vertices"] = static_cast<double>(tree.vertices.size());
  rep.diagnostics["failure_count"] = static_cast<double>(failure_count);
  return rep;
}

// ---------------------------------------------------------------------------

SeparationReport verify_K_construction(const FundamentalGroup& fg, const KOptions& opt) {
  const GraphOfGroups& g = fg.graph();
  if (g.num_edges() == 0) throw Error("NoEdges", "the construction needs a tree edge");
  const int N = opt.ball_radius;
  SeparationReport rep;
  rep.instance = "K-construction";

  // P = {gamma : gamma L meets L} is the ball of radius 2 for the identity star.
  const int diamP_radius = 4;
  const WordMetric small(fg, diamP_radius, opt.budget);
  std::vector<NormalForm> P;
  for (int i = 0; i < small.ball().size() && small.ball().dist[i] <= 2; ++i)
    P.push_back(small.ball().elements[i]);
  int diamP = 0;
  for (const auto& p : P)
    for (const auto& q : P) diamP = std::max(diamP, *small.distance(p, q));
  const int rK = half_up(diamP);
  const int rBound = three_halves_up(diamP);

  std::vector<NormalForm> U;  // union of the identity edge cosets
  for (int k = 0; k < g.num_edges(); ++k)
    for (auto& c : edge_coset(fg, fg.identity(), 2 * k))
      if (std::find(U.begin(), U.end(), c) == U.end()) U.push_back(std::move(c));

  const int big_radius = 2 * rBound + 2;
  const WordMetric big(fg, big_radius, opt.budget);
  auto dist_or_far = [&](const NormalForm& a, const NormalForm& b) {
    auto d = big.distance(a, b);
    return d ? *d : big_radius + 1;
  };

  // diam(I_r) for r = ceil(3 diam(P) / 2).
  std::vector<NormalForm> Ibound;
  {
    std::unordered_map<NormalForm, int, NormalFormHash> seen;
    const auto& bb = big.ball();
    for (const auto& u : U)
      for (int w = 0; w < bb.size() && bb.dist[w] <= rBound; ++w) {
        NormalForm x = fg.multiply(u, bb.elements[w]);
        if (seen.emplace(x, 0).second) Ibound.push_back(std::move(x));
      }
  }
  int bound = 0;
  for (std::size_t i = 0; i < Ibound.size(); ++i)
    for (std::size_t j = i + 1; j < Ibound.size(); ++j)
      bound = std::max(bound, dist_or_far(Ibound[i], Ibound[j]));

  const CayleyBall ball = word_metric_ball(fg, N, opt.budget);
  const GroupMetric gm(fg, ball);
  const GraphMetric graph(ball.adj);
  const TreeBall tree = tree_ball(fg, opt.tree_radius > 0 ? opt.tree_radius : N, {1, opt.budget});
  const CosetIndex cosets(fg, ball);
  const int interior = N - 1;

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(tree.edges.size()) - 1);
  std::vector<int> picks;
  for (int s = 0; s < opt.edges; ++s) picks.push_back(pick(rng));
  std::int64_t failure_count = 0;

  std::vector<SampleResult> results(picks.size());
  parallel_for(static_cast<int>(picks.size()), opt.jobs, [&](int s) {
    SampleResult& out = results[s];
    const TreeEdge& e = tree.edges[picks[s]];
    const NormalForm& child_key = tree.vertices[e.child].key;

    std::vector<NormalForm> centers;
    for (const auto& u : U) centers.push_back(fg.multiply(e.gamma, u));
    const auto K = neighbourhood(gm, centers, rK + 1);
    out.separating_set_size = static_cast<int>(std::count(K.begin(), K.end(), 1));
    const auto comp = r_components(graph, K, 1);
    const auto edge_coset_elems = edge_coset(fg, e.gamma, e.type);

    // Side membership through the coset keys of every vertex type.
    std::vector<char> inM(ball.size(), 0), inM2(ball.size(), 0);
    for (int x = 0; x < ball.size(); ++x) {
      if (ball.dist[x] > interior) continue;
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        (key_descends(cosets.keys[v][x], child_key) ? inM2 : inM)[x] = 1;
    }
    // Distances to the edge coset, exact up to N and capped at N + 1 beyond.
    std::vector<int> dE(ball.size(), N + 1);
    for (const auto& c : edge_coset_elems)
      for (const auto& [y, d] : gm.around(c, N)) dE[y] = std::min(dE[y], d);

    // A pair fails when either point lies in K or both share a component;
    // R0 is the largest min(dE) over failing pairs.
    std::unordered_map<int, int> best1, best2;
    int bestK1 = -1, bestK2 = -1, all1 = -1, all2 = -1;
    std::int64_t n1 = 0, n2 = 0;
    for (int x = 0; x < ball.size(); ++x) {
      if (inM[x]) {
        ++n1;
        all1 = std::max(all1, dE[x]);
        if (K[x]) bestK1 = std::max(bestK1, dE[x]);
        else best1[comp[x]] = std::max(best1[comp[x]], dE[x]);
      }
      if (inM2[x]) {
        ++n2;
        all2 = std::max(all2, dE[x]);
        if (K[x]) bestK2 = std::max(bestK2, dE[x]);
        else best2[comp[x]] = std::max(best2[comp[x]], dE[x]);
      }
    }
    out.pairs = n1 * n2;
    int R0 = 0;
    if (bestK1 >= 0 && all2 >= 0) R0 = std::max(R0, std::min(bestK1, all2));
    if (bestK2 >= 0 && all1 >= 0) R0 = std::max(R0, std::min(bestK2, all1));
    for (const auto& [c, d1] : best1) {
      auto it = best2.find(c);
      if (it != best2.end()) R0 = std::max(R0, std::min(d1, it->second));
    }
    out.R0 = R0;
    if (R0 > bound)
      out.fail({fg.format(e.gamma), g.edge_label(e.type),
                "R0 = " + std::to_string(R0) + " exceeds diam bound " + std::to_string(bound)});

    // Far-vertex probe: cosets at tree distance > probe_radius from the edge
    // on both sides must be separated without exception.
    std::vector<int> far0, far1;
    const NormalForm& parent_key = tree.vertices[e.parent].key;
    for (std::size_t t = 0; t < tree.vertices.size(); ++t) {
      const auto& tv = tree.vertices[t];
      const int d = std::min(key_distance(tv.key, parent_key), key_distance(tv.key, child_key));
      if (d <= opt.probe_radius) continue;
      for (int x : cosets.of(tv.type, tv.key))
        if (ball.dist[x] <= interior) (key_descends(tv.key, child_key) ? far1 : far0).push_back(x);
    }
    for (int x : far0)
      for (int y : far1) {
        ++out.probe_pairs;
        if (K[x] || K[y] || comp[x] == comp[y])
          out.fail({fg.format(ball.elements[x]), fg.format(ball.elements[y]),
                    "far cosets not separated across " + g.edge_label(e.type)});
      }
  });
  int R0_max = 0;
  std::int64_t probe_pairs = 0;
  for (const auto& r : results) {
    R0_max = std::max(R0_max, r.R0);
    probe_pairs += r.probe_pairs;
  }
  merge(rep, failure_count, results);
  rep.diagnostics["diam_P"] = diamP;
  rep.diagnostics["K_radius"] = rK + 1;
  rep.diagnostics["R0_max"] = R0_max;
  rep.diagnostics["diam_bound"] = bound;
  rep.diagnostics["probe_radius"] = opt.probe_radius;
  rep.diagnostics["probe_pairs"] = static_cast<double>(probe_pairs);
  rep.diagnostics["ball_size"] = ball.size();
  rep.diagnostics["failure_count"] = static_cast<double>(failure_count);
  return rep;
}

// ---------------------------------------------------------------------------

std::string to_string(EndsVerdict v) {
  switch (v) {
    case EndsVerdict::Zero: return "0";
    case EndsVerdict::One: return "1";
    case EndsVerdict::Two: return "2";
    case EndsVerdict::Infinite: return "infinite";
    case EndsVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string EndsEstimate::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["outer_radius"] = outer_radius;
  j["radii"] = radii;
  j["counts"] = counts;
  j["verdict"] = to_string(verdict);
  return j.dump(2) + "\n";
}

EndsEstimate ends_estimate(const FundamentalGroup& fg, const std::vector<int>& radii,
                           std::optional<int> outer, std::size_t budget) {
  if (radii.empty()) throw Error("InvalidArgument", "no radii given");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw Error("InvalidArgument", "radii must increase");
  EndsEstimate est;
  est.radii = radii;
  est.outer_radius = outer.value_or(radii.back() + 2);
  const int N = est.outer_radius;
  if (N <= radii.back()) throw Error("InvalidArgument", "outer radius must exceed every radius");
  const CayleyBall ball = word_metric_ball(fg, N, budget);

  const bool exhausted = std::none_of(ball.dist.begin(), ball.dist.end(), [&](int d) { return d == N; });
  const GraphMetric graph(ball.adj);
  for (int n : radii) {
    std::vector<char> inner(ball.size());
    for (int i = 0; i < ball.size(); ++i) inner[i] = ball.dist[i] <= n;
    const auto comp = r_components(graph, inner, 1);
    std::map<int, int> size;
    std::map<int, bool> outer_touch;
    for (int i = 0; i < ball.size(); ++i) {
      if (comp[i] < 0) continue;
      ++size[comp[i]];
      if (ball.dist[i] == N) outer_touch[comp[i]] = true;
    }
    // Noise floor: a component that reaches the sphere already has N - n
    // points, so this never drops a genuine end.
    const int floor = N - n;
    int count = 0;
    for (const auto& [c, sz] : size)
      if (outer_touch[c] && sz >= floor) ++count;
    est.counts.push_back(count);
  }
  const auto& c = est.counts;
  const bool constant = std::all_of(c.begin(), c.end(), [&](int x) { return x == c.front(); });
  if (exhausted)
    est.verdict = EndsVerdict::Zero;
  else if (constant && c.front() == 1)
    est.verdict = EndsVerdict::One;
  else if (constant && c.front() == 2)
    est.verdict = EndsVerdict::Two;
  else if (std::is_sorted(c.begin(), c.end()) && c.back() > c.front())
    est.verdict = EndsVerdict::Infinite;
  else
    est.verdict = EndsVerdict::Inconclusive;
  return est;
}

}  // namespace amalgam
