#include "amalgam/fundgroup.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "amalgam/error.hpp"
#include "json.hpp"

namespace amalgam {

namespace {

void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

bool elem_less(const GroupBackend& g, const Elem& a, const Elem& b) { return g.less(a, b); }

Word free_reduce(const Word& w) {
  Word out;
  for (int l : w) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = -l;
  return out;
}

}  // namespace

std::size_t NormalFormHash::operator()(const NormalForm& x) const noexcept {
  std::size_t seed = static_cast<std::size_t>(x.base);
  ElemHash eh;
  hash_mix(seed, eh(x.head));
  for (const auto& s : x.tail) {
    hash_mix(seed, static_cast<std::size_t>(s.edge));
    hash_mix(seed, eh(s.elem));
  }
  return seed;
}

bool nf_less(const GraphOfGroups& g, const NormalForm& a, const NormalForm& b) {
  if (a.base != b.base) return a.base < b.base;
  if (a.tail.size() != b.tail.size()) return a.tail.size() < b.tail.size();
  const GroupBackend& hg = g.vertex_group(a.base);
  if (a.head != b.head) return elem_less(hg, a.head, b.head);
  for (std::size_t i = 0; i < a.tail.size(); ++i) {
    const auto& sa = a.tail[i];
    const auto& sb = b.tail[i];
    if (sa.edge != sb.edge) return sa.edge < sb.edge;
    if (sa.elem != sb.elem) return elem_less(g.vertex_group(g.omega(sa.edge)), sa.elem, sb.elem);
  }
  return false;
}

FundamentalGroup::FundamentalGroup(GraphOfGroups g, VertexId root)
    : g_(std::move(g)), sd_(spanning_tree(g_, root)) {
  const int ne = g_.num_oriented();
  rep_index_.assign(ne, {});
  edge_part_.assign(ne, {});
  for (EdgeId y = 0; y < ne; ++y) {
    const GroupBackend& target = g_.vertex_group(g_.omega(y));
    if (!target.is_finite()) continue;
    const FiniteGroup& t = target.table();
    const Monomorphism& iy = g_.embed(y);
    std::vector<int> sub;
    for (const auto& e : iy.images()) sub.push_back(e[0]);
    auto& rep = rep_index_[y];
    auto& part = edge_part_[y];
    rep.assign(t.order(), -1);
    part.assign(t.order(), -1);
    for (int h = 0; h < t.order(); ++h) {
      if (rep[h] >= 0) continue;
      std::vector<int> coset;
      for (int c : sub) coset.push_back(t.mul(c, h));
      bool is_sub = std::find(coset.begin(), coset.end(), t.identity()) != coset.end();
      int r = is_sub ? t.identity() : *std::min_element(coset.begin(), coset.end());
      for (int x : coset) rep[x] = r;
    }
    for (int h = 0; h < t.order(); ++h) {
      int c = t.mul(h, t.inv(rep[h]));  // i_y(a) = h r^-1
      part[h] = *iy.preimage(Elem{c});
    }
  }

  vertex_words_.assign(g_.num_vertices(), {});
  for (VertexId v = 0; v < g_.num_vertices(); ++v) {
    const GroupBackend& gv = g_.vertex_group(v);
    if (!gv.is_finite()) continue;
    const FiniteGroup& t = gv.table();
    const auto& gens = g_.vertices()[v].gens;
    auto& words = vertex_words_[v];
    words.assign(t.order(), {});
    std::vector<char> seen(t.order(), 0);
    std::deque<int> q{t.identity()};
    seen[t.identity()] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (std::size_t j = 0; j < gens.size(); ++j) {
        int y = t.mul(x, gens[j][0]);
        if (seen[y]) continue;
        seen[y] = 1;
        words[y] = words[x];
        words[y].push_back(static_cast<int>(j) + 1);
        q.push_back(y);
      }
    }
  }

  for (VertexId v = 0; v < g_.num_vertices(); ++v) {
    const auto& vd = g_.vertices()[v];
    for (std::size_t j = 0; j < vd.gens.size(); ++j)
      gens_.push_back({vd.gen_names[j], v, -1, vertex_element(v, vd.gens[j])});
  }
  for (int k = 0; k < g_.num_edges(); ++k)
    if (!sd_.tree_edge[k]) gens_.push_back({g_.edges()[k].name, -1, 2 * k, edge_loop(2 * k)});
  std::map<std::string, int> uses;
  for (const auto& gen : gens_) ++uses[gen.label];
  for (auto& gen : gens_) {
    if (uses[gen.label] < 2) continue;
    gen.label = (gen.vertex >= 0 ? g_.vertices()[gen.vertex].name
                                 : g_.edges()[unoriented(gen.stable)].name) +
                "." + gen.label;
  }

  auto add_sym = [&](const NormalForm& x, const std::string& label) {
    if (is_identity(x)) return;
    if (std::find(sym_.begin(), sym_.end(), x) != sym_.end()) return;
    sym_.push_back(x);
    sym_labels_.push_back(label);
  };
  for (const auto& gen : gens_) {
    add_sym(gen.element, gen.label);
    add_sym(invert(gen.element), gen.label + "^-1");
  }
}

NormalForm FundamentalGroup::identity() const {
  return NormalForm{sd_.root, g_.vertex_group(sd_.root).identity(), {}};
}

bool FundamentalGroup::is_identity(const NormalForm& x) const {
  return x.tail.empty() && g_.vertex_group(x.base).is_identity(x.head);
}

VertexId FundamentalGroup::end_vertex(const NormalForm& x) const {
  return x.tail.empty() ? x.base : g_.omega(x.tail.back().edge);
}

FundamentalGroup::Decomposition FundamentalGroup::decompose(EdgeId y, const Elem& h) const {
  const GroupBackend& target = g_.vertex_group(g_.omega(y));
  if (target.is_finite()) {
    return {edge_part_[y][h[0]], Elem{rep_index_[y][h[0]]}};
  }
  const Monomorphism& iy = g_.embed(y);
  const Elem* best_c = nullptr;
  Elem best;
  for (const auto& c : iy.images()) {
    Elem cand = target.mul(c, h);
    if (!best_c || target.less(cand, best)) {
      best = std::move(cand);
      best_c = &c;
    }
  }
  return {*iy.preimage(target.inv(*best_c)), best};
}

bool FundamentalGroup::is_right_rep(EdgeId y, const Elem& h) const {
  return decompose(y, h).rep == h;
}

void FundamentalGroup::push_elem(NormalForm& p, const Elem& x) const {
  if (p.tail.empty()) {
    p.head = g_.vertex_group(p.base).mul(p.head, x);
    return;
  }
  p.tail.back().elem = g_.vertex_group(g_.omega(p.tail.back().edge)).mul(p.tail.back().elem, x);
  for (std::size_t i = p.tail.size(); i-- > 0;) {
    const EdgeId y = p.tail[i].edge;
    Decomposition d = decompose(y, p.tail[i].elem);
    p.tail[i].elem = std::move(d.rep);
    if (d.edge_elem == g_.edge_group(y).identity()) break;
    const Elem& moved = g_.embed(bar(y))(d.edge_elem);
    Elem& prev = i == 0 ? p.head : p.tail[i - 1].elem;
    prev = g_.vertex_group(g_.alpha(y)).mul(prev, moved);
  }
}

void FundamentalGroup::push_edge(NormalForm& p, EdgeId y) const {
  if (g_.alpha(y) != end_vertex(p))
    throw Error("BaseMismatch", "edge " + g_.edge_label(y) + " does not continue the path");
  if (!p.tail.empty() && p.tail.back().edge == bar(y) &&
      g_.vertex_group(g_.omega(p.tail.back().edge)).is_identity(p.tail.back().elem)) {
    p.tail.pop_back();
    return;
  }
  p.tail.push_back({y, g_.vertex_group(g_.omega(y)).identity()});
}

void FundamentalGroup::append(NormalForm& p, const NormalForm& q) const {
  if (end_vertex(p) != q.base)
    throw Error("BaseMismatch", "paths do not compose");
  push_elem(p, q.head);
  for (const auto& s : q.tail) {
    push_edge(p, s.edge);
    push_elem(p, s.elem);
  }
}

NormalForm FundamentalGroup::normalize(const NormalForm& path) const {
  NormalForm p{path.base, g_.vertex_group(path.base).identity(), {}};
  append(p, path);
  return p;
}

NormalForm FundamentalGroup::multiply(const NormalForm& x, const NormalForm& y) const {
  NormalForm p = x;
  append(p, y);
  return p;
}

NormalForm FundamentalGroup::reverse_path(const NormalForm& path) const {
  NormalForm r;
  r.base = end_vertex(path);
  const std::size_t n = path.tail.size();
  r.head = n ? g_.vertex_group(r.base).inv(path.tail.back().elem)
             : g_.vertex_group(r.base).inv(path.head);
  for (std::size_t i = n; i-- > 0;) {
    const EdgeId y = path.tail[i].edge;
    const Elem& prev = i == 0 ? path.head : path.tail[i - 1].elem;
    r.tail.push_back({bar(y), g_.vertex_group(g_.alpha(y)).inv(prev)});
  }
  return r;
}

NormalForm FundamentalGroup::invert(const NormalForm& x) const {
  return normalize(reverse_path(x));
}

NormalForm FundamentalGroup::power(const NormalForm& x, int n) const {
  NormalForm base = n < 0 ? invert(x) : x;
  NormalForm out = identity();
  for (int i = 0; i < std::abs(n); ++i) out = multiply(out, base);
  return out;
}

NormalForm FundamentalGroup::right_normal(const NormalForm& path) const {
  return reverse_path(normalize(reverse_path(path)));
}

NormalForm FundamentalGroup::tree_path(VertexId v) const {
  NormalForm p = identity();
  for (EdgeId y : sd_.tree_path(v)) push_edge(p, y);
  return p;
}

NormalForm FundamentalGroup::vertex_element(VertexId v, const Elem& x) const {
  NormalForm p = identity();
  const auto path = sd_.tree_path(v);
  for (EdgeId y : path) push_edge(p, y);
  push_elem(p, x);
  for (auto it = path.rbegin(); it != path.rend(); ++it) push_edge(p, bar(*it));
  return p;
}

NormalForm FundamentalGroup::edge_loop(EdgeId y) const {
  NormalForm p = identity();
  for (EdgeId z : sd_.tree_path(g_.alpha(y))) push_edge(p, z);
  push_edge(p, y);
  const auto back = sd_.tree_path(g_.omega(y));
  for (auto it = back.rbegin(); it != back.rend(); ++it) push_edge(p, bar(*it));
  return p;
}

NormalForm FundamentalGroup::vertex_key(const NormalForm& gamma, VertexId v) const {
  NormalForm p = gamma;
  for (EdgeId y : sd_.tree_path(v)) push_edge(p, y);
  NormalForm r = right_normal(p);
  if (r.tail.empty())
    r.head = g_.vertex_group(r.base).identity();
  else
    r.tail.back().elem = g_.vertex_group(v).identity();
  return r;
}

bool FundamentalGroup::coset_membership(const NormalForm& x, VertexId v,
                                        const NormalForm& gamma) const {
  return vertex_key(x, v) == vertex_key(gamma, v);
}

std::vector<Elem> FundamentalGroup::left_transversal(EdgeId y, int radius) const {
  const GroupBackend& gv = g_.vertex_group(g_.alpha(y));
  const EdgeId yb = bar(y);
  std::vector<Elem> out;
  if (gv.is_finite()) {
    const auto& rep = rep_index_[yb];
    const int id = gv.table().identity();
    out.push_back(gv.identity());
    for (int h = 0; h < gv.order(); ++h)
      if (rep[h] == h && h != id) out.push_back(gv.inv(Elem{h}));
    return out;
  }
  for (const auto& b : gv.ball(radius))
    if (is_right_rep(yb, gv.inv(b))) out.push_back(b);
  return out;
}

int FundamentalGroup::syllable_length(const NormalForm& x) const {
  int n = g_.vertex_group(x.base).is_identity(x.head) ? 0 : 1;
  for (const auto& s : x.tail) {
    if (!sd_.in_tree(s.edge)) ++n;
    if (!g_.vertex_group(g_.omega(s.edge)).is_identity(s.elem)) ++n;
  }
  return n;
}

std::string FundamentalGroup::format(const NormalForm& x) const {
  std::ostringstream os;
  os << g_.vertex_group(x.base).format(x.head);
  for (const auto& s : x.tail)
    os << ' ' << g_.edge_label(s.edge) << ' ' << g_.vertex_group(g_.omega(s.edge)).format(s.elem);
  return os.str();
}

Word FundamentalGroup::vertex_word(VertexId v, const Elem& x) const {
  const GroupBackend& gv = g_.vertex_group(v);
  if (gv.is_finite()) return vertex_words_[v][x[0]];
  const auto& gens = g_.vertices()[v].gens;
  auto letter = [&](int basis, int sign) {
    Elem b = gv.canonical_generators()[basis];
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (gens[j] == b) return sign * (static_cast<int>(j) + 1);
      if (gens[j] == gv.inv(b)) return -sign * (static_cast<int>(j) + 1);
    }
    throw Error("GeneratorsIncomplete", "vertex " + g_.vertices()[v].name +
                                            " lacks basis letter " + gv.basis_name(basis));
  };
  Word w;
  if (gv.kind() == GroupKind::FreeAbelian) {
    for (int i = 0; i < gv.rank(); ++i)
      for (int k = 0; k < std::abs(x[i]); ++k) w.push_back(letter(i, x[i] > 0 ? 1 : -1));
  } else {
    for (int l : x) w.push_back(letter(std::abs(l) - 1, l > 0 ? 1 : -1));
  }
  return w;
}

// ---------------------------------------------------------------------------

Presentation emit_presentation(const FundamentalGroup& fg) {
  const GraphOfGroups& g = fg.graph();
  Presentation p;
  std::vector<int> offset(g.num_vertices(), 0);
  std::vector<int> stable(g.num_edges(), -1);
  for (std::size_t i = 0; i < fg.generators().size(); ++i) {
    const auto& gen = fg.generators()[i];
    p.generators.push_back(gen.label);
    if (gen.stable >= 0) stable[unoriented(gen.stable)] = static_cast<int>(i) + 1;
  }
  for (VertexId v = 1; v < g.num_vertices(); ++v)
    offset[v] = offset[v - 1] + static_cast<int>(g.vertices()[v - 1].gens.size());

  std::set<Word> seen;
  auto emit = [&](const Word& w) {
    Word r = free_reduce(w);
    if (r.empty() || !seen.insert(r).second) return;
    p.relators.push_back(std::move(r));
  };
  auto global = [&](VertexId v, Word w) {
    for (int& l : w) l = l > 0 ? l + offset[v] : l - offset[v];
    return w;
  };

  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const GroupBackend& gv = g.vertex_group(v);
    const auto& gens = g.vertices()[v].gens;
    if (gv.is_finite()) {
      for (const auto& x : gv.elements())
        for (std::size_t j = 0; j < gens.size(); ++j) {
          Word w = fg.vertex_word(v, x);
          w.push_back(static_cast<int>(j) + 1);
          Word back = inverse_word(fg.vertex_word(v, gv.mul(x, gens[j])));
          w.insert(w.end(), back.begin(), back.end());
          emit(global(v, w));
        }
      continue;
    }
    const auto basis = gv.canonical_generators();
    for (std::size_t j = 0; j < gens.size(); ++j) {
      Word w{-(static_cast<int>(j) + 1)};
      Word expr = fg.vertex_word(v, gens[j]);
      w.insert(w.end(), expr.begin(), expr.end());
      emit(global(v, w));
    }
    if (gv.kind() == GroupKind::FreeAbelian)
      for (int i = 0; i < gv.rank(); ++i)
        for (int k = i + 1; k < gv.rank(); ++k) {
          Word a = fg.vertex_word(v, basis[i]);
          Word b = fg.vertex_word(v, basis[k]);
          Word w = a;
          w.insert(w.end(), b.begin(), b.end());
          Word ai = inverse_word(a), bi = inverse_word(b);
          w.insert(w.end(), ai.begin(), ai.end());
          w.insert(w.end(), bi.begin(), bi.end());
          emit(global(v, w));
        }
  }

  for (int k = 0; k < g.num_edges(); ++k) {
    const EdgeData& e = g.edges()[k];
    for (int a = 0; a < e.group->order(); ++a) {
      if (a == e.group->identity()) continue;
      Word w = inverse_word(global(e.right, fg.vertex_word(e.right, e.fwd(a))));
      Word u = global(e.left, fg.vertex_word(e.left, e.bwd(a)));
      if (stable[k] < 0) {
        w.insert(w.end(), u.begin(), u.end());
      } else {
        w.push_back(-stable[k]);
        w.insert(w.end(), u.begin(), u.end());
        w.push_back(stable[k]);
      }
      emit(w);
    }
  }
  return p;
}

namespace {

std::string word_string(const Word& w, const std::vector<std::string>& names, bool gap) {
  if (w.empty()) return gap ? "One(F)" : "1";
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    int exp = static_cast<int>(j - i) * (w[i] > 0 ? 1 : -1);
    int gen = std::abs(w[i]);
    if (!first) os << '*';
    first = false;
    if (gap)
      os << "F." << gen;
    else
      os << names[gen - 1];
    if (exp != 1) os << '^' << exp;
    i = j;
  }
  return os.str();
}

}  // namespace

std::string format_word(const Presentation& p, const Word& w) {
  return word_string(w, p.generators, false);
}

std::string render_presentation(const Presentation& p, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["generators"] = p.generators;
    j["relators"] = nlohmann::ordered_json::array();
    for (const auto& r : p.relators) j["relators"].push_back(format_word(p, r));
    j["relator_words"] = p.relators;
    return j.dump(2) + "\n";
  }
  if (format == "gap") {
    os << "F := FreeGroup(";
    if (p.generators.empty()) os << "0";
    for (std::size_t i = 0; i < p.generators.size(); ++i)
      os << (i ? ", " : "") << '"' << p.generators[i] << '"';
    os << ");;\nG := F / [";
    for (std::size_t i = 0; i < p.relators.size(); ++i)
      os << (i ? ", " : " ") << word_string(p.relators[i], p.generators, true);
    os << (p.relators.empty() ? "" : " ") << "];;\n";
    return os.str();
  }
  if (format != "text") throw Error("UnknownFormat", format);
  os << "< ";
  for (std::size_t i = 0; i < p.generators.size(); ++i) os << (i ? ", " : "") << p.generators[i];
  os << (p.generators.empty() ? "| " : " | ");
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    os << (i ? ", " : "") << format_word(p, p.relators[i]);
  os << (p.relators.empty() ? ">" : " >") << "\n";
  return os.str();
}

AbelianInvariants abelianization(const Presentation& p) {
  const int n = static_cast<int>(p.generators.size());
  IntMatrix m;
  for (const auto& r : p.relators) {
    std::vector<std::int64_t> row(n, 0);
    for (int l : r) row[std::abs(l) - 1] += l > 0 ? 1 : -1;
    m.push_back(std::move(row));
  }
  return abelian_invariants(n, m);
}

}  // namespace amalgam
