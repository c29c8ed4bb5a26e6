#include "amalgam/groups.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "amalgam/error.hpp"

namespace amalgam {

std::size_t ElemHash::operator()(const Elem& e) const noexcept {
  std::size_t h = e.size() * 0x9e3779b97f4a7c15ULL;
  for (auto x : e) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(x)) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return h;
}

std::optional<int> FiniteGroup::find_label(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

std::vector<int> FiniteGroup::generated_subgroup(const std::vector<int>& gens) const {
  std::vector<char> seen(order(), 0);
  std::deque<int> queue{identity_};
  seen[identity_] = 1;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int g : gens) {
      int y = mul(x, g);
      if (!seen[y]) {
        seen[y] = 1;
        queue.push_back(y);
      }
    }
  }
  std::vector<int> out;
  for (int i = 0; i < order(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

std::vector<int> FiniteGroup::canonical_generators() const {
  std::vector<int> gens;
  std::vector<int> sub{identity_};
  for (int i = 0; i < order(); ++i) {
    if (std::binary_search(sub.begin(), sub.end(), i)) continue;
    gens.push_back(i);
    sub = generated_subgroup(gens);
  }
  return gens;
}

bool FiniteGroup::is_subgroup(const std::vector<int>& elems) const {
  if (elems.empty()) return false;
  std::vector<char> in(order(), 0);
  for (int e : elems) {
    if (e < 0 || e >= order()) return false;
    in[e] = 1;
  }
  if (!in[identity_]) return false;
  for (int a : elems) {
    if (!in[inv(a)]) return false;
    for (int b : elems)
      if (!in[mul(a, b)]) return false;
  }
  return true;
}

FiniteGroup check_group(const std::vector<std::vector<int>>& table,
                        std::vector<std::string> labels) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw Error("NotLatinSquare", "empty table");
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(table[r].size()) != n)
      throw Error("NotLatinSquare", "row " + std::to_string(r) + " has wrong length");
    for (int c = 0; c < n; ++c)
      if (table[r][c] < 0 || table[r][c] >= n)
        throw Error("NotLatinSquare", "entry out of range at (" + std::to_string(r) + "," +
                                          std::to_string(c) + ")");
  }
  for (int r = 0; r < n; ++r) {
    std::vector<char> seen(n, 0);
    for (int c = 0; c < n; ++c) {
      if (seen[table[r][c]])
        throw Error("NotLatinSquare", "duplicate entry in row " + std::to_string(r) +
                                          " at column " + std::to_string(c));
      seen[table[r][c]] = 1;
    }
  }
  for (int c = 0; c < n; ++c) {
    std::vector<char> seen(n, 0);
    for (int r = 0; r < n; ++r) {
      if (seen[table[r][c]])
        throw Error("NotLatinSquare", "duplicate entry in column " + std::to_string(c) +
                                          " at row " + std::to_string(r));
      seen[table[r][c]] = 1;
    }
  }
  int identity = -1;
  for (int e = 0; e < n && identity < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = table[e][x] == x && table[x][e] == x;
    if (ok) identity = e;
  }
  if (identity < 0) throw Error("NoIdentity", "no two-sided identity in table");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw Error("NotAssociative", "(" + std::to_string(a) + "," + std::to_string(b) +
                                            "," + std::to_string(c) + ")");
  FiniteGroup g;
  g.table_ = table;
  g.identity_ = identity;
  g.inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table[a][b] == identity) g.inverse_[a] = b;
  if (labels.empty()) {
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (static_cast<int>(labels.size()) != n)
    throw Error("SyntaxError", "label count does not match group order");
  g.labels_ = std::move(labels);
  return g;
}

FiniteGroup cyclic_group(int n) {
  if (n < 1) throw Error("SyntaxError", "cyclic group order must be positive");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return check_group(t);
}

FiniteGroup trivial_group() { return cyclic_group(1); }

std::vector<std::vector<int>> cosets(const FiniteGroup& group, const std::vector<int>& subgroup,
                                     CosetSide side) {
  if (!group.is_subgroup(subgroup)) throw Error("NotASubgroup", "element set is not closed");
  std::vector<char> used(group.order(), 0);
  std::vector<std::vector<int>> out;
  for (int g = 0; g < group.order(); ++g) {
    if (used[g]) continue;
    std::vector<int> coset;
    for (int h : subgroup) {
      int x = side == CosetSide::Left ? group.mul(g, h) : group.mul(h, g);
      coset.push_back(x);
      used[x] = 1;
    }
    std::sort(coset.begin(), coset.end());
    out.push_back(std::move(coset));
  }
  // The subgroup's own coset leads even when the identity is not index 0.
  auto it = std::find_if(out.begin(), out.end(), [&](const auto& c) {
    return std::binary_search(c.begin(), c.end(), group.identity());
  });
  std::rotate(out.begin(), it, it + 1);
  return out;
}

// ---------------------------------------------------------------------------

GroupBackend GroupBackend::finite(FiniteGroup g) {
  GroupBackend b;
  b.kind_ = GroupKind::Finite;
  b.finite_ = std::make_shared<const FiniteGroup>(std::move(g));
  return b;
}

GroupBackend GroupBackend::free_abelian(int rank) {
  GroupBackend b;
  b.kind_ = GroupKind::FreeAbelian;
  b.rank_ = rank;
  return b;
}

GroupBackend GroupBackend::free(int rank) {
  GroupBackend b;
  b.kind_ = GroupKind::Free;
  b.rank_ = rank;
  return b;
}

Elem GroupBackend::identity() const {
  switch (kind_) {
    case GroupKind::Finite: return Elem{finite_->identity()};
    case GroupKind::FreeAbelian: return Elem(rank_, 0);
    case GroupKind::Free: return Elem{};
  }
  return {};
}

bool GroupBackend::is_identity(const Elem& e) const { return e == identity(); }

Elem GroupBackend::reduce(const Elem& e) const {
  if (kind_ != GroupKind::Free) return e;
  Elem out;
  out.reserve(e.size());
  for (auto x : e) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

Elem GroupBackend::mul(const Elem& a, const Elem& b) const {
  switch (kind_) {
    case GroupKind::Finite: return Elem{finite_->mul(a[0], b[0])};
    case GroupKind::FreeAbelian: {
      Elem out(rank_);
      for (int i = 0; i < rank_; ++i) out[i] = a[i] + b[i];
      return out;
    }
    case GroupKind::Free: {
      Elem out = a;
      for (auto x : b) {
        if (!out.empty() && out.back() == -x)
          out.pop_back();
        else
          out.push_back(x);
      }
      return out;
    }
  }
  return {};
}

Elem GroupBackend::inv(const Elem& a) const {
  switch (kind_) {
    case GroupKind::Finite: return Elem{finite_->inv(a[0])};
    case GroupKind::FreeAbelian: {
      Elem out(a);
      for (auto& x : out) x = -x;
      return out;
    }
    case GroupKind::Free: {
      Elem out(a.rbegin(), a.rend());
      for (auto& x : out) x = -x;
      return out;
    }
  }
  return {};
}

bool GroupBackend::valid(const Elem& e) const {
  switch (kind_) {
    case GroupKind::Finite: return e.size() == 1 && e[0] >= 0 && e[0] < finite_->order();
    case GroupKind::FreeAbelian: return static_cast<int>(e.size()) == rank_;
    case GroupKind::Free:
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0 || std::abs(e[i]) > rank_) return false;
        if (i > 0 && e[i] == -e[i - 1]) return false;
      }
      return true;
  }
  return false;
}

std::vector<Elem> GroupBackend::elements() const {
  std::vector<Elem> out;
  if (!is_finite()) return out;
  for (int i = 0; i < finite_->order(); ++i) out.push_back(Elem{i});
  return out;
}

std::vector<Elem> GroupBackend::canonical_generators() const {
  std::vector<Elem> out;
  if (is_finite()) {
    for (int g : finite_->canonical_generators()) out.push_back(Elem{g});
    return out;
  }
  for (int i = 0; i < rank_; ++i) {
    if (kind_ == GroupKind::FreeAbelian) {
      Elem e(rank_, 0);
      e[i] = 1;
      out.push_back(e);
    } else {
      out.push_back(Elem{i + 1});
    }
  }
  return out;
}

int GroupBackend::length(const Elem& e) const {
  switch (kind_) {
    case GroupKind::Finite: return e[0];
    case GroupKind::FreeAbelian: {
      int s = 0;
      for (auto x : e) s += std::abs(x);
      return s;
    }
    case GroupKind::Free: return static_cast<int>(e.size());
  }
  return 0;
}

bool GroupBackend::less(const Elem& a, const Elem& b) const {
  if (is_finite()) return a[0] < b[0];
  int la = length(a), lb = length(b);
  if (la != lb) return la < lb;
  return a < b;
}

std::vector<Elem> GroupBackend::ball(int r) const {
  if (is_finite()) return elements();
  std::vector<Elem> out{identity()};
  std::vector<Elem> frontier{identity()};
  std::vector<Elem> gens = canonical_generators();
  for (const auto& g : canonical_generators()) gens.push_back(inv(g));
  struct Cmp {
    const GroupBackend* g;
    bool operator()(const Elem& a, const Elem& b) const { return g->less(a, b); }
  };
  for (int k = 1; k <= r; ++k) {
    std::vector<Elem> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        Elem y = mul(x, g);
        if (length(y) == k) next.push_back(std::move(y));
      }
    std::sort(next.begin(), next.end(), Cmp{this});
    next.erase(std::unique(next.begin(), next.end()), next.end());
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

std::string GroupBackend::basis_name(int i) const { return "x" + std::to_string(i + 1); }

std::string GroupBackend::format(const Elem& e) const {
  std::ostringstream os;
  switch (kind_) {
    case GroupKind::Finite: return finite_->labels()[e[0]];
    case GroupKind::FreeAbelian: {
      bool any = false;
      for (int i = 0; i < rank_; ++i) {
        if (e[i] == 0) continue;
        if (any) os << '*';
        os << basis_name(i);
        if (e[i] != 1) os << '^' << e[i];
        any = true;
      }
      if (!any) return "1";
      return os.str();
    }
    case GroupKind::Free: {
      if (e.empty()) return "1";
      std::size_t i = 0;
      bool first = true;
      while (i < e.size()) {
        std::size_t j = i;
        while (j < e.size() && e[j] == e[i]) ++j;
        if (!first) os << '*';
        first = false;
        os << basis_name(std::abs(e[i]) - 1);
        int p = static_cast<int>(j - i) * (e[i] > 0 ? 1 : -1);
        if (p != 1) os << '^' << p;
        i = j;
      }
      return os.str();
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::optional<int> Monomorphism::preimage(const Elem& e) const {
  for (std::size_t a = 0; a < map_.size(); ++a)
    if (map_[a] == e) return static_cast<int>(a);
  return std::nullopt;
}

bool Monomorphism::is_onto() const {
  return target_->is_finite() && target_->order() == source_->order();
}

Monomorphism check_monomorphism(std::shared_ptr<const FiniteGroup> source,
                                std::shared_ptr<const GroupBackend> target,
                                std::vector<Elem> map) {
  const int n = source->order();
  if (static_cast<int>(map.size()) != n)
    throw Error("NotHomomorphism", "map is not total on the source group");
  for (auto& m : map) {
    if (!target->valid(m)) throw Error("NotHomomorphism", "image is not a target element");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (map[source->mul(a, b)] != target->mul(map[a], map[b]))
        throw Error("NotHomomorphism",
                    "(" + source->labels()[a] + "," + source->labels()[b] + ")");
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (map[a] == map[b])
        throw Error("NotInjective", "(" + source->labels()[a] + "," + source->labels()[b] + ")");
  Monomorphism m;
  m.source_ = std::move(source);
  m.target_ = std::move(target);
  m.map_ = std::move(map);
  return m;
}

std::vector<Elem> extend_to_homomorphism(const FiniteGroup& source, const GroupBackend& target,
                                         const std::vector<int>& gens,
                                         const std::vector<Elem>& images) {
  const int n = source.order();
  std::vector<std::optional<Elem>> map(n);
  map[source.identity()] = target.identity();
  std::deque<int> queue{source.identity()};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < gens.size(); ++k) {
      int y = source.mul(x, gens[k]);
      Elem img = target.mul(*map[x], images[k]);
      if (!map[y]) {
        map[y] = img;
        queue.push_back(y);
      } else if (*map[y] != img) {
        throw Error("NotHomomorphism", "(" + source.labels()[x] + "," +
                                           source.labels()[gens[k]] + ")");
      }
    }
  }
  std::vector<Elem> out;
  for (int i = 0; i < n; ++i) {
    if (!map[i]) throw Error("NotHomomorphism", "generator images do not cover the source group");
    out.push_back(*map[i]);
  }
  return out;
}

}  // namespace amalgam
