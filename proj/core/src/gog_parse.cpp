#include <cctype>
#include <map>
#include <optional>
#include <string>

#include "amalgam/error.hpp"
#include "amalgam/gog.hpp"

namespace amalgam {

namespace {

struct Token {
  enum Kind { Word, Punct, End } kind = End;
  std::string text;
  int col = 0;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
}

class LineParser {
 public:
  LineParser(std::string_view line, int lineno) : lineno_(lineno) {
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (word_char(c)) {
        std::size_t j = i;
        while (j < line.size() && word_char(line[j])) ++j;
        toks_.push_back({Token::Word, std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
        i = j;
      } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '-') {
        toks_.push_back({Token::Punct, "--", static_cast<int>(i) + 1});
        i += 2;
      } else if (std::string_view("[]{},:=*^-~").find(c) != std::string_view::npos) {
        toks_.push_back({Token::Punct, std::string(1, c), static_cast<int>(i) + 1});
        ++i;
      } else {
        fail(static_cast<int>(i) + 1, std::string("unexpected character '") + c + "'");
      }
    }
    end_col_ = static_cast<int>(line.size()) + 1;
  }

  [[noreturn]] void fail(int col, const std::string& msg) const {
    throw Error("SyntaxError", std::to_string(lineno_) + ":" + std::to_string(col) + ": " + msg);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(col(), msg); }

  int col() const { return pos_ < toks_.size() ? toks_[pos_].col : end_col_; }
  std::string where() const { return std::to_string(lineno_) + ":" + std::to_string(col()); }
  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& peek() const {
    static const Token end;
    return at_end() ? end : toks_[pos_];
  }
  bool peek_punct(std::string_view p) const {
    return !at_end() && toks_[pos_].kind == Token::Punct && toks_[pos_].text == p;
  }
  bool peek_word(std::string_view w) const {
    return !at_end() && toks_[pos_].kind == Token::Word && toks_[pos_].text == w;
  }

  std::string word(const char* what) {
    if (at_end() || toks_[pos_].kind != Token::Word) fail(std::string("expected ") + what);
    return toks_[pos_++].text;
  }
  void keyword(std::string_view w) {
    if (!peek_word(w)) fail("expected '" + std::string(w) + "'");
    ++pos_;
  }
  void punct(std::string_view p) {
    if (!peek_punct(p)) fail("expected '" + std::string(p) + "'");
    ++pos_;
  }
  bool accept(std::string_view p) {
    if (!peek_punct(p)) return false;
    ++pos_;
    return true;
  }
  int integer(const char* what) {
    int c = col();
    bool neg = accept("-");
    std::string w = word(what);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(w, &used);
    } catch (const std::exception&) {
      fail(c, std::string("expected ") + what);
    }
    if (used != w.size()) fail(c, std::string("expected ") + what);
    return neg ? -v : v;
  }
  void expect_end() {
    if (!at_end()) fail("unexpected trailing input '" + toks_[pos_].text + "'");
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int lineno_;
  int end_col_ = 1;
};

struct NamedGens {
  std::vector<std::string> names;
  std::vector<Elem> elems;
};

// Name lookup inside one group: vertex generator aliases, then element
// labels, then backend basis letters, then the identity spellings.
std::optional<Elem> resolve(const GroupBackend& g, const NamedGens* aliases, const std::string& name) {
  if (aliases)
    for (std::size_t i = 0; i < aliases->names.size(); ++i)
      if (aliases->names[i] == name) return aliases->elems[i];
  if (g.is_finite()) {
    if (auto idx = g.table().find_label(name)) return g.element(*idx);
  } else {
    for (int i = 0; i < g.rank(); ++i)
      if (g.basis_name(i) == name) {
        Elem e = g.identity();
        if (g.kind() == GroupKind::FreeAbelian)
          e[i] = 1;
        else
          e = {i + 1};
        return e;
      }
  }
  if (name == "1" || name == "e") return g.identity();
  return std::nullopt;
}

Elem power(const GroupBackend& g, const Elem& x, int n) {
  Elem base = n < 0 ? g.inv(x) : x;
  Elem out = g.identity();
  for (int i = 0; i < std::abs(n); ++i) out = g.mul(out, base);
  return out;
}

Elem parse_expr(LineParser& p, const GroupBackend& g, const NamedGens* aliases) {
  Elem acc = g.identity();
  do {
    int c = p.col();
    std::string name = p.word("element name");
    auto e = resolve(g, aliases, name);
    if (!e) p.fail(c, "unknown element '" + name + "'");
    Elem term = *e;
    if (p.accept("^")) term = power(g, term, p.integer("exponent"));
    acc = g.mul(acc, term);
  } while (p.accept("*"));
  return acc;
}

struct Parsed {
  std::vector<GroupDecl> groups;
  std::map<std::string, std::shared_ptr<const GroupBackend>> by_name;
  std::vector<VertexData> vertices;
  std::vector<EdgeData> edges;
};

std::vector<std::string> parse_name_list(LineParser& p) {
  std::vector<std::string> out;
  p.punct("[");
  if (!p.accept("]")) {
    do out.push_back(p.word("name")); while (p.accept(","));
    p.punct("]");
  }
  return out;
}

void parse_group(LineParser& p, Parsed& st) {
  int name_col = p.col();
  std::string name = p.word("group name");
  if (st.by_name.count(name) || name == "trivial") p.fail(name_col, "group '" + name + "' redeclared");
  std::string kind = p.word("group kind");
  std::shared_ptr<const GroupBackend> g;
  if (kind == "cyclic" || kind == "table") {
    std::vector<std::vector<int>> table;
    if (kind == "cyclic") {
      int n = p.integer("group order");
      if (n < 1) p.fail("cyclic order must be positive");
      table = cyclic_group(n).table();
    } else {
      p.punct("[");
      do {
        std::vector<int> row;
        p.punct("[");
        do row.push_back(p.integer("table entry")); while (p.accept(","));
        p.punct("]");
        table.push_back(std::move(row));
      } while (p.accept(","));
      p.punct("]");
    }
    std::vector<std::string> labels;
    if (p.peek_word("labels")) {
      p.word("labels");
      int c = p.col();
      labels = parse_name_list(p);
      if (labels.size() != table.size()) p.fail(c, "label count does not match the group order");
    }
    g = std::make_shared<const GroupBackend>(GroupBackend::finite(check_group(table, labels)));
  } else if (kind == "free_abelian" || kind == "free") {
    int n = p.integer("rank");
    if (n < 0) p.fail("rank must be non-negative");
    g = std::make_shared<const GroupBackend>(kind == "free" ? GroupBackend::free(n)
                                                            : GroupBackend::free_abelian(n));
  } else {
    p.fail("unknown group kind '" + kind + "'");
  }
  p.expect_end();
  st.by_name[name] = g;
  st.groups.push_back({name, g});
}

void parse_vertex(LineParser& p, Parsed& st) {
  int name_col = p.col();
  VertexData v;
  v.name = p.word("vertex name");
  for (const auto& w : st.vertices)
    if (w.name == v.name) p.fail(name_col, "vertex '" + v.name + "' redeclared");
  v.group_name = p.word("group name");
  auto it = st.by_name.find(v.group_name);
  if (it == st.by_name.end()) throw Error("UnknownGroupRef", v.group_name + " at " + p.where());
  v.group = it->second;
  const GroupBackend& g = *v.group;

  if (p.peek_word("gens")) {
    p.word("gens");
    p.punct("[");
    std::vector<Elem> canonical = g.canonical_generators();
    std::size_t next_positional = 0;
    NamedGens bound;
    if (!p.accept("]")) {
      do {
        int c = p.col();
        std::string name = p.word("generator name");
        Elem e;
        if (p.accept("=")) {
          e = parse_expr(p, g, &bound);
        } else {
          if (next_positional >= canonical.size())
            p.fail(c, "more positional generators than the group's standard generators");
          e = canonical[next_positional++];
        }
        bound.names.push_back(name);
        bound.elems.push_back(e);
      } while (p.accept(","));
      p.punct("]");
    }
    v.gen_names = bound.names;
    v.gens = bound.elems;
  } else if (g.is_finite()) {
    for (int i = 0; i < g.order(); ++i)
      if (i != g.table().identity()) {
        v.gen_names.push_back(g.table().labels()[i]);
        v.gens.push_back(g.element(i));
      }
  } else {
    for (int i = 0; i < g.rank(); ++i) v.gen_names.push_back(g.basis_name(i));
    v.gens = g.canonical_generators();
  }
  p.expect_end();

  if (g.is_finite()) {
    std::vector<int> idx;
    for (const auto& e : v.gens) idx.push_back(e[0]);
    if (static_cast<int>(g.table().generated_subgroup(idx).size()) != g.order())
      throw Error("GeneratorsIncomplete", "gens of vertex " + v.name + " do not generate " + v.group_name);
  }
  st.vertices.push_back(std::move(v));
}

std::vector<Elem> parse_map(LineParser& p, const FiniteGroup& source, const VertexData& target) {
  NamedGens aliases{target.gen_names, target.gens};
  std::vector<int> gens;
  std::vector<Elem> images;
  std::vector<int> canonical = source.canonical_generators();
  std::map<std::string, int> positional;
  p.punct("{");
  if (!p.accept("}")) {
    do {
      int c = p.col();
      std::string key = p.word("edge group element");
      int src;
      if (auto idx = source.find_label(key)) {
        src = *idx;
      } else if (auto pit = positional.find(key); pit != positional.end()) {
        src = pit->second;
      } else {
        std::size_t k = positional.size();
        if (k >= canonical.size()) p.fail(c, "unknown edge group element '" + key + "'");
        src = canonical[k];
        positional[key] = src;
      }
      p.punct(":");
      gens.push_back(src);
      images.push_back(parse_expr(p, *target.group, &aliases));
    } while (p.accept(","));
    p.punct("}");
  }
  return extend_to_homomorphism(source, *target.group, gens, images);
}

void parse_edge(LineParser& p, Parsed& st) {
  int name_col = p.col();
  EdgeData e;
  e.name = p.word("edge name");
  for (const auto& f : st.edges)
    if (f.name == e.name) p.fail(name_col, "edge '" + e.name + "' redeclared");
  auto vertex = [&]() {
    int c = p.col();
    std::string n = p.word("vertex name");
    for (std::size_t i = 0; i < st.vertices.size(); ++i)
      if (st.vertices[i].name == n) return static_cast<VertexId>(i);
    p.fail(c, "unknown vertex '" + n + "'");
  };
  e.left = vertex();
  p.punct("--");
  e.right = vertex();
  p.keyword("group");
  e.group_name = p.word("edge group name");
  if (e.group_name == "trivial") {
    e.group = std::make_shared<const FiniteGroup>(trivial_group());
  } else {
    auto it = st.by_name.find(e.group_name);
    if (it == st.by_name.end()) throw Error("UnknownGroupRef", e.group_name + " at " + p.where());
    if (!it->second->is_finite()) throw Error("EdgeGroupInfinite", e.name + " uses " + e.group_name);
    e.group = std::shared_ptr<const FiniteGroup>(it->second, &it->second->table());
  }
  p.keyword("embed_fwd");
  std::vector<Elem> fwd = parse_map(p, *e.group, st.vertices[e.right]);
  p.keyword("embed_bwd");
  std::vector<Elem> bwd = parse_map(p, *e.group, st.vertices[e.left]);
  p.expect_end();
  try {
    e.fwd = check_monomorphism(e.group, st.vertices[e.right].group, std::move(fwd));
    e.bwd = check_monomorphism(e.group, st.vertices[e.left].group, std::move(bwd));
  } catch (const Error& err) {
    if (err.kind() == "NotInjective") throw Error("EmbeddingNotInjective", e.name + ": " + err.what());
    throw;
  }
  st.edges.push_back(std::move(e));
}

}  // namespace

GraphOfGroups parse_gog(std::string_view text) {
  Parsed st;
  int lineno = 0;
  while (!text.empty()) {
    ++lineno;
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    LineParser p(line, lineno);
    if (p.at_end()) continue;
    std::string stmt = p.word("statement");
    if (stmt == "group")
      parse_group(p, st);
    else if (stmt == "vertex")
      parse_vertex(p, st);
    else if (stmt == "edge")
      parse_edge(p, st);
    else
      p.fail(1, "unknown statement '" + stmt + "'");
  }
  if (st.vertices.empty()) throw Error("SyntaxError", std::to_string(lineno + 1) + ":1: no vertices declared");
  return GraphOfGroups(std::move(st.groups), std::move(st.vertices), std::move(st.edges));
}

}  // namespace amalgam
