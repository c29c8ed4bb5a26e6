#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "amalgam/bass_serre.hpp"
#include "amalgam/boundary.hpp"
#include "amalgam/cayley.hpp"
#include "amalgam/error.hpp"
#include "amalgam/fundgroup.hpp"
#include "amalgam/gog.hpp"
#include "amalgam/separation.hpp"
#include "json.hpp"

namespace amalgam::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct Common {
  std::string input;
  std::string from = "dsl";
  std::string emit = "text";
  std::string output;
  std::size_t budget = kDefaultBudget;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct Settings {
  int radius = 4;
  int depth = 5;
  int star_radius = 2;
  int R = 1;
  int samples = 50;
  int edges = 20;
  int probe_radius = 3;
  int pairs = 200;
  int repeat = 12;
  int r = 2;
  std::string radii = "2,3,4,5,6";
  std::optional<int> outer;
  std::string edge;
  std::string word;
  bool cantor = false;
  bool abelianize = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("FileNotFound", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GraphOfGroups load(const Common& c) {
  const std::string text = read_file(c.input);
  return c.from == "json" ? gog_from_json(text) : parse_gog(text);
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error("UsageError", "not an integer list: " + s);
    }
  }
  if (out.empty()) throw Error("UsageError", "empty integer list");
  return out;
}

// "a*b^-1*s" or "a b^-1 s" over the generator labels.
std::vector<NormalForm> parse_letters(const FundamentalGroup& fg, const std::string& word) {
  std::string spaced = word;
  std::replace(spaced.begin(), spaced.end(), '*', ' ');
  std::stringstream ss(spaced);
  std::vector<NormalForm> letters;
  for (std::string tok; ss >> tok;) {
    int exp = 1;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      exp = parse_int_list(tok.substr(caret + 1)).front();
      tok.resize(caret);
    }
    const auto& gens = fg.generators();
    auto it = std::find_if(gens.begin(), gens.end(), [&](const Generator& g) { return g.label == tok; });
    if (it == gens.end()) throw Error("UnknownGenerator", tok);
    const NormalForm step = exp < 0 ? fg.invert(it->element) : it->element;
    for (int k = 0; k < std::abs(exp); ++k) letters.push_back(step);
  }
  if (letters.empty()) throw Error("UsageError", "empty word");
  return letters;
}

std::string validate_text(const GraphOfGroups& g) {
  const SpanningData sd = spanning_tree(g);
  std::ostringstream os;
  os << "vertices: " << g.num_vertices() << "\n";
  for (const auto& v : g.vertices()) {
    const int order = v.group->order();
    os << "  " << v.name << ": " << v.group_name << " (order "
       << (order < 0 ? std::string("infinite") : std::to_string(order)) << ")\n";
  }
  os << "edges: " << g.num_edges() << "\n";
  for (int k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edges()[k];
    os << "  " << e.name << ": " << g.vertices()[e.left].name << " -- " << g.vertices()[e.right].name
       << " over " << e.group_name << (sd.in_tree(2 * k) ? " (tree)" : "") << "\n";
  }
  return os.str();
}

std::string elementary_text(const ElementaryVerdict& v) {
  switch (v.kind) {
    case ElementaryKind::NonElementary: return "non-elementary";
    case ElementaryKind::SimplyElementary: return "simply elementary (case " + std::to_string(v.simple_case) + ")";
    case ElementaryKind::ReducesTo: return "reduces to simply elementary case " + std::to_string(v.simple_case);
  }
  return "";
}

ojson elementary_json(const ElementaryVerdict& v) {
  ojson j;
  j["schema_version"] = 1;
  j["non_elementary"] = v.kind == ElementaryKind::NonElementary;
  j["simple_case"] = v.simple_case;
  j["collapses"] = v.collapses;
  return j;
}

std::string cayley_json(const FundamentalGroup& fg, const CayleyBall& b) {
  ojson j;
  j["schema_version"] = 1;
  j["radius"] = b.radius;
  j["size"] = b.size();
  j["layers"] = b.layer_sizes();
  j["elements"] = ojson::array();
  for (int i = 0; i < b.size(); ++i)
    j["elements"].push_back({{"id", i}, {"word", fg.format(b.elements[i])}, {"length", b.dist[i]}});
  j["adjacency"] = b.adj;
  return dump(j);
}

std::string cayley_dot(const FundamentalGroup& fg, const CayleyBall& b) {
  std::ostringstream os;
  os << "graph cayley {\n";
  for (int i = 0; i < b.size(); ++i) os << "  " << i << " [label=\"" << fg.format(b.elements[i]) << "\"];\n";
  for (int i = 0; i < b.size(); ++i)
    for (int k : b.adj[i])
      if (i < k) os << "  " << i << " -- " << k << ";\n";
  os << "}\n";
  return os.str();
}

ojson check_json(const CheckResult& c) {
  ojson j;
  j["verdict"] = to_string(c.verdict);
  j["diagnostics"] = ojson::object();
  for (const auto& [k, v] : c.diagnostics) j["diagnostics"][k] = v;
  j["witnesses"] = c.witnesses;
  return j;
}

void need_emit(const Common& c, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (c.emit == a) return;
  throw Error("UsageError", "--emit " + c.emit + " is not available for this command");
}

struct Outcome {
  std::string payload;
  bool passed = true;
};

Outcome dispatch(const std::string& cmd, const Common& c, const Settings& s) {
  const GraphOfGroups g = load(c);
  Outcome o;

  if (cmd == "validate") {
    need_emit(c, {"text", "json", "dsl"});
    if (c.emit == "json") o.payload = to_json(g);
    else if (c.emit == "dsl") o.payload = to_dsl(g);
    else o.payload = validate_text(g) + "structure: " + elementary_text(is_non_elementary(g)) + "\n";
    return o;
  }
  if (cmd == "collapse") {
    need_emit(c, {"text", "json", "dsl"});
    if (!s.edge.empty()) {
      const EdgeId y = g.find_edge(s.edge);
      if (y < 0) throw Error("UnknownEdge", s.edge);
      const GraphOfGroups h = elementary_collapse(g, y);
      o.payload = c.emit == "json" ? to_json(h) : to_dsl(h);
      return o;
    }
    const ElementaryVerdict v = is_non_elementary(g);
    if (c.emit == "json") o.payload = dump(elementary_json(v));
    else {
      o.payload = elementary_text(v) + "\n";
      for (const auto& step : v.collapses) o.payload += "  collapse " + step + "\n";
    }
    return o;
  }

  const FundamentalGroup fg(g);

  if (cmd == "presentation") {
    need_emit(c, {"text", "gap", "json"});
    const Presentation p = emit_presentation(fg);
    o.payload = render_presentation(p, c.emit);
    if (s.abelianize && c.emit == "text") o.payload += "abelianization: " + abelianization(p).str() + "\n";
    return o;
  }
  if (cmd == "tree-ball") {
    need_emit(c, {"text", "json", "dot"});
    TreeOptions opt;
    opt.star_radius = s.star_radius;
    opt.budget = c.budget;
    const TreeBall t = tree_ball(fg, s.radius, opt);
    if (c.emit == "json") o.payload = tree_to_json(fg, t);
    else if (c.emit == "dot") o.payload = tree_to_dot(fg, t);
    else {
      std::vector<int> per_depth(s.radius + 1, 0);
      for (const auto& v : t.vertices) ++per_depth[v.depth];
      std::ostringstream os;
      os << "vertices: " << t.vertices.size() << "\nedges: " << t.edges.size() << "\nper depth:";
      for (int n : per_depth) os << ' ' << n;
      os << "\ntruncated: " << (t.truncated ? "yes" : "no") << "\n";
      o.payload = os.str();
    }
    return o;
  }
  if (cmd == "cayley-ball") {
    need_emit(c, {"text", "json", "dot"});
    const CayleyBall b = word_metric_ball(fg, s.radius, c.budget);
    if (c.emit == "json") o.payload = cayley_json(fg, b);
    else if (c.emit == "dot") o.payload = cayley_dot(fg, b);
    else {
      std::ostringstream os;
      os << "size: " << b.size() << "\nlayers:";
      for (int n : b.layer_sizes()) os << ' ' << n;
      os << "\n";
      o.payload = os.str();
    }
    return o;
  }
  if (cmd == "separate" || cmd == "verify-k") {
    need_emit(c, {"text", "json"});
    SeparationReport rep;
    if (cmd == "separate") {
      SamplingOptions opt;
      opt.ball_radius = s.radius;
      opt.R = s.R;
      opt.samples = s.samples;
      opt.seed = c.seed;
      opt.budget = c.budget;
      opt.jobs = c.jobs;
      rep = verify_cayley_separation(fg, opt);
    } else {
      KOptions opt;
      opt.ball_radius = s.radius;
      opt.edges = s.edges;
      opt.probe_radius = s.probe_radius;
      opt.seed = c.seed;
      opt.budget = c.budget;
      opt.jobs = c.jobs;
      rep = verify_K_construction(fg, opt);
    }
    o.payload = c.emit == "json" ? rep.to_json() : rep.to_text();
    o.passed = rep.holds();
    return o;
  }
  if (cmd == "ends") {
    need_emit(c, {"text", "json"});
    const EndsEstimate e = ends_estimate(fg, parse_int_list(s.radii), s.outer, c.budget);
    if (c.emit == "json") o.payload = e.to_json();
    else {
      std::ostringstream os;
      os << "outer radius " << e.outer_radius << "\n";
      for (std::size_t i = 0; i < e.radii.size(); ++i)
        os << "  n = " << e.radii[i] << ": " << e.counts[i] << " unbounded components\n";
      os << "ends: " << to_string(e.verdict) << "\n";
      o.payload = os.str();
    }
    return o;
  }
  if (cmd == "boundary") {
    need_emit(c, {"text", "json"});
    const BoundaryApprox b = boundary_approx(fg, s.depth, s.star_radius, c.budget);
    const auto family = limit_set_family(b);
    std::optional<CheckResult> cantor;
    if (s.depth >= 3) cantor = cantor_check(b);
    if (s.cantor) {
      if (!cantor) throw Error("DepthTooSmall", "the Cantor check needs depth >= 3");
      o.passed = cantor->verdict == Verdict::Pass;
    }
    if (c.emit == "json") {
      ojson j;
      j["schema_version"] = 1;
      j["depth"] = b.depth();
      j["star_radius"] = s.star_radius;
      j["degenerate"] = b.degenerate();
      j["branches"] = b.size();
      j["tree_vertices"] = b.tree().vertices.size();
      j["limit_sets"] = ojson::array();
      for (const auto& ls : family)
        j["limit_sets"].push_back({{"vertex", ls.vertex},
                                   {"type", g.vertices()[ls.type].name},
                                   {"key", fg.format(b.tree().vertices[ls.vertex].key)},
                                   {"branches", ls.branches.size()}});
      j["cantor"] = cantor ? check_json(*cantor) : ojson(nullptr);
      o.payload = dump(j);
    } else {
      std::ostringstream os;
      os << "depth " << b.depth() << ": " << b.size() << " branches"
         << (b.degenerate() ? " (degenerate: no tree edges)" : "") << "\n";
      os << "limit sets: " << family.size() << "\n";
      if (cantor) os << "cantor: " << to_string(cantor->verdict) << "\n";
      o.payload = os.str();
    }
    return o;
  }
  if (cmd == "amalgam-check") {
    need_emit(c, {"text", "json"});
    const BoundaryApprox b = boundary_approx(fg, s.depth, s.star_radius, c.budget);
    const auto family = limit_set_family(b);
    const AmalgamCertificate cert = amalgam_check(b, family, c.seed, s.pairs);
    const CheckResult density = branch_density_check(b, family);
    o.passed = cert.passed() && density.verdict != Verdict::Fail;
    if (c.emit == "json") {
      ojson j = ojson::parse(cert.to_json());
      j["branch_density"] = check_json(density);
      j["verdict"] = o.passed ? "pass" : "fail";
      o.payload = dump(j);
    } else {
      std::ostringstream os;
      os << "depth " << b.depth() << ", " << family.size() << " limit sets, " << b.size() << " branches\n";
      for (const auto& [name, r] : cert.conditions) {
        os << "  " << name << ": " << to_string(r.verdict) << "\n";
        for (const auto& w : r.witnesses) os << "    " << w << "\n";
      }
      os << "  branch density: " << to_string(density.verdict) << "\n";
      o.payload = os.str();
    }
    return o;
  }
  if (cmd == "classify") {
    need_emit(c, {"text", "json"});
    if (s.word.empty()) throw Error("UsageError", "classify needs --word");
    const auto letters = parse_letters(fg, s.word);
    std::vector<NormalForm> seq;
    NormalForm x = fg.identity();
    for (int k = 0; k < s.repeat; ++k)
      for (const auto& l : letters) {
        x = fg.multiply(x, l);
        seq.push_back(x);
      }
    const DirectionClass dc = classify_direction(fg, seq, s.r);
    if (c.emit == "json") {
      ojson j;
      j["schema_version"] = 1;
      j["word"] = s.word;
      j["sequence_length"] = seq.size();
      j["kind"] = to_string(dc.kind);
      if (dc.kind != PointKind::Inconclusive) {
        j["key"] = fg.format(dc.key);
        j["type"] = g.vertices()[dc.type].name;
      }
      o.payload = dump(j);
    } else {
      o.payload = to_string(dc.kind);
      if (dc.kind != PointKind::Inconclusive)
        o.payload += " at " + g.vertices()[dc.type].name + ":" + fg.format(dc.key);
      o.payload += "\n";
    }
    return o;
  }
  throw Error("UsageError", "unknown command " + cmd);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graphs of groups, Bass-Serre trees, separation and boundary checks", "amalgam-lab"};
  app.require_subcommand(1);
  Common c;
  Settings s;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", c.input, "graph of groups file")->required();
    sub->add_option("--from", c.from, "input format")->check(CLI::IsMember({"dsl", "json"}));
    sub->add_option("--emit", c.emit, "output format");
    sub->add_option("--output,-o", c.output, "write the report here instead of stdout");
    sub->add_option("--budget", c.budget, "element budget for balls");
    sub->add_option("--seed", c.seed, "sampling seed");
    sub->add_option("--jobs,-j", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  };
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    return sub;
  };

  add("validate", "parse and check a graph of groups");
  add("collapse", "elementary collapse of one edge, or the elementary analysis")
      ->add_option("--edge", s.edge, "edge to contract");
  add("presentation", "generators and relators of the fundamental group")
      ->add_flag("--abelianize", s.abelianize, "also print the abelian invariants");
  auto* tree = add("tree-ball", "ball in the Bass-Serre tree");
  tree->add_option("--radius", s.radius);
  tree->add_option("--star-radius", s.star_radius, "exit radius inside infinite vertex groups");
  add("cayley-ball", "ball in the Cayley graph")->add_option("--radius", s.radius);
  auto* sep = add("separate", "edge-coset separation in the Cayley graph");
  sep->add_option("--radius", s.radius, "Cayley ball radius")->default_val(8);
  sep->add_option("--R", s.R, "separation scale");
  sep->add_option("--samples", s.samples);
  auto* vk = add("verify-k", "separation by translates of the thickened edge star");
  vk->add_option("--radius", s.radius, "Cayley ball radius")->default_val(10);
  vk->add_option("--edges", s.edges, "tree edges to sample");
  vk->add_option("--probe-radius", s.probe_radius);
  auto* ends = add("ends", "count unbounded complementary components");
  ends->add_option("--radii", s.radii, "comma separated inner radii");
  ends->add_option("--outer", s.outer, "outer radius");
  auto* bnd = add("boundary", "depth-d approximation of the tree boundary");
  bnd->add_option("--depth", s.depth);
  bnd->add_option("--star-radius", s.star_radius);
  bnd->add_flag("--cantor", s.cantor, "exit 2 unless the Cantor check passes");
  auto* am = add("amalgam-check", "dense amalgam conditions on the boundary approximation");
  am->add_option("--depth", s.depth);
  am->add_option("--star-radius", s.star_radius);
  am->add_option("--pairs", s.pairs, "member pairs sampled for the clopen check");
  auto* cl = add("classify", "branch point or vertex point for the prefixes of a word power");
  cl->add_option("--word", s.word, "generator labels joined by * or spaces");
  cl->add_option("--repeat", s.repeat);
  cl->add_option("--r", s.r, "tolerance");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    const Outcome o = dispatch(cmd, c, s);
    if (c.output.empty()) {
      out << o.payload;
    } else {
      std::ofstream f(c.output, std::ios::binary);
      if (!f) throw Error("FileNotWritable", c.output);
      f << o.payload;
    }
    return o.passed ? kOk : kVerifierFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: JsonError: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace amalgam::cli
