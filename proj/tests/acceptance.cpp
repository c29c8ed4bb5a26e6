// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "amalgam/bass_serre.hpp"
#include "amalgam/boundary.hpp"
#include "amalgam/cayley.hpp"
#include "amalgam/error.hpp"
#include "amalgam/fundgroup.hpp"
#include "amalgam/separation.hpp"
#include "cli.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace amalgam;
using amalgam::testing::corpus_group;
using amalgam::testing::corpus_path;

namespace {

/// Collects the first few problems; a criterion passes when there are none.
struct Outcome {
  std::vector<std::string> problems;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

const std::vector<std::string> kWithEdges = {"dinf", "f2", "z2z3", "zz2", "z2z2", "amalgam_z4", "hnn_z2"};

std::vector<std::string> sorted_relators(const Presentation& p) {
  std::vector<std::string> out;
  for (const Word& r : p.relators) out.push_back(format_word(p, r));
  std::sort(out.begin(), out.end());
  return out;
}

void presentations(Outcome& o) {
  const Presentation dinf = emit_presentation(corpus_group("dinf"));
  o.require(dinf.generators == std::vector<std::string>{"a", "b"}, "D-infinity generators");
  o.require(sorted_relators(dinf) == std::vector<std::string>{"a^2", "b^2"}, "D-infinity relators");
  const Presentation loop = emit_presentation(FundamentalGroup(
      parse_gog("group T cyclic 1\nvertex v T gens []\nedge s v -- v group trivial embed_fwd {} embed_bwd {}\n")));
  o.require(loop.generators.size() == 1 && loop.relators.empty(), "one loop is not a free cyclic presentation");
  o.require(abelianization(loop).str() == "Z", "one loop abelianizes to " + abelianization(loop).str());
  std::string text = render_presentation(dinf, "text");
  text.pop_back();
  o.note << "D-infinity " << text;
}

void ball_sizes(Outcome& o) {
  for (const auto& [name, fp] : oracle::free_product_corpus()) {
    const auto expected = fp.ball_sizes(6);
    const auto layers = word_metric_ball(corpus_group(name), 6).layer_sizes();
    std::vector<std::int64_t> cumulative;
    std::int64_t total = 0;
    for (int n : layers) cumulative.push_back(total += n);
    o.require(cumulative == expected, name + " ball sizes differ from string enumeration");
    o.note << name << " |B6|=" << total << " ";
  }
}

void tree_structure(Outcome& o) {
  const FundamentalGroup dinf = corpus_group("dinf");
  for (int n = 0; n <= 12; ++n) {
    const TreeBall t = tree_ball(dinf, n);
    std::vector<int> deg(t.vertices.size());
    for (const auto& e : t.edges) ++deg[e.parent], ++deg[e.child];
    const bool path = static_cast<int>(t.vertices.size()) == 2 * n + 1 &&
                      std::all_of(deg.begin(), deg.end(), [](int d) { return d <= 2; });
    o.require(path, "D-infinity radius " + std::to_string(n) + " is not a path");
  }
  const TreeBall m = tree_ball(corpus_group("z2z3"), 6);
  std::vector<int> deg(m.vertices.size());
  for (const auto& e : m.edges) ++deg[e.parent], ++deg[e.child];
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (m.vertices[v].depth < 6) o.require(deg[v] == (m.vertices[v].type == 0 ? 2 : 3), "modular group degree");
  for (const auto& name : kWithEdges) {
    const TreeBall t = tree_ball(corpus_group(name), 4);
    o.require(t.vertices.size() == t.edges.size() + 1, name + " has |V| != |E| + 1");
  }
  o.note << "z2z3 radius 6 has " << m.vertices.size() << " vertices";
}

void tiling_facts(Outcome& o) {
  long checked = 0;
  for (const auto& name : kWithEdges) {
    const FundamentalGroup fg = corpus_group(name);
    const auto tile = tiling_tree(fg);
    for (const NormalForm& s : fg.symmetric_generators())
      o.require(tiling_meets_translate(fg, tile, s), name + ": s T misses T");
    const int bound = fg.graph().num_edges();
    TreeOptions opt;
    opt.star_radius = 1;
    const TreeBall t = tree_ball(fg, 5, opt);
    for (const auto& e : t.edges)
      for (VertexId v = 0; v < fg.graph().num_vertices(); ++v) {
        const NormalForm key = fg.vertex_key(e.gamma, v);
        const int d = std::min(key_distance(key, t.vertices[e.parent].key), key_distance(key, t.vertices[e.child].key));
        o.require(d <= bound, name + ": edge-to-vertex distance " + std::to_string(d));
        ++checked;
      }
  }
  o.note << checked << " edge/vertex pairs; trivial and z2 have no edges";
}

void cayley_separation(Outcome& o) {
  for (const auto& [name, radius, samples] :
       std::vector<std::tuple<std::string, int, int>>{{"dinf", 10, 1000}, {"z2z3", 8, 800}}) {
    for (int R : {1, 2}) {
      SamplingOptions opt;
      opt.ball_radius = radius;
      opt.R = R;
      opt.samples = samples;
      opt.seed = 2024 + R;
      opt.jobs = 4;
      const SeparationReport rep = verify_cayley_separation(corpus_group(name), opt);
      const int triples = static_cast<int>(rep.diagnostics.at("samples_with_pairs"));
      o.require(rep.holds(), name + " R=" + std::to_string(R) + ": " + std::to_string(rep.failures.size()) + " failures");
      o.require(triples >= 50, name + " R=" + std::to_string(R) + ": only " + std::to_string(triples) + " triples");
      o.note << name << " R=" << R << " triples=" << triples << " pairs=" << rep.pairs_tested << " ";
    }
  }
}

void k_construction(Outcome& o) {
  for (const auto& [name, radius] : std::vector<std::pair<std::string, int>>{{"dinf", 12}, {"z2z3", 10}}) {
    KOptions opt;
    opt.ball_radius = radius;
    opt.edges = 20;
    opt.jobs = 4;
    const SeparationReport rep = verify_K_construction(corpus_group(name), opt);
    const double R0 = rep.diagnostics.at("R0_max"), bound = rep.diagnostics.at("diam_bound");
    o.require(rep.holds(), name + ": " + std::to_string(rep.failures.size()) + " failures");
    o.require(R0 <= bound, name + ": R0 exceeds the diameter bound");
    o.note << name << " R0=" << R0 << " bound=" << bound << " ";
  }
}

void trichotomy(Outcome& o) {
  const std::vector<std::pair<std::string, EndsVerdict>> expected = {{"trivial", EndsVerdict::Zero},
                                                                     {"z2", EndsVerdict::One},
                                                                     {"dinf", EndsVerdict::Two},
                                                                     {"f2", EndsVerdict::Infinite},
                                                                     {"z2z3", EndsVerdict::Infinite}};
  for (const auto& [name, verdict] : expected) {
    const EndsEstimate e = ends_estimate(corpus_group(name), {4, 5, 6, 7, 8});
    o.require(e.verdict == verdict, name + " ends " + to_string(e.verdict));
    o.note << name << ":" << to_string(e.verdict) << " ";
  }
  o.require(boundary_approx(corpus_group("trivial"), 4).size() == 0, "trivial group has branches");
  o.require(boundary_approx(corpus_group("z2"), 4).degenerate(), "plane is not degenerate");
  for (int d = 1; d <= 8; ++d) o.require(boundary_approx(corpus_group("dinf"), d).size() == 2, "D-infinity branches");
  // The finite amalgam branches at every other level, so growth is measured
  // in steps of two.
  for (const auto& name : {"f2", "z2z3"}) {
    int prev = 0;
    for (int d = 2; d <= 8; d += 2) {
      const int n = boundary_approx(corpus_group(name), d).size();
      o.require(n > prev, std::string(name) + " branch counts do not grow");
      prev = n;
    }
  }
}

void cantor(Outcome& o) {
  for (const auto& name : {"z2z3", "f2"})
    for (int d = 5; d <= 7; ++d) {
      const CheckResult r = cantor_check(boundary_approx(corpus_group(name), d));
      o.require(r.verdict == Verdict::Pass, std::string(name) + " depth " + std::to_string(d) + " is not Cantor");
    }
  const CheckResult line = cantor_check(boundary_approx(corpus_group("dinf"), 6));
  o.require(line.verdict == Verdict::Fail, "D-infinity passes the Cantor check");
  o.note << "D-infinity: " << (line.witnesses.empty() ? "" : line.witnesses.front());
}

void dense_amalgam(Outcome& o) {
  const BoundaryApprox b = boundary_approx(corpus_group("z2z2"), 5);
  auto family = limit_set_family(b);
  const AmalgamCertificate cert = amalgam_check(b, family, 1);
  for (const auto& [name, r] : cert.conditions)
    o.require(r.verdict == Verdict::Pass, name + " " + to_string(r.verdict));
  for (std::size_t k = 0; k < cert.max_diameter.size(); ++k)
    o.require(cert.max_diameter[k] <= std::ldexp(1.0, -static_cast<int>(k) + 1), "nullness at k=" + std::to_string(k));
  o.require(branch_density_check(b, family).verdict == Verdict::Pass, "branch density");
  o.note << b.size() << " branches, " << family.size() << " members";

  LimitSet merged = family.at(0);
  merged.branches.insert(merged.branches.end(), family.at(1).branches.begin(), family.at(1).branches.end());
  std::sort(merged.branches.begin(), merged.branches.end());
  family.push_back(merged);
  const CheckResult a1 = amalgam_check(b, family, 1).conditions.at("a1");
  o.require(a1.verdict == Verdict::Fail && !a1.witnesses.empty(), "overlapping family is not caught by a1");
}

void determinism(Outcome& o) {
  const std::string m = corpus_path("z2z3");
  const std::string planes = corpus_path("z2z2");
  const std::vector<std::vector<std::string>> commands = {
      {"validate", m},
      {"collapse", corpus_path("dinf")},
      {"presentation", m},
      {"tree-ball", m, "--radius", "5"},
      {"cayley-ball", m, "--radius", "5"},
      {"separate", m, "--radius", "8", "--R", "2", "--samples", "60", "--seed", "17", "--jobs", "4"},
      {"verify-k", m, "--radius", "9", "--edges", "10", "--seed", "17", "--jobs", "4"},
      {"ends", m, "--radii", "2,3,4,5"},
      {"boundary", m, "--depth", "6"},
      {"amalgam-check", planes, "--depth", "4", "--seed", "17"},
      {"classify", planes, "--word", "x*z"},
  };
  for (auto cmd : commands) {
    cmd.insert(cmd.end(), {"--emit", "json"});
    std::string first;
    for (int run = 0; run < 2; ++run) {
      std::ostringstream out, err;
      const int code = cli::run(cmd, out, err);
      o.require(code == cli::kOk, cmd[0] + " exited " + std::to_string(code));
      if (run == 0) first = out.str();
      else o.require(out.str() == first && !first.empty(), cmd[0] + " output differs between runs");
    }
  }
  o.note << commands.size() << " subcommands";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"presentation correctness", presentations},
      {"word problem vs string enumeration", ball_sizes},
      {"tree structure", tree_structure},
      {"tiling and edge distance facts", tiling_facts},
      {"edge neighbourhood separation", cayley_separation},
      {"K construction", k_construction},
      {"ends and boundary trichotomy", trichotomy},
      {"Cantor boundaries", cantor},
      {"dense amalgam certificate", dense_amalgam},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.problems.empty();
    failed += !pass;
    std::printf("criterion %2zu %-36s %s  %7.2fs  %s\n", i + 1, criteria[i].first.c_str(), pass ? "PASS" : "FAIL",
                secs, pass ? o.note.str().c_str() : o.problems.front().c_str());
    for (std::size_t k = 1; k < std::min<std::size_t>(o.problems.size(), 5); ++k)
      std::printf("             %s\n", o.problems[k].c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
