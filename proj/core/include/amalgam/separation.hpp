#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "amalgam/bass_serre.hpp"
#include "amalgam/cayley.hpp"

namespace amalgam {

/// Finite metric space on points 0..n-1 with integer distances, accessed
/// through bounded neighbourhoods.
class MetricView {
 public:
  virtual ~MetricView() = default;
  virtual int size() const = 0;
  /// Points y != x with d(x, y) <= r.
  virtual std::vector<int> within(int x, int r) const = 0;
  /// For every point, min(d(point, set), cap + 1); 0 on the set itself.
  virtual std::vector<int> distances_to(const std::vector<char>& set, int cap) const = 0;
};

/// Path metric of an undirected graph (the ball's own geodesic metric).
class GraphMetric : public MetricView {
 public:
  explicit GraphMetric(std::vector<std::vector<int>> adj) : adj_(std::move(adj)) {}
  int size() const override { return static_cast<int>(adj_.size()); }
  std::vector<int> within(int x, int r) const override;
  std::vector<int> distances_to(const std::vector<char>& set, int cap) const override;

 private:
  std::vector<std::vector<int>> adj_;
};

/// The word metric of the whole group restricted to the points of a Cayley
/// ball: y is within r of x when x^-1 y has length <= r, even if every
/// geodesic between them leaves the ball. Radii up to the ball radius.
class GroupMetric : public MetricView {
 public:
  GroupMetric(const FundamentalGroup& fg, const CayleyBall& ball) : fg_(&fg), ball_(&ball) {}
  int size() const override { return ball_->size(); }
  std::vector<int> within(int x, int r) const override;
  std::vector<int> distances_to(const std::vector<char>& set, int cap) const override;
  /// Ball points at distance <= r from an arbitrary element; exact.
  std::vector<std::pair<int, int>> around(const NormalForm& x, int r) const;

 private:
  const std::vector<std::vector<int>>& table(int r) const;
  const FundamentalGroup* fg_;
  const CayleyBall* ball_;
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<std::vector<std::vector<int>>>> tables_;
};

/// Label of the maximal R-path component of every point outside `excluded`;
/// excluded points get -1. Labels are the least point index of the component.
std::vector<int> r_components(const MetricView& space, const std::vector<char>& excluded, int R);

/// d(x0, I) >= R, d(x1, I) >= R and the two lie in different R-components
/// of the complement of I.
bool r_separates(const MetricView& space, const std::vector<char>& I, int x0, int x1, int R);

/// N_r(C) as a mask over the ball points, computed from the group metric:
/// c w for c in C and |w| <= r.
std::vector<char> neighbourhood(const GroupMetric& metric, const std::vector<NormalForm>& centers,
                                int r);

inline int half_up(int R) { return (R + 1) / 2; }
inline int three_halves_up(int R) { return (3 * R + 1) / 2; }

struct SeparationFailure {
  std::string first;
  std::string second;
  std::string reason;
};

struct SeparationReport {
  std::string instance;
  int R = 0;
  int separating_set_size = 0;
  std::int64_t pairs_tested = 0;
  int samples = 0;
  int not_applicable = 0;
  std::vector<SeparationFailure> failures;
  /// Named numeric diagnostics (diam(P), R0, bounds, ...).
  std::map<std::string, double> diagnostics;

  bool holds() const { return failures.empty(); }
  std::string to_json() const;
  std::string to_text() const;
};

/// Thickening lemma on a geodesic graph: if I separates x0 from x1 and both
/// lie at distance >= ceil(3R/2) from I, then N_ceil(R/2)(I) R-separates them.
/// Throws PreconditionUnmet naming the violated condition.
SeparationReport verify_thickening_lemma(const GraphMetric& space, const std::vector<char>& I,
                                         int x0, int x1, int R);

struct SamplingOptions {
  int ball_radius = 8;
  int samples = 50;
  int R = 1;
  std::uint64_t seed = 1;
  /// Radius of the tree ball the coset pairs are drawn from; 0 means ball_radius.
  int tree_radius = 0;
  std::size_t budget = kDefaultBudget;
  /// Worker threads for the samples; results do not depend on it.
  int jobs = 1;
};

/// Edge-neighbourhood separation in the Cayley graph: for sampled coset
/// pairs and an edge on their tree geodesic, N_ceil(R/2)(edge coset)
/// R-separates their in-ball elements outside N_ceil(3R/2). Witnesses keep
/// a margin of R + 1 from the sphere.
SeparationReport verify_cayley_separation(const FundamentalGroup& fg, const SamplingOptions& opt);

struct KOptions {
  int ball_radius = 10;
  int edges = 20;
  int probe_radius = 3;
  std::uint64_t seed = 1;
  /// 0 means ball_radius.
  int tree_radius = 0;
  std::size_t budget = kDefaultBudget;
  /// Worker threads for the samples; results do not depend on it.
  int jobs = 1;
};

/// K = I_{diam(P)/2} L in the Cayley graph with L the closed star of the
/// identity. For sampled tree edges, reports the least R0 past which the
/// translate of K separates the two sides' coset unions, compares it with
/// diam(I_{3 diam(P)/2}), and probes far vertex pairs for exceptions.
SeparationReport verify_K_construction(const FundamentalGroup& fg, const KOptions& opt);

enum class EndsVerdict { Zero, One, Two, Infinite, Inconclusive };
std::string to_string(EndsVerdict v);

struct EndsEstimate {
  int outer_radius = 0;
  std::vector<int> radii;
  std::vector<int> counts;
  EndsVerdict verdict = EndsVerdict::Inconclusive;
  std::string to_json() const;
};

/// Components of ball(N) \ ball(n) reaching the sphere of radius N, for each
/// n in radii, with N = max(radii) + 2 unless `outer` is given.
EndsEstimate ends_estimate(const FundamentalGroup& fg, const std::vector<int>& radii,
                           std::optional<int> outer = std::nullopt,
                           std::size_t budget = kDefaultBudget);

}  // namespace amalgam
