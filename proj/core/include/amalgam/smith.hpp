#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace amalgam {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Nonzero diagonal of the Smith normal form, each entry positive and
/// dividing the next.
std::vector<std::int64_t> smith_diagonal(IntMatrix m);

/// Abelian group Z^free_rank + sum Z/torsion[i], torsion entries > 1 and
/// ordered by divisibility.
struct AbelianInvariants {
  int free_rank = 0;
  std::vector<std::int64_t> torsion;

  bool operator==(const AbelianInvariants&) const = default;
  std::string str() const;
};

/// Invariants of the group with `num_generators` generators and one relation
/// per row of `relations` (exponent-sum vectors).
AbelianInvariants abelian_invariants(int num_generators, const IntMatrix& relations);

}  // namespace amalgam
