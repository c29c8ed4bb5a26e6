#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace amalgam {

/// Group element encoding shared by every backend.
///  - finite: a single table index
///  - free_abelian(n): n integer coordinates
///  - free(n): freely reduced word, letter i is +(i+1), its inverse -(i+1)
using Elem = std::vector<std::int32_t>;

struct ElemHash {
  std::size_t operator()(const Elem& e) const noexcept;
};

/// A finite group given by its multiplication table. Immutable once built;
/// construct through check_group().
class FiniteGroup {
 public:
  int order() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  /// Index of the element with the given label, if any.
  std::optional<int> find_label(const std::string& label) const;

  /// Greedy generating set: scan elements by index and keep each one not
  /// already in the subgroup generated by the previous picks.
  std::vector<int> canonical_generators() const;

  /// Closure of a set of elements under multiplication.
  std::vector<int> generated_subgroup(const std::vector<int>& gens) const;

  bool is_subgroup(const std::vector<int>& elems) const;

 private:
  friend FiniteGroup check_group(const std::vector<std::vector<int>>&,
                                 std::vector<std::string>);
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<std::string> labels_;
  int identity_ = 0;
};

/// Validates a multiplication table. Throws Error with kind NotLatinSquare,
/// NoIdentity or NotAssociative naming the first offending cell or triple.
FiniteGroup check_group(const std::vector<std::vector<int>>& table,
                        std::vector<std::string> labels = {});

FiniteGroup cyclic_group(int n);
FiniteGroup trivial_group();

enum class CosetSide { Left, Right };

/// Partition of `group` into cosets of `subgroup`. The first coset is the
/// subgroup itself; elements inside a coset ascend; cosets are ordered by
/// their least element. Throws NotASubgroup.
std::vector<std::vector<int>> cosets(const FiniteGroup& group,
                                     const std::vector<int>& subgroup,
                                     CosetSide side);

enum class GroupKind { Finite, FreeAbelian, Free };

/// Vertex group arithmetic: a finite table group or one of the infinite
/// backends with canonical reduced forms.
class GroupBackend {
 public:
  static GroupBackend finite(FiniteGroup g);
  static GroupBackend free_abelian(int rank);
  static GroupBackend free(int rank);

  GroupKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == GroupKind::Finite; }
  int rank() const { return rank_; }
  const FiniteGroup& table() const { return *finite_; }
  /// Number of elements; only meaningful for finite groups.
  int order() const { return is_finite() ? finite_->order() : -1; }

  Elem identity() const;
  bool is_identity(const Elem& e) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem inv(const Elem& a) const;
  /// Brings an arbitrary encoding to canonical form (free reduction for
  /// free groups, a no-op otherwise). Idempotent.
  Elem reduce(const Elem& e) const;
  bool valid(const Elem& e) const;

  /// Finite groups: the element with table index i.
  Elem element(int i) const { return Elem{i}; }
  /// All elements (finite groups only), in index order.
  std::vector<Elem> elements() const;

  /// Standard generators: greedy table generators, or the backend basis.
  std::vector<Elem> canonical_generators() const;

  /// Word length with respect to the standard basis (backends) or the
  /// index (finite groups). Used for shortlex ordering and truncation.
  int length(const Elem& e) const;
  /// Shortlex order: finite groups compare indices.
  bool less(const Elem& a, const Elem& b) const;

  /// All backend elements of basis word length <= r, in shortlex order.
  /// For finite groups returns every element.
  std::vector<Elem> ball(int r) const;

  std::string format(const Elem& e) const;
  /// Names the backend basis letters use when formatting (x1, x2, ...).
  std::string basis_name(int i) const;

 private:
  GroupKind kind_ = GroupKind::Finite;
  int rank_ = 0;
  std::shared_ptr<const FiniteGroup> finite_;
};

/// A validated injective homomorphism from a finite group into a vertex group.
class Monomorphism {
 public:
  const FiniteGroup& source() const { return *source_; }
  const GroupBackend& target() const { return *target_; }
  const Elem& operator()(int a) const { return map_[a]; }
  const std::vector<Elem>& images() const { return map_; }
  /// Preimage of a target element, if it lies in the image.
  std::optional<int> preimage(const Elem& e) const;
  bool is_onto() const;

 private:
  friend Monomorphism check_monomorphism(std::shared_ptr<const FiniteGroup>,
                                         std::shared_ptr<const GroupBackend>,
                                         std::vector<Elem>);
  std::shared_ptr<const FiniteGroup> source_;
  std::shared_ptr<const GroupBackend> target_;
  std::vector<Elem> map_;
};

/// Throws NotHomomorphism(a,b) or NotInjective(a,b).
Monomorphism check_monomorphism(std::shared_ptr<const FiniteGroup> source,
                                std::shared_ptr<const GroupBackend> target,
                                std::vector<Elem> map);

/// Extends an assignment of generator images to a homomorphism on the whole
/// finite source group by walking its Cayley graph. Throws NotHomomorphism
/// when the assignment is inconsistent.
std::vector<Elem> extend_to_homomorphism(const FiniteGroup& source,
                                         const GroupBackend& target,
                                         const std::vector<int>& gens,
                                         const std::vector<Elem>& images);

}  // namespace amalgam
