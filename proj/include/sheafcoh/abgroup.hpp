#pragma once

// Finitely presented abelian groups Z^n / L, their homomorphisms and elements,
// and the bifunctors tensor and Tor.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sheafcoh/exactlin.hpp"
#include "sheafcoh/int_matrix.hpp"

namespace sheafcoh::abgroup {

/// Z^n modulo the column lattice of an n-row relation matrix.
class FpAbGroup {
 public:
  FpAbGroup();
  FpAbGroup(std::size_t ambient_rank, IntMatrix relations);

  static FpAbGroup free(std::size_t rank);
  /// Z/d, with Z/0 = Z.
  static FpAbGroup cyclic(const Integer& order);
  /// Direct sum of cyclic groups, one generator per listed factor.
  static FpAbGroup from_invariant_factors(const std::vector<Integer>& factors);

  std::size_t ambient_rank() const noexcept { return rank_; }
  const IntMatrix& relations() const noexcept { return relations_; }

  /// Torsion factors >= 2 in divisibility order, then one 0 per free summand.
  const std::vector<Integer>& invariant_factors() const;
  bool is_trivial() const { return invariant_factors().empty(); }

  /// True iff v lies in the relation lattice, i.e. represents zero.
  bool is_relation(std::span<const Integer> v) const;
  const exactlin::LatticeSolver& relation_solver() const;

  std::string describe() const;

 private:
  struct Cache;
  std::size_t rank_ = 0;
  IntMatrix relations_;
  std::shared_ptr<Cache> cache_;
};

std::string format_factors(const std::vector<Integer>& factors);

struct GroupElement {
  FpAbGroup group;
  IntVector vector;

  bool is_zero() const { return group.is_relation(vector); }
};

GroupElement add(const GroupElement& a, const GroupElement& b);
bool equal(const GroupElement& a, const GroupElement& b);

/// Homomorphism given on ambient coordinates: target_rank x source_rank.
struct GroupHom {
  FpAbGroup source;
  FpAbGroup target;
  IntMatrix matrix;

  static GroupHom identity(const FpAbGroup& g);
  static GroupHom zero(const FpAbGroup& source, const FpAbGroup& target);

  /// The relation lattice of the source maps into that of the target.
  bool is_well_defined() const;
  IntVector apply(std::span<const Integer> x) const { return matrix * x; }
  GroupElement operator()(const GroupElement& x) const { return {target, apply(x.vector)}; }
  bool is_zero() const;
};

GroupHom compose(const GroupHom& g, const GroupHom& f);  // g o f
bool equal(const GroupHom& f, const GroupHom& g);
GroupHom negate(const GroupHom& f);

/// A group together with an injective map into a parent group.
struct Subgroup {
  FpAbGroup group;
  GroupHom inclusion;
};

struct Quotient {
  FpAbGroup group;
  GroupHom projection;
};

std::vector<Integer> invariant_factors(const FpAbGroup& g);
bool is_isomorphic(const FpAbGroup& a, const FpAbGroup& b);
bool is_torsion_free(const FpAbGroup& g);
FpAbGroup direct_sum(const FpAbGroup& a, const FpAbGroup& b);
FpAbGroup direct_sum(const std::vector<FpAbGroup>& parts);
/// Block-diagonal sum of homomorphisms.
GroupHom direct_sum(const GroupHom& f, const GroupHom& g);

/// ker f; the inclusion matrix columns form a basis of the full preimage
/// lattice {x : f(x) in relations of target}.
Subgroup kernel(const GroupHom& f);
Subgroup image(const GroupHom& f);
Quotient cokernel(const GroupHom& f);

bool is_injective(const GroupHom& f);
bool is_surjective(const GroupHom& f);
bool is_isomorphism(const GroupHom& f);
/// Inverse of an isomorphism; throws ContractViolation otherwise.
GroupHom inverse_isomorphism(const GroupHom& f);

/// Solves f(x) = y many times for one f.
class Preimager {
 public:
  explicit Preimager(const GroupHom& f);
  std::optional<IntVector> operator()(std::span<const Integer> y) const;

 private:
  std::size_t source_rank_;
  exactlin::LatticeSolver solver_;
};

std::optional<GroupElement> preimage_element(const GroupHom& f, const GroupElement& y);

/// Subgroup of g generated by the columns of gens.
Subgroup subgroup_generated(const FpAbGroup& g, const IntMatrix& gens);
/// S1 cap S2 inside g, for generator matrices given in g's ambient coordinates.
Subgroup intersection(const FpAbGroup& g, const IntMatrix& gens1, const IntMatrix& gens2);

/// Isomorphic copy with diagonal presentation (one generator per
/// non-unit Smith factor), with mutually inverse coordinate maps.
struct Simplified {
  FpAbGroup group;
  GroupHom to;    // original -> simplified
  GroupHom from;  // simplified -> original
};
Simplified simplify(const FpAbGroup& g);

/// 0 -> Z^m --R--> Z^k -> A -> 0 with R injective.
struct FreeResolution {
  IntMatrix R;  // k x m
  std::size_t k = 0;
  std::size_t m = 0;
};

/// k = ambient rank of a, R = a basis of its relation lattice.
FreeResolution free_resolution(const FpAbGroup& a);
/// Resolution from the Smith form of the presentation (minimal when possible).
FreeResolution minimal_free_resolution(const FpAbGroup& a);
/// cokernel of a resolution, as an FpAbGroup.
FpAbGroup resolved_group(const FreeResolution& r);

/// Ambient (i, j) -> i * H.rank + j; relations R_G (x) I and I (x) R_H.
FpAbGroup tensor(const FpAbGroup& g, const FpAbGroup& h);

/// Tor(G, A) = ker(G (x) Z^m -> G (x) Z^k), realized inside G (x) Z^m.
struct TorData {
  FreeResolution resolution;
  Subgroup tor;  // inclusion into tensor(G, free(m))
};
TorData tor_data(const FpAbGroup& g, const FreeResolution& res);
FpAbGroup tor(const FpAbGroup& g, const FpAbGroup& a);

GroupHom induced_on_tensor(const GroupHom& f, const FpAbGroup& a);
GroupHom induced_on_tor(const GroupHom& f, const FreeResolution& res);
GroupHom induced_on_tor(const GroupHom& f, const FpAbGroup& a);
/// Same map on tor_data groups already computed.
GroupHom induced_on_tor(const GroupHom& f, const TorData& src, const TorData& dst);

struct ExactnessResult {
  bool composes_to_zero = false;
  bool exact = false;
  FpAbGroup homology;  // ker g / im f (meaningful when composes_to_zero)
};
/// Exactness at the middle of A --f--> B --g--> C.
ExactnessResult exactness_at(const GroupHom& f, const GroupHom& g);

}  // namespace sheafcoh::abgroup
