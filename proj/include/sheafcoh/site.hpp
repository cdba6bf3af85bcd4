#pragma once

// Finite posets as Alexandrov sites (open sets are up-sets), monotone maps,
// sheaves as functors on the poset, and bounded complexes of sheaves.
//
// Restrictions run upward: for x <= y a sheaf carries F(x) -> F(y), and the
// stalk at x is the value at x.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sheafcoh/abgroup.hpp"
#include "sheafcoh/chains.hpp"

namespace sheafcoh::site {

using abgroup::FpAbGroup;
using abgroup::GroupHom;

inline constexpr std::size_t kDefaultMaxElements = 8;

using Chain = std::vector<std::size_t>;

class Poset {
 public:
  Poset() = default;

  /// Takes the reflexive-transitive closure of the generating pairs
  /// (index x <= index y). Throws InputError on a cycle or size overflow.
  static Poset from_relations(std::vector<std::string> names,
                              const std::vector<std::pair<std::size_t, std::size_t>>& relations,
                              std::size_t max_elements = kDefaultMaxElements);
  /// Uses an already closed relation; throws InputError unless it is a partial order.
  static Poset from_closed(std::vector<std::string> names, std::vector<std::vector<bool>> leq,
                           std::size_t max_elements = kDefaultMaxElements);
  static Poset chain(std::size_t n);
  static Poset antichain(std::size_t n);
  static Poset point() { return chain(1); }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  bool leq(std::size_t x, std::size_t y) const { return leq_[x * size() + y] != 0; }
  bool lt(std::size_t x, std::size_t y) const { return x != y && leq(x, y); }

  /// Pairs x < y with nothing strictly between.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const;
  std::vector<std::size_t> up_set(std::size_t x) const;
  std::vector<std::size_t> down_set(std::size_t x) const;
  /// Length (number of steps) of the longest strict chain; -1 when empty.
  int height() const;
  std::optional<std::size_t> minimum() const;
  bool is_connected() const;

  /// Induced order on the listed elements (kept in the given order).
  Poset subposet(const std::vector<std::size_t>& elements) const;

  friend bool operator==(const Poset& a, const Poset& b) { return a.names_ == b.names_ && a.leq_ == b.leq_; }

 private:
  std::vector<std::string> names_;
  std::vector<char> leq_;
};

/// Reflexivity, antisymmetry and transitivity; the violation text if any.
std::optional<std::string> validate(const Poset& x);

/// Strictly increasing (n+1)-tuples, in lexicographic order of indices.
std::vector<Chain> strict_chains(const Poset& x, int n);

struct MonotoneMap {
  Poset source;
  Poset target;
  std::vector<std::size_t> assignment;

  std::size_t operator()(std::size_t x) const { return assignment[x]; }
  bool verify(std::string* why = nullptr) const;
  static MonotoneMap identity(const Poset& x);
  static MonotoneMap to_point(const Poset& x);
};

MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f);  // g o f

class Sheaf {
 public:
  Sheaf() = default;

  /// Restrictions given on covering pairs only; composites are derived and
  /// full functoriality is checked. Throws InputError on violation.
  static Sheaf from_covers(const Poset& x, std::vector<FpAbGroup> stalks,
                           const std::vector<std::pair<std::pair<std::size_t, std::size_t>, IntMatrix>>& cover_maps);
  /// Restrictions given for every pair x <= y (identity at x = x may be omitted).
  static Sheaf from_all(const Poset& x, std::vector<FpAbGroup> stalks,
                        std::vector<std::vector<IntMatrix>> all_maps);

  const Poset& poset() const noexcept { return poset_; }
  const FpAbGroup& stalk(std::size_t x) const { return stalks_[x]; }
  const std::vector<FpAbGroup>& stalks() const noexcept { return stalks_; }
  const IntMatrix& restriction_matrix(std::size_t x, std::size_t y) const;
  GroupHom restriction(std::size_t x, std::size_t y) const;

  /// rho(x,x) = id, rho(y,z) o rho(x,y) = rho(x,z), every rho well defined.
  bool verify(std::string* why = nullptr) const;
  bool is_zero() const;

 private:
  Poset poset_;
  std::vector<FpAbGroup> stalks_;
  std::vector<IntMatrix> maps_;  // n*n, meaningful where x <= y
};

/// Elementwise homomorphisms commuting with restrictions.
struct SheafHom {
  Sheaf source;
  Sheaf target;
  std::vector<IntMatrix> components;

  GroupHom component(std::size_t x) const { return {source.stalk(x), target.stalk(x), components[x]}; }
  bool verify(std::string* why = nullptr) const;
};

class SheafComplex {
 public:
  SheafComplex() = default;
  /// differentials[i] : sheaves[i] -> sheaves[i+1]; one fewer than sheaves.
  SheafComplex(const Poset& x, int lo, std::vector<Sheaf> sheaves, std::vector<std::vector<IntMatrix>> differentials);

  const Poset& poset() const noexcept { return poset_; }
  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return lo_ + static_cast<int>(sheaves_.size()) - 1; }
  bool empty() const noexcept { return sheaves_.empty(); }
  const Sheaf& sheaf(int q) const;
  /// Matrix of d^q at element x (zero outside the support).
  IntMatrix differential(int q, std::size_t x) const;

  chains::FpComplex stalk_complex(std::size_t x) const;
  bool verify(std::string* why = nullptr) const;

  static SheafComplex concentrated(const Sheaf& f, int degree = 0);

 private:
  Poset poset_;
  int lo_ = 0;
  std::vector<Sheaf> sheaves_;
  std::vector<std::vector<IntMatrix>> diffs_;  // diffs_[i][x]
};

Sheaf zero_sheaf(const Poset& x);
Sheaf constant_sheaf(const Poset& x, const FpAbGroup& g);
/// g on {y >= x}, zero elsewhere, identity restrictions inside.
Sheaf upset_extension(const Poset& x, std::size_t at, const FpAbGroup& g);
/// g on {y <= x}, zero elsewhere.
Sheaf downset_extension(const Poset& x, std::size_t at, const FpAbGroup& g);
Sheaf direct_sum(const Sheaf& a, const Sheaf& b);
/// Quotient by the subsheaf generated by a global section (one vector per element).
Sheaf quotient_by_section(const Sheaf& f, const std::vector<IntVector>& section);
/// Restriction of f to a subposet given by (sorted) element indices.
Sheaf restrict_to(const Sheaf& f, const std::vector<std::size_t>& elements);

Sheaf sheaf_tensor(const Sheaf& f, const FpAbGroup& a);
Sheaf sheaf_tor(const Sheaf& f, const FpAbGroup& a);
Sheaf sheaf_tor(const Sheaf& f, const abgroup::FreeResolution& res);
/// Stalkwise F (x) Z^r with the tensor ambient ordering (i * r + j).
Sheaf sheaf_tensor_free(const Sheaf& f, std::size_t r);

/// Stalkwise F (x) P for a perfect complex P: degree q holds F (x) Z^{rank P^q}.
SheafComplex sheaf_tensor_complex(const Sheaf& f, const chains::FreeComplex& p);
/// The two-term complex [F^m -> F^k] in degrees -1, 0 from a resolution of A.
SheafComplex sheaf_derived_tensor(const Sheaf& f, const FpAbGroup& a);
SheafComplex sheaf_derived_tensor(const Sheaf& f, const abgroup::FreeResolution& res);
/// Resolution as a perfect complex in degrees -1, 0.
chains::FreeComplex resolution_complex(const abgroup::FreeResolution& res);

Sheaf pullback(const MonotoneMap& f, const Sheaf& g);
SheafComplex pullback(const MonotoneMap& f, const SheafComplex& k);

/// Compatible families, as a subgroup of the product of all stalks.
abgroup::Subgroup global_sections(const Sheaf& f);

// ------------------------------------------------------------ random instances

/// Deterministic uniform draw in [0, n) from a standard-specified engine.
std::size_t draw(std::mt19937_64& rng, std::size_t n);

struct SheafParams {
  std::size_t min_summands = 1;
  std::size_t max_summands = 3;
  double quotient_probability = 0.3;
  /// Stalk orders drawn from this list (0 = Z).
  std::vector<int> orders = {0, 2, 3, 4, 6, 8, 9, 12};
};

/// Building blocks of a random sheaf, kept so instances can be shrunk.
struct SheafRecipe {
  enum class Kind { kConstant, kUpset, kDownset };
  struct Block {
    Kind kind;
    std::size_t element;
    int order;
  };
  std::vector<Block> blocks;
  std::vector<int> quotient_coeffs;  // empty: no quotient
};

SheafRecipe random_recipe(const Poset& x, std::mt19937_64& rng, const SheafParams& params);
Sheaf build_sheaf(const Poset& x, const SheafRecipe& recipe);
Sheaf random_sheaf(const Poset& x, std::uint64_t seed, const SheafParams& params = {});

/// Random partial order on n elements named p0, p1, ...
Poset random_poset(std::mt19937_64& rng, std::size_t n, double edge_probability = 0.4);
/// Random order-preserving map; falls back to a constant map if needed.
MonotoneMap random_monotone_map(std::mt19937_64& rng, const Poset& source, const Poset& target);

}  // namespace sheafcoh::site
