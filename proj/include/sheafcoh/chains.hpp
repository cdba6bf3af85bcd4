#pragma once

// Bounded cochain complexes of finitely presented abelian groups.

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sheafcoh/abgroup.hpp"

namespace sheafcoh::chains {

using abgroup::FpAbGroup;
using abgroup::GroupHom;

/// C^lo -> ... -> C^hi with d^n : C^n -> C^{n+1}; zero outside [lo, hi].
class FpComplex {
 public:
  FpComplex() = default;
  FpComplex(int lo, std::vector<FpAbGroup> terms, std::vector<IntMatrix> differentials);

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return lo_ + static_cast<int>(terms_.size()) - 1; }
  bool empty() const noexcept { return terms_.empty(); }
  bool in_support(int n) const noexcept { return n >= lo() && n <= hi(); }

  const FpAbGroup& term(int n) const;
  /// Matrix of d^n, of shape rank(C^{n+1}) x rank(C^n).
  IntMatrix differential_matrix(int n) const;
  GroupHom differential(int n) const;

  /// d^{n+1} o d^n = 0 and every d^n is well defined. Fills why on failure.
  bool verify(std::string* why = nullptr) const;

 private:
  int lo_ = 0;
  std::vector<FpAbGroup> terms_;
  std::vector<IntMatrix> diffs_;  // diffs_[i] : terms_[i] -> terms_[i+1] (last maps to 0)
};

/// Bounded complex of finitely generated free groups (ranks + matrices).
struct FreeComplex {
  int lo = 0;
  std::vector<std::size_t> ranks;
  std::vector<IntMatrix> differentials;  // differentials[i] : Z^{ranks[i]} -> Z^{ranks[i+1]}

  int hi() const { return lo + static_cast<int>(ranks.size()) - 1; }
  std::size_t rank(int n) const;
  IntMatrix differential(int n) const;
  FpComplex as_complex() const;
  bool verify(std::string* why = nullptr) const;
  /// Z concentrated in degree 0.
  static FreeComplex unit();
};

struct ChainMap {
  FpComplex source;
  FpComplex target;
  std::map<int, IntMatrix> components;  // absent degrees are zero

  IntMatrix component_matrix(int n) const;
  GroupHom component(int n) const;
  bool verify(std::string* why = nullptr) const;

  static ChainMap identity(const FpComplex& c);
};

/// Cohomology group H^n with explicit coordinate bridges. The group has a
/// diagonal presentation; section sends class coordinates to a cocycle and
/// classify sends a cocycle to reduced class coordinates.
class Cohomology {
 public:
  Cohomology() = default;

  int degree() const noexcept { return degree_; }
  const FpAbGroup& group() const noexcept { return group_; }
  const IntMatrix& section_matrix() const noexcept { return section_; }
  std::size_t cochain_rank() const noexcept { return section_.rows(); }

  IntVector section(std::span<const Integer> class_coords) const;
  /// Throws ContractViolation if z is not a cocycle.
  IntVector classify(std::span<const Integer> z) const;
  bool is_cocycle(std::span<const Integer> z) const;
  /// Whether the cocycle z is a coboundary.
  bool is_coboundary(std::span<const Integer> z) const;
  IntVector reduce(IntVector class_coords) const;

 private:
  friend Cohomology cohomology(const FpComplex& c, int n);
  struct Cycles;
  int degree_ = 0;
  FpAbGroup group_;
  IntMatrix section_;
  IntMatrix classify_rows_;
  std::vector<Integer> orders_;
  std::shared_ptr<const Cycles> cycles_;
};

Cohomology cohomology(const FpComplex& c, int n);

GroupHom induced_on_cohomology(const ChainMap& phi, int n);
GroupHom induced_on_cohomology(const ChainMap& phi, int n, const Cohomology& src, const Cohomology& dst);

/// cone^n = S^{n+1} + T^n, d(s, t) = (-d s, phi(s) + d t).
FpComplex cone(const ChainMap& phi);
/// C[k]^n = C^{n+k}, differential (-1)^k d.
FpComplex shift(const FpComplex& c, int k);
FpComplex direct_sum(const FpComplex& a, const FpComplex& b);
bool is_acyclic(const FpComplex& c);

struct QuasiIsoCheck {
  bool by_induced_maps = false;
  bool by_cone = false;
  std::vector<int> failing_degrees;
};
QuasiIsoCheck quasi_iso_check(const ChainMap& phi);
/// Both criteria; throws ContractViolation if they disagree.
bool is_quasi_iso(const ChainMap& phi);

/// Double complex with horizontal (p) and vertical (q) differentials that
/// commute; the total differential is d_h + (-1)^p d_v.
class Bicomplex {
 public:
  void set_group(int p, int q, FpAbGroup g);
  void set_horizontal(int p, int q, IntMatrix m);  // (p,q) -> (p+1,q)
  void set_vertical(int p, int q, IntMatrix m);    // (p,q) -> (p,q+1)

  const FpAbGroup& group(int p, int q) const;
  bool commutes(std::string* why = nullptr) const;
  /// Tot^n = sum over p+q=n, blocks ordered by ascending q.
  FpComplex total() const;

 private:
  std::map<std::pair<int, int>, FpAbGroup> groups_;
  std::map<std::pair<int, int>, IntMatrix> horizontal_;
  std::map<std::pair<int, int>, IntMatrix> vertical_;
};

/// Row -1 (top) and row 0 (bottom) linked by a vertical chain map.
struct TwoRowBicomplex {
  FpComplex top;
  FpComplex bottom;
  ChainMap vertical;  // top -> bottom
};
/// Tot^n = top^{n+1} + bottom^n. Throws ContractViolation on a non-commuting square.
FpComplex total_of_two_row(const TwoRowBicomplex& b);

/// Total complex of C (x) P for P free; block (p, q) is C^p (x) Z^{rank P^q}.
FpComplex tensor_with_free_complex(const FpComplex& c, const FreeComplex& p);
/// Same, accepting P as an FpComplex; throws ContractViolation if P has relations.
FpComplex tensor_with_free_complex(const FpComplex& c, const FpComplex& p);

/// 0 -> sub --inclusion--> mid --projection--> quot -> 0, levelwise.
struct ShortExactSequence {
  ChainMap inclusion;
  ChainMap projection;

  bool verify(std::string* why = nullptr) const;
};

/// delta : H^n(quot) -> H^{n+1}(sub) via lift, differentiate, pull back.
GroupHom connecting_map(const ShortExactSequence& ses, int n);
GroupHom connecting_map(const ShortExactSequence& ses, int n, const Cohomology& quot_n, const Cohomology& sub_n1);

struct LesSpot {
  std::string label;  // e.g. "H^2(mid)"
  int degree = 0;
  abgroup::ExactnessResult result;
};
/// Exactness of the long sequence at every spot for degrees in [lo, hi].
std::vector<LesSpot> long_exact_sequence_check(const ShortExactSequence& ses, int lo, int hi);

using abgroup::exactness_at;

}  // namespace sheafcoh::chains
