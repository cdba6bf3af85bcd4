#pragma once

// Executable checks of the universal coefficient theorem for sheaf
// cohomology on finite posets: the projection-morphism comparison, the
// Tor/tensor triangle, the classical splitting and its corollaries.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sheafcoh/chains.hpp"
#include "sheafcoh/cohom.hpp"
#include "sheafcoh/site.hpp"

namespace sheafcoh::uct {

using abgroup::FpAbGroup;
using abgroup::FreeResolution;
using abgroup::GroupHom;
using site::Sheaf;

/// Bounded complex of finitely generated free groups.
using PerfectComplex = chains::FreeComplex;

enum class Status { kPass, kFail, kSkip };
const char* to_string(Status s);

struct Check {
  std::string name;
  std::optional<int> degree;
  Status status = Status::kPass;
  std::string detail;
};

using DegreeTable = std::map<int, std::vector<Integer>>;

struct VerificationReport {
  std::string instance;
  std::vector<Check> checks;
  std::map<std::string, DegreeTable> tables;
  nlohmann::ordered_json counterexample;  // null unless a check failed

  bool passed() const;  // skips count as passes
  void add(std::string name, std::optional<int> degree, bool ok, std::string detail = {});
  void skip(std::string name, std::optional<int> degree, std::string detail);
  void append(const VerificationReport& other);

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

/// Checks that mark the report failed also record the first failing degree.
struct Options {
  int rmin = 0;
  std::optional<int> rmax;  // default: height + 1
  /// Test mode: perturb one oracle so the failure path can be exercised.
  bool wrong_oracle = false;
};

DegreeTable cohomology_table(const chains::FpComplex& c, int lo, int hi);

// ---------------------------------------------------------------- Theorem 1

chains::FpComplex lhs_complex(const Sheaf& f, const PerfectComplex& c);
chains::FpComplex rhs_complex(const Sheaf& f, const PerfectComplex& c);
/// Coordinate identification C^p(X,F) (x) Z^r = C^p(X, F (x) Z^r), degreewise.
chains::ChainMap comparison_map(const Sheaf& f, const PerfectComplex& c);
/// Same, but onto already computed lhs/rhs complexes.
chains::ChainMap comparison_map(const Sheaf& f, const PerfectComplex& c, const chains::FpComplex& lhs,
                                const chains::FpComplex& rhs);

VerificationReport verify_theorem1(const Sheaf& f, const PerfectComplex& c);
/// Theorem 1 with C a resolution of A, plus independence of the resolution.
VerificationReport verify_theorem1(const Sheaf& f, const FpAbGroup& a);
/// minimal resolution of a, plus the acyclic summand [Z -1-> Z].
FreeResolution padded_resolution(const FpAbGroup& a);

// ---------------------------------------------------------------- triangle

struct LesData {
  FreeResolution resolution;
  int lo = 0;
  int hi = -1;
  chains::FpComplex tor_total;      // H^r here is H^{r+1}(X, Tor(F,A))
  chains::FpComplex derived_total;  // hyper-nerve of F (x)^L A
  chains::FpComplex tensor_nerve;   // nerve of F (x) A
  std::map<int, chains::Cohomology> h_tor;
  std::map<int, chains::Cohomology> h_derived;
  std::map<int, chains::Cohomology> h_tensor;
  std::map<int, GroupHom> g;      // H^{r+1}(Tor) -> H^r(K)
  std::map<int, GroupHom> h;      // H^r(K) -> H^r(F (x) A)
  std::map<int, GroupHom> delta;  // H^r(F (x) A) -> H^{r+2}(Tor)
  std::vector<chains::LesSpot> spots;
  bool quotient_quasi_iso = false;  // [F^m/ker D -> F^k] -> (coker D)[0]
  bool representatives_agree = false;

  bool exact() const;
};

LesData triangle_les(const Sheaf& f, const FpAbGroup& a);
LesData triangle_les(const Sheaf& f, const FreeResolution& res, int lo, int hi);
VerificationReport verify_les(const LesData& les);

// ---------------------------------------------------------------- classical UCT

struct UctSesData {
  FreeResolution resolution;
  int lo = 0;
  int hi = -1;
  chains::FpComplex nerve;
  chains::FpComplex derived;  // lhs_complex with C the resolution
  std::map<int, chains::Cohomology> h_nerve;
  std::map<int, chains::Cohomology> h_derived;
  std::map<int, FpAbGroup> tensor_groups;  // H^r(X,F) (x) A
  std::map<int, FpAbGroup> tor_groups;     // Tor(H^{r+1}(X,F), A)
  std::map<int, GroupHom> alpha;
  std::map<int, GroupHom> beta;
};

UctSesData classical_uct(const Sheaf& f, const FpAbGroup& a);
UctSesData classical_uct(const Sheaf& f, const FreeResolution& res, int lo, int hi);
VerificationReport verify_uct(const UctSesData& u);

// ---------------------------------------------------------------- corollaries

/// Everything the corollaries need for one (F, A).
struct UctContext {
  Sheaf sheaf;
  FpAbGroup coefficients;
  FreeResolution resolution;
  LesData les;
  UctSesData ses;
  chains::ChainMap comparison;  // ses.derived -> les.derived_total
  std::map<int, GroupHom> phi;  // induced on H^r
  std::map<int, GroupHom> phi_inv;
  bool tor_sheaf_zero = false;
  std::map<int, FpAbGroup> h_tor_sheaf;  // H^s(X, Tor(F,A))

  const GroupHom& phi_at(int r) const { return phi.at(r); }
};

UctContext make_context(const Sheaf& f, const FpAbGroup& a, const Options& opt = {});

struct Corollary2Data {
  int r = 0;
  // complex 1: 0 -> t0 -m1-> t1 -m2-> t2
  FpAbGroup c1_t0, c1_t1, c1_t2;
  GroupHom c1_m1, c1_m2;
  // complex 2: u0 -n1-> u1 -n2-> u2 -> 0
  FpAbGroup c2_u0, c2_u1, c2_u2;
  GroupHom c2_n1, c2_n2;
  bool c1_is_complex = false;
  bool c2_is_complex = false;
  FpAbGroup c1_h_first, c1_h_middle;  // after the leading 0, and the middle
  FpAbGroup c2_h_middle, c2_h_last;   // the middle, and before the trailing 0
  FpAbGroup oracle_first;             // im alpha cap im g
  FpAbGroup oracle_second;            // H^r(K) / (im alpha + im g)
};

Corollary2Data corollary2_data(const UctContext& ctx, int r);
VerificationReport corollary2(const UctContext& ctx, int r, const Options& opt = {});
VerificationReport corollary2_split(const UctContext& ctx, int r);
VerificationReport corollary3(const UctContext& ctx, int r);
/// Whether corollary3's hypotheses hold in degree r.
bool corollary3_hypotheses(const UctContext& ctx, int r);

// ---------------------------------------------------------------- projection

VerificationReport projection_check(const site::MonotoneMap& f, const Sheaf& s, const PerfectComplex& c);

/// Random perfect complex of length at most max_length with ranks at most max_rank.
PerfectComplex random_perfect_complex(std::mt19937_64& rng, int max_length = 2, std::size_t max_rank = 2);

}  // namespace sheafcoh::uct
