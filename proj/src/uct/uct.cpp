#include "sheafcoh/uct.hpp"

#include <algorithm>
#include <sstream>

#include "sheafcoh/errors.hpp"

namespace sheafcoh::uct {

using chains::Cohomology;
using chains::FpComplex;

// ---------------------------------------------------------------- reports

const char* to_string(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kSkip: return "skip";
  }
  return "?";
}

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::kFail; });
}

void VerificationReport::add(std::string name, std::optional<int> degree, bool ok, std::string detail) {
  if (!ok && counterexample.is_null()) {
    counterexample = nlohmann::ordered_json::object();
    counterexample["check"] = name;
    counterexample["degree"] = degree ? nlohmann::ordered_json(*degree) : nlohmann::ordered_json();
    counterexample["elements"] = detail;
  }
  checks.push_back({std::move(name), degree, ok ? Status::kPass : Status::kFail, std::move(detail)});
}

void VerificationReport::skip(std::string name, std::optional<int> degree, std::string detail) {
  checks.push_back({std::move(name), degree, Status::kSkip, std::move(detail)});
}

void VerificationReport::append(const VerificationReport& other) {
  if (counterexample.is_null() && !other.counterexample.is_null()) counterexample = other.counterexample;
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  for (const auto& [k, v] : other.tables) tables[k] = v;
}

namespace {

nlohmann::ordered_json factor_json(const Integer& v) {
  if (v.fits_int64()) return v.to_int64();
  return v.to_string();
}

std::string factors_text(const FpAbGroup& g) { return abgroup::format_factors(g.invariant_factors()); }

}  // namespace

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["instance"] = instance;
  j["status"] = passed() ? "pass" : "fail";
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e = nlohmann::ordered_json::object();
    e["name"] = c.name;
    e["degree"] = c.degree ? nlohmann::ordered_json(*c.degree) : nlohmann::ordered_json();
    e["status"] = to_string(c.status);
    e["detail"] = c.detail;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  nlohmann::ordered_json tabs = nlohmann::ordered_json::object();
  for (const auto& [name, table] : tables) {
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [deg, factors] : table) {
      auto fs = nlohmann::ordered_json::array();
      for (const auto& f : factors) fs.push_back(factor_json(f));
      t[std::to_string(deg)] = std::move(fs);
    }
    tabs[name] = std::move(t);
  }
  j["tables"] = std::move(tabs);
  j["counterexample"] = counterexample;
  return j;
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << "instance: " << instance << '\n';
  for (const auto& c : checks) {
    os << "  " << to_string(c.status) << "  " << c.name;
    if (c.degree) os << " r=" << *c.degree;
    if (!c.detail.empty()) os << "  (" << c.detail << ')';
    os << '\n';
  }
  for (const auto& [name, table] : tables) {
    os << "  table " << name << ':';
    for (const auto& [deg, factors] : table) os << ' ' << deg << ": " << abgroup::format_factors(factors) << ';';
    os << '\n';
  }
  os << "  result: " << (passed() ? "pass" : "fail") << '\n';
  return os.str();
}

DegreeTable cohomology_table(const FpComplex& c, int lo, int hi) {
  DegreeTable t;
  for (int n = lo; n <= hi; ++n) t[n] = chains::cohomology(c, n).group().invariant_factors();
  return t;
}

namespace {

DegreeTable full_table(const FpComplex& c) {
  if (c.empty()) return {};
  return cohomology_table(c, c.lo(), c.hi());
}

bool tables_agree(const DegreeTable& a, const DegreeTable& b) {
  auto trimmed = [](const DegreeTable& t) {
    DegreeTable out;
    for (const auto& [k, v] : t)
      if (!v.empty()) out[k] = v;
    return out;
  };
  return trimmed(a) == trimmed(b);
}

std::vector<IntMatrix> identities(const Sheaf& s) {
  std::vector<IntMatrix> out;
  for (const auto& g : s.stalks()) out.push_back(IntMatrix::identity(g.ambient_rank()));
  return out;
}

GroupHom zero_from_trivial(const FpAbGroup& target) { return GroupHom::zero(FpAbGroup(), target); }
GroupHom zero_to_trivial(const FpAbGroup& source) { return GroupHom::zero(source, FpAbGroup()); }

}  // namespace

// ---------------------------------------------------------------- Theorem 1

FpComplex lhs_complex(const Sheaf& f, const PerfectComplex& c) {
  return chains::tensor_with_free_complex(cohom::nerve_complex(f).complex, c);
}

FpComplex rhs_complex(const Sheaf& f, const PerfectComplex& c) {
  return cohom::hyper_nerve(site::sheaf_tensor_complex(f, c));
}

chains::ChainMap comparison_map(const Sheaf& f, const PerfectComplex& c, const FpComplex& lhs, const FpComplex& rhs) {
  cohom::NerveComplex nc = cohom::nerve_complex(f);
  site::SheafComplex fc = site::sheaf_tensor_complex(f, c);
  chains::ChainMap phi{lhs, rhs, {}};
  if (lhs.empty() && rhs.empty()) return phi;
  const int lo = std::min(lhs.empty() ? rhs.lo() : lhs.lo(), rhs.empty() ? lhs.lo() : rhs.lo());
  const int hi = std::max(lhs.empty() ? rhs.hi() : lhs.hi(), rhs.empty() ? lhs.hi() : rhs.hi());
  const int h = f.poset().height();
  for (int n = lo; n <= hi; ++n) {
    const std::size_t lrank = lhs.term(n).ambient_rank();
    const std::size_t rrank = rhs.term(n).ambient_rank();
    IntMatrix m(rrank, lrank);
    // Offsets of the (p, q) blocks in the left total, ascending q.
    std::map<int, std::size_t> block_offset;
    std::size_t off = 0;
    for (int q = c.lo; q <= c.hi(); ++q) {
      int p = n - q;
      if (p < 0 || p > h) continue;
      block_offset[q] = off;
      off += nc.complex.term(p).ambient_rank() * c.rank(q);
    }
    for (const auto& e : cohom::hyper_nerve_layout(fc, n)) {
      const int p = static_cast<int>(e.chain.size()) - 1;
      const auto& list = nc.chains[static_cast<std::size_t>(p)];
      auto pos = static_cast<std::size_t>(std::lower_bound(list.begin(), list.end(), e.chain) - list.begin());
      const std::size_t chain_off = nc.offsets[static_cast<std::size_t>(p)][pos];
      const std::size_t r = c.rank(e.q);
      const std::size_t base = block_offset.at(e.q);
      for (std::size_t t = 0; t < e.size; ++t) {
        std::size_t i = t / r, j = t % r;
        std::size_t col = base + (chain_off + i) * r + j;
        std::size_t row = e.offset + t;
        if (row >= rrank || col >= lrank) throw ContractViolation("comparison map: layouts do not match the complexes");
        m(row, col) = Integer(1);
      }
    }
    phi.components[n] = std::move(m);
  }
  return phi;
}

chains::ChainMap comparison_map(const Sheaf& f, const PerfectComplex& c) {
  return comparison_map(f, c, lhs_complex(f, c), rhs_complex(f, c));
}

VerificationReport verify_theorem1(const Sheaf& f, const PerfectComplex& c) {
  VerificationReport rep;
  std::string why;
  if (!c.verify(&why)) {
    rep.add("theorem1.perfect_complex", std::nullopt, false, why);
    return rep;
  }
  FpComplex lhs = lhs_complex(f, c);
  FpComplex rhs = rhs_complex(f, c);
  chains::ChainMap phi = comparison_map(f, c, lhs, rhs);
  bool chain_map = phi.verify(&why);
  rep.add("theorem1.chain_map", std::nullopt, chain_map, chain_map ? "" : why);
  if (!chain_map) return rep;

  bool iso = true;
  std::optional<int> bad;
  for (const auto& [n, m] : phi.components) {
    (void)m;
    if (!abgroup::is_isomorphism(phi.component(n))) {
      iso = false;
      bad = n;
      break;
    }
  }
  rep.add("theorem1.degreewise_iso", bad, iso, iso ? "" : "component is not bijective");

  chains::QuasiIsoCheck q = chains::quasi_iso_check(phi);
  std::string detail;
  if (!q.failing_degrees.empty()) {
    detail = "failing degrees:";
    for (int d : q.failing_degrees) detail += " " + std::to_string(d);
  }
  if (q.by_induced_maps != q.by_cone) detail += " induced-map and cone criteria disagree";
  rep.add("theorem1.quasi_iso", q.failing_degrees.empty() ? std::nullopt : std::optional<int>(q.failing_degrees.front()),
          q.by_induced_maps && q.by_cone, detail);
  rep.tables["lhs"] = full_table(lhs);
  rep.tables["rhs"] = full_table(rhs);
  return rep;
}

FreeResolution padded_resolution(const FpAbGroup& a) {
  FreeResolution r = abgroup::minimal_free_resolution(a);
  FreeResolution out;
  out.R = block_diagonal(r.R, IntMatrix::identity(1));
  out.k = r.k + 1;
  out.m = r.m + 1;
  return out;
}

VerificationReport verify_theorem1(const Sheaf& f, const FpAbGroup& a) {
  FreeResolution first = abgroup::free_resolution(a);
  VerificationReport rep = verify_theorem1(f, site::resolution_complex(first));
  FreeResolution second = padded_resolution(a);
  DegreeTable alt = full_table(rhs_complex(f, site::resolution_complex(second)));
  bool same = tables_agree(rep.tables["rhs"], alt);
  rep.tables["rhs_alt"] = alt;
  rep.add("theorem1.resolution_independence", std::nullopt, same,
          same ? "" : "rhs invariant factors depend on the resolution");
  return rep;
}

// ---------------------------------------------------------------- triangle

bool LesData::exact() const {
  return quotient_quasi_iso && std::all_of(spots.begin(), spots.end(), [](const chains::LesSpot& s) {
           return s.result.composes_to_zero && s.result.exact;
         });
}

LesData triangle_les(const Sheaf& f, const FreeResolution& res, int lo, int hi) {
  LesData L;
  L.resolution = res;
  L.lo = lo;
  L.hi = hi;
  const site::Poset& x = f.poset();
  const std::size_t n = x.size();

  site::SheafComplex k = site::sheaf_derived_tensor(f, res);

  // Tor(F, A) = ker D with its inclusion into F (x) Z^m.
  std::vector<abgroup::TorData> td;
  std::vector<FpAbGroup> tor_stalks;
  for (std::size_t e = 0; e < n; ++e) {
    td.push_back(abgroup::tor_data(f.stalk(e), res));
    tor_stalks.push_back(td.back().tor.group);
  }
  std::vector<std::vector<IntMatrix>> tor_maps(n, std::vector<IntMatrix>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (x.leq(a, b)) tor_maps[a][b] = abgroup::induced_on_tor(f.restriction(a, b), td[a], td[b]).matrix;
  Sheaf tor = Sheaf::from_all(x, std::move(tor_stalks), std::move(tor_maps));

  // [F^m / ker D -> F^k].
  const Sheaf& km = k.sheaf(-1);
  std::vector<FpAbGroup> q_stalks;
  std::vector<std::vector<IntMatrix>> q_maps(n, std::vector<IntMatrix>(n));
  for (std::size_t e = 0; e < n; ++e)
    q_stalks.emplace_back(km.stalk(e).ambient_rank(), hstack(km.stalk(e).relations(), td[e].tor.inclusion.matrix));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (x.leq(a, b)) q_maps[a][b] = km.restriction_matrix(a, b);
  Sheaf qm = Sheaf::from_all(x, std::move(q_stalks), std::move(q_maps));
  std::vector<IntMatrix> dk;
  for (std::size_t e = 0; e < n; ++e) dk.push_back(k.differential(-1, e));
  site::SheafComplex qc(x, -1, {qm, k.sheaf(0)}, {dk});

  Sheaf e_sheaf = site::sheaf_tensor(f, abgroup::resolved_group(res));
  site::SheafComplex tc(x, -1, {tor}, {});
  site::SheafComplex ec = site::SheafComplex::concentrated(e_sheaf, 0);

  L.tor_total = cohom::hyper_nerve(tc);
  L.derived_total = cohom::hyper_nerve(k);
  FpComplex q_total = cohom::hyper_nerve(qc);
  L.tensor_nerve = cohom::hyper_nerve(ec);

  std::vector<IntMatrix> incl;
  for (std::size_t e = 0; e < n; ++e) incl.push_back(td[e].tor.inclusion.matrix);
  chains::ChainMap inclusion = cohom::hyper_nerve_map(tc, L.tor_total, k, L.derived_total, {{-1, incl}});
  chains::ChainMap projection =
      cohom::hyper_nerve_map(k, L.derived_total, qc, q_total, {{-1, identities(k.sheaf(-1))}, {0, identities(k.sheaf(0))}});
  chains::ChainMap psi = cohom::hyper_nerve_map(qc, q_total, ec, L.tensor_nerve, {{0, identities(e_sheaf)}});
  chains::ShortExactSequence ses{inclusion, projection};

  std::map<int, Cohomology> h_quot;
  for (int r = lo; r <= hi + 2; ++r) {
    L.h_tor[r] = chains::cohomology(L.tor_total, r);
    L.h_derived[r] = chains::cohomology(L.derived_total, r);
    h_quot[r] = chains::cohomology(q_total, r);
    L.h_tensor[r] = chains::cohomology(L.tensor_nerve, r);
  }
  std::map<int, GroupHom> psi_star, psi_inv;
  L.quotient_quasi_iso = true;
  L.representatives_agree = true;
  for (int r = lo; r <= hi + 1; ++r) {
    psi_star[r] = chains::induced_on_cohomology(psi, r, h_quot[r], L.h_tensor[r]);
    if (h_quot[r].group().invariant_factors() != L.h_tensor[r].group().invariant_factors()) L.representatives_agree = false;
    if (abgroup::is_isomorphism(psi_star[r])) {
      psi_inv[r] = abgroup::inverse_isomorphism(psi_star[r]);
    } else {
      L.quotient_quasi_iso = false;
      psi_inv[r] = GroupHom::zero(L.h_tensor[r].group(), h_quot[r].group());
    }
  }
  for (int r = lo; r <= hi + 1; ++r) {
    L.g[r] = chains::induced_on_cohomology(inclusion, r, L.h_tor[r], L.h_derived[r]);
    L.h[r] = abgroup::compose(psi_star[r], chains::induced_on_cohomology(projection, r, L.h_derived[r], h_quot[r]));
  }
  for (int r = lo; r <= hi; ++r)
    L.delta[r] = abgroup::compose(chains::connecting_map(ses, r, h_quot[r], L.h_tor[r + 1]), psi_inv[r]);

  for (int r = lo; r <= hi; ++r) {
    const std::string s = std::to_string(r);
    L.spots.push_back({"H^" + s + "(F(x)^L A)", r, abgroup::exactness_at(L.g[r], L.h[r])});
    L.spots.push_back({"H^" + s + "(F(x)A)", r, abgroup::exactness_at(L.h[r], L.delta[r])});
    L.spots.push_back({"H^" + std::to_string(r + 2) + "(Tor(F,A))", r, abgroup::exactness_at(L.delta[r], L.g[r + 1])});
  }
  return L;
}

LesData triangle_les(const Sheaf& f, const FpAbGroup& a) {
  return triangle_les(f, abgroup::free_resolution(a), -2, std::max(f.poset().height(), 0) + 1);
}

VerificationReport verify_les(const LesData& les) {
  VerificationReport rep;
  rep.add("les.quotient_quasi_iso", std::nullopt, les.quotient_quasi_iso,
          les.quotient_quasi_iso ? "" : "[F^m/ker D -> F^k] -> (F(x)A)[0] is not a quasi-isomorphism");
  rep.add("les.representatives_agree", std::nullopt, les.representatives_agree,
          les.representatives_agree ? "" : "quasi-isomorphic representatives of (F(x)A)[0] differ");
  for (const auto& s : les.spots) {
    bool ok = s.result.composes_to_zero && s.result.exact;
    std::string detail = ok ? "" : (s.result.composes_to_zero ? "homology " + factors_text(s.result.homology) : "composite is nonzero");
    rep.add("les.exact " + s.label, s.degree, ok, detail);
  }
  DegreeTable tk, te, tt;
  for (int r = les.lo; r <= les.hi; ++r) {
    tk[r] = les.h_derived.at(r).group().invariant_factors();
    te[r] = les.h_tensor.at(r).group().invariant_factors();
    tt[r + 1] = les.h_tor.at(r).group().invariant_factors();
  }
  rep.tables["H(F(x)^L A)"] = tk;
  rep.tables["H(F(x)A)"] = te;
  rep.tables["H(Tor(F,A))"] = tt;
  return rep;
}

// ---------------------------------------------------------------- classical UCT

UctSesData classical_uct(const Sheaf& f, const FreeResolution& res, int lo, int hi) {
  UctSesData u;
  u.resolution = res;
  u.lo = lo;
  u.hi = hi;
  u.nerve = cohom::nerve_complex(f).complex;
  u.derived = chains::tensor_with_free_complex(u.nerve, site::resolution_complex(res));
  const FpAbGroup a = abgroup::resolved_group(res);
  const std::size_t k = res.k, m = res.m;

  for (int r = lo; r <= hi + 1; ++r) u.h_nerve[r] = chains::cohomology(u.nerve, r);
  for (int r = lo; r <= hi; ++r) u.h_derived[r] = chains::cohomology(u.derived, r);

  for (int r = lo; r <= hi; ++r) {
    const Cohomology& hr = u.h_nerve.at(r);
    const Cohomology& hr1 = u.h_nerve.at(r + 1);
    const Cohomology& mid = u.h_derived.at(r);
    const std::size_t tot = u.derived.term(r).ambient_rank();
    const std::size_t lower = u.nerve.term(r + 1).ambient_rank() * m;  // resolution degree -1 block

    FpAbGroup ta = abgroup::tensor(hr.group(), a);
    IntMatrix alpha(mid.group().ambient_rank(), ta.ambient_rank());
    for (std::size_t i = 0; i < hr.group().ambient_rank(); ++i) {
      IntVector z = hr.section_matrix().column(i);
      for (std::size_t j = 0; j < k; ++j) {
        IntVector v(tot);
        for (std::size_t c = 0; c < z.size(); ++c) v[lower + c * k + j] = z[c];
        alpha.set_column(i * k + j, mid.classify(v));
      }
    }
    u.tensor_groups[r] = ta;
    u.alpha[r] = GroupHom{ta, mid.group(), std::move(alpha)};

    abgroup::TorData td = abgroup::tor_data(hr1.group(), res);
    abgroup::Preimager into_tor(td.tor.inclusion);
    const std::size_t h1 = hr1.group().ambient_rank();
    const std::size_t c1 = hr1.cochain_rank();
    IntMatrix beta(td.tor.group.ambient_rank(), mid.group().ambient_rank());
    for (std::size_t col = 0; col < mid.group().ambient_rank(); ++col) {
      IntVector s = mid.section_matrix().column(col);
      IntVector w(h1 * m);
      for (std::size_t l = 0; l < m; ++l) {
        IntVector xl(c1);
        for (std::size_t c = 0; c < c1; ++c) xl[c] = s[c * m + l];
        IntVector cls = hr1.classify(xl);
        for (std::size_t i = 0; i < h1; ++i) w[i * m + l] = cls[i];
      }
      auto t = into_tor(w);
      if (!t) throw ContractViolation("classical uct: degree -1 component does not define a Tor element");
      beta.set_column(col, *t);
    }
    u.tor_groups[r] = td.tor.group;
    u.beta[r] = GroupHom{mid.group(), td.tor.group, std::move(beta)};
  }
  return u;
}

UctSesData classical_uct(const Sheaf& f, const FpAbGroup& a) {
  return classical_uct(f, abgroup::free_resolution(a), -2, std::max(f.poset().height(), 0) + 1);
}

VerificationReport verify_uct(const UctSesData& u) {
  VerificationReport rep;
  DegreeTable tmid;
  for (int r = u.lo; r <= u.hi; ++r) {
    const GroupHom& al = u.alpha.at(r);
    const GroupHom& be = u.beta.at(r);
    bool defined = al.is_well_defined() && be.is_well_defined();
    rep.add("uct.well_defined", r, defined, defined ? "" : "alpha or beta is not well defined");
    if (!defined) continue;
    bool inj = abgroup::is_injective(al);
    bool surj = abgroup::is_surjective(be);
    auto mid = abgroup::exactness_at(al, be);
    bool ok = inj && surj && mid.composes_to_zero && mid.exact;
    std::string detail;
    if (!inj) detail += "alpha not injective; ";
    if (!surj) detail += "beta not surjective; ";
    if (!mid.composes_to_zero) detail += "beta o alpha != 0; ";
    else if (!mid.exact) detail += "middle homology " + factors_text(mid.homology);
    rep.add("uct.exact", r, ok, detail);
    FpAbGroup sum = abgroup::direct_sum(u.tensor_groups.at(r), u.tor_groups.at(r));
    bool split = abgroup::is_isomorphic(al.target, sum);
    rep.add("uct.split", r, split,
            split ? "" : "middle " + factors_text(al.target) + " vs " + factors_text(sum));
    tmid[r] = al.target.invariant_factors();
  }
  rep.tables["H(RGamma(F)(x)^L A)"] = tmid;
  return rep;
}

// ---------------------------------------------------------------- corollaries

UctContext make_context(const Sheaf& f, const FpAbGroup& a, const Options& opt) {
  UctContext ctx;
  ctx.sheaf = f;
  ctx.coefficients = a;
  ctx.resolution = abgroup::free_resolution(a);
  const int height = std::max(f.poset().height(), 0);
  const int rmax = opt.rmax.value_or(height + 1);
  const int lo = std::min(opt.rmin, 0) - 1;
  const int hi = std::max(rmax, lo);
  ctx.les = triangle_les(f, ctx.resolution, lo, hi);
  ctx.ses = classical_uct(f, ctx.resolution, lo, hi);
  ctx.comparison = comparison_map(f, site::resolution_complex(ctx.resolution), ctx.ses.derived, ctx.les.derived_total);
  for (int r = lo; r <= hi; ++r) {
    ctx.phi[r] = chains::induced_on_cohomology(ctx.comparison, r, ctx.ses.h_derived.at(r), ctx.les.h_derived.at(r));
    if (abgroup::is_isomorphism(ctx.phi[r])) ctx.phi_inv[r] = abgroup::inverse_isomorphism(ctx.phi[r]);
    else ctx.phi_inv[r] = GroupHom::zero(ctx.phi[r].target, ctx.phi[r].source);
  }
  ctx.tor_sheaf_zero = site::sheaf_tor(f, ctx.resolution).is_zero();
  for (const auto& [r, h] : ctx.les.h_tor) ctx.h_tor_sheaf[r + 1] = h.group();
  return ctx;
}

Corollary2Data corollary2_data(const UctContext& ctx, int r) {
  const LesData& L = ctx.les;
  const UctSesData& U = ctx.ses;
  Corollary2Data d;
  d.r = r;
  GroupHom phi_alpha = abgroup::compose(ctx.phi.at(r), U.alpha.at(r));
  d.c1_t0 = U.tensor_groups.at(r);
  d.c1_t1 = L.h_tensor.at(r).group();
  d.c1_t2 = L.h_tor.at(r + 1).group();
  d.c1_m1 = abgroup::compose(L.h.at(r), phi_alpha);
  d.c1_m2 = L.delta.at(r);
  d.c2_u0 = L.h_tensor.at(r - 1).group();
  d.c2_u1 = L.h_tor.at(r).group();
  d.c2_u2 = U.tor_groups.at(r);
  d.c2_n1 = L.delta.at(r - 1);
  d.c2_n2 = abgroup::compose(U.beta.at(r), abgroup::compose(ctx.phi_inv.at(r), L.g.at(r)));
  d.c1_is_complex = abgroup::compose(d.c1_m2, d.c1_m1).is_zero();
  d.c2_is_complex = abgroup::compose(d.c2_n2, d.c2_n1).is_zero();
  d.c1_h_first = abgroup::exactness_at(zero_from_trivial(d.c1_t0), d.c1_m1).homology;
  d.c1_h_middle = abgroup::exactness_at(d.c1_m1, d.c1_m2).homology;
  d.c2_h_middle = abgroup::exactness_at(d.c2_n1, d.c2_n2).homology;
  d.c2_h_last = abgroup::exactness_at(d.c2_n2, zero_to_trivial(d.c2_u2)).homology;

  const FpAbGroup& hk = L.h_derived.at(r).group();
  d.oracle_first = abgroup::intersection(hk, phi_alpha.matrix, L.g.at(r).matrix).group;
  GroupHom both{abgroup::direct_sum(d.c1_t0, d.c2_u1), hk, hstack(phi_alpha.matrix, L.g.at(r).matrix)};
  d.oracle_second = abgroup::cokernel(both).group;
  return d;
}

VerificationReport corollary2(const UctContext& ctx, int r, const Options& opt) {
  VerificationReport rep;
  Corollary2Data d = corollary2_data(ctx, r);
  FpAbGroup oracle_first = d.oracle_first;
  if (opt.wrong_oracle) oracle_first = abgroup::direct_sum(oracle_first, FpAbGroup::cyclic(Integer(2)));
  std::ostringstream trace;
  trace << "complex 1: 0 -> " << factors_text(d.c1_t0) << " -> " << factors_text(d.c1_t1) << " -> "
        << factors_text(d.c1_t2) << "; complex 2: " << factors_text(d.c2_u0) << " -> " << factors_text(d.c2_u1)
        << " -> " << factors_text(d.c2_u2) << " -> 0";
  rep.add("corollary2.complex1", r, d.c1_is_complex, trace.str());
  rep.add("corollary2.complex2", r, d.c2_is_complex, d.c2_is_complex ? "" : "composite is nonzero");
  auto pair = [&](const char* name, const FpAbGroup& a, const FpAbGroup& b) {
    bool ok = abgroup::is_isomorphic(a, b);
    rep.add(name, r, ok, factors_text(a) + " vs " + factors_text(b));
  };
  pair("corollary2.first_pair", d.c1_h_first, d.c2_h_middle);
  pair("corollary2.second_pair", d.c1_h_middle, d.c2_h_last);
  bool o1 = abgroup::is_isomorphic(d.c1_h_first, oracle_first) && abgroup::is_isomorphic(d.c2_h_middle, oracle_first);
  rep.add("corollary2.oracle_first", r, o1, "oracle " + factors_text(oracle_first));
  bool o2 = abgroup::is_isomorphic(d.c1_h_middle, d.oracle_second) && abgroup::is_isomorphic(d.c2_h_last, d.oracle_second);
  rep.add("corollary2.oracle_second", r, o2, "oracle " + factors_text(d.oracle_second));
  return rep;
}

VerificationReport corollary2_split(const UctContext& ctx, int r) {
  VerificationReport rep;
  if (!ctx.tor_sheaf_zero) {
    rep.skip("corollary2split", r, "hypotheses not met");
    return rep;
  }
  const LesData& L = ctx.les;
  const UctSesData& U = ctx.ses;
  const GroupHom& h = L.h.at(r);
  bool h_iso = abgroup::is_isomorphism(h);
  rep.add("corollary2split.tensor_iso", r, h_iso, h_iso ? "" : "H^r(F(x)^L A) -> H^r(F(x)A) is not bijective");
  if (!h_iso) return rep;
  GroupHom first = abgroup::compose(h, abgroup::compose(ctx.phi.at(r), U.alpha.at(r)));
  GroupHom second =
      abgroup::compose(U.beta.at(r), abgroup::compose(ctx.phi_inv.at(r), abgroup::inverse_isomorphism(h)));
  bool inj = abgroup::is_injective(first);
  bool surj = abgroup::is_surjective(second);
  auto mid = abgroup::exactness_at(first, second);
  bool ok = inj && surj && mid.composes_to_zero && mid.exact;
  rep.add("corollary2split.exact", r, ok, ok ? "" : "sequence is not short exact");
  FpAbGroup sum = abgroup::direct_sum(U.tensor_groups.at(r), U.tor_groups.at(r));
  bool split = abgroup::is_isomorphic(h.target, sum);
  rep.add("corollary2split.split", r, split, factors_text(h.target) + " vs " + factors_text(sum));
  return rep;
}

bool corollary3_hypotheses(const UctContext& ctx, int r) {
  return abgroup::is_torsion_free(ctx.ses.h_nerve.at(r + 1).group()) && ctx.les.h_tor.at(r).group().is_trivial();
}

VerificationReport corollary3(const UctContext& ctx, int r) {
  VerificationReport rep;
  if (!corollary3_hypotheses(ctx, r)) {
    rep.skip("corollary3", r, "hypotheses not met");
    return rep;
  }
  const LesData& L = ctx.les;
  GroupHom first = abgroup::compose(L.h.at(r), abgroup::compose(ctx.phi.at(r), ctx.ses.alpha.at(r)));
  bool inj = abgroup::is_injective(first);
  auto mid = abgroup::exactness_at(first, L.delta.at(r));
  rep.add("corollary3.injective", r, inj, inj ? "" : "kernel " + factors_text(abgroup::kernel(first).group));
  bool ok = mid.composes_to_zero && mid.exact;
  rep.add("corollary3.exact_middle", r, ok, ok ? "" : "middle homology " + factors_text(mid.homology));
  return rep;
}

// ---------------------------------------------------------------- projection

VerificationReport projection_check(const site::MonotoneMap& f, const Sheaf& s, const PerfectComplex& c) {
  VerificationReport rep;
  std::string why;
  if (!f.verify(&why)) {
    rep.add("projection.monotone", std::nullopt, false, why);
    return rep;
  }
  site::SheafComplex left_model = cohom::pushforward_model(f, s);
  site::SheafComplex right_model = cohom::pushforward_model(f, site::sheaf_tensor_complex(s, c));
  for (std::size_t y = 0; y < f.target.size(); ++y) {
    const std::string at = "y=" + f.target.name(y);
    std::vector<std::size_t> members = cohom::preimage_of_upset(f, y);
    Sheaf sub = site::restrict_to(s, members);
    FpComplex stalk = left_model.stalk_complex(y);
    bool model = tables_agree(full_table(stalk), full_table(cohom::nerve_complex(sub).complex));
    rep.add("projection.stalk_model " + at, std::nullopt, model, model ? "" : "stalk complex differs from the subposet nerve");

    FpComplex left = chains::tensor_with_free_complex(stalk, c);
    FpComplex right = right_model.stalk_complex(y);
    chains::ChainMap phi = comparison_map(sub, c, left, right);
    bool chain_map = phi.verify(&why);
    chains::QuasiIsoCheck q;
    if (chain_map) q = chains::quasi_iso_check(phi);
    bool ok = chain_map && q.by_induced_maps && q.by_cone;
    std::string detail = chain_map ? "" : why;
    if (!q.failing_degrees.empty()) detail += "failing degree " + std::to_string(q.failing_degrees.front());
    rep.add("projection.quasi_iso " + at, q.failing_degrees.empty() ? std::nullopt : std::optional<int>(q.failing_degrees.front()),
            ok, detail);
  }
  return rep;
}

PerfectComplex random_perfect_complex(std::mt19937_64& rng, int max_length, std::size_t max_rank) {
  PerfectComplex c;
  const int length = static_cast<int>(site::draw(rng, static_cast<std::size_t>(max_length) + 1));
  c.lo = -static_cast<int>(site::draw(rng, static_cast<std::size_t>(length) + 1));
  for (int i = 0; i <= length; ++i) c.ranks.push_back(site::draw(rng, max_rank + 1));
  auto entry = [&] { return Integer(static_cast<long long>(site::draw(rng, 7)) - 3); };
  for (int i = 0; i < length; ++i) {
    const std::size_t rows = c.ranks[static_cast<std::size_t>(i) + 1], cols = c.ranks[static_cast<std::size_t>(i)];
    IntMatrix d(rows, cols);
    if (i == 0) {
      for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t b = 0; b < cols; ++b) d(a, b) = entry();
    } else {
      // Rows drawn from the left kernel of the previous differential.
      IntMatrix kern = exactlin::kernel_basis(c.differentials.back().transpose());
      for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t g = 0; g < kern.cols(); ++g) {
          Integer coeff = entry();
          for (std::size_t b = 0; b < cols; ++b) d(a, b) += coeff * kern(b, g);
        }
    }
    c.differentials.push_back(std::move(d));
  }
  return c;
}

}  // namespace sheafcoh::uct
