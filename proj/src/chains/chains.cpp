#include "sheafcoh/chains.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <sstream>

#include "sheafcoh/errors.hpp"

namespace sheafcoh::chains {

using abgroup::ExactnessResult;
using exactlin::LatticeSolver;

namespace {

const FpAbGroup& zero_group() {
  static const FpAbGroup kZero;
  return kZero;
}

std::string degree_msg(const char* what, int n) {
  std::ostringstream os;
  os << what << " at degree " << n;
  return os.str();
}

void fail(std::string* why, const std::string& msg) {
  if (why) *why = msg;
}

}  // namespace

// ---------------------------------------------------------------- FpComplex

FpComplex::FpComplex(int lo, std::vector<FpAbGroup> terms, std::vector<IntMatrix> differentials)
    : lo_(lo), terms_(std::move(terms)), diffs_(std::move(differentials)) {
  if (diffs_.size() + 1 == terms_.size()) diffs_.emplace_back(0, terms_.back().ambient_rank());
  if (diffs_.size() != terms_.size()) throw ContractViolation("complex: differential count mismatch");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    std::size_t target = i + 1 < terms_.size() ? terms_[i + 1].ambient_rank() : 0;
    if (i + 1 == terms_.size() && diffs_[i].rows() != 0) {
      if (!diffs_[i].is_zero()) throw ContractViolation("complex: top differential must vanish");
      diffs_[i] = IntMatrix(0, terms_[i].ambient_rank());
    }
    if (diffs_[i].rows() != target || diffs_[i].cols() != terms_[i].ambient_rank())
      throw ContractViolation(degree_msg("complex: differential shape mismatch", lo_ + static_cast<int>(i)));
  }
}

const FpAbGroup& FpComplex::term(int n) const {
  if (!in_support(n)) return zero_group();
  return terms_[static_cast<std::size_t>(n - lo_)];
}

IntMatrix FpComplex::differential_matrix(int n) const {
  if (in_support(n)) return diffs_[static_cast<std::size_t>(n - lo_)];
  return IntMatrix(term(n + 1).ambient_rank(), term(n).ambient_rank());
}

GroupHom FpComplex::differential(int n) const { return GroupHom{term(n), term(n + 1), differential_matrix(n)}; }

bool FpComplex::verify(std::string* why) const {
  for (int n = lo(); n <= hi(); ++n) {
    GroupHom d = differential(n);
    if (!d.is_well_defined()) {
      fail(why, degree_msg("differential not well defined", n));
      return false;
    }
    GroupHom dd = abgroup::compose(differential(n + 1), d);
    if (!dd.is_zero()) {
      fail(why, degree_msg("d o d != 0", n));
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- FreeComplex

std::size_t FreeComplex::rank(int n) const {
  if (n < lo || n > hi()) return 0;
  return ranks[static_cast<std::size_t>(n - lo)];
}

IntMatrix FreeComplex::differential(int n) const {
  if (n >= lo && n < hi()) return differentials[static_cast<std::size_t>(n - lo)];
  return IntMatrix(rank(n + 1), rank(n));
}

FpComplex FreeComplex::as_complex() const {
  std::vector<FpAbGroup> terms;
  std::vector<IntMatrix> diffs;
  for (int n = lo; n <= hi(); ++n) {
    terms.push_back(FpAbGroup::free(rank(n)));
    diffs.push_back(differential(n));
  }
  return FpComplex(lo, std::move(terms), std::move(diffs));
}

bool FreeComplex::verify(std::string* why) const {
  if (!ranks.empty() && differentials.size() + 1 != ranks.size()) {
    fail(why, "perfect complex: need one differential between consecutive terms");
    return false;
  }
  for (int n = lo; n < hi(); ++n) {
    const IntMatrix& d = differentials[static_cast<std::size_t>(n - lo)];
    if (d.rows() != rank(n + 1) || d.cols() != rank(n)) {
      fail(why, degree_msg("perfect complex: differential shape mismatch", n));
      return false;
    }
  }
  for (int n = lo; n + 1 < hi(); ++n) {
    if (!(differential(n + 1) * differential(n)).is_zero()) {
      fail(why, degree_msg("perfect complex: d o d != 0", n));
      return false;
    }
  }
  return true;
}

FreeComplex FreeComplex::unit() { return FreeComplex{0, {1}, {}}; }

// ---------------------------------------------------------------- ChainMap

IntMatrix ChainMap::component_matrix(int n) const {
  auto it = components.find(n);
  if (it != components.end()) return it->second;
  return IntMatrix(target.term(n).ambient_rank(), source.term(n).ambient_rank());
}

GroupHom ChainMap::component(int n) const { return GroupHom{source.term(n), target.term(n), component_matrix(n)}; }

bool ChainMap::verify(std::string* why) const {
  for (const auto& [n, m] : components) {
    if (m.rows() != target.term(n).ambient_rank() || m.cols() != source.term(n).ambient_rank()) {
      fail(why, degree_msg("chain map component has wrong shape", n));
      return false;
    }
  }
  int lo = std::min(source.lo(), target.lo()) - 1;
  int hi = std::max(source.hi(), target.hi());
  for (int n = lo; n <= hi; ++n) {
    GroupHom phi = component(n);
    if (!phi.is_well_defined()) {
      fail(why, degree_msg("chain map component not well defined", n));
      return false;
    }
    GroupHom left = abgroup::compose(target.differential(n), phi);
    GroupHom right = abgroup::compose(component(n + 1), source.differential(n));
    if (!abgroup::equal(left, right)) {
      fail(why, degree_msg("chain map square does not commute", n));
      return false;
    }
  }
  return true;
}

ChainMap ChainMap::identity(const FpComplex& c) {
  ChainMap id{c, c, {}};
  for (int n = c.lo(); n <= c.hi(); ++n) id.components[n] = IntMatrix::identity(c.term(n).ambient_rank());
  return id;
}

// ---------------------------------------------------------------- Cohomology

struct Cohomology::Cycles {
  IntMatrix basis;
  bool identity = false;
  std::unique_ptr<LatticeSolver> solver;

  std::optional<IntVector> coords(std::span<const Integer> z) const {
    if (identity) return IntVector(z.begin(), z.end());
    if (basis.cols() == 0) {
      if (is_zero_vector(z)) return IntVector{};
      return std::nullopt;
    }
    return solver->solve(z);
  }
};

Cohomology cohomology(const FpComplex& c, int n) {
  Cohomology h;
  h.degree_ = n;
  const FpAbGroup& g = c.term(n);
  const std::size_t a = g.ambient_rank();
  auto cycles = std::make_shared<Cohomology::Cycles>();

  IntMatrix d = c.differential_matrix(n);
  if (a == 0 || d.rows() == 0 || d.is_zero()) {
    cycles->basis = IntMatrix::identity(a);
    cycles->identity = true;
  } else {
    IntMatrix k = exactlin::kernel_basis(hstack(d, c.term(n + 1).relations()));
    cycles->basis = exactlin::lattice_basis(k.row_range(0, a));
    cycles->identity = cycles->basis.is_identity();
    if (!cycles->identity) cycles->solver = std::make_unique<LatticeSolver>(cycles->basis);
  }
  const std::size_t p = cycles->basis.cols();

  IntMatrix bounds = hstack(c.differential_matrix(n - 1), g.relations());
  IntMatrix w(p, bounds.cols());
  for (std::size_t j = 0; j < bounds.cols(); ++j) {
    IntVector col = bounds.column(j);
    if (is_zero_vector(col)) continue;
    auto x = cycles->coords(col);
    if (!x) throw ContractViolation(degree_msg("cohomology: boundary is not a cycle (d o d != 0)", n));
    w.set_column(j, *x);
  }

  auto snf = exactlin::smith_normal_form(w, {.track_left = true, .track_right = false, .track_inverses = true});
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < p; ++i) {
    Integer di = i < w.cols() ? snf.S(i, i) : Integer(0);
    if (di.is_one()) continue;
    keep.push_back(i);
    h.orders_.push_back(di);
  }
  h.group_ = FpAbGroup::from_invariant_factors(h.orders_);
  h.section_ = cycles->basis * snf.U_inv.select_cols(keep);
  h.classify_rows_ = snf.U.select_rows(keep);
  h.cycles_ = std::move(cycles);
  return h;
}

IntVector Cohomology::section(std::span<const Integer> class_coords) const {
  if (class_coords.size() != section_.cols()) throw ContractViolation("section: wrong class coordinate length");
  return section_ * class_coords;
}

bool Cohomology::is_cocycle(std::span<const Integer> z) const {
  if (z.size() != section_.rows()) return false;
  return cycles_->coords(z).has_value();
}

IntVector Cohomology::reduce(IntVector y) const {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!orders_[i].is_zero()) y[i] = mod_euclid(y[i], orders_[i]);
  return y;
}

IntVector Cohomology::classify(std::span<const Integer> z) const {
  if (z.size() != section_.rows()) throw ContractViolation("classify: wrong cochain length");
  auto c = cycles_->coords(z);
  if (!c) throw ContractViolation(degree_msg("classify: not a cocycle", degree_));
  return reduce(classify_rows_ * std::span<const Integer>(*c));
}

bool Cohomology::is_coboundary(std::span<const Integer> z) const { return is_zero_vector(classify(z)); }

// ---------------------------------------------------------------- maps on H

GroupHom induced_on_cohomology(const ChainMap& phi, int n, const Cohomology& src, const Cohomology& dst) {
  IntMatrix comp = phi.component_matrix(n);
  const std::size_t h = src.group().ambient_rank();
  IntMatrix m(dst.group().ambient_rank(), h);
  for (std::size_t i = 0; i < h; ++i) {
    IntVector z = src.section_matrix().column(i);
    m.set_column(i, dst.classify(comp * std::span<const Integer>(z)));
  }
  return GroupHom{src.group(), dst.group(), std::move(m)};
}

GroupHom induced_on_cohomology(const ChainMap& phi, int n) {
  return induced_on_cohomology(phi, n, cohomology(phi.source, n), cohomology(phi.target, n));
}

FpComplex cone(const ChainMap& phi) {
  const FpComplex& s = phi.source;
  const FpComplex& t = phi.target;
  if (s.empty() && t.empty()) return FpComplex();
  int lo = std::min(s.empty() ? t.lo() : s.lo() - 1, t.empty() ? s.lo() - 1 : t.lo());
  int hi = std::max(s.empty() ? t.hi() : s.hi() - 1, t.empty() ? s.hi() - 1 : t.hi());
  std::vector<FpAbGroup> terms;
  std::vector<IntMatrix> diffs;
  for (int n = lo; n <= hi; ++n) terms.push_back(abgroup::direct_sum(s.term(n + 1), t.term(n)));
  for (int n = lo; n <= hi; ++n) {
    IntMatrix ds = s.differential_matrix(n + 1).scaled(Integer(-1));
    IntMatrix top = hstack(ds, IntMatrix(ds.rows(), t.term(n).ambient_rank()));
    IntMatrix bottom = hstack(phi.component_matrix(n + 1), t.differential_matrix(n));
    IntMatrix d = vstack(top, bottom);
    if (n == hi) d = IntMatrix(0, terms.back().ambient_rank());
    diffs.push_back(std::move(d));
  }
  return FpComplex(lo, std::move(terms), std::move(diffs));
}

FpComplex shift(const FpComplex& c, int k) {
  std::vector<FpAbGroup> terms;
  std::vector<IntMatrix> diffs;
  Integer sign = (k % 2 == 0) ? 1 : -1;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    terms.push_back(c.term(n));
    diffs.push_back(c.differential_matrix(n).scaled(sign));
  }
  if (!diffs.empty()) diffs.back() = IntMatrix(0, terms.back().ambient_rank());
  return FpComplex(c.lo() - k, std::move(terms), std::move(diffs));
}

FpComplex direct_sum(const FpComplex& a, const FpComplex& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  std::vector<FpAbGroup> terms;
  std::vector<IntMatrix> diffs;
  for (int n = lo; n <= hi; ++n) {
    terms.push_back(abgroup::direct_sum(a.term(n), b.term(n)));
    diffs.push_back(n == hi ? IntMatrix(0, terms.back().ambient_rank())
                            : block_diagonal(a.differential_matrix(n), b.differential_matrix(n)));
  }
  return FpComplex(lo, std::move(terms), std::move(diffs));
}

bool is_acyclic(const FpComplex& c) {
  for (int n = c.lo(); n <= c.hi(); ++n)
    if (!cohomology(c, n).group().is_trivial()) return false;
  return true;
}

QuasiIsoCheck quasi_iso_check(const ChainMap& phi) {
  QuasiIsoCheck out;
  out.by_induced_maps = true;
  const FpComplex& s = phi.source;
  const FpComplex& t = phi.target;
  int lo = std::min(s.empty() ? t.lo() : s.lo(), t.empty() ? s.lo() : t.lo());
  int hi = std::max(s.empty() ? t.hi() : s.hi(), t.empty() ? s.hi() : t.hi());
  for (int n = lo; n <= hi; ++n) {
    if (!abgroup::is_isomorphism(induced_on_cohomology(phi, n))) {
      out.by_induced_maps = false;
      out.failing_degrees.push_back(n);
    }
  }
  out.by_cone = is_acyclic(cone(phi));
  return out;
}

bool is_quasi_iso(const ChainMap& phi) {
  QuasiIsoCheck q = quasi_iso_check(phi);
  if (q.by_induced_maps != q.by_cone) throw ContractViolation("quasi-isomorphism criteria disagree");
  return q.by_induced_maps;
}

// ---------------------------------------------------------------- totals

void Bicomplex::set_group(int p, int q, FpAbGroup g) { groups_[{p, q}] = std::move(g); }
void Bicomplex::set_horizontal(int p, int q, IntMatrix m) { horizontal_[{p, q}] = std::move(m); }
void Bicomplex::set_vertical(int p, int q, IntMatrix m) { vertical_[{p, q}] = std::move(m); }

const FpAbGroup& Bicomplex::group(int p, int q) const {
  auto it = groups_.find({p, q});
  return it == groups_.end() ? zero_group() : it->second;
}

namespace {

IntMatrix lookup(const std::map<std::pair<int, int>, IntMatrix>& maps, int p, int q, std::size_t rows, std::size_t cols) {
  auto it = maps.find({p, q});
  if (it == maps.end()) return IntMatrix(rows, cols);
  if (it->second.rows() != rows || it->second.cols() != cols)
    throw ContractViolation("bicomplex map has wrong shape");
  return it->second;
}

}  // namespace

bool Bicomplex::commutes(std::string* why) const {
  for (const auto& [key, g] : groups_) {
    auto [p, q] = key;
    const FpAbGroup& right = group(p + 1, q);
    const FpAbGroup& up = group(p, q + 1);
    const FpAbGroup& diag = group(p + 1, q + 1);
    IntMatrix h = lookup(horizontal_, p, q, right.ambient_rank(), g.ambient_rank());
    IntMatrix v = lookup(vertical_, p, q, up.ambient_rank(), g.ambient_rank());
    IntMatrix h_up = lookup(horizontal_, p, q + 1, diag.ambient_rank(), up.ambient_rank());
    IntMatrix v_right = lookup(vertical_, p + 1, q, diag.ambient_rank(), right.ambient_rank());
    GroupHom a{g, diag, v_right * h};
    GroupHom b{g, diag, h_up * v};
    if (!abgroup::equal(a, b)) {
      std::ostringstream os;
      os << "bicomplex square at (" << p << "," << q << ") does not commute";
      fail(why, os.str());
      return false;
    }
  }
  return true;
}

FpComplex Bicomplex::total() const {
  if (groups_.empty()) return FpComplex();
  int lo = INT_MAX, hi = INT_MIN;
  for (const auto& [key, g] : groups_) {
    lo = std::min(lo, key.first + key.second);
    hi = std::max(hi, key.first + key.second);
  }
  // blocks[n - lo]: (p, q) with ascending q and ambient offsets.
  struct Block {
    int p, q;
    std::size_t offset;
  };
  std::vector<std::vector<Block>> blocks(static_cast<std::size_t>(hi - lo + 1));
  std::vector<std::size_t> sizes(blocks.size(), 0);
  std::vector<std::vector<FpAbGroup>> parts(blocks.size());
  std::vector<std::pair<int, int>> keys;
  for (const auto& [key, g] : groups_) keys.push_back(key);
  std::sort(keys.begin(), keys.end(), [](auto a, auto b) { return a.second != b.second ? a.second < b.second : a.first < b.first; });
  for (auto [p, q] : keys) {
    std::size_t idx = static_cast<std::size_t>(p + q - lo);
    const FpAbGroup& g = group(p, q);
    blocks[idx].push_back({p, q, sizes[idx]});
    sizes[idx] += g.ambient_rank();
    parts[idx].push_back(g);
  }
  std::vector<FpAbGroup> terms;
  for (auto& pv : parts) terms.push_back(abgroup::direct_sum(pv));

  auto find_block = [&](int n, int p, int q) -> const Block* {
    if (n < lo || n > hi) return nullptr;
    for (const auto& b : blocks[static_cast<std::size_t>(n - lo)])
      if (b.p == p && b.q == q) return &b;
    return nullptr;
  };

  std::vector<IntMatrix> diffs;
  for (int n = lo; n <= hi; ++n) {
    std::size_t idx = static_cast<std::size_t>(n - lo);
    std::size_t rows = n < hi ? sizes[idx + 1] : 0;
    IntMatrix d(rows, sizes[idx]);
    if (n < hi) {
      for (const auto& b : blocks[idx]) {
        const FpAbGroup& g = group(b.p, b.q);
        auto place = [&](const Block* tb, const IntMatrix& m, bool negate) {
          if (!tb) return;
          for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
              if (m(i, j).is_zero()) continue;
              Integer v = m(i, j);
              if (negate) v.negate();
              d(tb->offset + i, b.offset + j) = v;
            }
        };
        if (const Block* hb = find_block(n + 1, b.p + 1, b.q)) {
          place(hb, lookup(horizontal_, b.p, b.q, group(b.p + 1, b.q).ambient_rank(), g.ambient_rank()), false);
        }
        if (const Block* vb = find_block(n + 1, b.p, b.q + 1)) {
          bool odd = (b.p % 2) != 0;
          place(vb, lookup(vertical_, b.p, b.q, group(b.p, b.q + 1).ambient_rank(), g.ambient_rank()), odd);
        }
      }
    }
    diffs.push_back(std::move(d));
  }
  return FpComplex(lo, std::move(terms), std::move(diffs));
}

FpComplex total_of_two_row(const TwoRowBicomplex& b) {
  std::string why;
  if (!b.vertical.verify(&why)) throw ContractViolation("total_of_two_row: " + why);
  Bicomplex bc;
  auto add_row = [&](const FpComplex& row, int q) {
    for (int p = row.lo(); p <= row.hi(); ++p) {
      bc.set_group(p, q, row.term(p));
      if (p < row.hi()) bc.set_horizontal(p, q, row.differential_matrix(p));
    }
  };
  add_row(b.top, -1);
  add_row(b.bottom, 0);
  for (const auto& [p, m] : b.vertical.components) {
    if (b.top.in_support(p) && b.bottom.in_support(p)) bc.set_vertical(p, -1, m);
  }
  return bc.total();
}

FpComplex tensor_with_free_complex(const FpComplex& c, const FreeComplex& p) {
  std::string why;
  if (!p.verify(&why)) throw ContractViolation("tensor_with_free_complex: " + why);
  Bicomplex bc;
  for (int i = c.lo(); i <= c.hi(); ++i) {
    const std::size_t a = c.term(i).ambient_rank();
    for (int q = p.lo; q <= p.hi(); ++q) {
      const std::size_t r = p.rank(q);
      bc.set_group(i, q, abgroup::tensor(c.term(i), FpAbGroup::free(r)));
      if (i < c.hi()) bc.set_horizontal(i, q, kronecker(c.differential_matrix(i), IntMatrix::identity(r)));
      if (q < p.hi()) bc.set_vertical(i, q, kronecker(IntMatrix::identity(a), p.differential(q)));
    }
  }
  return bc.total();
}

FpComplex tensor_with_free_complex(const FpComplex& c, const FpComplex& p) {
  FreeComplex fc;
  fc.lo = p.lo();
  for (int n = p.lo(); n <= p.hi(); ++n) {
    const FpAbGroup& t = p.term(n);
    if (!t.relations().is_zero()) throw ContractViolation("tensor_with_free_complex: second complex is not free");
    fc.ranks.push_back(t.ambient_rank());
    if (n < p.hi()) fc.differentials.push_back(p.differential_matrix(n));
  }
  return tensor_with_free_complex(c, fc);
}

// ---------------------------------------------------------------- SES / LES

bool ShortExactSequence::verify(std::string* why) const {
  if (!inclusion.verify(why) || !projection.verify(why)) return false;
  const FpComplex& mid = inclusion.target;
  const FpComplex& sub = inclusion.source;
  const FpComplex& quot = projection.target;
  int lo = std::min({sub.empty() ? mid.lo() : sub.lo(), mid.lo(), quot.empty() ? mid.lo() : quot.lo()});
  int hi = std::max({sub.empty() ? mid.hi() : sub.hi(), mid.hi(), quot.empty() ? mid.hi() : quot.hi()});
  for (int n = lo; n <= hi; ++n) {
    GroupHom i = inclusion.component(n);
    GroupHom p = projection.component(n);
    if (!abgroup::is_injective(i)) {
      fail(why, degree_msg("SES: inclusion not injective", n));
      return false;
    }
    if (!abgroup::is_surjective(p)) {
      fail(why, degree_msg("SES: projection not surjective", n));
      return false;
    }
    if (!abgroup::exactness_at(i, p).exact) {
      fail(why, degree_msg("SES: not exact in the middle", n));
      return false;
    }
  }
  return true;
}

GroupHom connecting_map(const ShortExactSequence& ses, int n, const Cohomology& quot_n, const Cohomology& sub_n1) {
  const FpComplex& mid = ses.inclusion.target;
  abgroup::Preimager lift(ses.projection.component(n));
  abgroup::Preimager pull(ses.inclusion.component(n + 1));
  IntMatrix d = mid.differential_matrix(n);
  const std::size_t h = quot_n.group().ambient_rank();
  IntMatrix m(sub_n1.group().ambient_rank(), h);
  for (std::size_t i = 0; i < h; ++i) {
    IntVector z = quot_n.section_matrix().column(i);
    auto x = lift(z);
    if (!x) throw ContractViolation(degree_msg("connecting map: projection not surjective", n));
    IntVector y = d * std::span<const Integer>(*x);
    auto w = pull(y);
    if (!w) throw ContractViolation(degree_msg("connecting map: sequence not exact", n + 1));
    m.set_column(i, sub_n1.classify(*w));
  }
  return GroupHom{quot_n.group(), sub_n1.group(), std::move(m)};
}

GroupHom connecting_map(const ShortExactSequence& ses, int n) {
  return connecting_map(ses, n, cohomology(ses.projection.target, n), cohomology(ses.inclusion.source, n + 1));
}

std::vector<LesSpot> long_exact_sequence_check(const ShortExactSequence& ses, int lo, int hi) {
  const FpComplex& sub = ses.inclusion.source;
  const FpComplex& mid = ses.inclusion.target;
  const FpComplex& quot = ses.projection.target;
  std::map<int, Cohomology> hs, hm, hq;
  for (int n = lo; n <= hi + 1; ++n) {
    hs[n] = cohomology(sub, n);
    hm[n] = cohomology(mid, n);
    hq[n] = cohomology(quot, n);
  }
  std::map<int, GroupHom> ist, pst, delta;
  for (int n = lo; n <= hi + 1; ++n) {
    ist[n] = induced_on_cohomology(ses.inclusion, n, hs[n], hm[n]);
    pst[n] = induced_on_cohomology(ses.projection, n, hm[n], hq[n]);
  }
  for (int n = lo; n <= hi; ++n) delta[n] = connecting_map(ses, n, hq[n], hs[n + 1]);
  std::vector<LesSpot> out;
  for (int n = lo; n <= hi; ++n) {
    out.push_back({"H^" + std::to_string(n) + "(mid)", n, abgroup::exactness_at(ist[n], pst[n])});
    out.push_back({"H^" + std::to_string(n) + "(quot)", n, abgroup::exactness_at(pst[n], delta[n])});
    out.push_back({"H^" + std::to_string(n + 1) + "(sub)", n + 1, abgroup::exactness_at(delta[n], ist[n + 1])});
  }
  return out;
}

}  // namespace sheafcoh::chains
