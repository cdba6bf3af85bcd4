#include "sheafcoh/abgroup.hpp"

#include <mutex>
#include <sstream>

#include "sheafcoh/errors.hpp"

namespace sheafcoh::abgroup {

using exactlin::LatticeSolver;

struct FpAbGroup::Cache {
  std::once_flag factors_once;
  std::vector<Integer> factors;
  std::once_flag solver_once;
  std::unique_ptr<LatticeSolver> solver;
};

FpAbGroup::FpAbGroup() : rank_(0), relations_(0, 0), cache_(std::make_shared<Cache>()) {}

FpAbGroup::FpAbGroup(std::size_t ambient_rank, IntMatrix relations)
    : rank_(ambient_rank), relations_(std::move(relations)), cache_(std::make_shared<Cache>()) {
  if (relations_.rows() != rank_) {
    if (relations_.cols() == 0) relations_ = IntMatrix(rank_, 0);
    else throw ContractViolation("relation matrix row count differs from ambient rank");
  }
}

FpAbGroup FpAbGroup::free(std::size_t rank) { return FpAbGroup(rank, IntMatrix(rank, 0)); }

FpAbGroup FpAbGroup::cyclic(const Integer& order) {
  if (order.is_zero()) return free(1);
  IntMatrix r(1, 1);
  r(0, 0) = abs(order);
  return FpAbGroup(1, std::move(r));
}

FpAbGroup FpAbGroup::from_invariant_factors(const std::vector<Integer>& factors) {
  std::vector<std::size_t> torsion;
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (!factors[i].is_zero()) torsion.push_back(i);
  IntMatrix r(factors.size(), torsion.size());
  for (std::size_t c = 0; c < torsion.size(); ++c) r(torsion[c], c) = abs(factors[torsion[c]]);
  return FpAbGroup(factors.size(), std::move(r));
}

const std::vector<Integer>& FpAbGroup::invariant_factors() const {
  std::call_once(cache_->factors_once, [this] {
    std::vector<Integer> out;
    std::size_t rk = 0;
    if (relations_.cols() > 0 && rank_ > 0) {
      for (const auto& d : exactlin::smith_diagonal(relations_)) {
        if (d.is_zero()) continue;
        ++rk;
        if (!d.is_one()) out.push_back(d);
      }
    }
    for (std::size_t i = rk; i < rank_; ++i) out.emplace_back(0);
    cache_->factors = std::move(out);
  });
  return cache_->factors;
}

const LatticeSolver& FpAbGroup::relation_solver() const {
  std::call_once(cache_->solver_once, [this] { cache_->solver = std::make_unique<LatticeSolver>(relations_); });
  return *cache_->solver;
}

bool FpAbGroup::is_relation(std::span<const Integer> v) const {
  if (v.size() != rank_) throw ContractViolation("element has wrong ambient length");
  if (is_zero_vector(v)) return true;
  if (relations_.cols() == 0) return false;
  return relation_solver().contains(v);
}

std::string format_factors(const std::vector<Integer>& factors) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "," : "") << factors[i];
  os << ']';
  return os.str();
}

std::string FpAbGroup::describe() const {
  const auto& f = invariant_factors();
  if (f.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) os << " + ";
    if (f[i].is_zero()) os << "Z";
    else os << "Z/" << f[i];
  }
  return os.str();
}

GroupElement add(const GroupElement& a, const GroupElement& b) {
  if (a.vector.size() != b.vector.size()) throw ContractViolation("adding elements of different groups");
  GroupElement r = a;
  for (std::size_t i = 0; i < r.vector.size(); ++i) r.vector[i] += b.vector[i];
  return r;
}

bool equal(const GroupElement& a, const GroupElement& b) {
  if (a.vector.size() != b.vector.size()) throw ContractViolation("comparing elements of different groups");
  IntVector d(a.vector.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.vector[i] - b.vector[i];
  return a.group.is_relation(d);
}

GroupHom GroupHom::identity(const FpAbGroup& g) {
  return {g, g, IntMatrix::identity(g.ambient_rank())};
}

GroupHom GroupHom::zero(const FpAbGroup& source, const FpAbGroup& target) {
  return {source, target, IntMatrix(target.ambient_rank(), source.ambient_rank())};
}

namespace {

void check_shape(const GroupHom& f) {
  if (f.matrix.rows() != f.target.ambient_rank() || f.matrix.cols() != f.source.ambient_rank())
    throw ContractViolation("homomorphism matrix has wrong shape");
}

bool columns_are_relations(const FpAbGroup& g, const IntMatrix& m) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!g.is_relation(m.column(j))) return false;
  return true;
}

void require_well_defined(const GroupHom& f) {
  if (!f.is_well_defined()) throw ContractViolation("homomorphism is not well defined on the presentation");
}

}  // namespace

bool GroupHom::is_well_defined() const {
  check_shape(*this);
  if (source.relations().cols() == 0) return true;
  return columns_are_relations(target, matrix * source.relations());
}

bool GroupHom::is_zero() const {
  check_shape(*this);
  return columns_are_relations(target, matrix);
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
  if (g.source.ambient_rank() != f.target.ambient_rank()) throw ContractViolation("composing incompatible homomorphisms");
  return {f.source, g.target, g.matrix * f.matrix};
}

bool equal(const GroupHom& f, const GroupHom& g) {
  check_shape(f);
  check_shape(g);
  if (f.matrix.rows() != g.matrix.rows() || f.matrix.cols() != g.matrix.cols()) return false;
  return columns_are_relations(f.target, f.matrix - g.matrix);
}

GroupHom negate(const GroupHom& f) { return {f.source, f.target, f.matrix.scaled(Integer(-1))}; }

std::vector<Integer> invariant_factors(const FpAbGroup& g) { return g.invariant_factors(); }

bool is_isomorphic(const FpAbGroup& a, const FpAbGroup& b) {
  return a.invariant_factors() == b.invariant_factors();
}

bool is_torsion_free(const FpAbGroup& g) {
  for (const auto& d : g.invariant_factors())
    if (!d.is_zero()) return false;
  return true;
}

FpAbGroup direct_sum(const FpAbGroup& a, const FpAbGroup& b) {
  return FpAbGroup(a.ambient_rank() + b.ambient_rank(), block_diagonal(a.relations(), b.relations()));
}

FpAbGroup direct_sum(const std::vector<FpAbGroup>& parts) {
  std::size_t n = 0, r = 0;
  for (const auto& p : parts) {
    n += p.ambient_rank();
    r += p.relations().cols();
  }
  IntMatrix rel(n, r);
  std::size_t row = 0, col = 0;
  for (const auto& p : parts) {
    const IntMatrix& pr = p.relations();
    for (std::size_t i = 0; i < pr.rows(); ++i)
      for (std::size_t j = 0; j < pr.cols(); ++j) rel(row + i, col + j) = pr(i, j);
    row += pr.rows();
    col += pr.cols();
  }
  return FpAbGroup(n, std::move(rel));
}

GroupHom direct_sum(const GroupHom& f, const GroupHom& g) {
  return {direct_sum(f.source, g.source), direct_sum(f.target, g.target), block_diagonal(f.matrix, g.matrix)};
}

Subgroup kernel(const GroupHom& f) {
  check_shape(f);
  const std::size_t n = f.source.ambient_rank();
  IntMatrix basis;
  if (f.matrix.is_zero()) {
    basis = IntMatrix::identity(n);
  } else {
    IntMatrix k = exactlin::kernel_basis(hstack(f.matrix, f.target.relations()));
    basis = exactlin::lattice_basis(k.row_range(0, n));
  }
  const std::size_t p = basis.cols();
  const IntMatrix& rel = f.source.relations();
  IntMatrix coords(p, rel.cols());
  if (rel.cols() > 0) {
    bool identity_basis = basis.is_identity();
    std::optional<LatticeSolver> solver;
    if (!identity_basis) solver.emplace(basis);
    for (std::size_t j = 0; j < rel.cols(); ++j) {
      IntVector col = rel.column(j);
      if (identity_basis) {
        coords.set_column(j, col);
        continue;
      }
      auto c = solver->solve(col);
      if (!c) throw ContractViolation("kernel: homomorphism is not well defined");
      coords.set_column(j, *c);
    }
  }
  FpAbGroup k(p, std::move(coords));
  return {k, GroupHom{k, f.source, std::move(basis)}};
}

Subgroup image(const GroupHom& f) {
  Subgroup ker = kernel(f);
  FpAbGroup im(f.source.ambient_rank(), ker.inclusion.matrix);
  return {im, GroupHom{im, f.target, f.matrix}};
}

Quotient cokernel(const GroupHom& f) {
  check_shape(f);
  FpAbGroup q(f.target.ambient_rank(), hstack(f.target.relations(), f.matrix));
  return {q, GroupHom{f.target, q, IntMatrix::identity(f.target.ambient_rank())}};
}

bool is_injective(const GroupHom& f) { return kernel(f).group.is_trivial(); }
bool is_surjective(const GroupHom& f) { return cokernel(f).group.is_trivial(); }
bool is_isomorphism(const GroupHom& f) { return is_injective(f) && is_surjective(f); }

Preimager::Preimager(const GroupHom& f)
    : source_rank_(f.source.ambient_rank()), solver_(hstack(f.matrix, f.target.relations())) {
  check_shape(f);
}

std::optional<IntVector> Preimager::operator()(std::span<const Integer> y) const {
  auto sol = solver_.solve(y);
  if (!sol) return std::nullopt;
  sol->resize(source_rank_);
  return sol;
}

std::optional<GroupElement> preimage_element(const GroupHom& f, const GroupElement& y) {
  require_well_defined(f);
  auto x = Preimager(f)(y.vector);
  if (!x) return std::nullopt;
  return GroupElement{f.source, std::move(*x)};
}

GroupHom inverse_isomorphism(const GroupHom& f) {
  if (!is_isomorphism(f)) throw ContractViolation("inverse requested for a non-isomorphism");
  const std::size_t n = f.target.ambient_rank();
  IntMatrix inv(f.source.ambient_rank(), n);
  Preimager pre(f);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = pre(unit_vector(n, i));
    if (!x) throw ContractViolation("inverse: surjectivity check inconsistent");
    inv.set_column(i, *x);
  }
  return {f.target, f.source, std::move(inv)};
}

Subgroup subgroup_generated(const FpAbGroup& g, const IntMatrix& gens) {
  return image(GroupHom{FpAbGroup::free(gens.cols()), g, gens});
}

Subgroup intersection(const FpAbGroup& g, const IntMatrix& gens1, const IntMatrix& gens2) {
  const std::size_t k1 = gens1.cols();
  IntMatrix stacked = hstack(hstack(gens1, gens2.scaled(Integer(-1))), g.relations());
  IntMatrix k = exactlin::kernel_basis(stacked);
  IntMatrix coeffs = k.row_range(0, k1);
  return subgroup_generated(g, gens1 * coeffs);
}

Simplified simplify(const FpAbGroup& g) {
  const std::size_t n = g.ambient_rank();
  const IntMatrix& rel = g.relations();
  auto snf = exactlin::smith_normal_form(rel, {.track_left = true, .track_right = false, .track_inverses = true});
  std::vector<std::size_t> keep;
  std::vector<Integer> orders;
  for (std::size_t i = 0; i < n; ++i) {
    Integer d = (i < rel.cols()) ? snf.S(i, i) : Integer(0);
    if (d.is_one()) continue;
    keep.push_back(i);
    orders.push_back(d);
  }
  FpAbGroup s = FpAbGroup::from_invariant_factors(orders);
  GroupHom to{g, s, snf.U.select_rows(keep)};
  GroupHom from{s, g, snf.U_inv.select_cols(keep)};
  return {s, std::move(to), std::move(from)};
}

FreeResolution free_resolution(const FpAbGroup& a) {
  FreeResolution r;
  r.k = a.ambient_rank();
  r.R = a.relations().cols() == 0 ? IntMatrix(r.k, 0) : exactlin::lattice_basis(a.relations());
  r.m = r.R.cols();
  return r;
}

FreeResolution minimal_free_resolution(const FpAbGroup& a) {
  Simplified s = simplify(a);
  return free_resolution(s.group);
}

FpAbGroup resolved_group(const FreeResolution& r) { return FpAbGroup(r.k, r.R); }

FpAbGroup tensor(const FpAbGroup& g, const FpAbGroup& h) {
  const std::size_t ng = g.ambient_rank(), nh = h.ambient_rank();
  IntMatrix rel = hstack(kronecker(g.relations(), IntMatrix::identity(nh)),
                         kronecker(IntMatrix::identity(ng), h.relations()));
  return FpAbGroup(ng * nh, std::move(rel));
}

TorData tor_data(const FpAbGroup& g, const FreeResolution& res) {
  FpAbGroup src = tensor(g, FpAbGroup::free(res.m));
  FpAbGroup dst = tensor(g, FpAbGroup::free(res.k));
  GroupHom d{src, dst, kronecker(IntMatrix::identity(g.ambient_rank()), res.R)};
  return {res, kernel(d)};
}

FpAbGroup tor(const FpAbGroup& g, const FpAbGroup& a) { return tor_data(g, free_resolution(a)).tor.group; }

GroupHom induced_on_tensor(const GroupHom& f, const FpAbGroup& a) {
  require_well_defined(f);
  const std::size_t na = a.ambient_rank();
  return {tensor(f.source, a), tensor(f.target, a), kronecker(f.matrix, IntMatrix::identity(na))};
}

GroupHom induced_on_tor(const GroupHom& f, const TorData& src, const TorData& dst) {
  require_well_defined(f);
  const std::size_t m = src.resolution.m;
  IntMatrix pushed = kronecker(f.matrix, IntMatrix::identity(m)) * src.tor.inclusion.matrix;
  const IntMatrix& basis = dst.tor.inclusion.matrix;
  IntMatrix out(basis.cols(), pushed.cols());
  if (basis.cols() > 0 && pushed.cols() > 0) {
    LatticeSolver solver(basis);
    for (std::size_t j = 0; j < pushed.cols(); ++j) {
      auto c = solver.solve(pushed.column(j));
      if (!c) throw ContractViolation("induced_on_tor: image left the Tor lattice");
      out.set_column(j, *c);
    }
  }
  return {src.tor.group, dst.tor.group, std::move(out)};
}

GroupHom induced_on_tor(const GroupHom& f, const FreeResolution& res) {
  return induced_on_tor(f, tor_data(f.source, res), tor_data(f.target, res));
}

GroupHom induced_on_tor(const GroupHom& f, const FpAbGroup& a) { return induced_on_tor(f, free_resolution(a)); }

ExactnessResult exactness_at(const GroupHom& f, const GroupHom& g) {
  check_shape(f);
  check_shape(g);
  ExactnessResult out;
  GroupHom gf = compose(g, f);
  out.composes_to_zero = gf.is_zero();
  if (!out.composes_to_zero) return out;
  Subgroup ker = kernel(g);
  const IntMatrix& basis = ker.inclusion.matrix;
  IntMatrix lifted(basis.cols(), f.matrix.cols());
  if (basis.cols() > 0 && f.matrix.cols() > 0) {
    bool identity_basis = basis.is_identity();
    std::optional<LatticeSolver> solver;
    if (!identity_basis) solver.emplace(basis);
    for (std::size_t j = 0; j < f.matrix.cols(); ++j) {
      IntVector col = f.matrix.column(j);
      if (identity_basis) {
        lifted.set_column(j, col);
        continue;
      }
      auto c = solver->solve(col);
      if (!c) throw ContractViolation("exactness_at: image not inside kernel lattice");
      lifted.set_column(j, *c);
    }
  }
  out.homology = FpAbGroup(basis.cols(), hstack(ker.group.relations(), lifted));
  out.exact = out.homology.is_trivial();
  return out;
}

}  // namespace sheafcoh::abgroup
