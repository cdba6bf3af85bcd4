#include "sheafcoh/site.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "sheafcoh/errors.hpp"

namespace sheafcoh::site {

namespace {

void fail(std::string* why, const std::string& msg) {
  if (why) *why = msg;
}

}  // namespace

// ---------------------------------------------------------------- Poset

Poset Poset::from_relations(std::vector<std::string> names,
                            const std::vector<std::pair<std::size_t, std::size_t>>& relations,
                            std::size_t max_elements) {
  const std::size_t n = names.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (auto [a, b] : relations) {
    if (a >= n || b >= n) throw InputError("relation refers to an unknown element");
    leq[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq[k][j]) leq[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq[i][j] && leq[j][i]) throw InputError("relations contain a cycle through " + names[i] + " and " + names[j]);
  return from_closed(std::move(names), std::move(leq), max_elements);
}

Poset Poset::from_closed(std::vector<std::string> names, std::vector<std::vector<bool>> leq, std::size_t max_elements) {
  const std::size_t n = names.size();
  if (n > max_elements) throw InputError("poset has " + std::to_string(n) + " elements, bound is " + std::to_string(max_elements));
  if (leq.size() != n) throw InputError("order relation has wrong size");
  Poset p;
  p.names_ = std::move(names);
  p.leq_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (leq[i].size() != n) throw InputError("order relation has wrong size");
    for (std::size_t j = 0; j < n; ++j) p.leq_[i * n + j] = leq[i][j] ? 1 : 0;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (p.names_[i] == p.names_[j]) throw InputError("duplicate element name " + p.names_[i]);
  if (auto v = validate(p)) throw InputError(*v);
  return p;
}

Poset Poset::chain(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (std::size_t j = i; j < n; ++j) leq[i][j] = true;
  }
  return from_closed(std::move(names), std::move(leq), std::max(n, kDefaultMaxElements));
}

Poset Poset::antichain(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("e" + std::to_string(i));
    leq[i][i] = true;
  }
  return from_closed(std::move(names), std::move(leq), std::max(n, kDefaultMaxElements));
}

std::optional<std::size_t> Poset::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> Poset::covers() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (!lt(x, y)) continue;
      bool between = false;
      for (std::size_t z = 0; z < n && !between; ++z) between = lt(x, z) && lt(z, y);
      if (!between) out.emplace_back(x, y);
    }
  return out;
}

std::vector<std::size_t> Poset::up_set(std::size_t x) const {
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < size(); ++y)
    if (leq(x, y)) out.push_back(y);
  return out;
}

std::vector<std::size_t> Poset::down_set(std::size_t x) const {
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < size(); ++y)
    if (leq(y, x)) out.push_back(y);
  return out;
}

int Poset::height() const {
  const std::size_t n = size();
  if (n == 0) return -1;
  // longest[x] = length of the longest strict chain ending at x.
  std::vector<int> longest(n, -1);
  std::function<int(std::size_t)> visit = [&](std::size_t x) {
    if (longest[x] >= 0) return longest[x];
    int best = 0;
    for (std::size_t z = 0; z < n; ++z)
      if (lt(z, x)) best = std::max(best, visit(z) + 1);
    return longest[x] = best;
  };
  int h = 0;
  for (std::size_t x = 0; x < n; ++x) h = std::max(h, visit(x));
  return h;
}

std::optional<std::size_t> Poset::minimum() const {
  for (std::size_t x = 0; x < size(); ++x) {
    bool all = true;
    for (std::size_t y = 0; y < size() && all; ++y) all = leq(x, y);
    if (all) return x;
  }
  return std::nullopt;
}

bool Poset::is_connected() const {
  const std::size_t n = size();
  if (n == 0) return true;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t y = 0; y < n; ++y)
      if (!seen[y] && (leq(x, y) || leq(y, x))) {
        seen[y] = true;
        stack.push_back(y);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

Poset Poset::subposet(const std::vector<std::size_t>& elements) const {
  Poset p;
  const std::size_t k = elements.size();
  p.leq_.assign(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    p.names_.push_back(names_[elements[i]]);
    for (std::size_t j = 0; j < k; ++j) p.leq_[i * k + j] = leq(elements[i], elements[j]) ? 1 : 0;
  }
  return p;
}

std::optional<std::string> validate(const Poset& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!x.leq(i, i)) return "order is not reflexive at " + x.name(i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && x.leq(i, j) && x.leq(j, i)) return "order is not antisymmetric at " + x.name(i) + ", " + x.name(j);
      for (std::size_t k = 0; k < n; ++k)
        if (x.leq(i, j) && x.leq(j, k) && !x.leq(i, k))
          return "order is not transitive at " + x.name(i) + " <= " + x.name(j) + " <= " + x.name(k);
    }
  return std::nullopt;
}

std::vector<Chain> strict_chains(const Poset& x, int n) {
  std::vector<Chain> out;
  if (n < 0) return out;
  Chain cur;
  std::function<void()> extend = [&] {
    if (static_cast<int>(cur.size()) == n + 1) {
      out.push_back(cur);
      return;
    }
    for (std::size_t y = 0; y < x.size(); ++y) {
      if (!cur.empty() && !x.lt(cur.back(), y)) continue;
      cur.push_back(y);
      extend();
      cur.pop_back();
    }
  };
  extend();
  return out;
}

// ---------------------------------------------------------------- MonotoneMap

bool MonotoneMap::verify(std::string* why) const {
  if (assignment.size() != source.size()) {
    fail(why, "monotone map: assignment size differs from source size");
    return false;
  }
  for (std::size_t v : assignment)
    if (v >= target.size()) {
      fail(why, "monotone map: value outside target");
      return false;
    }
  for (std::size_t x = 0; x < source.size(); ++x)
    for (std::size_t y = 0; y < source.size(); ++y)
      if (source.leq(x, y) && !target.leq(assignment[x], assignment[y])) {
        fail(why, "monotone map: order not preserved at " + source.name(x) + " <= " + source.name(y));
        return false;
      }
  return true;
}

MonotoneMap MonotoneMap::identity(const Poset& x) {
  MonotoneMap f{x, x, {}};
  for (std::size_t i = 0; i < x.size(); ++i) f.assignment.push_back(i);
  return f;
}

MonotoneMap MonotoneMap::to_point(const Poset& x) {
  return MonotoneMap{x, Poset::point(), std::vector<std::size_t>(x.size(), 0)};
}

MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f) {
  MonotoneMap h{f.source, g.target, {}};
  for (std::size_t x = 0; x < f.source.size(); ++x) h.assignment.push_back(g(f(x)));
  return h;
}

// ---------------------------------------------------------------- Sheaf

Sheaf Sheaf::from_all(const Poset& x, std::vector<FpAbGroup> stalks, std::vector<std::vector<IntMatrix>> all_maps) {
  const std::size_t n = x.size();
  if (stalks.size() != n || all_maps.size() != n) throw InputError("sheaf: one stalk per element required");
  Sheaf f;
  f.poset_ = x;
  f.stalks_ = std::move(stalks);
  f.maps_.assign(n * n, IntMatrix());
  for (std::size_t a = 0; a < n; ++a) {
    if (all_maps[a].size() != n) throw InputError("sheaf: restriction table has wrong size");
    for (std::size_t b = 0; b < n; ++b) {
      if (!x.leq(a, b)) continue;
      IntMatrix m = std::move(all_maps[a][b]);
      if (a == b && m.rows() == 0 && m.cols() == 0) m = IntMatrix::identity(f.stalks_[a].ambient_rank());
      f.maps_[a * n + b] = std::move(m);
    }
  }
  std::string why;
  if (!f.verify(&why)) throw InputError(why);
  return f;
}

Sheaf Sheaf::from_covers(const Poset& x, std::vector<FpAbGroup> stalks,
                         const std::vector<std::pair<std::pair<std::size_t, std::size_t>, IntMatrix>>& cover_maps) {
  const std::size_t n = x.size();
  if (stalks.size() != n) throw InputError("sheaf: one stalk per element required");
  std::map<std::pair<std::size_t, std::size_t>, IntMatrix> given;
  auto covers = x.covers();
  for (const auto& [key, m] : cover_maps) {
    if (std::find(covers.begin(), covers.end(), key) == covers.end())
      throw InputError("sheaf: restriction given on a non-covering pair " + x.name(key.first) + " < " + x.name(key.second));
    if (m.rows() != stalks[key.second].ambient_rank() || m.cols() != stalks[key.first].ambient_rank())
      throw InputError("sheaf: restriction " + x.name(key.first) + " -> " + x.name(key.second) + " has wrong shape");
    given[key] = m;
  }
  for (const auto& c : covers) {
    if (!given.count(c)) {
      if (stalks[c.first].ambient_rank() == 0 || stalks[c.second].ambient_rank() == 0)
        given[c] = IntMatrix(stalks[c.second].ambient_rank(), stalks[c.first].ambient_rank());
      else
        throw InputError("sheaf: missing restriction " + x.name(c.first) + " -> " + x.name(c.second));
    }
  }
  std::vector<std::vector<IntMatrix>> all(n, std::vector<IntMatrix>(n));
  std::vector<std::vector<bool>> done(n, std::vector<bool>(n, false));
  std::function<const IntMatrix&(std::size_t, std::size_t)> get = [&](std::size_t a, std::size_t b) -> const IntMatrix& {
    if (!done[a][b]) {
      if (a == b) {
        all[a][b] = IntMatrix::identity(stalks[a].ambient_rank());
      } else {
        // Route through the first cover a < c with c <= b.
        for (const auto& c : covers) {
          if (c.first != a || !x.leq(c.second, b)) continue;
          all[a][b] = get(c.second, b) * given[c];
          break;
        }
      }
      done[a][b] = true;
    }
    return all[a][b];
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (x.leq(a, b)) get(a, b);
  return from_all(x, std::move(stalks), std::move(all));
}

const IntMatrix& Sheaf::restriction_matrix(std::size_t x, std::size_t y) const {
  if (!poset_.leq(x, y)) throw ContractViolation("restriction requested for incomparable elements");
  return maps_[x * poset_.size() + y];
}

GroupHom Sheaf::restriction(std::size_t x, std::size_t y) const {
  return GroupHom{stalks_[x], stalks_[y], restriction_matrix(x, y)};
}

bool Sheaf::verify(std::string* why) const {
  const std::size_t n = poset_.size();
  if (stalks_.size() != n || maps_.size() != n * n) {
    fail(why, "sheaf: size mismatch");
    return false;
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!poset_.leq(a, b)) continue;
      const IntMatrix& m = maps_[a * n + b];
      if (m.rows() != stalks_[b].ambient_rank() || m.cols() != stalks_[a].ambient_rank()) {
        fail(why, "sheaf: restriction " + poset_.name(a) + " -> " + poset_.name(b) + " has wrong shape");
        return false;
      }
      if (!restriction(a, b).is_well_defined()) {
        fail(why, "sheaf: restriction " + poset_.name(a) + " -> " + poset_.name(b) + " is not well defined");
        return false;
      }
    }
  for (std::size_t a = 0; a < n; ++a) {
    if (!abgroup::equal(restriction(a, a), GroupHom::identity(stalks_[a]))) {
      fail(why, "functoriality violation: restriction at " + poset_.name(a) + " is not the identity");
      return false;
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!poset_.lt(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (!poset_.lt(b, c)) continue;
        GroupHom composite = abgroup::compose(restriction(b, c), restriction(a, b));
        if (!abgroup::equal(composite, restriction(a, c))) {
          fail(why, "functoriality violation: " + poset_.name(a) + " -> " + poset_.name(b) + " -> " + poset_.name(c));
          return false;
        }
      }
    }
  return true;
}

bool Sheaf::is_zero() const {
  return std::all_of(stalks_.begin(), stalks_.end(), [](const FpAbGroup& g) { return g.is_trivial(); });
}

bool SheafHom::verify(std::string* why) const {
  const Poset& x = source.poset();
  const std::size_t n = x.size();
  if (components.size() != n) {
    fail(why, "sheaf hom: one component per element required");
    return false;
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (components[a].rows() != target.stalk(a).ambient_rank() || components[a].cols() != source.stalk(a).ambient_rank()) {
      fail(why, "sheaf hom: component at " + x.name(a) + " has wrong shape");
      return false;
    }
    if (!component(a).is_well_defined()) {
      fail(why, "sheaf hom: component at " + x.name(a) + " not well defined");
      return false;
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!x.lt(a, b)) continue;
      GroupHom l = abgroup::compose(target.restriction(a, b), component(a));
      GroupHom r = abgroup::compose(component(b), source.restriction(a, b));
      if (!abgroup::equal(l, r)) {
        fail(why, "sheaf hom: does not commute with restriction " + x.name(a) + " -> " + x.name(b));
        return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------- SheafComplex

SheafComplex::SheafComplex(const Poset& x, int lo, std::vector<Sheaf> sheaves, std::vector<std::vector<IntMatrix>> differentials)
    : poset_(x), lo_(lo), sheaves_(std::move(sheaves)), diffs_(std::move(differentials)) {
  if (!sheaves_.empty() && diffs_.size() + 1 != sheaves_.size())
    throw ContractViolation("sheaf complex: need one differential between consecutive sheaves");
  for (const auto& d : diffs_)
    if (d.size() != x.size()) throw ContractViolation("sheaf complex: one differential component per element");
}

const Sheaf& SheafComplex::sheaf(int q) const {
  if (q < lo() || q > hi()) throw ContractViolation("sheaf complex: degree outside support");
  return sheaves_[static_cast<std::size_t>(q - lo_)];
}

IntMatrix SheafComplex::differential(int q, std::size_t x) const {
  if (q >= lo() && q < hi()) return diffs_[static_cast<std::size_t>(q - lo_)][x];
  std::size_t rows = (q + 1 >= lo() && q + 1 <= hi()) ? sheaf(q + 1).stalk(x).ambient_rank() : 0;
  std::size_t cols = (q >= lo() && q <= hi()) ? sheaf(q).stalk(x).ambient_rank() : 0;
  return IntMatrix(rows, cols);
}

chains::FpComplex SheafComplex::stalk_complex(std::size_t x) const {
  std::vector<FpAbGroup> terms;
  std::vector<IntMatrix> diffs;
  for (int q = lo(); q <= hi(); ++q) {
    terms.push_back(sheaf(q).stalk(x));
    diffs.push_back(differential(q, x));
  }
  return chains::FpComplex(lo(), std::move(terms), std::move(diffs));
}

bool SheafComplex::verify(std::string* why) const {
  for (int q = lo(); q <= hi(); ++q)
    if (!sheaf(q).verify(why)) return false;
  for (int q = lo(); q < hi(); ++q) {
    SheafHom d{sheaf(q), sheaf(q + 1), diffs_[static_cast<std::size_t>(q - lo_)]};
    if (!d.verify(why)) return false;
  }
  for (std::size_t x = 0; x < poset_.size(); ++x)
    if (!stalk_complex(x).verify(why)) return false;
  return true;
}

SheafComplex SheafComplex::concentrated(const Sheaf& f, int degree) {
  return SheafComplex(f.poset(), degree, {f}, {});
}

// ---------------------------------------------------------------- constructions

namespace {

std::vector<std::vector<IntMatrix>> empty_table(std::size_t n) {
  return std::vector<std::vector<IntMatrix>>(n, std::vector<IntMatrix>(n));
}

// Sheaf with stalk g on members, zero elsewhere, identity restrictions inside.
Sheaf indicator_sheaf(const Poset& x, const std::vector<bool>& member, const FpAbGroup& g) {
  const std::size_t n = x.size();
  std::vector<FpAbGroup> stalks(n);
  for (std::size_t a = 0; a < n; ++a)
    if (member[a]) stalks[a] = g;
  auto all = empty_table(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!x.leq(a, b)) continue;
      if (member[a] && member[b]) all[a][b] = IntMatrix::identity(g.ambient_rank());
      else all[a][b] = IntMatrix(stalks[b].ambient_rank(), stalks[a].ambient_rank());
    }
  return Sheaf::from_all(x, std::move(stalks), std::move(all));
}

}  // namespace

Sheaf zero_sheaf(const Poset& x) { return indicator_sheaf(x, std::vector<bool>(x.size(), false), FpAbGroup()); }

Sheaf constant_sheaf(const Poset& x, const FpAbGroup& g) {
  return indicator_sheaf(x, std::vector<bool>(x.size(), true), g);
}

Sheaf upset_extension(const Poset& x, std::size_t at, const FpAbGroup& g) {
  std::vector<bool> member(x.size());
  for (std::size_t y = 0; y < x.size(); ++y) member[y] = x.leq(at, y);
  return indicator_sheaf(x, member, g);
}

Sheaf downset_extension(const Poset& x, std::size_t at, const FpAbGroup& g) {
  std::vector<bool> member(x.size());
  for (std::size_t y = 0; y < x.size(); ++y) member[y] = x.leq(y, at);
  return indicator_sheaf(x, member, g);
}

Sheaf direct_sum(const Sheaf& a, const Sheaf& b) {
  const Poset& x = a.poset();
  const std::size_t n = x.size();
  std::vector<FpAbGroup> stalks;
  for (std::size_t i = 0; i < n; ++i) stalks.push_back(abgroup::direct_sum(a.stalk(i), b.stalk(i)));
  auto all = empty_table(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (x.leq(i, j)) all[i][j] = block_diagonal(a.restriction_matrix(i, j), b.restriction_matrix(i, j));
  return Sheaf::from_all(x, std::move(stalks), std::move(all));
}

Sheaf quotient_by_section(const Sheaf& f, const std::vector<IntVector>& section) {
  const Poset& x = f.poset();
  const std::size_t n = x.size();
  if (section.size() != n) throw ContractViolation("section needs one vector per element");
  std::vector<FpAbGroup> stalks;
  for (std::size_t i = 0; i < n; ++i) {
    const FpAbGroup& g = f.stalk(i);
    if (is_zero_vector(section[i])) {
      stalks.push_back(g);
      continue;
    }
    IntMatrix col(g.ambient_rank(), 1);
    col.set_column(0, section[i]);
    stalks.emplace_back(g.ambient_rank(), hstack(g.relations(), col));
  }
  auto all = empty_table(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (x.leq(i, j)) all[i][j] = f.restriction_matrix(i, j);
  return Sheaf::from_all(x, std::move(stalks), std::move(all));
}

Sheaf restrict_to(const Sheaf& f, const std::vector<std::size_t>& elements) {
  Poset sub = f.poset().subposet(elements);
  const std::size_t k = elements.size();
  std::vector<FpAbGroup> stalks;
  for (std::size_t e : elements) stalks.push_back(f.stalk(e));
  auto all = empty_table(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (sub.leq(i, j)) all[i][j] = f.restriction_matrix(elements[i], elements[j]);
  return Sheaf::from_all(sub, std::move(stalks), std::move(all));
}

Sheaf sheaf_tensor(const Sheaf& f, const FpAbGroup& a) {
  const Poset& x = f.poset();
  const std::size_t n = x.size();
  std::vector<FpAbGroup> stalks;
  for (std::size_t i = 0; i < n; ++i) stalks.push_back(abgroup::tensor(f.stalk(i), a));
  auto all = empty_table(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (x.leq(i, j)) all[i][j] = kronecker(f.restriction_matrix(i, j), IntMatrix::identity(a.ambient_rank()));
  return Sheaf::from_all(x, std::move(stalks), std::move(all));
}

Sheaf sheaf_tensor_free(const Sheaf& f, std::size_t r) { return sheaf_tensor(f, FpAbGroup::free(r)); }

Sheaf sheaf_tor(const Sheaf& f, const abgroup::FreeResolution& res) {
  const Poset& x = f.poset();
  const std::size_t n = x.size();
  std::vector<abgroup::TorData> tors;
  std::vector<FpAbGroup> stalks;
  for (std::size_t i = 0; i < n; ++i) {
    tors.push_back(abgroup::tor_data(f.stalk(i), res));
    stalks.push_back(tors.back().tor.group);
  }
  auto all = empty_table(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (x.leq(i, j)) all[i][j] = abgroup::induced_on_tor(f.restriction(i, j), tors[i], tors[j]).matrix;
  return Sheaf::from_all(x, std::move(stalks), std::move(all));
}

Sheaf sheaf_tor(const Sheaf& f, const FpAbGroup& a) { return sheaf_tor(f, abgroup::free_resolution(a)); }

SheafComplex sheaf_tensor_complex(const Sheaf& f, const chains::FreeComplex& p) {
  std::string why;
  if (!p.verify(&why)) throw ContractViolation(why);
  const Poset& x = f.poset();
  std::vector<Sheaf> sheaves;
  std::vector<std::vector<IntMatrix>> diffs;
  for (int q = p.lo; q <= p.hi(); ++q) {
    sheaves.push_back(sheaf_tensor_free(f, p.rank(q)));
    if (q < p.hi()) {
      std::vector<IntMatrix> comps;
      for (std::size_t e = 0; e < x.size(); ++e)
        comps.push_back(kronecker(IntMatrix::identity(f.stalk(e).ambient_rank()), p.differential(q)));
      diffs.push_back(std::move(comps));
    }
  }
  return SheafComplex(x, p.lo, std::move(sheaves), std::move(diffs));
}

chains::FreeComplex resolution_complex(const abgroup::FreeResolution& res) {
  return chains::FreeComplex{-1, {res.m, res.k}, {res.R}};
}

SheafComplex sheaf_derived_tensor(const Sheaf& f, const abgroup::FreeResolution& res) {
  return sheaf_tensor_complex(f, resolution_complex(res));
}

SheafComplex sheaf_derived_tensor(const Sheaf& f, const FpAbGroup& a) {
  return sheaf_derived_tensor(f, abgroup::free_resolution(a));
}

Sheaf pullback(const MonotoneMap& f, const Sheaf& g) {
  const Poset& x = f.source;
  const std::size_t n = x.size();
  std::vector<FpAbGroup> stalks;
  for (std::size_t i = 0; i < n; ++i) stalks.push_back(g.stalk(f(i)));
  auto all = empty_table(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (x.leq(i, j)) all[i][j] = g.restriction_matrix(f(i), f(j));
  return Sheaf::from_all(x, std::move(stalks), std::move(all));
}

SheafComplex pullback(const MonotoneMap& f, const SheafComplex& k) {
  std::vector<Sheaf> sheaves;
  std::vector<std::vector<IntMatrix>> diffs;
  for (int q = k.lo(); q <= k.hi(); ++q) {
    sheaves.push_back(pullback(f, k.sheaf(q)));
    if (q < k.hi()) {
      std::vector<IntMatrix> comps;
      for (std::size_t e = 0; e < f.source.size(); ++e) comps.push_back(k.differential(q, f(e)));
      diffs.push_back(std::move(comps));
    }
  }
  return SheafComplex(f.source, k.lo(), std::move(sheaves), std::move(diffs));
}

abgroup::Subgroup global_sections(const Sheaf& f) {
  const Poset& x = f.poset();
  const std::size_t n = x.size();
  FpAbGroup product = abgroup::direct_sum(f.stalks());
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + f.stalk(i).ambient_rank();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (x.lt(a, b)) pairs.emplace_back(a, b);
  std::vector<FpAbGroup> targets;
  std::size_t rows = 0;
  for (auto [a, b] : pairs) {
    targets.push_back(f.stalk(b));
    rows += f.stalk(b).ambient_rank();
  }
  IntMatrix diff(rows, product.ambient_rank());
  std::size_t r = 0;
  for (auto [a, b] : pairs) {
    const IntMatrix& rho = f.restriction_matrix(a, b);
    for (std::size_t i = 0; i < rho.rows(); ++i) {
      for (std::size_t j = 0; j < rho.cols(); ++j) diff(r + i, offset[a] + j) = rho(i, j);
      diff(r + i, offset[b] + i) -= Integer(1);
    }
    r += rho.rows();
  }
  return abgroup::kernel(GroupHom{product, abgroup::direct_sum(targets), std::move(diff)});
}

// ---------------------------------------------------------------- random

std::size_t draw(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) return 0;
  return static_cast<std::size_t>(rng() % n);
}

namespace {

bool coin(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() % 1000000) < p * 1000000.0;
}

}  // namespace

SheafRecipe random_recipe(const Poset& x, std::mt19937_64& rng, const SheafParams& params) {
  SheafRecipe r;
  if (x.size() == 0) return r;
  std::size_t count = params.min_summands + draw(rng, params.max_summands - params.min_summands + 1);
  for (std::size_t i = 0; i < count; ++i) {
    auto kind = static_cast<SheafRecipe::Kind>(draw(rng, 3));
    std::size_t element = draw(rng, x.size());
    int order = params.orders[draw(rng, params.orders.size())];
    r.blocks.push_back({kind, element, order});
  }
  if (count > 0 && coin(rng, params.quotient_probability)) {
    Sheaf base = build_sheaf(x, SheafRecipe{r.blocks, {}});
    std::size_t gens = global_sections(base).group.ambient_rank();
    for (std::size_t i = 0; i < gens; ++i) r.quotient_coeffs.push_back(static_cast<int>(draw(rng, 5)) - 2);
  }
  return r;
}

Sheaf build_sheaf(const Poset& x, const SheafRecipe& recipe) {
  Sheaf f = zero_sheaf(x);
  for (const auto& b : recipe.blocks) {
    FpAbGroup g = FpAbGroup::cyclic(Integer(b.order));
    switch (b.kind) {
      case SheafRecipe::Kind::kConstant: f = direct_sum(f, constant_sheaf(x, g)); break;
      case SheafRecipe::Kind::kUpset: f = direct_sum(f, upset_extension(x, b.element, g)); break;
      case SheafRecipe::Kind::kDownset: f = direct_sum(f, downset_extension(x, b.element, g)); break;
    }
  }
  if (!recipe.quotient_coeffs.empty()) {
    abgroup::Subgroup gamma = global_sections(f);
    const IntMatrix& inc = gamma.inclusion.matrix;
    if (inc.cols() == recipe.quotient_coeffs.size()) {
      IntVector coeffs;
      for (int c : recipe.quotient_coeffs) coeffs.emplace_back(c);
      IntVector s = inc * std::span<const Integer>(coeffs);
      std::vector<IntVector> section;
      std::size_t off = 0;
      for (std::size_t e = 0; e < x.size(); ++e) {
        std::size_t k = f.stalk(e).ambient_rank();
        section.emplace_back(s.begin() + static_cast<long>(off), s.begin() + static_cast<long>(off + k));
        off += k;
      }
      f = quotient_by_section(f, section);
    }
  }
  return f;
}

Sheaf random_sheaf(const Poset& x, std::uint64_t seed, const SheafParams& params) {
  std::mt19937_64 rng(seed);
  return build_sheaf(x, random_recipe(x, rng, params));
}

Poset random_poset(std::mt19937_64& rng, std::size_t n, double edge_probability) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  // Edges only go from lower to higher position in a random permutation.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[draw(rng, i)]);
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng, edge_probability)) rel.emplace_back(perm[i], perm[j]);
  return Poset::from_relations(std::move(names), rel, std::max(n, kDefaultMaxElements));
}

MonotoneMap random_monotone_map(std::mt19937_64& rng, const Poset& source, const Poset& target) {
  const std::size_t n = source.size();
  // A linear extension of the source: sort by number of elements below.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<std::size_t> below(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (source.lt(b, a)) ++below[a];
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return below[a] < below[b]; });
  for (int attempt = 0; attempt < 16; ++attempt) {
    MonotoneMap f{source, target, std::vector<std::size_t>(n, 0)};
    bool ok = true;
    for (std::size_t x : order) {
      std::vector<std::size_t> candidates;
      for (std::size_t y = 0; y < target.size(); ++y) {
        bool above_all = true;
        for (std::size_t z = 0; z < n && above_all; ++z)
          if (source.lt(z, x)) above_all = target.leq(f.assignment[z], y);
        if (above_all) candidates.push_back(y);
      }
      if (candidates.empty()) {
        ok = false;
        break;
      }
      f.assignment[x] = candidates[draw(rng, candidates.size())];
    }
    if (ok) return f;
  }
  std::size_t y = target.size() == 0 ? 0 : draw(rng, target.size());
  return MonotoneMap{source, target, std::vector<std::size_t>(n, y)};
}

}  // namespace sheafcoh::site
