#include "sheafcoh/cohom.hpp"

#include <algorithm>

#include "sheafcoh/errors.hpp"

namespace sheafcoh::cohom {

using abgroup::FpAbGroup;

const Chain& NerveComplex::chain_of(int n, std::size_t k) const {
  const auto& offs = offsets.at(static_cast<std::size_t>(n));
  auto it = std::upper_bound(offs.begin(), offs.end(), k);
  if (it == offs.begin()) throw ContractViolation("coordinate outside the nerve term");
  return chains[static_cast<std::size_t>(n)][static_cast<std::size_t>(it - offs.begin() - 1)];
}

namespace {

std::size_t chain_position(const std::vector<Chain>& list, const Chain& c) {
  auto it = std::lower_bound(list.begin(), list.end(), c);
  if (it == list.end() || *it != c) throw ContractViolation("chain not found in the nerve");
  return static_cast<std::size_t>(it - list.begin());
}

void place_block(IntMatrix& d, std::size_t r0, std::size_t c0, const IntMatrix& block, int sign) {
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) {
      if (block(i, j).is_zero()) continue;
      if (sign > 0) d(r0 + i, c0 + j) += block(i, j);
      else d(r0 + i, c0 + j) -= block(i, j);
    }
}

void place_identity(IntMatrix& d, std::size_t r0, std::size_t c0, std::size_t size, int sign) {
  for (std::size_t i = 0; i < size; ++i) d(r0 + i, c0 + i) += Integer(sign);
}

}  // namespace

NerveComplex nerve_complex(const Sheaf& f) {
  const Poset& x = f.poset();
  NerveComplex nc;
  const int h = x.height();
  std::vector<FpAbGroup> terms;
  for (int n = 0; n <= h; ++n) {
    auto list = site::strict_chains(x, n);
    std::vector<std::size_t> offs;
    std::vector<FpAbGroup> parts;
    std::size_t off = 0;
    for (const auto& c : list) {
      offs.push_back(off);
      parts.push_back(f.stalk(c.back()));
      off += f.stalk(c.back()).ambient_rank();
    }
    terms.push_back(abgroup::direct_sum(parts));
    nc.chains.push_back(std::move(list));
    nc.offsets.push_back(std::move(offs));
  }
  std::vector<IntMatrix> diffs;
  for (int n = 0; n <= h; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (n == h) {
      diffs.emplace_back(0, terms[un].ambient_rank());
      break;
    }
    IntMatrix d(terms[un + 1].ambient_rank(), terms[un].ambient_rank());
    const auto& lower = nc.chains[un];
    const auto& upper = nc.chains[un + 1];
    for (std::size_t s = 0; s < upper.size(); ++s) {
      const Chain& sigma = upper[s];
      const std::size_t row = nc.offsets[un + 1][s];
      const std::size_t top = sigma.back();
      const std::size_t size = f.stalk(top).ambient_rank();
      for (std::size_t i = 0; i <= un; ++i) {
        Chain face = sigma;
        face.erase(face.begin() + static_cast<long>(i));
        std::size_t col = nc.offsets[un][chain_position(lower, face)];
        place_identity(d, row, col, size, i % 2 == 0 ? 1 : -1);
      }
      Chain face(sigma.begin(), sigma.end() - 1);
      std::size_t col = nc.offsets[un][chain_position(lower, face)];
      place_block(d, row, col, f.restriction_matrix(face.back(), top), (n + 1) % 2 == 0 ? 1 : -1);
    }
    diffs.push_back(std::move(d));
  }
  nc.complex = chains::FpComplex(0, std::move(terms), std::move(diffs));
  return nc;
}

NerveComplex nerve_complex(const Poset& x, const Sheaf& f) {
  if (!(x == f.poset())) throw ContractViolation("sheaf does not live on the given poset");
  return nerve_complex(f);
}

chains::Cohomology sheaf_cohomology(const Sheaf& f, int r) { return chains::cohomology(nerve_complex(f).complex, r); }

chains::FpComplex hyper_nerve(const SheafComplex& k) {
  if (k.empty()) return chains::FpComplex();
  const Poset& x = k.poset();
  const int h = x.height();
  if (h < 0) return chains::FpComplex();
  std::vector<NerveComplex> rows;
  for (int q = k.lo(); q <= k.hi(); ++q) rows.push_back(nerve_complex(k.sheaf(q)));
  chains::Bicomplex b;
  for (int q = k.lo(); q <= k.hi(); ++q) {
    const NerveComplex& nc = rows[static_cast<std::size_t>(q - k.lo())];
    for (int p = 0; p <= h; ++p) {
      b.set_group(p, q, nc.complex.term(p));
      if (p < h) b.set_horizontal(p, q, nc.complex.differential_matrix(p));
      if (q < k.hi()) {
        const NerveComplex& next = rows[static_cast<std::size_t>(q + 1 - k.lo())];
        const auto& list = nc.chains[static_cast<std::size_t>(p)];
        IntMatrix v(next.complex.term(p).ambient_rank(), nc.complex.term(p).ambient_rank());
        for (std::size_t i = 0; i < list.size(); ++i) {
          IntMatrix dq = k.differential(q, list[i].back());
          place_block(v, next.offsets[static_cast<std::size_t>(p)][i], nc.offsets[static_cast<std::size_t>(p)][i], dq, 1);
        }
        b.set_vertical(p, q, std::move(v));
      }
    }
  }
  return b.total();
}

std::vector<TotalCoordinate> hyper_nerve_layout(const SheafComplex& k, int n) {
  std::vector<TotalCoordinate> out;
  if (k.empty()) return out;
  const Poset& x = k.poset();
  const int h = x.height();
  std::size_t off = 0;
  for (int q = k.lo(); q <= k.hi(); ++q) {
    int p = n - q;
    if (p < 0 || p > h) continue;
    const Sheaf& s = k.sheaf(q);
    for (const auto& c : site::strict_chains(x, p)) {
      std::size_t size = s.stalk(c.back()).ambient_rank();
      out.push_back({q, c, off, size});
      off += size;
    }
  }
  return out;
}

chains::ChainMap hyper_nerve_map(const SheafComplex& src, const chains::FpComplex& src_total, const SheafComplex& dst,
                                 const chains::FpComplex& dst_total,
                                 const std::map<int, std::vector<IntMatrix>>& components) {
  chains::ChainMap phi{src_total, dst_total, {}};
  if (src_total.empty() || dst_total.empty()) return phi;
  const int lo = std::max(src_total.lo(), dst_total.lo());
  const int hi = std::min(src_total.hi(), dst_total.hi());
  for (int n = lo; n <= hi; ++n) {
    auto from = hyper_nerve_layout(src, n);
    auto to = hyper_nerve_layout(dst, n);
    IntMatrix m(dst_total.term(n).ambient_rank(), src_total.term(n).ambient_rank());
    for (const auto& b : from) {
      auto comp = components.find(b.q);
      if (comp == components.end()) continue;
      auto it = std::find_if(to.begin(), to.end(), [&](const TotalCoordinate& t) { return t.q == b.q && t.chain == b.chain; });
      if (it == to.end()) continue;
      place_block(m, it->offset, b.offset, comp->second[b.chain.back()], 1);
    }
    phi.components[n] = std::move(m);
  }
  return phi;
}

chains::ChainMap nerve_map(const site::SheafHom& phi) {
  NerveComplex a = nerve_complex(phi.source);
  NerveComplex b = nerve_complex(phi.target);
  chains::ChainMap out{a.complex, b.complex, {}};
  for (int n = 0; n <= a.complex.hi(); ++n) {
    const auto un = static_cast<std::size_t>(n);
    IntMatrix m(b.complex.term(n).ambient_rank(), a.complex.term(n).ambient_rank());
    for (std::size_t i = 0; i < a.chains[un].size(); ++i)
      place_block(m, b.offsets[un][i], a.offsets[un][i], phi.components[a.chains[un][i].back()], 1);
    out.components[n] = std::move(m);
  }
  return out;
}

std::vector<std::size_t> preimage_of_upset(const site::MonotoneMap& f, std::size_t y) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < f.source.size(); ++x)
    if (f.target.leq(y, f(x))) out.push_back(x);
  return out;
}

SheafComplex restrict_to(const SheafComplex& k, const std::vector<std::size_t>& elements) {
  Poset sub = k.poset().subposet(elements);
  std::vector<Sheaf> sheaves;
  std::vector<std::vector<IntMatrix>> diffs;
  for (int q = k.lo(); q <= k.hi(); ++q) {
    sheaves.push_back(site::restrict_to(k.sheaf(q), elements));
    if (q < k.hi()) {
      std::vector<IntMatrix> comps;
      for (std::size_t e : elements) comps.push_back(k.differential(q, e));
      diffs.push_back(std::move(comps));
    }
  }
  return SheafComplex(sub, k.lo(), std::move(sheaves), std::move(diffs));
}

SheafComplex pushforward_model(const site::MonotoneMap& f, const SheafComplex& k) {
  const Poset& q_poset = f.target;
  const std::size_t nq = q_poset.size();
  std::vector<std::vector<std::size_t>> members(nq);
  std::vector<SheafComplex> parts(nq);
  std::vector<chains::FpComplex> totals(nq);
  for (std::size_t y = 0; y < nq; ++y) {
    members[y] = preimage_of_upset(f, y);
    parts[y] = restrict_to(k, members[y]);
    totals[y] = hyper_nerve(parts[y]);
  }
  const int lo = k.empty() ? 0 : k.lo();
  const int hi = k.empty() ? -1 : k.hi() + std::max(f.source.height(), 0);
  std::vector<Sheaf> sheaves;
  std::vector<std::vector<IntMatrix>> diffs;
  for (int n = lo; n <= hi; ++n) {
    std::vector<FpAbGroup> stalks;
    std::vector<std::vector<TotalCoordinate>> layout(nq);
    for (std::size_t y = 0; y < nq; ++y) {
      stalks.push_back(totals[y].term(n));
      layout[y] = hyper_nerve_layout(parts[y], n);
      // Chains in original element indices.
      for (auto& tc : layout[y])
        for (auto& e : tc.chain) e = members[y][e];
    }
    std::vector<std::vector<IntMatrix>> all(nq, std::vector<IntMatrix>(nq));
    for (std::size_t a = 0; a < nq; ++a)
      for (std::size_t b = 0; b < nq; ++b) {
        if (!q_poset.leq(a, b)) continue;
        IntMatrix m(stalks[b].ambient_rank(), stalks[a].ambient_rank());
        for (const auto& tb : layout[b]) {
          auto it = std::find_if(layout[a].begin(), layout[a].end(),
                                 [&](const TotalCoordinate& ta) { return ta.q == tb.q && ta.chain == tb.chain; });
          if (it == layout[a].end()) throw ContractViolation("pushforward: chain missing from a larger preimage");
          place_identity(m, tb.offset, it->offset, tb.size, 1);
        }
        all[a][b] = std::move(m);
      }
    sheaves.push_back(Sheaf::from_all(q_poset, std::move(stalks), std::move(all)));
    if (n < hi) {
      std::vector<IntMatrix> comps;
      for (std::size_t y = 0; y < nq; ++y) comps.push_back(totals[y].differential_matrix(n));
      diffs.push_back(std::move(comps));
    }
  }
  return SheafComplex(q_poset, lo, std::move(sheaves), std::move(diffs));
}

SheafComplex pushforward_model(const site::MonotoneMap& f, const Sheaf& s) {
  return pushforward_model(f, SheafComplex::concentrated(s, 0));
}

}  // namespace sheafcoh::cohom
