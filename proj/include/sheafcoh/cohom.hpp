#pragma once

// Sheaf cohomology on finite posets through the normalized nerve complex,
// hypercohomology of bounded sheaf complexes, and a model for Rf_*.

#include <map>
#include <vector>

#include "sheafcoh/chains.hpp"
#include "sheafcoh/site.hpp"

namespace sheafcoh::cohom {

using site::Chain;
using site::Poset;
using site::Sheaf;
using site::SheafComplex;

/// C^n = product over strict chains x_0 < ... < x_n of F(x_n).
struct NerveComplex {
  chains::FpComplex complex;
  std::vector<std::vector<Chain>> chains;         // chains[n], lexicographic
  std::vector<std::vector<std::size_t>> offsets;  // ambient offset of chains[n][i] in C^n

  /// Chain owning ambient coordinate k of C^n.
  const Chain& chain_of(int n, std::size_t k) const;
};

NerveComplex nerve_complex(const Sheaf& f);
/// Throws ContractViolation if f does not live on x.
NerveComplex nerve_complex(const Poset& x, const Sheaf& f);

chains::Cohomology sheaf_cohomology(const Sheaf& f, int r);

/// Tot of the bicomplex C^p(X, K^q); blocks of Tot^n ordered by ascending q.
chains::FpComplex hyper_nerve(const SheafComplex& k);

/// One block of Tot^n in hyper_nerve: chain (as element indices) at sheaf degree q.
struct TotalCoordinate {
  int q;
  Chain chain;
  std::size_t offset;
  std::size_t size;
};
/// Coordinate layout of Tot^n, matching hyper_nerve exactly.
std::vector<TotalCoordinate> hyper_nerve_layout(const SheafComplex& k, int n);

/// Chain map between hyper-nerves induced by a map of sheaf complexes given
/// as components[q][x] : src^q(x) -> dst^q(x); absent degrees are zero.
chains::ChainMap hyper_nerve_map(const SheafComplex& src, const chains::FpComplex& src_total, const SheafComplex& dst,
                                 const chains::FpComplex& dst_total,
                                 const std::map<int, std::vector<IntMatrix>>& components);
/// Map of nerve complexes induced by a sheaf homomorphism.
chains::ChainMap nerve_map(const site::SheafHom& phi);

/// Elements x with f(x) >= y, in increasing index order.
std::vector<std::size_t> preimage_of_upset(const site::MonotoneMap& f, std::size_t y);
site::SheafComplex restrict_to(const SheafComplex& k, const std::vector<std::size_t>& elements);

/// Degree n at y is Tot^n of the hyper-nerve over the preimage of the up-set
/// of y; restrictions are coordinate projections.
SheafComplex pushforward_model(const site::MonotoneMap& f, const Sheaf& s);
SheafComplex pushforward_model(const site::MonotoneMap& f, const SheafComplex& k);

}  // namespace sheafcoh::cohom
