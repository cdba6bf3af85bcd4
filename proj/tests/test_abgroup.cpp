#include <gtest/gtest.h>

#include <random>

#include "sheafcoh/abgroup.hpp"
#include "sheafcoh/errors.hpp"
#include "support.hpp"

namespace sheafcoh {
namespace {

using abgroup::FpAbGroup;
using abgroup::GroupElement;
using abgroup::GroupHom;
using testing::cyclic_sum;
using testing::Factors;
using testing::factors;
using testing::ints;

FpAbGroup zmod(long long n) { return FpAbGroup::cyclic(Integer(n)); }

GroupHom times(const FpAbGroup& g, long long k) {
  return {g, g, IntMatrix::identity(g.ambient_rank()).scaled(Integer(k))};
}

const std::vector<long long> kOrders = {0, 0, 1, 2, 3, 4, 6, 8, 9, 12};

Factors random_orders(std::mt19937_64& rng, std::size_t max_len) {
  Factors f(rng() % (max_len + 1));
  for (auto& v : f) v = kOrders[rng() % kOrders.size()];
  return f;
}

// A random presentation of a direct sum of cyclic groups: the standard
// relations mixed by a unimodular change of generators p.
struct Scrambled {
  Factors orders;
  IntMatrix p;
  FpAbGroup group;
};

Scrambled scramble(std::mt19937_64& rng, const Factors& orders) {
  FpAbGroup base = cyclic_sum(orders);
  std::size_t n = base.ambient_rank();
  IntMatrix p = IntMatrix::identity(n);
  for (int s = 0; s < 4 && n > 1; ++s) {
    std::size_t i = rng() % n, j = rng() % n;
    if (i == j) continue;
    long long c = static_cast<long long>(rng() % 5) - 2;
    for (std::size_t k = 0; k < n; ++k) p(i, k) += Integer(c) * p(j, k);
  }
  return {orders, p, FpAbGroup(n, p * base.relations())};
}

FpAbGroup scrambled(std::mt19937_64& rng, const Factors& orders) { return scramble(rng, orders).group; }

// Z/a -> Z/b is multiplication by a multiple of b / gcd(a, b) (with Z = Z/0).
GroupHom random_hom(std::mt19937_64& rng, const Scrambled& g, const Scrambled& h) {
  IntMatrix m(h.orders.size(), g.orders.size());
  for (std::size_t i = 0; i < h.orders.size(); ++i)
    for (std::size_t j = 0; j < g.orders.size(); ++j) {
      long long a = g.orders[j], b = h.orders[i];
      long long c = static_cast<long long>(rng() % 5) - 2;
      if (a == 0) m(i, j) = Integer(c);
      else if (b != 0) m(i, j) = Integer(c * (b / std::gcd(a, b)));
    }
  return {g.group, h.group, h.p * m * exactlin::unimodular_inverse(g.p)};
}

TEST(InvariantFactors, Examples) {
  FpAbGroup g(3, IntMatrix{{2, 0}, {0, 3}, {0, 0}});
  EXPECT_EQ(factors(g), (Factors{6, 0}));
  EXPECT_EQ(factors(FpAbGroup(2, IntMatrix(2, 0))), (Factors{0, 0}));
  EXPECT_TRUE(FpAbGroup(2, IntMatrix{{2, 1}, {1, 1}}).is_trivial());
  EXPECT_TRUE(FpAbGroup().is_trivial());
}

TEST(InvariantFactors, MatchPrimePowerOracle) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    Factors f = random_orders(rng, 4);
    EXPECT_EQ(factors(scrambled(rng, f)), testing::normalize_orders(f));
  }
}

TEST(Kernel, Examples) {
  EXPECT_EQ(factors(abgroup::kernel(times(zmod(4), 2)).group), (Factors{2}));
  FpAbGroup g = cyclic_sum({2, 0, 6});
  EXPECT_TRUE(abgroup::kernel(GroupHom::identity(g)).group.is_trivial());
  EXPECT_EQ(factors(abgroup::kernel(GroupHom::zero(g, zmod(5))).group), factors(g));
  GroupHom bad{zmod(4), zmod(3), IntMatrix{{1}}};
  EXPECT_THROW(abgroup::kernel(bad), ContractViolation);
}

TEST(ImageCokernel, Examples) {
  EXPECT_EQ(factors(abgroup::cokernel(times(FpAbGroup::free(1), 2)).group), (Factors{2}));
  EXPECT_TRUE(abgroup::cokernel(GroupHom::identity(cyclic_sum({3, 0}))).group.is_trivial());
  EXPECT_EQ(factors(abgroup::image(times(zmod(4), 2)).group), (Factors{2}));
}

TEST(Kernel, ExactnessOnRandomHoms) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    Scrambled sg = scramble(rng, random_orders(rng, 3)), sh = scramble(rng, random_orders(rng, 3));
    GroupHom f = random_hom(rng, sg, sh);
    ASSERT_TRUE(f.is_well_defined());
    auto k = abgroup::kernel(f);
    auto im = abgroup::image(f);
    auto q = abgroup::cokernel(f);
    EXPECT_TRUE(abgroup::is_injective(k.inclusion));
    EXPECT_TRUE(abgroup::compose(f, k.inclusion).is_zero());
    EXPECT_TRUE(abgroup::exactness_at(k.inclusion, f).exact);
    EXPECT_TRUE(abgroup::is_surjective(q.projection));
    EXPECT_TRUE(abgroup::exactness_at(f, q.projection).exact);
    EXPECT_TRUE(abgroup::is_injective(im.inclusion));
    // G / ker f is isomorphic to im f.
    EXPECT_TRUE(abgroup::is_isomorphic(abgroup::cokernel(k.inclusion).group, im.group));
  }
}

TEST(Tensor, Examples) {
  EXPECT_EQ(factors(abgroup::tensor(zmod(4), zmod(6))), (Factors{2}));
  FpAbGroup g = cyclic_sum({2, 3, 0});
  EXPECT_EQ(factors(abgroup::tensor(g, FpAbGroup::free(1))), factors(g));
  EXPECT_TRUE(abgroup::tensor(zmod(2), zmod(3)).is_trivial());
}

TEST(Tor, Examples) {
  EXPECT_EQ(factors(abgroup::tor(zmod(4), zmod(6))), (Factors{2}));
  EXPECT_TRUE(abgroup::tor(FpAbGroup::free(3), cyclic_sum({4, 6})).is_trivial());
  EXPECT_EQ(factors(abgroup::tor(zmod(2), zmod(2))), (Factors{2}));
}

TEST(TensorTor, GcdClosedForms) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 300; ++t) {
    Factors a = random_orders(rng, 3), b = random_orders(rng, 3);
    FpAbGroup g = scrambled(rng, a), h = scrambled(rng, b);
    EXPECT_EQ(factors(abgroup::tensor(g, h)), testing::tensor_oracle(a, b));
    EXPECT_EQ(factors(abgroup::tor(g, h)), testing::tor_oracle(a, b));
    EXPECT_EQ(factors(abgroup::tor(h, g)), factors(abgroup::tor(g, h)));
  }
}

TEST(Tor, IndependentOfResolution) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 100; ++t) {
    Factors a = random_orders(rng, 3);
    FpAbGroup g = scrambled(rng, random_orders(rng, 3));
    FpAbGroup ag = scrambled(rng, a);
    auto r1 = abgroup::free_resolution(ag);
    auto r2 = abgroup::minimal_free_resolution(ag);
    // A third one with a redundant generator and relation.
    abgroup::FreeResolution r3{block_diagonal(r2.R, IntMatrix{{1}}), r2.k + 1, r2.m + 1};
    auto t1 = abgroup::tor_data(g, r1).tor.group;
    EXPECT_EQ(factors(t1), factors(abgroup::tor_data(g, r2).tor.group));
    EXPECT_EQ(factors(t1), factors(abgroup::tor_data(g, r3).tor.group));
  }
}

TEST(Induced, Examples) {
  FpAbGroup g = cyclic_sum({4, 0});
  EXPECT_TRUE(abgroup::equal(abgroup::induced_on_tensor(GroupHom::identity(g), zmod(6)),
                             GroupHom::identity(abgroup::tensor(g, zmod(6)))));
  EXPECT_TRUE(abgroup::induced_on_tor(GroupHom::zero(zmod(4), zmod(8)), zmod(2)).is_zero());
  GroupHom t = abgroup::induced_on_tensor(times(zmod(4), 2), zmod(2));
  EXPECT_EQ(factors(t.source), (Factors{2}));
  EXPECT_TRUE(t.is_zero());
}

TEST(Induced, Functorial) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 150; ++t) {
    Scrambled s1 = scramble(rng, random_orders(rng, 2)), s2 = scramble(rng, random_orders(rng, 2)),
              s3 = scramble(rng, random_orders(rng, 2));
    const FpAbGroup& g1 = s1.group;
    FpAbGroup a = scrambled(rng, random_orders(rng, 2));
    GroupHom f = random_hom(rng, s1, s2), h = random_hom(rng, s2, s3);
    ASSERT_TRUE(f.is_well_defined() && h.is_well_defined());
    GroupHom hf = abgroup::compose(h, f);
    EXPECT_TRUE(abgroup::equal(abgroup::induced_on_tensor(hf, a),
                               abgroup::compose(abgroup::induced_on_tensor(h, a), abgroup::induced_on_tensor(f, a))));
    EXPECT_TRUE(abgroup::equal(abgroup::induced_on_tor(hf, a),
                               abgroup::compose(abgroup::induced_on_tor(h, a), abgroup::induced_on_tor(f, a))));
    EXPECT_TRUE(abgroup::equal(abgroup::induced_on_tor(GroupHom::identity(g1), a),
                               GroupHom::identity(abgroup::tor(g1, a))));
  }
}

TEST(FreeResolution, Examples) {
  auto r6 = abgroup::free_resolution(zmod(6));
  EXPECT_EQ(r6.k, 1u);
  EXPECT_EQ(r6.m, 1u);
  EXPECT_EQ(r6.R, (IntMatrix{{6}}));
  auto rz = abgroup::free_resolution(FpAbGroup::free(1));
  EXPECT_EQ(rz.k, 1u);
  EXPECT_EQ(rz.m, 0u);
  auto r = abgroup::free_resolution(cyclic_sum({2, 0}));
  EXPECT_EQ(r.k, 2u);
  EXPECT_EQ(r.m, 1u);
  EXPECT_EQ(r.R, (IntMatrix{{2}, {0}}));
}

TEST(FreeResolution, InjectiveWithRightCokernel) {
  std::mt19937_64 rng(26);
  for (int t = 0; t < 100; ++t) {
    Factors a = random_orders(rng, 4);
    FpAbGroup g = scrambled(rng, a);
    // A presentation with redundant relations.
    IntMatrix extra = g.relations() * testing::random_matrix(rng, g.relations().cols(), 2, 3);
    FpAbGroup h(g.ambient_rank(), hstack(g.relations(), extra));
    for (const auto& res : {abgroup::free_resolution(h), abgroup::minimal_free_resolution(h)}) {
      EXPECT_EQ(exactlin::kernel_basis(res.R).cols(), 0u);
      EXPECT_EQ(factors(abgroup::resolved_group(res)), testing::normalize_orders(a));
    }
  }
}

TEST(Misc, IsomorphismAndElements) {
  EXPECT_TRUE(abgroup::is_isomorphic(abgroup::direct_sum(zmod(2), zmod(3)), zmod(6)));
  EXPECT_FALSE(abgroup::is_isomorphic(abgroup::direct_sum(zmod(2), zmod(2)), zmod(4)));
  EXPECT_TRUE(abgroup::is_torsion_free(FpAbGroup::free(2)));
  EXPECT_FALSE(abgroup::is_torsion_free(cyclic_sum({0, 2})));
  GroupHom proj{FpAbGroup::free(1), zmod(2), IntMatrix{{1}}};
  auto x = abgroup::preimage_element(proj, GroupElement{zmod(2), ints({1})});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(mod_euclid(x->vector[0], Integer(2)), Integer(1));
  GroupElement a{zmod(4), ints({3})}, b{zmod(4), ints({5})};
  EXPECT_TRUE(abgroup::add(a, b).is_zero());
  EXPECT_TRUE(abgroup::equal(GroupElement{zmod(4), ints({1})}, b));
  EXPECT_FALSE(abgroup::preimage_element(times(zmod(4), 2), GroupElement{zmod(4), ints({1})}).has_value());
}

TEST(Simplify, RoundTrip) {
  std::mt19937_64 rng(27);
  for (int t = 0; t < 100; ++t) {
    FpAbGroup g = scrambled(rng, random_orders(rng, 4));
    auto s = abgroup::simplify(g);
    EXPECT_TRUE(abgroup::equal(abgroup::compose(s.from, s.to), GroupHom::identity(g)));
    EXPECT_TRUE(abgroup::equal(abgroup::compose(s.to, s.from), GroupHom::identity(s.group)));
  }
}

}  // namespace
}  // namespace sheafcoh
