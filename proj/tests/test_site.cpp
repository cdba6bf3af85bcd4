#include <gtest/gtest.h>

#include <random>

#include "sheafcoh/errors.hpp"
#include "sheafcoh/site.hpp"
#include "support.hpp"

namespace sheafcoh {
namespace {

using abgroup::FpAbGroup;
using site::Poset;
using site::Sheaf;
using testing::cyclic_sum;
using testing::Factors;
using testing::factors;

FpAbGroup zmod(long long n) { return FpAbGroup::cyclic(Integer(n)); }

Poset pc4() { return Poset::from_relations({"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}); }

std::vector<Factors> stalk_factors(const Sheaf& f) {
  std::vector<Factors> out;
  for (const auto& s : f.stalks()) out.push_back(factors(s));
  return out;
}

TEST(Poset, ClosureAndValidation) {
  Poset p = Poset::from_relations({"x", "y", "z"}, {{0, 1}, {1, 2}});
  EXPECT_TRUE(p.leq(0, 2));
  EXPECT_FALSE(p.leq(2, 0));
  EXPECT_EQ(p.height(), 2);
  EXPECT_FALSE(site::validate(p).has_value());
  EXPECT_THROW(Poset::from_relations({"x", "y"}, {{0, 1}, {1, 0}}), InputError);
  EXPECT_THROW(Poset::from_relations({"1", "2", "3", "4", "5", "6", "7", "8", "9"}, {}), InputError);
  EXPECT_THROW(Poset::from_closed({"x", "y", "z"}, {{true, true, false}, {false, true, true}, {false, false, true}}),
               InputError);
  EXPECT_EQ(Poset().height(), -1);
  EXPECT_EQ(pc4().covers().size(), 4u);
}

TEST(StrictChains, Examples) {
  EXPECT_TRUE(site::strict_chains(Poset::antichain(3), 1).empty());
  auto c = site::strict_chains(Poset::chain(3), 2);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], (site::Chain{0, 1, 2}));
  auto e = site::strict_chains(pc4(), 1);
  EXPECT_EQ(e, (std::vector<site::Chain>{{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
  EXPECT_EQ(site::strict_chains(pc4(), 0).size(), 4u);
}

TEST(StrictChains, CountMatchesBruteForce) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 50; ++t) {
    Poset x = site::random_poset(rng, 1 + rng() % 6);
    for (int n = 0; n <= 3; ++n) {
      std::size_t count = 0;
      std::size_t k = x.size();
      std::vector<std::size_t> idx(static_cast<std::size_t>(n) + 1);
      // Enumerate all (n+1)-tuples.
      std::size_t total = 1;
      for (int i = 0; i <= n; ++i) total *= k;
      for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (auto& v : idx) {
          v = c % k;
          c /= k;
        }
        bool ok = true;
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) ok = ok && x.lt(idx[i], idx[i + 1]);
        count += ok;
      }
      auto chains = site::strict_chains(x, n);
      EXPECT_EQ(chains.size(), count);
      EXPECT_TRUE(std::is_sorted(chains.begin(), chains.end()));
    }
  }
}

TEST(Sheaf, Constructors) {
  Sheaf p = site::constant_sheaf(Poset::point(), FpAbGroup::free(1));
  EXPECT_EQ(stalk_factors(p), (std::vector<Factors>{{0}}));
  Sheaf u = site::upset_extension(pc4(), 0, zmod(2));
  EXPECT_EQ(stalk_factors(u), (std::vector<Factors>{{2}, {}, {2}, {2}}));
  Sheaf d = site::downset_extension(pc4(), 2, FpAbGroup::free(1));
  EXPECT_EQ(stalk_factors(d), (std::vector<Factors>{{0}, {0}, {0}, {}}));
  EXPECT_TRUE(u.verify());
  EXPECT_TRUE(d.verify());
}

TEST(Sheaf, FunctorialityViolationRejected) {
  // On a square a < c, a < d, c < e, d < e: going around both ways must agree.
  Poset sq = Poset::from_relations({"a", "c", "d", "e"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  std::vector<FpAbGroup> st(4, FpAbGroup::free(1));
  auto m = [](long long v) { return IntMatrix{{v}}; };
  EXPECT_NO_THROW(Sheaf::from_covers(sq, st, {{{0, 1}, m(2)}, {{0, 2}, m(1)}, {{1, 3}, m(1)}, {{2, 3}, m(2)}}));
  try {
    Sheaf::from_covers(sq, st, {{{0, 1}, m(2)}, {{0, 2}, m(1)}, {{1, 3}, m(1)}, {{2, 3}, m(3)}});
    FAIL() << "expected a functoriality violation";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("functoriality violation"), std::string::npos);
  }
  // Ill-defined restriction Z/2 -> Z/4 sending 1 to 1.
  Poset two = Poset::chain(2);
  EXPECT_THROW(Sheaf::from_covers(two, {zmod(2), zmod(4)}, {{{0, 1}, m(1)}}), InputError);
}

TEST(Sheaf, RandomSheavesAreFunctors) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 100; ++t) {
    Poset x = site::random_poset(rng, 1 + rng() % 6);
    Sheaf f = site::random_sheaf(x, rng());
    std::string why;
    EXPECT_TRUE(f.verify(&why)) << why;
  }
}

TEST(Sheaf, RandomSheafDeterministic) {
  Poset x = pc4();
  site::SheafParams none;
  none.min_summands = none.max_summands = 0;
  EXPECT_TRUE(site::random_sheaf(x, 5, none).is_zero());
  Sheaf a = site::random_sheaf(x, 99), b = site::random_sheaf(x, 99);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(a.stalk(i).relations(), b.stalk(i).relations());
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x.leq(i, j)) {
        EXPECT_EQ(a.restriction_matrix(i, j), b.restriction_matrix(i, j));
      }
  }
}

TEST(Tensor, Examples) {
  Sheaf f = site::constant_sheaf(pc4(), zmod(4));
  EXPECT_EQ(stalk_factors(site::sheaf_tensor(f, zmod(2))), (std::vector<Factors>(4, {2})));
  Sheaf g = site::random_sheaf(pc4(), 3);
  EXPECT_EQ(stalk_factors(site::sheaf_tensor(g, FpAbGroup::free(1))), stalk_factors(g));
  EXPECT_TRUE(site::sheaf_tensor(site::zero_sheaf(pc4()), zmod(6)).is_zero());
}

TEST(Tor, Examples) {
  Sheaf f = site::constant_sheaf(pc4(), zmod(4));
  Sheaf t = site::sheaf_tor(f, zmod(2));
  EXPECT_EQ(stalk_factors(t), (std::vector<Factors>(4, {2})));
  EXPECT_TRUE(t.verify());
  EXPECT_TRUE(site::sheaf_tor(site::constant_sheaf(pc4(), FpAbGroup::free(2)), zmod(6)).is_zero());
  EXPECT_TRUE(site::sheaf_tor(site::random_sheaf(pc4(), 8), FpAbGroup::free(1)).is_zero());
}

TEST(DerivedTensor, Examples) {
  Sheaf f = site::random_sheaf(pc4(), 17);
  auto k = site::sheaf_derived_tensor(f, FpAbGroup::free(1));
  EXPECT_TRUE(k.sheaf(-1).is_zero());
  EXPECT_EQ(stalk_factors(k.sheaf(0)), stalk_factors(f));

  auto k4 = site::sheaf_derived_tensor(site::constant_sheaf(pc4(), zmod(4)), zmod(2));
  for (std::size_t x = 0; x < 4; ++x) {
    auto c = k4.stalk_complex(x);
    EXPECT_EQ(factors(chains::cohomology(c, -1).group()), (Factors{2}));
    EXPECT_EQ(factors(chains::cohomology(c, 0).group()), (Factors{2}));
  }
  auto kz = site::sheaf_derived_tensor(site::constant_sheaf(pc4(), FpAbGroup::free(1)), zmod(5));
  EXPECT_EQ(factors(chains::cohomology(kz.stalk_complex(1), -1).group()), Factors{});
  EXPECT_EQ(factors(chains::cohomology(kz.stalk_complex(1), 0).group()), (Factors{5}));
}

TEST(DerivedTensor, StalkCohomologyIsTorAndTensor) {
  std::mt19937_64 rng(43);
  const std::vector<long long> orders = {0, 2, 3, 4, 6};
  for (int t = 0; t < 100; ++t) {
    Poset x = site::random_poset(rng, 1 + rng() % 5);
    Sheaf f = site::random_sheaf(x, rng());
    Factors a(1 + rng() % 2);
    for (auto& v : a) v = orders[rng() % orders.size()];
    FpAbGroup ag = cyclic_sum(a);
    auto k = site::sheaf_derived_tensor(f, ag);
    ASSERT_TRUE(k.verify());
    Sheaf tor = site::sheaf_tor(f, ag), ten = site::sheaf_tensor(f, ag);
    for (std::size_t e = 0; e < x.size(); ++e) {
      Factors stalk = factors(f.stalk(e));
      auto c = k.stalk_complex(e);
      EXPECT_EQ(factors(chains::cohomology(c, -1).group()), testing::tor_oracle(stalk, a));
      EXPECT_EQ(factors(chains::cohomology(c, 0).group()), testing::tensor_oracle(stalk, a));
      EXPECT_EQ(factors(tor.stalk(e)), testing::tor_oracle(stalk, a));
      EXPECT_EQ(factors(ten.stalk(e)), testing::tensor_oracle(stalk, a));
    }
  }
}

TEST(Pullback, Examples) {
  Sheaf g = site::random_sheaf(pc4(), 4);
  Sheaf same = site::pullback(site::MonotoneMap::identity(pc4()), g);
  EXPECT_EQ(stalk_factors(same), stalk_factors(g));

  Poset y = Poset::chain(2);
  Sheaf gy = Sheaf::from_covers(y, {FpAbGroup::free(1), zmod(2)}, {{{0, 1}, IntMatrix{{1}}}});
  site::MonotoneMap f{pc4(), y, {0, 0, 1, 1}};
  ASSERT_TRUE(f.verify());
  EXPECT_EQ(stalk_factors(site::pullback(f, gy)), (std::vector<Factors>{{0}, {0}, {2}, {2}}));

  site::MonotoneMap c = site::MonotoneMap::to_point(pc4());
  Sheaf pt = site::constant_sheaf(Poset::point(), zmod(9));
  Sheaf pc = site::pullback(c, pt);
  EXPECT_EQ(stalk_factors(pc), (std::vector<Factors>(4, {9})));
  for (auto [a, b] : pc4().covers()) EXPECT_TRUE(pc.restriction_matrix(a, b).is_identity());
}

TEST(Pullback, Functorial) {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 50; ++t) {
    Poset a = site::random_poset(rng, 1 + rng() % 4);
    Poset b = site::random_poset(rng, 1 + rng() % 4);
    Poset c = site::random_poset(rng, 1 + rng() % 4);
    auto f = site::random_monotone_map(rng, a, b);
    auto g = site::random_monotone_map(rng, b, c);
    ASSERT_TRUE(f.verify() && g.verify());
    Sheaf s = site::random_sheaf(c, rng());
    Sheaf lhs = site::pullback(site::compose(g, f), s);
    Sheaf rhs = site::pullback(f, site::pullback(g, s));
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(lhs.stalk(i).relations(), rhs.stalk(i).relations());
      for (std::size_t j = 0; j < a.size(); ++j)
        if (a.leq(i, j)) {
          EXPECT_EQ(lhs.restriction_matrix(i, j), rhs.restriction_matrix(i, j));
        }
    }
  }
}

TEST(GlobalSections, Examples) {
  EXPECT_EQ(factors(site::global_sections(site::constant_sheaf(pc4(), zmod(6))).group), (Factors{6}));
  EXPECT_TRUE(site::global_sections(site::zero_sheaf(Poset())).group.is_trivial());
  // A minimum m: sections are determined by the value at m.
  Poset v = Poset::from_relations({"m", "x", "y"}, {{0, 1}, {0, 2}});
  std::mt19937_64 rng(45);
  for (int t = 0; t < 30; ++t) {
    Sheaf f = site::random_sheaf(v, rng());
    EXPECT_EQ(factors(site::global_sections(f).group), factors(f.stalk(0)));
  }
  // Two components: one copy of G each.
  Poset two = Poset::antichain(2);
  EXPECT_EQ(factors(site::global_sections(site::constant_sheaf(two, zmod(3))).group), (Factors{3, 3}));
}

TEST(GlobalSections, SectionsAreCompatible) {
  std::mt19937_64 rng(46);
  for (int t = 0; t < 50; ++t) {
    Poset x = site::random_poset(rng, 1 + rng() % 5);
    Sheaf f = site::random_sheaf(x, rng());
    auto g = site::global_sections(f);
    std::vector<std::size_t> off(x.size() + 1, 0);
    for (std::size_t i = 0; i < x.size(); ++i) off[i + 1] = off[i] + f.stalk(i).ambient_rank();
    for (std::size_t c = 0; c < g.inclusion.matrix.cols(); ++c) {
      IntVector s = g.inclusion.matrix.column(c);
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (!x.lt(i, j)) continue;
          IntVector si(s.begin() + off[i], s.begin() + off[i + 1]);
          IntVector sj(s.begin() + off[j], s.begin() + off[j + 1]);
          IntVector r = f.restriction_matrix(i, j) * std::span<const Integer>(si);
          for (std::size_t k = 0; k < r.size(); ++k) r[k] -= sj[k];
          EXPECT_TRUE(f.stalk(j).is_relation(r));
        }
    }
  }
}

}  // namespace
}  // namespace sheafcoh
