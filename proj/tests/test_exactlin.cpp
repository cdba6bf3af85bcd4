#include <gtest/gtest.h>

#include <random>

#include "sheafcoh/errors.hpp"
#include "sheafcoh/exactlin.hpp"
#include "support.hpp"

namespace sheafcoh {
namespace {

using exactlin::hermite_normal_form;
using exactlin::kernel_basis;
using exactlin::smith_normal_form;
using exactlin::solve_in_lattice;
using testing::bareiss_det;
using testing::ints;
using testing::random_matrix;

void expect_smith_valid(const IntMatrix& a) {
  auto s = smith_normal_form(a);
  ASSERT_EQ(s.U * a * s.V, s.S);
  EXPECT_EQ(abs(bareiss_det(s.U)), Integer(1));
  EXPECT_EQ(abs(bareiss_det(s.V)), Integer(1));
  auto d = s.diagonal();
  for (std::size_t i = 0; i < s.S.rows(); ++i)
    for (std::size_t j = 0; j < s.S.cols(); ++j)
      if (i != j) {
        EXPECT_TRUE(s.S(i, j).is_zero());
      }
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    EXPECT_GE(d[i].sign(), 0);
    if (d[i].is_zero()) {
      EXPECT_TRUE(d[i + 1].is_zero());
    } else {
      EXPECT_TRUE(divides(d[i], d[i + 1]));
    }
  }
}

TEST(Integer, PromotesPastInt64AndBack) {
  Integer big = Integer(std::int64_t{1} << 62) * Integer(8);
  EXPECT_FALSE(big.fits_int64());
  EXPECT_EQ(big.to_string(), "36893488147419103232");
  Integer back = floor_div(big, Integer(16));
  EXPECT_TRUE(back.fits_int64());
  EXPECT_EQ(back, Integer(std::int64_t{1} << 61));
  Integer min = Integer(std::numeric_limits<long long>::min());
  EXPECT_EQ((-min).to_string(), "9223372036854775808");
}

TEST(Integer, DivisionRounding) {
  EXPECT_EQ(floor_div(Integer(-7), Integer(2)), Integer(-4));
  EXPECT_EQ(mod_euclid(Integer(-7), Integer(3)), Integer(2));
  EXPECT_EQ(round_div(Integer(1), Integer(-1)), Integer(-1));
  EXPECT_EQ(round_div(Integer(7), Integer(2)), Integer(4));
  EXPECT_EQ(round_div(Integer(-7), Integer(2)), Integer(-3));
  auto e = extended_gcd(Integer(240), Integer(46));
  EXPECT_EQ(e.g, Integer(2));
  EXPECT_EQ(e.s * Integer(240) + e.t * Integer(46), Integer(2));
}

TEST(Smith, Examples) {
  EXPECT_EQ(smith_normal_form(IntMatrix{{2, 4}, {6, 8}}).diagonal(), ints({2, 4}));
  auto id = smith_normal_form(IntMatrix::identity(3));
  EXPECT_EQ(id.diagonal(), ints({1, 1, 1}));
  EXPECT_EQ(smith_normal_form(IntMatrix::zero(2, 3)).diagonal(), ints({0, 0}));
  EXPECT_EQ(smith_normal_form(IntMatrix(0, 4)).diagonal().size(), 0u);
}

TEST(Smith, RandomIdentities) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
    expect_smith_valid(random_matrix(rng, r, c, 50));
  }
}

TEST(Smith, DiagonalMatchesDeterminantalDivisors) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix a = random_matrix(rng, r, c, 9);
    auto d = exactlin::smith_diagonal(a);
    Integer prod(1);
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
      prod *= d[k - 1];
      EXPECT_EQ(prod, testing::determinantal_divisor(a, k));
    }
  }
}

TEST(Smith, InvariantUnderPermutationAndTranspose) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    IntMatrix a = random_matrix(rng, r, c, 20);
    auto d = exactlin::smith_diagonal(a);
    IntMatrix p = a;
    p.swap_rows(0, r - 1);
    p.swap_cols(0, c - 1);
    EXPECT_EQ(exactlin::smith_diagonal(p), d);
    EXPECT_EQ(exactlin::smith_diagonal(a.transpose()), d);
  }
}

TEST(Smith, LargeEntriesStayExact) {
  IntMatrix a{{1000000007, 998244353}, {2147483647, 4294967291LL}};
  expect_smith_valid(a);
  IntMatrix b(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) b(i, j) = Integer("123456789012345678901234567") * Integer(long(i * 3 + j + 1));
  expect_smith_valid(b);
}

TEST(Hermite, Examples) {
  auto h = hermite_normal_form(IntMatrix{{0, 1}, {2, 0}});
  EXPECT_EQ(h.H, (IntMatrix{{2, 0}, {0, 1}}));
  EXPECT_EQ(hermite_normal_form(IntMatrix::identity(3)).H, IntMatrix::identity(3));
  auto g = hermite_normal_form(IntMatrix{{4}, {6}});
  EXPECT_EQ(g.H, (IntMatrix{{2}, {0}}));
  EXPECT_EQ(g.U * (IntMatrix{{4}, {6}}), g.H);
}

TEST(Hermite, RandomShape) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    IntMatrix a = random_matrix(rng, r, c, 30);
    auto h = hermite_normal_form(a);
    ASSERT_EQ(h.U * a, h.H);
    EXPECT_EQ(abs(bareiss_det(h.U)), Integer(1));
    long last = -1;
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t p = 0;
      while (p < c && h.H(i, p).is_zero()) ++p;
      if (p == c) {
        for (std::size_t k = i; k < r; ++k) EXPECT_TRUE(is_zero_vector(h.H.row(k)));
        break;
      }
      EXPECT_GT(static_cast<long>(p), last);
      last = static_cast<long>(p);
      EXPECT_GT(h.H(i, p).sign(), 0);
      for (std::size_t k = 0; k < i; ++k) {
        EXPECT_GE(h.H(k, p).sign(), 0);
        EXPECT_LT(h.H(k, p), h.H(i, p));
      }
    }
  }
}

TEST(Solve, Examples) {
  EXPECT_EQ(*solve_in_lattice(IntMatrix{{2}}, ints({4})), ints({2}));
  EXPECT_FALSE(solve_in_lattice(IntMatrix{{2}}, ints({3})).has_value());
  auto x = solve_in_lattice(IntMatrix{{2, 3}}, ints({1}));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ((*x)[0] * Integer(2) + (*x)[1] * Integer(3), Integer(1));
  EXPECT_THROW(solve_in_lattice(IntMatrix{{2, 3}}, ints({1, 2})), InputError);
}

TEST(Solve, AgreesWithHermiteResidue) {
  // b is in the column lattice iff reducing b against the row Hermite form of
  // A^T leaves no residue.
  std::mt19937_64 rng(15);
  for (int t = 0; t < 300; ++t) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix a = random_matrix(rng, r, c, 6);
    IntVector b(r);
    for (auto& v : b) v = Integer(static_cast<long long>(rng() % 13) - 6);
    auto h = hermite_normal_form(a.transpose());
    IntVector res = b;
    for (std::size_t i = 0; i < h.rank; ++i) {
      std::size_t p = h.pivot_cols[i];
      if (!divides(h.H(i, p), res[p])) break;
      Integer q = exact_div(res[p], h.H(i, p));
      for (std::size_t k = 0; k < r; ++k) res[k].sub_mul(q, h.H(i, k));
    }
    bool member = is_zero_vector(res);
    auto x = solve_in_lattice(a, b);
    EXPECT_EQ(x.has_value(), member);
    if (x) {
      EXPECT_EQ(a * std::span<const Integer>(*x), b);
    }
  }
}

TEST(Kernel, Examples) {
  IntMatrix k = kernel_basis(IntMatrix{{1, 1}});
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_EQ(k(0, 0), -k(1, 0));
  EXPECT_EQ(abs(k(0, 0)), Integer(1));
  EXPECT_EQ(kernel_basis(IntMatrix::identity(3)).cols(), 0u);
  EXPECT_EQ(exactlin::rank(kernel_basis(IntMatrix::zero(1, 2))), 2u);
}

TEST(Kernel, SaturatedOnRandom) {
  // Every small kernel vector found by enumeration is an integer combination.
  std::mt19937_64 rng(16);
  for (int t = 0; t < 60; ++t) {
    std::size_t r = 1 + rng() % 2, c = 3;
    IntMatrix a = random_matrix(rng, r, c, 4);
    IntMatrix k = kernel_basis(a);
    EXPECT_TRUE((a * k).is_zero());
    for (long x = -4; x <= 4; ++x)
      for (long y = -4; y <= 4; ++y)
        for (long z = -4; z <= 4; ++z) {
          IntVector v{Integer(x), Integer(y), Integer(z)};
          if (!is_zero_vector(a * std::span<const Integer>(v))) continue;
          EXPECT_TRUE(solve_in_lattice(k, v).has_value());
        }
  }
}

TEST(Determinant, AgreesWithIndependentElimination) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + rng() % 6;
    IntMatrix a = random_matrix(rng, n, n, 20);
    EXPECT_EQ(exactlin::determinant(a), bareiss_det(a));
  }
}

}  // namespace
}  // namespace sheafcoh
