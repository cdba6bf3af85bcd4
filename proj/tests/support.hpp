#pragma once

// Independent oracles and generators shared by the test binaries. Nothing
// here calls into the normal-form code it is used to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "sheafcoh/abgroup.hpp"
#include "sheafcoh/int_matrix.hpp"
#include "sheafcoh/integer.hpp"

namespace sheafcoh::testing {

using Factors = std::vector<long long>;

inline std::vector<Integer> ints(std::initializer_list<long long> v) { return {v.begin(), v.end()}; }

inline Factors factors(const abgroup::FpAbGroup& g) {
  Factors out;
  for (const auto& f : g.invariant_factors()) out.push_back(f.to_int64());
  return out;
}

inline abgroup::FpAbGroup cyclic_sum(const Factors& orders) {
  std::vector<Integer> v(orders.begin(), orders.end());
  return abgroup::FpAbGroup::from_invariant_factors(v);
}

// Invariant factors of a direct sum of cyclic groups Z/n (n = 0 is Z, n = 1
// is trivial), by splitting into prime powers and regrouping.
inline Factors normalize_orders(const Factors& orders) {
  std::map<long long, std::vector<long long>> powers;  // prime -> prime powers
  std::size_t free_rank = 0;
  for (long long n : orders) {
    if (n == 0) {
      ++free_rank;
      continue;
    }
    n = n < 0 ? -n : n;
    for (long long p = 2; p * p <= n; ++p) {
      long long q = 1;
      while (n % p == 0) {
        n /= p;
        q *= p;
      }
      if (q > 1) powers[p].push_back(q);
    }
    if (n > 1) powers[n].push_back(n);
  }
  std::size_t slots = 0;
  for (auto& [p, list] : powers) {
    std::sort(list.begin(), list.end(), std::greater<>());
    slots = std::max(slots, list.size());
  }
  Factors out(slots, 1);  // out[0] is the largest factor
  for (const auto& [p, list] : powers)
    for (std::size_t i = 0; i < list.size(); ++i) out[i] *= list[i];
  std::reverse(out.begin(), out.end());
  out.insert(out.end(), free_rank, 0);
  return out;
}

inline long long gcd0(long long a, long long b) { return std::gcd(a, b); }  // gcd(0, b) = b

// Closed forms on cyclic decompositions.
inline Factors tensor_oracle(const Factors& g, const Factors& h) {
  Factors out;
  for (long long a : g)
    for (long long b : h) out.push_back(gcd0(a, b));
  return normalize_orders(out);
}

inline Factors tor_oracle(const Factors& g, const Factors& h) {
  Factors out;
  for (long long a : g)
    for (long long b : h)
      if (a != 0 && b != 0) out.push_back(std::gcd(a, b));
  return normalize_orders(out);
}

inline Factors concat(Factors a, const Factors& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long long bound) {
  std::uniform_int_distribution<long long> d(-bound, bound);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

// Fraction-free Gaussian elimination, written independently of exactlin.
inline Integer bareiss_det(IntMatrix a) {
  const std::size_t n = a.rows();
  if (n == 0) return Integer(1);
  Integer prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k).is_zero()) {
      std::size_t s = k + 1;
      while (s < n && a(s, k).is_zero()) ++s;
      if (s == n) return Integer(0);
      a.swap_rows(k, s);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        a(i, j) = exact_div(v, prev);
      }
    prev = a(k, k);
  }
  Integer d = a(n - 1, n - 1);
  return sign < 0 ? -d : d;
}

// gcd of all k x k minors, for small matrices.
inline Integer determinantal_divisor(const IntMatrix& a, std::size_t k) {
  std::vector<std::size_t> rows(a.rows()), cols(a.cols());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  Integer g(0);
  std::vector<bool> rsel(a.rows(), false), csel(a.cols(), false);
  std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
  do {
    std::fill(csel.begin(), csel.end(), false);
    std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
    do {
      IntMatrix m(k, k);
      std::size_t ri = 0;
      for (std::size_t i = 0; i < a.rows(); ++i) {
        if (!rsel[i]) continue;
        std::size_t ci = 0;
        for (std::size_t j = 0; j < a.cols(); ++j)
          if (csel[j]) m(ri, ci++) = a(i, j);
        ++ri;
      }
      g = gcd(g, bareiss_det(m));
    } while (std::prev_permutation(csel.begin(), csel.end()));
  } while (std::prev_permutation(rsel.begin(), rsel.end()));
  return g;
}

}  // namespace sheafcoh::testing
