#pragma once

// Arbitrary-precision integer with an inline 64-bit fast path.
//
// Values that fit in int64_t are stored inline; anything larger is promoted
// to a heap-allocated GMP integer and demoted again as soon as a result fits.
// Every arithmetic operation checks for overflow, so no intermediate value can
// wrap.

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>

namespace sheafcoh {

class Integer {
 public:
  Integer() noexcept = default;
  Integer(int v) noexcept : small_(v) {}              // NOLINT(implicit)
  Integer(long v) noexcept : small_(v) {}             // NOLINT(implicit)
  Integer(long long v) noexcept : small_(v) {}        // NOLINT(implicit)
  explicit Integer(const mpz_class& v) { assign_big(v); }
  explicit Integer(const std::string& decimal);

  Integer(const Integer& other) : small_(other.small_) {
    if (other.big_) big_ = std::make_unique<mpz_class>(*other.big_);
  }
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& other) {
    if (this != &other) {
      if (other.big_) {
        if (big_) *big_ = *other.big_;
        else big_ = std::make_unique<mpz_class>(*other.big_);
      } else {
        big_.reset();
        small_ = other.small_;
      }
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;

  bool is_small() const noexcept { return !big_; }
  int sign() const noexcept {
    if (!big_) return (small_ > 0) - (small_ < 0);
    return sgn(*big_);
  }
  bool is_zero() const noexcept { return !big_ && small_ == 0; }
  bool is_one() const noexcept { return !big_ && small_ == 1; }
  bool fits_int64() const noexcept { return !big_; }
  std::int64_t to_int64() const;  // throws std::overflow_error
  mpz_class to_mpz() const { return big_ ? *big_ : mpz_class(static_cast<long>(small_)); }
  std::string to_string() const;

  Integer& operator+=(const Integer& o);
  Integer& operator-=(const Integer& o);
  Integer& operator*=(const Integer& o);
  /// this -= q * o, the elimination workhorse.
  void sub_mul(const Integer& q, const Integer& o);
  void add_mul(const Integer& q, const Integer& o);
  void negate();

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }
  friend Integer operator-(Integer a) {
    a.negate();
    return a;
  }

  friend int compare(const Integer& a, const Integer& b);
  friend bool operator==(const Integer& a, const Integer& b) { return compare(a, b) == 0; }
  friend auto operator<=>(const Integer& a, const Integer& b) { return compare(a, b) <=> 0; }

  /// Quotient rounded toward negative infinity; divisor must be nonzero.
  friend Integer floor_div(const Integer& a, const Integer& b);
  /// Nonnegative remainder for b != 0 (Euclidean).
  friend Integer mod_euclid(const Integer& a, const Integer& b);
  /// Quotient rounded to nearest (ties toward negative infinity).
  friend Integer round_div(const Integer& a, const Integer& b);
  /// Exact division; behaviour undefined unless b divides a.
  friend Integer exact_div(const Integer& a, const Integer& b);
  friend bool divides(const Integer& d, const Integer& a);
  friend Integer abs(Integer a) {
    if (a.sign() < 0) a.negate();
    return a;
  }
  friend Integer gcd(const Integer& a, const Integer& b);

  friend std::ostream& operator<<(std::ostream& os, const Integer& v);

 private:
  void assign_big(mpz_class v);
  void normalize();
  mpz_class& make_big();

  std::int64_t small_ = 0;
  std::unique_ptr<mpz_class> big_;
};

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
struct ExtendedGcd {
  Integer g, s, t;
};
ExtendedGcd extended_gcd(const Integer& a, const Integer& b);

}  // namespace sheafcoh
