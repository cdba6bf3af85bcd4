#include "sheafcoh/integer.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace sheafcoh {

namespace {

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

mpz_class to_mpz_small(std::int64_t v) {
  mpz_class r;
  mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
  return r;
}

}  // namespace

Integer::Integer(const std::string& decimal) {
  mpz_class v;
  if (v.set_str(decimal, 10) != 0) throw std::invalid_argument("not an integer: " + decimal);
  assign_big(std::move(v));
}

void Integer::assign_big(mpz_class v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) {
    small_ = mpz_get_si(v.get_mpz_t());
    big_.reset();
  } else {
    if (big_) *big_ = std::move(v);
    else big_ = std::make_unique<mpz_class>(std::move(v));
    small_ = 0;
  }
}

void Integer::normalize() {
  if (big_ && mpz_fits_slong_p(big_->get_mpz_t())) {
    small_ = mpz_get_si(big_->get_mpz_t());
    big_.reset();
  }
}

mpz_class& Integer::make_big() {
  if (!big_) {
    big_ = std::make_unique<mpz_class>(to_mpz_small(small_));
    small_ = 0;
  }
  return *big_;
}

std::int64_t Integer::to_int64() const {
  if (big_) throw std::overflow_error("integer does not fit in 64 bits");
  return small_;
}

std::string Integer::to_string() const {
  if (!big_) return std::to_string(small_);
  return big_->get_str(10);
}

Integer& Integer::operator+=(const Integer& o) {
  if (!big_ && !o.big_) {
    std::int64_t r;
    if (!__builtin_add_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  mpz_class& me = make_big();
  me += o.to_mpz();
  normalize();
  return *this;
}

Integer& Integer::operator-=(const Integer& o) {
  if (!big_ && !o.big_) {
    std::int64_t r;
    if (!__builtin_sub_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  mpz_class& me = make_big();
  me -= o.to_mpz();
  normalize();
  return *this;
}

Integer& Integer::operator*=(const Integer& o) {
  if (!big_ && !o.big_) {
    std::int64_t r;
    if (!__builtin_mul_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  mpz_class& me = make_big();
  me *= o.to_mpz();
  normalize();
  return *this;
}

void Integer::sub_mul(const Integer& q, const Integer& o) {
  if (!big_ && !q.big_ && !o.big_) {
    std::int64_t p, r;
    if (!__builtin_mul_overflow(q.small_, o.small_, &p) && !__builtin_sub_overflow(small_, p, &r)) {
      small_ = r;
      return;
    }
  }
  mpz_class& me = make_big();
  mpz_submul(me.get_mpz_t(), q.to_mpz().get_mpz_t(), o.to_mpz().get_mpz_t());
  normalize();
}

void Integer::add_mul(const Integer& q, const Integer& o) {
  if (!big_ && !q.big_ && !o.big_) {
    std::int64_t p, r;
    if (!__builtin_mul_overflow(q.small_, o.small_, &p) && !__builtin_add_overflow(small_, p, &r)) {
      small_ = r;
      return;
    }
  }
  mpz_class& me = make_big();
  mpz_addmul(me.get_mpz_t(), q.to_mpz().get_mpz_t(), o.to_mpz().get_mpz_t());
  normalize();
}

void Integer::negate() {
  if (!big_) {
    if (small_ != kMin) {
      small_ = -small_;
      return;
    }
    make_big();
  }
  mpz_neg(big_->get_mpz_t(), big_->get_mpz_t());
  normalize();
}

int compare(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return (a.small_ > b.small_) - (a.small_ < b.small_);
  int c = cmp(a.to_mpz(), b.to_mpz());
  return (c > 0) - (c < 0);
}

Integer floor_div(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_ && !(a.small_ == kMin && b.small_ == -1)) {
    std::int64_t q = a.small_ / b.small_;
    std::int64_t r = a.small_ % b.small_;
    if (r != 0 && ((r < 0) != (b.small_ < 0))) --q;
    return Integer(static_cast<long long>(q));
  }
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

Integer mod_euclid(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_ && b.small_ != kMin) {
    if (b.small_ == -1) return Integer(0);
    std::int64_t m = b.small_ < 0 ? -b.small_ : b.small_;
    std::int64_t r = a.small_ % m;
    if (r < 0) r += m;
    return Integer(static_cast<long long>(r));
  }
  mpz_class r;
  mpz_class m = abs(b.to_mpz());
  mpz_fdiv_r(r.get_mpz_t(), a.to_mpz().get_mpz_t(), m.get_mpz_t());
  return Integer(r);
}

Integer round_div(const Integer& a, const Integer& b) {
  // Nearest integer to a / b, ties upward: floor((2a + b) / 2b) with b > 0.
  if (b.sign() < 0) return round_div(-a, -b);
  Integer num = a + a;
  num += b;
  return floor_div(num, b + b);
}

Integer exact_div(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_ && !(a.small_ == kMin && b.small_ == -1)) {
    return Integer(static_cast<long long>(a.small_ / b.small_));
  }
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

bool divides(const Integer& d, const Integer& a) {
  if (d.is_zero()) return a.is_zero();
  if (!a.big_ && !d.big_ && d.small_ != kMin) {
    std::int64_t m = d.small_ < 0 ? -d.small_ : d.small_;
    return a.small_ % m == 0;
  }
  return mpz_divisible_p(a.to_mpz().get_mpz_t(), d.to_mpz().get_mpz_t()) != 0;
}

Integer gcd(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_ && a.small_ != kMin && b.small_ != kMin) {
    std::int64_t x = a.small_ < 0 ? -a.small_ : a.small_;
    std::int64_t y = b.small_ < 0 ? -b.small_ : b.small_;
    while (y != 0) {
      std::int64_t t = x % y;
      x = y;
      y = t;
    }
    return Integer(static_cast<long long>(x));
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(g);
}

ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b;
  Integer old_s = 1, s = 0;
  Integer old_t = 0, t = 1;
  while (!r.is_zero()) {
    Integer q = floor_div(old_r, r);
    Integer tmp = old_r;
    tmp.sub_mul(q, r);
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s;
    tmp.sub_mul(q, s);
    old_s = std::move(s);
    s = std::move(tmp);
    tmp = old_t;
    tmp.sub_mul(q, t);
    old_t = std::move(t);
    t = std::move(tmp);
  }
  if (old_r.sign() < 0) {
    old_r.negate();
    old_s.negate();
    old_t.negate();
  }
  return {old_r, old_s, old_t};
}

std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.to_string(); }

}  // namespace sheafcoh
