#include "linkhom/integer.hpp"

#include <ostream>
#include <stdexcept>

namespace linkhom {

static_assert(sizeof(long) == sizeof(std::int64_t), "LP64 platform expected");

Integer::Integer(const mpz_class& v) { assign(v); }

void Integer::assign(const mpz_class& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) {
    small_ = mpz_get_si(v.get_mpz_t());
    big_.reset();
  } else {
    small_ = 0;
    big_ = std::make_shared<const mpz_class>(v);
  }
}

Integer Integer::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw std::invalid_argument("malformed integer literal: " + s);
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed integer literal: " + s);
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(mpz_class(s, 10));
}

int Integer::sign() const {
  if (big_) return sgn(*big_);
  return (small_ > 0) - (small_ < 0);
}

std::int64_t Integer::to_int64() const {
  if (big_) throw std::overflow_error("integer does not fit in 64 bits");
  return small_;
}

mpz_class Integer::to_mpz() const {
  if (big_) return *big_;
  return mpz_class(static_cast<long>(small_));
}

std::string Integer::to_string() const {
  if (big_) return big_->get_str();
  return std::to_string(small_);
}

Integer Integer::operator-() const {
  if (!big_ && small_ != INT64_MIN) return Integer(static_cast<long long>(-small_));
  return Integer(mpz_class(-to_mpz()));
}

Integer& Integer::operator+=(const Integer& o) {
  std::int64_t r;
  if (!big_ && !o.big_ && !__builtin_add_overflow(small_, o.small_, &r)) {
    small_ = r;
    return *this;
  }
  assign(to_mpz() + o.to_mpz());
  return *this;
}

Integer& Integer::operator-=(const Integer& o) {
  std::int64_t r;
  if (!big_ && !o.big_ && !__builtin_sub_overflow(small_, o.small_, &r)) {
    small_ = r;
    return *this;
  }
  assign(to_mpz() - o.to_mpz());
  return *this;
}

Integer& Integer::operator*=(const Integer& o) {
  std::int64_t r;
  if (!big_ && !o.big_ && !__builtin_mul_overflow(small_, o.small_, &r)) {
    small_ = r;
    return *this;
  }
  assign(to_mpz() * o.to_mpz());
  return *this;
}

void Integer::add_mul(const Integer& a, const Integer& b) {
  std::int64_t p, r;
  if (!big_ && !a.big_ && !b.big_ && !__builtin_mul_overflow(a.small_, b.small_, &p) &&
      !__builtin_add_overflow(small_, p, &r)) {
    small_ = r;
    return;
  }
  mpz_class acc = to_mpz();
  mpz_addmul(acc.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  assign(acc);
}

bool operator==(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  if (!a.big_ || !b.big_) return false;  // representation is canonical
  return *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
  int c = cmp(a.to_mpz(), b.to_mpz());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

Integer gcd(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_ && a.small_ != INT64_MIN && b.small_ != INT64_MIN) {
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

Integer floor_div(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_ && !(a.small_ == INT64_MIN && b.small_ == -1)) {
    std::int64_t q = a.small_ / b.small_;
    if ((a.small_ % b.small_ != 0) && ((a.small_ < 0) != (b.small_ < 0))) --q;
    return Integer(static_cast<long long>(q));
  }
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

Integer floor_mod(const Integer& a, const Integer& b) { return a - floor_div(a, b) * b; }

Integer round_div(const Integer& a, const Integer& b) {
  // ceil((2a - b) / 2b) for b > 0
  if (b.sign() < 0) return round_div(-a, -b);
  return -floor_div(b - a - a, b + b);
}

bool divides(const Integer& d, const Integer& a) {
  if (d.is_zero()) return a.is_zero();
  return floor_mod(a, d).is_zero();
}

std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.to_string(); }

}  // namespace linkhom
