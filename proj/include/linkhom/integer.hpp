#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace linkhom {

/// Exact integer with an inline int64 representation and a GMP fallback.
///
/// Values that fit in int64 never allocate; any operation whose result
/// overflows int64 transparently promotes to an mpz. Results that fit back
/// into int64 are demoted, so the representation of a given value is unique
/// and equality can compare the small field first.
class Integer {
 public:
  Integer() = default;
  Integer(int v) : small_(v) {}  // NOLINT(google-explicit-constructor)
  Integer(long v) : small_(v) {}  // NOLINT(google-explicit-constructor)
  Integer(long long v) : small_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Integer(const mpz_class& v);

  /// Parses an optionally signed decimal string; throws std::invalid_argument.
  static Integer parse(std::string_view text);

  bool is_small() const { return !big_; }
  bool is_zero() const { return !big_ && small_ == 0; }
  bool is_one() const { return !big_ && small_ == 1; }
  int sign() const;
  bool fits_int64() const { return !big_; }
  std::int64_t to_int64() const;  // throws std::overflow_error when !fits_int64()
  mpz_class to_mpz() const;
  std::string to_string() const;

  Integer operator-() const;
  Integer& operator+=(const Integer& o);
  Integer& operator-=(const Integer& o);
  Integer& operator*=(const Integer& o);

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }

  /// this += a * b
  void add_mul(const Integer& a, const Integer& b);

  friend bool operator==(const Integer& a, const Integer& b);
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b);

  friend Integer abs(const Integer& a);
  friend Integer gcd(const Integer& a, const Integer& b);
  /// Quotient rounded toward negative infinity; divisor must be nonzero.
  friend Integer floor_div(const Integer& a, const Integer& b);
  /// Remainder matching floor_div (same sign as the divisor).
  friend Integer floor_mod(const Integer& a, const Integer& b);
  /// Quotient rounded to nearest (ties toward negative infinity).
  friend Integer round_div(const Integer& a, const Integer& b);
  friend bool divides(const Integer& d, const Integer& a);

 private:
  void assign(const mpz_class& v);

  std::int64_t small_ = 0;
  std::shared_ptr<const mpz_class> big_;  // set iff the value does not fit int64
};

std::ostream& operator<<(std::ostream& os, const Integer& v);

}  // namespace linkhom
