#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace hardex {

/// Arbitrary-precision rational, always reduced, denominator > 0.
/// Thin wrapper over GMP's mpq_class; all arithmetic is exact.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rat(long n, long d);
  explicit Rat(const mpq_class& q);

  /// Parses "p/q" or "p" with optional sign. Throws std::invalid_argument.
  static Rat parse(std::string_view text);

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  /// "p/q", or just "p" when the denominator is 1.
  std::string str() const;

  /// Narrowing accessors for serialization; throw if out of int64 range.
  std::int64_t num_i64() const;
  std::int64_t den_i64() const;

  const mpq_class& raw() const { return v_; }

  static Rat abs(const Rat& r) { return Rat(mpq_class(::abs(r.v_))); }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r);

 private:
  mpq_class v_;
};

/// Rational extended with +inf/-inf. Arithmetic on opposite infinities and
/// 0 * inf is rejected rather than given a value.
class ExtRat {
 public:
  ExtRat() = default;
  ExtRat(Rat v) : fin_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  ExtRat(long v) : fin_(v) {}            // NOLINT(google-explicit-constructor)

  static ExtRat pos_inf();
  static ExtRat neg_inf();

  bool is_finite() const { return inf_ == 0; }
  /// -1, 0, +1 for -inf, finite, +inf.
  int inf_sign() const { return inf_; }
  /// Sign of the value (-1, 0, +1), infinities included.
  int sign() const { return inf_ != 0 ? inf_ : fin_.sign(); }

  const Rat& finite() const;

  std::string str() const;

  ExtRat operator-() const;
  friend ExtRat operator+(const ExtRat& a, const ExtRat& b);
  friend ExtRat operator*(const Rat& s, const ExtRat& v);

  friend bool operator==(const ExtRat& a, const ExtRat& b);
  friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
  friend bool operator<(const ExtRat& a, const ExtRat& b);
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return a < b || a == b; }
  friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
  friend bool operator>=(const ExtRat& a, const ExtRat& b) { return b <= a; }

 private:
  Rat fin_;
  int inf_ = 0;
};

/// a/b with the division-by-zero convention a/0 := +inf for a > 0 and
/// -inf for a < 0. 0/0 is rejected.
ExtRat ext_div(const Rat& a, const Rat& b);

}  // namespace hardex
