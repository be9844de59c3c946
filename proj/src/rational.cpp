#include "hardex/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace hardex {

Rat::Rat(long n, long d) {
  if (d == 0) throw std::invalid_argument("Rat: zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rat::Rat(const mpq_class& q) : v_(q) {
  v_.canonicalize();
}

Rat Rat::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("Rat: empty literal");
  std::string s(text);
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rat: bad literal '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("Rat: zero denominator in '" + s + "'");
  q.canonicalize();
  return Rat(q);
}

std::string Rat::str() const {
  return v_.get_str();
}

static std::int64_t to_i64(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p()) throw std::overflow_error(std::string("Rat: ") + what + " out of int64 range");
  return static_cast<std::int64_t>(z.get_si());
}

std::int64_t Rat::num_i64() const { return to_i64(v_.get_num(), "numerator"); }
std::int64_t Rat::den_i64() const { return to_i64(v_.get_den(), "denominator"); }

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::invalid_argument("Rat: division by zero");
  v_ /= o.v_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
  return os << r.v_.get_str();
}

ExtRat ExtRat::pos_inf() {
  ExtRat e;
  e.inf_ = 1;
  return e;
}

ExtRat ExtRat::neg_inf() {
  ExtRat e;
  e.inf_ = -1;
  return e;
}

const Rat& ExtRat::finite() const {
  if (inf_ != 0) throw std::invalid_argument("ExtRat: value is infinite");
  return fin_;
}

std::string ExtRat::str() const {
  if (inf_ > 0) return "inf";
  if (inf_ < 0) return "-inf";
  return fin_.str();
}

ExtRat ExtRat::operator-() const {
  ExtRat e;
  e.inf_ = -inf_;
  if (inf_ == 0) e.fin_ = -fin_;
  return e;
}

ExtRat operator+(const ExtRat& a, const ExtRat& b) {
  if (a.inf_ == 0 && b.inf_ == 0) return ExtRat(a.fin_ + b.fin_);
  if (a.inf_ != 0 && b.inf_ != 0) {
    if (a.inf_ != b.inf_) throw std::invalid_argument("ExtRat: inf + -inf is undefined");
    return a;
  }
  return a.inf_ != 0 ? a : b;
}

ExtRat operator*(const Rat& s, const ExtRat& v) {
  if (v.inf_ == 0) return ExtRat(s * v.fin_);
  int sg = s.sign();
  if (sg == 0) throw std::invalid_argument("ExtRat: 0 * inf is undefined");
  return sg * v.inf_ > 0 ? ExtRat::pos_inf() : ExtRat::neg_inf();
}

bool operator==(const ExtRat& a, const ExtRat& b) {
  if (a.inf_ != b.inf_) return false;
  return a.inf_ != 0 || a.fin_ == b.fin_;
}

bool operator<(const ExtRat& a, const ExtRat& b) {
  if (a.inf_ != 0 || b.inf_ != 0) return a.inf_ < b.inf_;
  return a.fin_ < b.fin_;
}

ExtRat ext_div(const Rat& a, const Rat& b) {
  if (!b.is_zero()) return ExtRat(a / b);
  int sg = a.sign();
  if (sg == 0) throw std::invalid_argument("ext_div: 0/0 is undefined");
  return sg > 0 ? ExtRat::pos_inf() : ExtRat::neg_inf();
}

}  // namespace hardex
