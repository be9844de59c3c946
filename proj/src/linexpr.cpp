#include "hardex/linexpr.hpp"

#include <sstream>
#include <stdexcept>

namespace hardex {

LinExpr LinExpr::var(int index, Rat coeff) {
  if (index < 0) throw std::invalid_argument("LinExpr: negative variable index");
  LinExpr e;
  e.set_coeff(index, std::move(coeff));
  return e;
}

void LinExpr::set_coeff(int index, Rat value) {
  if (value.is_zero()) {
    coeffs_.erase(index);
  } else {
    coeffs_[index] = std::move(value);
  }
}

Rat LinExpr::coeff(int index) const {
  auto it = coeffs_.find(index);
  return it == coeffs_.end() ? Rat(0) : it->second;
}

ExtRat LinExpr::eval(std::span<const Rat> x) const {
  Rat acc(0);
  for (const auto& [i, c] : coeffs_) {
    if (i >= static_cast<int>(x.size())) throw std::invalid_argument("LinExpr::eval: point too short");
    acc += c * x[i];
  }
  return constant_ + ExtRat(acc);
}

Rat LinExpr::eval_finite(std::span<const Rat> x) const {
  return eval(x).finite();
}

std::vector<Rat> LinExpr::coeff_vector(int n) const {
  std::vector<Rat> out(static_cast<std::size_t>(n), Rat(0));
  for (const auto& [i, c] : coeffs_) {
    if (i >= n) throw std::invalid_argument("LinExpr: variable index out of dimension");
    out[static_cast<std::size_t>(i)] = c;
  }
  return out;
}

LinExpr LinExpr::operator-() const {
  LinExpr e;
  e.constant_ = -constant_;
  for (const auto& [i, c] : coeffs_) e.coeffs_.emplace(i, -c);
  return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  constant_ = constant_ + o.constant_;
  for (const auto& [i, c] : o.coeffs_) set_coeff(i, coeff(i) + c);
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  constant_ = constant_ + (-o.constant_);
  for (const auto& [i, c] : o.coeffs_) set_coeff(i, coeff(i) - c);
  return *this;
}

LinExpr operator*(const Rat& s, const LinExpr& e) {
  LinExpr out;
  if (s.is_zero()) {
    if (!e.constant_.is_finite()) throw std::invalid_argument("LinExpr: 0 * infinite expression");
    return out;
  }
  out.constant_ = s * e.constant_;
  for (const auto& [i, c] : e.coeffs_) out.coeffs_.emplace(i, s * c);
  return out;
}

LinExpr operator*(const LinExpr& a, const LinExpr& b) {
  if (a.is_constant() && a.has_finite_constant()) return a.constant().finite() * b;
  if (b.is_constant() && b.has_finite_constant()) return b.constant().finite() * a;
  throw std::invalid_argument("LinExpr: product of two non-constant expressions is not linear");
}

LinExpr lin_combine(std::span<const std::pair<Rat, LinExpr>> terms, const ExtRat& offset) {
  LinExpr acc;
  acc.constant_ = offset;
  for (const auto& [scale, expr] : terms) acc += scale * expr;
  return acc;
}

namespace {

void append_term(std::ostringstream& os, bool first, const Rat& coeff, const std::string& name) {
  Rat a = Rat::abs(coeff);
  if (first) {
    if (coeff.sign() < 0) os << "-";
  } else {
    os << (coeff.sign() < 0 ? " - " : " + ");
  }
  if (name.empty()) {
    os << a.str();
  } else if (a == Rat(1)) {
    os << name;
  } else {
    os << a.str() << "*" << name;
  }
}

}  // namespace

std::string LinExpr::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : coeffs_) {
    append_term(os, first, c, "x" + std::to_string(i + 1));
    first = false;
  }
  if (constant_.is_finite()) {
    if (first) {
      os << constant_.finite().str();
    } else if (!constant_.finite().is_zero()) {
      append_term(os, false, constant_.finite(), "");
    }
  } else {
    if (!first) os << (constant_.inf_sign() > 0 ? " + " : " - ");
    else if (constant_.inf_sign() < 0) os << "-";
    os << "inf";
  }
  return os.str();
}

Constraint::Constraint(LinExpr expr, Kind kind) : expr_(std::move(expr)), kind_(kind) {
  if (!expr_.has_finite_constant())
    throw std::invalid_argument("Constraint: infinite constant");

  // Scale so every coefficient and the constant are coprime integers.
  mpz_class lcm_den(1), gcd_num(0);
  auto fold = [&](const Rat& r) {
    if (r.is_zero()) return;
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), r.raw().get_den().get_mpz_t());
  };
  for (const auto& [i, c] : expr_.coeffs()) fold(c);
  fold(expr_.constant().finite());
  auto fold_num = [&](const Rat& r) {
    if (r.is_zero()) return;
    mpz_class scaled = r.raw().get_num() * (lcm_den / r.raw().get_den());
    mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), scaled.get_mpz_t());
  };
  for (const auto& [i, c] : expr_.coeffs()) fold_num(c);
  fold_num(expr_.constant().finite());

  if (gcd_num != 0) {
    Rat factor{mpq_class(lcm_den, gcd_num)};
    expr_ = factor * expr_;
  }
  if (kind_ == Kind::Eq) {
    const Rat& lead = expr_.coeffs().empty() ? expr_.constant().finite()
                                             : expr_.coeffs().begin()->second;
    if (lead.sign() < 0) expr_ = -expr_;
  }
}

bool Constraint::holds(std::span<const Rat> x) const {
  int sg = expr_.eval_finite(x).sign();
  switch (kind_) {
    case Kind::Eq: return sg == 0;
    case Kind::Le: return sg <= 0;
    case Kind::Lt: return sg < 0;
  }
  return false;
}

std::string Constraint::str() const {
  LinExpr lhs = expr_;
  Rat rhs = -expr_.constant().finite();
  lhs -= LinExpr(expr_.constant());
  const char* rel = kind_ == Kind::Eq ? " = " : kind_ == Kind::Le ? " <= " : " < ";
  return lhs.str() + rel + rhs.str();
}

bool operator<(const Constraint& a, const Constraint& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  auto ia = a.expr_.coeffs().begin(), ea = a.expr_.coeffs().end();
  auto ib = b.expr_.coeffs().begin(), eb = b.expr_.coeffs().end();
  for (; ia != ea && ib != eb; ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  if ((ia != ea) != (ib != eb)) return ib != eb;
  return a.expr_.constant().finite() < b.expr_.constant().finite();
}

Constraint negate_constraint(const Constraint& c) {
  switch (c.kind()) {
    case Constraint::Kind::Le: return Constraint(-c.expr(), Constraint::Kind::Lt);
    case Constraint::Kind::Lt: return Constraint(-c.expr(), Constraint::Kind::Le);
    case Constraint::Kind::Eq: break;
  }
  throw std::invalid_argument("negate_constraint: equality has no halfspace complement");
}

CompareResult compare(const LinExpr& lhs, Rel rel, const LinExpr& rhs) {
  if (!lhs.has_finite_constant() || !rhs.has_finite_constant())
    throw std::invalid_argument("compare: infinite constant in comparison");

  LinExpr diff = lhs - rhs;
  if (diff.is_constant()) {
    int sg = diff.constant().finite().sign();
    switch (rel) {
      case Rel::Eq: return sg == 0;
      case Rel::Le: return sg <= 0;
      case Rel::Lt: return sg < 0;
      case Rel::Ge: return sg >= 0;
      case Rel::Gt: return sg > 0;
    }
  }
  switch (rel) {
    case Rel::Eq: return Constraint(std::move(diff), Constraint::Kind::Eq);
    case Rel::Le: return Constraint(std::move(diff), Constraint::Kind::Le);
    case Rel::Lt: return Constraint(std::move(diff), Constraint::Kind::Lt);
    case Rel::Ge: return Constraint(-diff, Constraint::Kind::Le);
    case Rel::Gt: return Constraint(-diff, Constraint::Kind::Lt);
  }
  throw std::logic_error("compare: bad relation");
}

}  // namespace hardex
