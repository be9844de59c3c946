#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hardex/rational.hpp"

namespace hardex {

/// Affine form sum(coeff_i * x_i) + constant with exact rational coefficients.
/// Zero coefficients are never stored. The constant may be infinite (legal in
/// cost expressions only; comparisons reject it).
class LinExpr {
 public:
  LinExpr() = default;
  explicit LinExpr(Rat constant) : constant_(std::move(constant)) {}
  explicit LinExpr(ExtRat constant) : constant_(std::move(constant)) {}

  static LinExpr var(int index, Rat coeff = Rat(1));

  const std::map<int, Rat>& coeffs() const { return coeffs_; }
  const ExtRat& constant() const { return constant_; }

  bool is_constant() const { return coeffs_.empty(); }
  bool has_finite_constant() const { return constant_.is_finite(); }
  /// Largest referenced variable index, -1 when constant.
  int max_var() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

  Rat coeff(int index) const;

  ExtRat eval(std::span<const Rat> x) const;
  Rat eval_finite(std::span<const Rat> x) const;

  /// Objective vector of length n (coefficients, constant dropped).
  std::vector<Rat> coeff_vector(int n) const;

  /// Rendering like "5/3*x1 - x2 + 7"; variables are printed 1-based.
  std::string str() const;

  LinExpr operator-() const;
  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(const Rat& s, const LinExpr& e);
  /// Only linear expressions exist here: one side must be a finite constant.
  friend LinExpr operator*(const LinExpr& a, const LinExpr& b);

  friend bool operator==(const LinExpr& a, const LinExpr& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void set_coeff(int index, Rat value);

  std::map<int, Rat> coeffs_;
  ExtRat constant_;

  friend LinExpr lin_combine(std::span<const std::pair<Rat, LinExpr>>, const ExtRat&);
};

/// Exact affine combination sum(scale_i * expr_i) + offset.
LinExpr lin_combine(std::span<const std::pair<Rat, LinExpr>> terms, const ExtRat& offset = ExtRat());

enum class Rel { Eq, Le, Lt, Ge, Gt };

/// Affine relation "expr (= | <= | <) 0" with a finite constant, kept in a
/// canonical form: coefficients and constant scaled to coprime integers, and
/// for equalities the first nonzero coefficient made positive. Structurally
/// equal constraints therefore compare equal.
class Constraint {
 public:
  enum class Kind { Eq, Le, Lt };

  Constraint(LinExpr expr, Kind kind);

  const LinExpr& expr() const { return expr_; }
  Kind kind() const { return kind_; }

  bool holds(std::span<const Rat> x) const;
  bool is_constant() const { return expr_.is_constant(); }
  int max_var() const { return expr_.max_var(); }

  /// Rendering with the constant moved to the right side: "x1 - x2 <= 7".
  std::string str() const;

  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.kind_ == b.kind_ && a.expr_ == b.expr_;
  }
  friend bool operator!=(const Constraint& a, const Constraint& b) { return !(a == b); }
  /// Arbitrary total order for dedup containers.
  friend bool operator<(const Constraint& a, const Constraint& b);

 private:
  LinExpr expr_;
  Kind kind_;
};

/// Exact complement: not(e <= 0) is (-e < 0), not(e < 0) is (-e <= 0).
/// Equalities have no halfspace complement and are rejected.
Constraint negate_constraint(const Constraint& c);

/// Either an exactly decided boolean (both sides constant) or the normalized
/// constraint equivalent to "lhs rel rhs".
using CompareResult = std::variant<bool, Constraint>;

CompareResult compare(const LinExpr& lhs, Rel rel, const LinExpr& rhs);

}  // namespace hardex
