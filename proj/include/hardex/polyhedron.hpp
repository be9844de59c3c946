#pragma once

#include <set>
#include <span>
#include <vector>

#include "hardex/linexpr.hpp"

namespace hardex {

/// Conjunction of canonical affine relations, bucketed by kind:
/// equalities, weak inequalities (<=) and strict inequalities (<).
/// Duplicate constraints are dropped; insertion order is preserved.
class Polyhedron {
 public:
  explicit Polyhedron(int dim = 0) : dim_(dim) {}

  static Polyhedron make(int dim, std::span<const Constraint> cs);

  int dim() const { return dim_; }
  const std::vector<Constraint>& eq() const { return eq_; }
  const std::vector<Constraint>& weak() const { return weak_; }
  const std::vector<Constraint>& strict() const { return strict_; }

  bool has_strict() const { return !strict_.empty(); }
  std::size_t size() const { return eq_.size() + weak_.size() + strict_.size(); }

  void add(const Constraint& c);
  void add_all(std::span<const Constraint> cs);

  /// Strict inequalities weakened to closed ones.
  Polyhedron closure() const;
  /// Weak inequalities sharpened to strict ones (equalities untouched);
  /// feasibility of the result is emptiness of the relative interior
  /// modulo the equality part.
  Polyhedron strictified() const;

  bool contains(std::span<const Rat> x) const;

  std::vector<Constraint> all() const;

 private:
  int dim_;
  std::vector<Constraint> eq_, weak_, strict_;
  std::set<Constraint> seen_;
};

}  // namespace hardex
