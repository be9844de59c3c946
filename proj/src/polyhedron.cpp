#include "hardex/polyhedron.hpp"

#include <stdexcept>

namespace hardex {

Polyhedron Polyhedron::make(int dim, std::span<const Constraint> cs) {
  Polyhedron p(dim);
  p.add_all(cs);
  return p;
}

void Polyhedron::add(const Constraint& c) {
  if (c.max_var() >= dim_) throw std::invalid_argument("Polyhedron: variable index out of dimension");
  if (!seen_.insert(c).second) return;
  switch (c.kind()) {
    case Constraint::Kind::Eq: eq_.push_back(c); break;
    case Constraint::Kind::Le: weak_.push_back(c); break;
    case Constraint::Kind::Lt: strict_.push_back(c); break;
  }
}

void Polyhedron::add_all(std::span<const Constraint> cs) {
  for (const auto& c : cs) add(c);
}

Polyhedron Polyhedron::closure() const {
  Polyhedron q(dim_);
  q.add_all(eq_);
  q.add_all(weak_);
  for (const auto& c : strict_) q.add(Constraint(c.expr(), Constraint::Kind::Le));
  return q;
}

Polyhedron Polyhedron::strictified() const {
  Polyhedron p(dim_);
  p.add_all(eq_);
  for (const auto& c : weak_) p.add(Constraint(c.expr(), Constraint::Kind::Lt));
  p.add_all(strict_);
  return p;
}

bool Polyhedron::contains(std::span<const Rat> x) const {
  for (const auto& c : eq_)
    if (!c.holds(x)) return false;
  for (const auto& c : weak_)
    if (!c.holds(x)) return false;
  for (const auto& c : strict_)
    if (!c.holds(x)) return false;
  return true;
}

std::vector<Constraint> Polyhedron::all() const {
  std::vector<Constraint> out;
  out.reserve(size());
  out.insert(out.end(), eq_.begin(), eq_.end());
  out.insert(out.end(), weak_.begin(), weak_.end());
  out.insert(out.end(), strict_.begin(), strict_.end());
  return out;
}

}  // namespace hardex
