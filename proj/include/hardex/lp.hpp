#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "hardex/polyhedron.hpp"

namespace hardex {

struct LpStats {
  std::atomic<std::uint64_t> solves{0};
};

enum class LpStatus { Infeasible, Unbounded, Optimal };

/// Outcome of maximizing over a closed polyhedron.
///  - Infeasible: the polyhedron is empty.
///  - Unbounded: `point` is feasible, `direction` is a recession direction
///    with strictly positive objective inner product.
///  - Optimal: `point` maximizes the objective, `value` = objective(point).
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rat> point;
  std::vector<Rat> direction;
  Rat value;
};

/// Exact two-phase simplex with Bland's anti-cycling rule. Variables are
/// free; the nonnegative split happens inside the solver. `q` must have no
/// strict constraints.
LpOutcome solve_closed(const Polyhedron& q, std::span<const Rat> objective, LpStats* stats = nullptr);

struct FeasibilityOutcome {
  bool feasible = false;
  std::vector<Rat> point;  // a point of P when feasible
};

/// Feasibility for polyhedra with strict inequalities, by reduction to
/// closed LPs: check the closure, then the unit-slack tightening, then
/// maximize the common slack of the strict constraints capped at 1.
FeasibilityOutcome feasible_open(const Polyhedron& p, LpStats* stats = nullptr);

enum class SupStatus { Infeasible, Unbounded, Sup };

/// Supremum of a linear objective over a polyhedron that may have strict
/// inequalities. The supremum equals the closure optimum; it is reported
/// attained only when the closure optimizer itself satisfies every strict
/// constraint. `epsilon_point` walks from the closure optimum toward the
/// interior anchor and stays inside P for any eps in (0, 1].
struct SupOutcome {
  SupStatus status = SupStatus::Infeasible;
  Rat value;
  bool attained = false;
  std::vector<Rat> attained_point;
  std::vector<Rat> interior_anchor;
  std::vector<Rat> closure_optimum;
  std::vector<Rat> direction;  // Unbounded only; anchor + t*direction stays in P

  std::vector<Rat> epsilon_point(const Rat& eps) const;
};

SupOutcome sup_open(const Polyhedron& p, std::span<const Rat> objective, LpStats* stats = nullptr);

}  // namespace hardex
