#include "hardex/lp.hpp"

#include <stdexcept>
#include <utility>

namespace hardex {

namespace {

// Dense exact simplex tableau over the standard form
//   max c.y  s.t.  A y = b, y >= 0, b >= 0,
// where y splits every free variable x_j into u_j - v_j.
class Simplex {
 public:
  Simplex(const Polyhedron& q, std::span<const Rat> objective) : n_(q.dim()) {
    if (q.has_strict()) throw std::invalid_argument("solve_closed: strict constraints not allowed");
    if (static_cast<int>(objective.size()) != n_)
      throw std::invalid_argument("solve_closed: objective dimension mismatch");

    std::size_t n_weak = q.weak().size();
    std::size_t n_rows = q.eq().size() + n_weak;
    slack0_ = 2 * static_cast<std::size_t>(n_);
    art0_ = slack0_ + n_weak;

    rows_.reserve(n_rows);
    std::size_t slack_idx = 0;
    auto add_row = [&](const Constraint& c, bool with_slack) {
      Row row;
      row.a.assign(art0_, Rat(0));
      for (const auto& [i, coef] : c.expr().coeffs()) {
        row.a[2 * static_cast<std::size_t>(i)] = coef;
        row.a[2 * static_cast<std::size_t>(i) + 1] = -coef;
      }
      row.b = -c.expr().constant().finite();
      int slack_col = -1;
      if (with_slack) {
        slack_col = static_cast<int>(slack0_ + slack_idx);
        row.a[static_cast<std::size_t>(slack_col)] = Rat(1);
        ++slack_idx;
      }
      if (row.b.sign() < 0) {
        for (auto& v : row.a) v = -v;
        row.b = -row.b;
        slack_col = -1;  // negated slack cannot start basic
      }
      row.natural_basic = slack_col;
      rows_.push_back(std::move(row));
    };
    for (const auto& c : q.eq()) add_row(c, false);
    for (const auto& c : q.weak()) add_row(c, true);

    // Artificial columns for rows without a natural basic variable.
    ncols_ = art0_;
    basis_.resize(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].natural_basic >= 0) {
        basis_[r] = rows_[r].natural_basic;
      } else {
        basis_[r] = static_cast<int>(ncols_++);
      }
    }
    for (auto& row : rows_) row.a.resize(ncols_, Rat(0));
    for (std::size_t r = 0; r < rows_.size(); ++r)
      if (static_cast<std::size_t>(basis_[r]) >= art0_) at(r, basis_[r]) = Rat(1);

    objective_.assign(objective.begin(), objective.end());
  }

  LpOutcome run() {
    if (!phase1()) return {LpStatus::Infeasible, {}, {}, Rat(0)};
    drive_out_artificials();
    return phase2();
  }

 private:
  struct Row {
    std::vector<Rat> a;
    Rat b;
    int natural_basic = -1;
  };

  Rat& at(std::size_t r, int col) { return rows_[r].a[static_cast<std::size_t>(col)]; }

  bool is_artificial(int col) const { return static_cast<std::size_t>(col) >= art0_; }

  void pivot(std::size_t r, int e) {
    Row& prow = rows_[r];
    Rat inv = Rat(1) / prow.a[static_cast<std::size_t>(e)];
    for (auto& v : prow.a) v *= inv;
    prow.b *= inv;
    for (std::size_t r2 = 0; r2 < rows_.size(); ++r2) {
      if (r2 == r) continue;
      Rat f = rows_[r2].a[static_cast<std::size_t>(e)];
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < ncols_; ++j) rows_[r2].a[j] -= f * prow.a[j];
      rows_[r2].b -= f * prow.b;
    }
    Rat f = obj_[static_cast<std::size_t>(e)];
    if (!f.is_zero()) {
      for (std::size_t j = 0; j < ncols_; ++j) obj_[j] -= f * prow.a[j];
      obj_rhs_ -= f * prow.b;
    }
    basis_[r] = e;
  }

  // Bland: entering = lowest improving index, leaving = lowest basic index
  // among minimum ratios. Returns the entering column on unboundedness.
  int iterate(bool allow_artificial_entering) {
    for (;;) {
      int enter = -1;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (!allow_artificial_entering && is_artificial(static_cast<int>(j))) continue;
        if (obj_[j].sign() > 0) { enter = static_cast<int>(j); break; }
      }
      if (enter < 0) return -1;
      std::size_t leave = rows_.size();
      Rat best;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Rat& arc = rows_[r].a[static_cast<std::size_t>(enter)];
        if (arc.sign() <= 0) continue;
        Rat ratio = rows_[r].b / arc;
        if (leave == rows_.size() || ratio < best ||
            (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_.size()) return enter;
      pivot(leave, enter);
    }
  }

  bool phase1() {
    obj_.assign(ncols_, Rat(0));
    obj_rhs_ = Rat(0);
    bool any_artificial = false;
    for (std::size_t j = art0_; j < ncols_; ++j) {
      obj_[j] = Rat(-1);
      any_artificial = true;
    }
    if (!any_artificial) return true;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!is_artificial(basis_[r])) continue;
      for (std::size_t j = 0; j < ncols_; ++j) obj_[j] += rows_[r].a[j];
      obj_rhs_ += rows_[r].b;
    }
    int unb = iterate(true);
    if (unb >= 0) throw std::logic_error("simplex: phase-1 objective cannot be unbounded");
    return obj_rhs_.is_zero();  // value = -obj_rhs_
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_.size();) {
      if (!is_artificial(basis_[r])) { ++r; continue; }
      int e = -1;
      for (std::size_t j = 0; j < art0_; ++j)
        if (rows_[r].a[j].sign() != 0) { e = static_cast<int>(j); break; }
      if (e >= 0) {
        pivot(r, e);
        ++r;
      } else {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
      }
    }
  }

  LpOutcome phase2() {
    obj_.assign(ncols_, Rat(0));
    obj_rhs_ = Rat(0);
    for (int j = 0; j < n_; ++j) {
      obj_[2 * static_cast<std::size_t>(j)] = objective_[static_cast<std::size_t>(j)];
      obj_[2 * static_cast<std::size_t>(j) + 1] = -objective_[static_cast<std::size_t>(j)];
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Rat f = obj_[static_cast<std::size_t>(basis_[r])];
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < ncols_; ++j) obj_[j] -= f * rows_[r].a[j];
      obj_rhs_ -= f * rows_[r].b;
    }
    int unb = iterate(false);
    LpOutcome out;
    out.point = extract_point();
    if (unb >= 0) {
      out.status = LpStatus::Unbounded;
      out.direction = extract_ray(unb);
      return out;
    }
    out.status = LpStatus::Optimal;
    out.value = Rat(0);
    for (int j = 0; j < n_; ++j) out.value += objective_[static_cast<std::size_t>(j)] * out.point[static_cast<std::size_t>(j)];
    return out;
  }

  std::vector<Rat> extract_point() const {
    std::vector<Rat> ext(ncols_, Rat(0));
    for (std::size_t r = 0; r < rows_.size(); ++r)
      ext[static_cast<std::size_t>(basis_[r])] = rows_[r].b;
    std::vector<Rat> x(static_cast<std::size_t>(n_), Rat(0));
    for (int j = 0; j < n_; ++j)
      x[static_cast<std::size_t>(j)] = ext[2 * static_cast<std::size_t>(j)] - ext[2 * static_cast<std::size_t>(j) + 1];
    return x;
  }

  std::vector<Rat> extract_ray(int enter) const {
    std::vector<Rat> ext(ncols_, Rat(0));
    ext[static_cast<std::size_t>(enter)] = Rat(1);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      ext[static_cast<std::size_t>(basis_[r])] = -rows_[r].a[static_cast<std::size_t>(enter)];
    std::vector<Rat> d(static_cast<std::size_t>(n_), Rat(0));
    for (int j = 0; j < n_; ++j)
      d[static_cast<std::size_t>(j)] = ext[2 * static_cast<std::size_t>(j)] - ext[2 * static_cast<std::size_t>(j) + 1];
    return d;
  }

  int n_;
  std::size_t slack0_ = 0, art0_ = 0, ncols_ = 0;
  std::vector<Row> rows_;
  std::vector<int> basis_;
  std::vector<Rat> obj_;
  Rat obj_rhs_;
  std::vector<Rat> objective_;
};

std::vector<Rat> zeros(int n) { return std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)); }

}  // namespace

LpOutcome solve_closed(const Polyhedron& q, std::span<const Rat> objective, LpStats* stats) {
  if (stats) stats->solves.fetch_add(1, std::memory_order_relaxed);
  Simplex s(q, objective);
  return s.run();
}

FeasibilityOutcome feasible_open(const Polyhedron& p, LpStats* stats) {
  Polyhedron q = p.closure();
  LpOutcome closure = solve_closed(q, zeros(p.dim()), stats);
  if (closure.status == LpStatus::Infeasible) return {};
  if (!p.has_strict()) return {true, std::move(closure.point)};

  // Unit tightening of the strict constraints.
  Polyhedron t1(p.dim());
  t1.add_all(p.eq());
  t1.add_all(p.weak());
  for (const auto& c : p.strict())
    t1.add(Constraint(c.expr() + LinExpr(Rat(1)), Constraint::Kind::Le));
  LpOutcome rt1 = solve_closed(t1, zeros(p.dim()), stats);
  if (rt1.status != LpStatus::Infeasible) return {true, std::move(rt1.point)};

  // Maximize the common slack z of the strict constraints, capped at 1.
  int zvar = p.dim();
  Polyhedron relaxed(p.dim() + 1);
  relaxed.add(Constraint(LinExpr::var(zvar, Rat(-1)), Constraint::Kind::Le));          // z >= 0
  relaxed.add(Constraint(LinExpr::var(zvar) - LinExpr(Rat(1)), Constraint::Kind::Le)); // z <= 1
  for (const auto& c : p.eq()) relaxed.add(c);
  for (const auto& c : p.weak()) relaxed.add(c);
  for (const auto& c : p.strict())
    relaxed.add(Constraint(c.expr() + LinExpr::var(zvar), Constraint::Kind::Le));
  std::vector<Rat> obj = zeros(p.dim() + 1);
  obj.back() = Rat(1);
  LpOutcome rz = solve_closed(relaxed, obj, stats);
  if (rz.status != LpStatus::Optimal)  // feasible since Q is, bounded by z <= 1
    throw std::logic_error("feasible_open: slack program must have an optimum");
  if (rz.value.is_zero()) return {};
  rz.point.resize(static_cast<std::size_t>(p.dim()));
  return {true, std::move(rz.point)};
}

SupOutcome sup_open(const Polyhedron& p, std::span<const Rat> objective, LpStats* stats) {
  SupOutcome out;
  FeasibilityOutcome feas = feasible_open(p, stats);
  if (!feas.feasible) return out;

  LpOutcome closure = solve_closed(p.closure(), objective, stats);
  if (closure.status == LpStatus::Infeasible)
    throw std::logic_error("sup_open: closure of a feasible region cannot be empty");
  if (closure.status == LpStatus::Unbounded) {
    out.status = SupStatus::Unbounded;
    out.interior_anchor = std::move(feas.point);
    out.direction = std::move(closure.direction);
    return out;
  }

  out.status = SupStatus::Sup;
  out.value = closure.value;
  out.closure_optimum = std::move(closure.point);
  out.interior_anchor = std::move(feas.point);
  out.attained = true;
  for (const auto& c : p.strict())
    if (!c.holds(out.closure_optimum)) { out.attained = false; break; }
  if (out.attained) out.attained_point = out.closure_optimum;
  return out;
}

std::vector<Rat> SupOutcome::epsilon_point(const Rat& eps) const {
  if (status != SupStatus::Sup) throw std::logic_error("epsilon_point: no finite supremum");
  if (eps.sign() <= 0 || eps > Rat(1)) throw std::invalid_argument("epsilon_point: eps must be in (0, 1]");
  std::vector<Rat> x(closure_optimum.size());
  Rat keep = Rat(1) - eps;
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = keep * closure_optimum[i] + eps * interior_anchor[i];
  return x;
}

}  // namespace hardex
