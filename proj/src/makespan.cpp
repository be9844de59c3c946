#include "hardex/makespan.hpp"

#include <stdexcept>

namespace hardex::makespan {

namespace {

void require_machines(int m) {
  if (m < 1) throw std::invalid_argument("makespan: m must be >= 1");
}

void require_valid_assignment(std::span<const int> z, int m) {
  for (int zi : z)
    if (zi < 0 || zi >= m) throw std::invalid_argument("makespan: machine index out of range");
}

std::vector<LinExpr> input_vars(int n) {
  std::vector<LinExpr> xs;
  xs.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) xs.push_back(LinExpr::var(j));
  return xs;
}

}  // namespace

std::vector<Constraint> sorted_region(int n) {
  if (n < 0) throw std::invalid_argument("makespan: n must be nonnegative");
  std::vector<Constraint> cs;
  for (int j = 0; j + 1 < n; ++j)
    cs.emplace_back(LinExpr::var(j + 1) - LinExpr::var(j), Constraint::Kind::Le);
  if (n >= 1) cs.emplace_back(LinExpr::var(n - 1, Rat(-1)), Constraint::Kind::Le);
  return cs;
}

std::vector<int> lpt_assign(std::span<const LinExpr> xs, int m, DecisionOracle& oracle) {
  require_machines(m);
  std::vector<LinExpr> load(static_cast<std::size_t>(m));
  std::vector<int> z;
  z.reserve(xs.size());
  for (const LinExpr& x : xs) {
    int best = 0;
    for (int i = 1; i < m; ++i)
      if (oracle_compare(oracle, load[static_cast<std::size_t>(i)], Rel::Lt,
                         load[static_cast<std::size_t>(best)]))
        best = i;
    z.push_back(best);
    load[static_cast<std::size_t>(best)] += x;
  }
  return z;
}

Assignment lpt_traced(std::span<const LinExpr> xs, int m, DecisionOracle& oracle) {
  Assignment out;
  out.machine = lpt_assign(xs, m, oracle);
  std::vector<LinExpr> load = loads(xs, out.machine, m);
  int top = 0;
  for (int i = 1; i < m; ++i)
    if (oracle_compare(oracle, load[static_cast<std::size_t>(i)], Rel::Gt,
                       load[static_cast<std::size_t>(top)]))
      top = i;
  out.max_machine = top;
  return out;
}

std::vector<LinExpr> loads(std::span<const LinExpr> xs, std::span<const int> z, int m) {
  require_machines(m);
  if (z.size() != xs.size()) throw std::invalid_argument("makespan: assignment length mismatch");
  require_valid_assignment(z, m);
  std::vector<LinExpr> load(static_cast<std::size_t>(m));
  for (std::size_t j = 0; j < xs.size(); ++j) load[static_cast<std::size_t>(z[j])] += xs[j];
  return load;
}

std::vector<Rat> loads_at(std::span<const Rat> x, std::span<const int> z, int m) {
  require_machines(m);
  if (z.size() != x.size()) throw std::invalid_argument("makespan: assignment length mismatch");
  require_valid_assignment(z, m);
  std::vector<Rat> load(static_cast<std::size_t>(m), Rat(0));
  for (std::size_t j = 0; j < x.size(); ++j) load[static_cast<std::size_t>(z[j])] += x[j];
  return load;
}

Rat makespan_at(std::span<const Rat> x, std::span<const int> z, int m) {
  std::vector<Rat> load = loads_at(x, z, m);
  Rat best = load[0];
  for (const Rat& l : load)
    if (l > best) best = l;
  return best;
}

std::vector<CostPiece> cost_pieces(int n, int m, std::span<const int> z) {
  require_machines(m);
  if (static_cast<int>(z.size()) != n) throw std::invalid_argument("makespan: assignment length mismatch");
  std::vector<LinExpr> load = loads(input_vars(n), z, m);
  std::vector<CostPiece> pieces;
  pieces.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    CostPiece piece;
    piece.region = sorted_region(n);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      LinExpr diff = load[static_cast<std::size_t>(j)] - load[static_cast<std::size_t>(i)];
      if (diff.is_constant() && diff.constant().finite().sign() <= 0) continue;  // vacuous
      piece.region.emplace_back(std::move(diff), Constraint::Kind::Le);
    }
    piece.cost = load[static_cast<std::size_t>(i)];
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

std::vector<Constraint> opt_constraints(int n, int m, std::span<const int> z) {
  require_machines(m);
  if (static_cast<int>(z.size()) != n) throw std::invalid_argument("makespan: assignment length mismatch");
  std::vector<LinExpr> load = loads(input_vars(n), z, m);
  std::vector<Constraint> cs;
  cs.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    cs.emplace_back(load[static_cast<std::size_t>(i)] - LinExpr(Rat(1)), Constraint::Kind::Le);
  return cs;
}

std::vector<std::vector<int>> canonical_assignments(int n, int m) {
  require_machines(m);
  if (n < 0) throw std::invalid_argument("makespan: n must be nonnegative");
  std::vector<std::vector<int>> out;
  std::vector<int> z(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int j, int used) -> void {
    if (j == n) {
      out.push_back(z);
      return;
    }
    int limit = std::min(used + 1, m);
    for (int v = 0; v < limit; ++v) {
      z[static_cast<std::size_t>(j)] = v;
      self(self, j + 1, std::max(used, v + 1));
    }
  };
  if (n == 0) {
    out.push_back({});
  } else {
    rec(rec, 0, 0);
  }
  return out;
}

std::uint64_t canonical_count(int n, int m) {
  require_machines(m);
  // strings of length n over machine labels in first-use order
  std::vector<std::uint64_t> by_used(static_cast<std::size_t>(m) + 1, 0);
  by_used[0] = 1;
  auto sat_mul_add = [](std::uint64_t acc, std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > (UINT64_MAX - acc) / b) return UINT64_MAX;
    return acc + a * b;
  };
  for (int j = 0; j < n; ++j) {
    std::vector<std::uint64_t> next(by_used.size(), 0);
    for (int used = 0; used <= m; ++used) {
      std::uint64_t cnt = by_used[static_cast<std::size_t>(used)];
      if (cnt == 0) continue;
      // reuse one of `used` machines
      next[static_cast<std::size_t>(used)] =
          sat_mul_add(next[static_cast<std::size_t>(used)], cnt, static_cast<std::uint64_t>(used));
      // or open a new one
      if (used < m)
        next[static_cast<std::size_t>(used) + 1] =
            sat_mul_add(next[static_cast<std::size_t>(used) + 1], cnt, 1);
    }
    by_used = std::move(next);
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : by_used) total = sat_mul_add(total, c, 1);
  return total;
}

BruteResult brute_oracle(std::span<const Rat> x, int m, std::uint64_t budget) {
  require_machines(m);
  const int n = static_cast<int>(x.size());
  for (int j = 0; j + 1 < n; ++j)
    if (x[static_cast<std::size_t>(j)] < x[static_cast<std::size_t>(j) + 1])
      throw std::invalid_argument("brute_oracle: jobs must be sorted nonincreasing");
  if (n >= 1 && x[static_cast<std::size_t>(n) - 1].sign() < 0)
    throw std::invalid_argument("brute_oracle: job sizes must be nonnegative");
  if (canonical_count(n, m) > budget)
    throw std::invalid_argument("brute_oracle: instance too large for exhaustive optimum");

  BruteResult res;

  // greedy simulation, lowest-index ties
  std::vector<Rat> load(static_cast<std::size_t>(m), Rat(0));
  for (int j = 0; j < n; ++j) {
    int best = 0;
    for (int i = 1; i < m; ++i)
      if (load[static_cast<std::size_t>(i)] < load[static_cast<std::size_t>(best)]) best = i;
    res.lpt_assignment.push_back(best);
    load[static_cast<std::size_t>(best)] += x[static_cast<std::size_t>(j)];
  }
  res.lpt_makespan = Rat(0);
  for (const Rat& l : load)
    if (l > res.lpt_makespan) res.lpt_makespan = l;

  // exhaustive optimum over canonical assignments
  bool first = true;
  std::vector<int> z(static_cast<std::size_t>(n), 0);
  std::vector<Rat> zload(static_cast<std::size_t>(m), Rat(0));
  auto rec = [&](auto&& self, int j, int used) -> void {
    if (j == n) {
      Rat mk(0);
      for (const Rat& l : zload)
        if (l > mk) mk = l;
      if (first || mk < res.opt_makespan) {
        first = false;
        res.opt_makespan = mk;
        res.opt_assignment = z;
      }
      return;
    }
    int limit = std::min(used + 1, m);
    for (int v = 0; v < limit; ++v) {
      z[static_cast<std::size_t>(j)] = v;
      zload[static_cast<std::size_t>(v)] += x[static_cast<std::size_t>(j)];
      self(self, j + 1, std::max(used, v + 1));
      zload[static_cast<std::size_t>(v)] -= x[static_cast<std::size_t>(j)];
    }
  };
  if (n == 0) {
    first = false;
    res.opt_makespan = Rat(0);
  } else {
    rec(rec, 0, 0);
  }

  if (res.lpt_makespan.is_zero() && res.opt_makespan.is_zero()) {
    res.ratio = ExtRat(Rat(1));
  } else {
    res.ratio = ext_div(res.lpt_makespan, res.opt_makespan);
  }
  return res;
}

LptProblem lpt_problem(int n, int m) {
  if (n < 1) throw std::invalid_argument("makespan: n must be >= 1");
  require_machines(m);
  LptProblem spec;
  spec.n = n;
  spec.base_region = sorted_region(n);
  spec.candidate_outputs = canonical_assignments(n, m);
  spec.mode = Mode::ScaleInvariant;
  spec.output_of = [](const Assignment& a) { return a.machine; };
  spec.cost_pieces = [n, m](const std::vector<int>& z) { return cost_pieces(n, m, z); };
  spec.opt_constraints = [n, m](const std::vector<int>& z) { return opt_constraints(n, m, z); };
  spec.leaf_pieces = [n, m](const Assignment& a) {
    // The traced argmax pins the most loaded machine on the whole leaf
    // region, so the leaf cost is that single load.
    std::vector<LinExpr> load = loads(input_vars(n), a.machine, m);
    return std::vector<CostPiece>{{{}, load[static_cast<std::size_t>(a.max_machine)]}};
  };
  spec.check1_keep = [](const Assignment& a) {
    return !a.machine.empty() && a.machine.back() == a.max_machine;
  };
  LinExpr total;
  for (int j = 0; j < n; ++j) total += LinExpr::var(j);
  spec.relaxation = {
      Constraint(total - LinExpr(Rat(m)), Constraint::Kind::Le),          // ||x||_1 <= m
      Constraint(LinExpr::var(0) - LinExpr(Rat(1)), Constraint::Kind::Le)  // x1 <= 1
  };
  spec.cost_at = [m](std::span<const Rat> x, const std::vector<int>& z) {
    return makespan_at(x, z, m);
  };
  return spec;
}

DecisionTree<Assignment> build_lpt_tree(int n, int m, const TraceConfig& cfg, LpStats* stats) {
  if (n < 1) throw std::invalid_argument("makespan: n must be >= 1");
  require_machines(m);
  auto prog = [m](std::span<const LinExpr> xs, DecisionOracle& o) { return lpt_traced(xs, m, o); };
  return build_tree(prog, n, sorted_region(n), cfg, stats);
}

DecisionTree<std::vector<int>> build_plain_lpt_tree(int n, int m, const TraceConfig& cfg, LpStats* stats) {
  if (n < 1) throw std::invalid_argument("makespan: n must be >= 1");
  require_machines(m);
  auto prog = [m](std::span<const LinExpr> xs, DecisionOracle& o) { return lpt_assign(xs, m, o); };
  return build_tree(prog, n, sorted_region(n), cfg, stats);
}

namespace {

// Zero-pad a smaller size's report up to n jobs. Zero jobs do not move any
// load, so both makespans and the ratio are unchanged; the algorithm output
// is recomputed by a concrete replay on the padded witness.
HardExampleReport<std::vector<int>> lift_report(HardExampleReport<std::vector<int>> rep, int n, int m) {
  if (static_cast<int>(rep.witness.size()) == n) return rep;
  rep.witness.resize(static_cast<std::size_t>(n), Rat(0));
  auto prog = [m](std::span<const LinExpr> xs, DecisionOracle& o) { return lpt_traced(xs, m, o); };
  rep.algorithm_output = run_concrete(prog, rep.witness).machine;
  rep.optimal_output.resize(static_cast<std::size_t>(n), 0);
  return rep;
}

}  // namespace

PipelineResult lpt_worst_ratio(int n, int m, const TraceConfig& cfg, const SearchOptions& opts,
                               bool binary_search) {
  if (n < 1) throw std::invalid_argument("makespan: n must be >= 1");
  require_machines(m);

  std::vector<int> sizes;
  if (opts.check1) {
    for (int k = 1; k <= n; ++k) sizes.push_back(k);
  } else {
    sizes.push_back(n);
  }

  std::optional<PipelineResult> best;
  SearchStats target_stats;
  std::uint64_t lps = 0;
  std::int64_t wall = 0;
  for (int k : sizes) {
    auto tree = build_lpt_tree(k, m, cfg);
    auto spec = lpt_problem(k, m);
    if (binary_search) spec.mode = Mode::General;
    auto rep = compute_ratio(tree, spec, opts);
    lps += rep.stats.lps_solved;
    wall += rep.stats.wall_ms;
    if (k == n) target_stats = rep.stats;
    bool better = !best || rep.alpha_lo > best->report.alpha_lo ||
                  (rep.alpha_lo == best->report.alpha_lo && rep.attained && !best->report.attained);
    Rat hi_seen = best ? std::max(best->report.alpha_hi, rep.alpha_hi) : rep.alpha_hi;
    if (better) best = PipelineResult{std::move(rep), std::move(tree), k};
    best->report.alpha_hi = hi_seen;
  }

  best->report = lift_report(std::move(best->report), n, m);
  target_stats.lps_solved = lps;
  target_stats.wall_ms = wall;
  target_stats.check1_fallback = best->report.stats.check1_fallback;
  best->report.stats = target_stats;
  return std::move(*best);
}

}  // namespace hardex::makespan
