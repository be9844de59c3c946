#include "doctest.h"

#include <random>

#include "hardex/makespan.hpp"
#include "support/lpt_grid_oracle.hpp"

using namespace hardex;
using namespace hardex::makespan;

namespace {

TraceConfig lpt_cfg() {
  TraceConfig cfg;
  cfg.prune_infeasible = true;
  cfg.prune_empty_interior = true;
  cfg.max_nodes = 500000;
  return cfg;
}

HardExampleReport<std::vector<int>> lpt_ratio(int n, int m, SearchOptions opts = {}) {
  auto tree = build_lpt_tree(n, m, lpt_cfg());
  return compute_ratio(tree, lpt_problem(n, m), opts);
}

std::vector<Rat> rand_sorted(std::mt19937_64& rng, int n, long hi = 12, long maxden = 6) {
  std::uniform_int_distribution<long> num(0, hi), den(1, maxden);
  std::vector<Rat> v;
  for (int j = 0; j < n; ++j) v.emplace_back(num(rng), den(rng));
  std::sort(v.begin(), v.end(), [](const Rat& a, const Rat& b) { return b < a; });
  return v;
}

// Constant-cost toy: the algorithm always answers the first output.
// Payload int indexes into the candidate list.
struct ConstantToy {
  DecisionTree<int> tree;
  ProblemSpec<int, int> spec;
};

ConstantToy constant_toy(std::vector<Rat> costs, bool with_infinite) {
  ConstantToy toy;
  auto prog = [](std::span<const LinExpr>, DecisionOracle&) { return 0; };
  std::vector<Constraint> base{
      Constraint(LinExpr::var(0, Rat(-1)), Constraint::Kind::Le),
      Constraint(LinExpr::var(0) - LinExpr(Rat(1)), Constraint::Kind::Le)};
  toy.tree = build_tree(prog, 1, base, TraceConfig{});
  toy.spec.n = 1;
  toy.spec.base_region = base;
  for (int z = 0; z < static_cast<int>(costs.size()) + (with_infinite ? 1 : 0); ++z)
    toy.spec.candidate_outputs.push_back(z);
  toy.spec.mode = Mode::ConstantCost;
  toy.spec.output_of = [](const int& p) { return p; };
  toy.spec.cost_pieces = [costs](const int& z) {
    LinExpr cost = z < static_cast<int>(costs.size())
                       ? LinExpr(costs[static_cast<std::size_t>(z)])
                       : LinExpr(ExtRat::pos_inf());
    return std::vector<CostPiece>{{{}, cost}};
  };
  toy.spec.cost_at = [costs](std::span<const Rat>, const int& z) {
    return costs[static_cast<std::size_t>(z)];
  };
  return toy;
}

}  // namespace

TEST_CASE("greedy worst ratio for two machines and five jobs is 7/6") {
  auto rep = lpt_ratio(5, 2);
  CHECK(rep.exact);
  CHECK(rep.alpha() == Rat(7, 6));
  CHECK(rep.stats.leaves_after_check1 < rep.stats.leaves_total);

  // witness re-verifies through the brute oracle
  auto br = brute_oracle(rep.witness, 2);
  if (rep.attained) {
    CHECK(br.ratio == ExtRat(Rat(7, 6)));
  } else {
    CHECK(br.ratio.finite() >= Rat(7, 6) - Rat(1, 1000000) * (Rat(7, 6) - Rat(1)));
    CHECK(br.ratio.finite() <= Rat(7, 6));
  }
}

TEST_CASE("two jobs on two machines are scheduled optimally") {
  auto rep = lpt_ratio(2, 2);
  CHECK(rep.alpha() == Rat(1));
  // the last-decision prune removes every leaf here; the search must fall
  // back rather than fail
  CHECK(rep.stats.check1_fallback);
}

TEST_CASE("four jobs on two machines match the grid+vertex oracle") {
  auto rep = lpt_ratio(4, 2);
  Rat oracle = testing::grid_lpt_alpha(4, 2, 6);
  CHECK(rep.alpha() == oracle);
}

TEST_CASE("witness validity for every small report") {
  for (int n : {2, 3, 4, 5}) {
    CAPTURE(n);
    auto tree = build_lpt_tree(n, 2, lpt_cfg());
    auto spec = lpt_problem(n, 2);
    auto rep = compute_ratio(tree, spec);
    REQUIRE(rep.witness.size() == static_cast<std::size_t>(n));
    // inside the base region
    for (const auto& c : spec.base_region) CHECK(c.holds(rep.witness));
    // concrete re-run reproduces the reported algorithm output
    auto prog = [](std::span<const LinExpr> xs, DecisionOracle& o) { return lpt_traced(xs, 2, o); };
    Assignment replay = run_concrete(prog, rep.witness);
    CHECK(replay.machine == rep.algorithm_output);
    // ratio reproduces alpha (attained) or stays within the near-witness gap
    auto br = brute_oracle(rep.witness, 2);
    if (rep.attained) {
      CHECK(br.ratio == ExtRat(rep.alpha()));
    } else {
      CHECK(br.ratio.finite() >= rep.alpha() - Rat(1, 1000000) * (rep.alpha() - Rat(1)));
    }
    CHECK(spec.cost_at(rep.witness, rep.algorithm_output) <=
          rep.alpha() * spec.cost_at(rep.witness, rep.optimal_output));
  }
}

TEST_CASE("soundness sweep: sampled ratios never exceed the reported alpha") {
  auto rep = lpt_ratio(5, 2);
  std::mt19937_64 rng(1234);
  for (int t = 0; t < 1000; ++t) {
    auto x = rand_sorted(rng, 5);
    auto br = brute_oracle(x, 2);
    REQUIRE(br.ratio.is_finite());
    CHECK(br.ratio.finite() <= rep.alpha());
  }
}

TEST_CASE("pruning is neutral for the final value") {
  for (int n : {3, 4, 5}) {
    CAPTURE(n);
    Rat alpha_ref;
    bool first = true;
    for (bool c1 : {true, false}) {
      for (bool c2 : {true, false}) {
        SearchOptions opts;
        opts.check1 = c1;
        opts.check2 = c2;
        auto rep = lpt_ratio(n, 2, opts);
        if (first) {
          alpha_ref = rep.alpha();
          first = false;
        } else {
          CHECK(rep.alpha() == alpha_ref);
        }
      }
    }
  }
}

TEST_CASE("alpha is monotone in the number of jobs") {
  Rat prev(0);
  for (int n : {2, 3, 4, 5}) {
    Rat a = lpt_ratio(n, 2).alpha();
    CHECK(a >= prev);
    prev = a;
  }
  CHECK(prev == Rat(7, 6));
}

TEST_CASE("pipeline stays exact when the worst example uses fewer jobs") {
  // With the last-job prune alone, a size whose hard examples are
  // zero-padded shorter instances would lose the maximum (the n=6 search
  // proper tops out at 9/8); the size scan restores it.
  SearchOptions opts;
  auto result = lpt_worst_ratio(6, 2, lpt_cfg(), opts);
  CHECK(result.report.alpha() == Rat(7, 6));
  CHECK(result.winning_n == 5);
  REQUIRE(result.report.witness.size() == 6);
  CHECK(result.report.witness.back() == Rat(0));

  // matches the unpruned single-size search
  SearchOptions off;
  off.check1 = false;
  auto direct = compute_ratio(build_lpt_tree(6, 2, lpt_cfg()), lpt_problem(6, 2), off);
  CHECK(direct.alpha() == Rat(7, 6));

  // the lifted witness replays consistently and re-verifies
  auto prog = [](std::span<const LinExpr> xs, DecisionOracle& o) { return lpt_traced(xs, 2, o); };
  CHECK(run_concrete(prog, result.report.witness).machine == result.report.algorithm_output);
  auto br = brute_oracle(result.report.witness, 2);
  CHECK(br.ratio.finite() >= Rat(7, 6) - Rat(1, 1000000) * (Rat(7, 6) - Rat(1)));

  // monotone through the padded sizes
  Rat prev(0);
  for (int n : {2, 3, 4, 5, 6}) {
    Rat a = lpt_worst_ratio(n, 2, lpt_cfg(), SearchOptions{}).report.alpha();
    CHECK(a >= prev);
    prev = a;
  }

  // bisection mode combines the per-size intervals
  auto interval = lpt_worst_ratio(6, 2, lpt_cfg(), opts, true);
  CHECK(interval.report.alpha_lo <= Rat(7, 6));
  CHECK(Rat(7, 6) <= interval.report.alpha_hi);
  CHECK(interval.report.alpha_hi - interval.report.alpha_lo <= opts.tol);
}

TEST_CASE("parallel workers produce the same report") {
  SearchOptions seq, par;
  par.workers = 4;
  auto a = lpt_ratio(5, 2, seq);
  auto b = lpt_ratio(5, 2, par);
  CHECK(a.alpha() == b.alpha());
  CHECK(a.witness == b.witness);
  CHECK(a.algorithm_output == b.algorithm_output);
  CHECK(a.optimal_output == b.optimal_output);
  CHECK(a.attained == b.attained);
}

TEST_CASE("bisection brackets the exact ratio") {
  auto tree = build_lpt_tree(5, 2, lpt_cfg());
  auto spec = lpt_problem(5, 2);
  auto rep = binary_search_ratio(tree, spec, Rat(1), Rat(2), Rat(1, 1000));
  CHECK_FALSE(rep.exact);
  CHECK(rep.alpha_lo <= Rat(7, 6));
  CHECK(Rat(7, 6) <= rep.alpha_hi);
  CHECK(rep.alpha_hi - rep.alpha_lo <= Rat(1, 1000));
  // the witness from the last feasible check beats the lower bound
  REQUIRE_FALSE(rep.witness.empty());
  auto br = brute_oracle(rep.witness, 2);
  CHECK(br.ratio.finite() > rep.alpha_lo);

  // immediate return when the interval is already narrow enough
  auto quick = binary_search_ratio(tree, spec, Rat(1), Rat(2), Rat(1));
  CHECK(quick.alpha_lo == Rat(1));
  CHECK(quick.alpha_hi == Rat(2));

  // an upper bound below the true ratio is reported as unusable
  CHECK_THROWS_AS(binary_search_ratio(tree, spec, Rat(1), Rat(11, 10), Rat(1, 1000)), Error);
}

TEST_CASE("general mode delegates to bisection with the relaxation bound") {
  auto tree = build_lpt_tree(5, 2, lpt_cfg());
  auto spec = lpt_problem(5, 2);
  spec.mode = Mode::General;
  SearchOptions opts;
  opts.tol = Rat(1, 2000);
  auto rep = compute_ratio(tree, spec, opts);
  CHECK_FALSE(rep.exact);
  CHECK(rep.alpha_lo <= Rat(7, 6));
  CHECK(Rat(7, 6) <= rep.alpha_hi);
  CHECK(rep.alpha_hi - rep.alpha_lo <= Rat(1, 2000));
}

TEST_CASE("constant-cost problems need one feasibility check per pair") {
  auto toy = constant_toy({Rat(3), Rat(2), Rat(6)}, true);
  auto rep = compute_ratio(toy.tree, toy.spec);
  CHECK(rep.exact);
  CHECK(rep.alpha() == Rat(3, 2));
  CHECK(rep.attained);
  CHECK(rep.optimal_output == 1);
  REQUIRE(rep.witness.size() == 1);
  CHECK(toy.tree.base_region[0].holds(rep.witness));

  // wrapped in general mode, bisection brackets the same constant
  auto toy2 = constant_toy({Rat(3), Rat(2)}, false);
  auto rep2 = binary_search_ratio(toy2.tree, toy2.spec, Rat(1), Rat(4), Rat(1, 1000));
  CHECK(rep2.alpha_lo <= Rat(3, 2));
  CHECK(Rat(3, 2) <= rep2.alpha_hi);
  CHECK(rep2.alpha_hi - rep2.alpha_lo <= Rat(1, 1000));
}

TEST_CASE("check1 keeps exactly the leaves whose last job sits on the annotated machine") {
  auto tree = build_lpt_tree(5, 2, lpt_cfg());
  auto spec = lpt_problem(5, 2);
  auto all = tree.leaf_ids();
  auto kept = prune_check1(tree, spec, all);
  CHECK(kept.size() == 4);
  for (int id : all) {
    const Assignment& a = tree.payload(id);
    bool keep = a.machine.back() == a.max_machine;
    bool in = std::find(kept.begin(), kept.end(), id) != kept.end();
    CHECK(keep == in);
  }
  auto none = prune_check1(tree, spec, std::vector<int>{});
  CHECK(none.empty());

  ProblemSpec<Assignment, std::vector<int>> no_hook = spec;
  no_hook.check1_keep = nullptr;
  CHECK_THROWS_AS(prune_check1(tree, no_hook, all), std::invalid_argument);
}

TEST_CASE("check2 drops infeasible leaves and leaves below the running best") {
  // infeasible branch side kept alive by disabling feasibility pruning
  auto prog = [](std::span<const LinExpr> xs, DecisionOracle& o) {
    return oracle_compare(o, xs[0], Rel::Le, LinExpr(Rat(-1))) ? 0 : 1;
  };
  std::vector<Constraint> base{Constraint(LinExpr::var(0, Rat(-1)), Constraint::Kind::Le)};
  TraceConfig cfg;
  cfg.prune_infeasible = false;
  auto tree = build_tree(prog, 1, base, cfg);
  REQUIRE(tree.leaf_count() == 2);

  ProblemSpec<int, int> spec;
  spec.n = 1;
  spec.base_region = base;
  spec.candidate_outputs = {0};
  spec.mode = Mode::ScaleInvariant;
  spec.output_of = [](const int& p) { return p; };
  spec.cost_pieces = [](const int&) {
    return std::vector<CostPiece>{{{}, LinExpr::var(0)}};
  };
  spec.relaxation = {Constraint(LinExpr::var(0) - LinExpr(Rat(1)), Constraint::Kind::Le)};

  RunningBest best;
  auto kept = prune_check2(tree, spec, tree.leaf_ids(), best);
  REQUIRE(kept.size() == 1);  // the x <= -1 leaf is infeasible
  CHECK(tree.payload(kept[0]) == 1);

  // a preset running best at least as large as gamma drops the rest
  RunningBest high;
  high.raise(Rat(7, 6));
  auto kept2 = prune_check2(tree, spec, tree.leaf_ids(), high);
  CHECK(kept2.empty());  // gamma = 1 <= 7/6
}

TEST_CASE("the winning leaf's relaxation bound dominates its exact value") {
  auto tree = build_lpt_tree(5, 2, lpt_cfg());
  auto spec = lpt_problem(5, 2);
  auto rep = compute_ratio(tree, spec);

  RunningBest best;
  std::vector<std::pair<int, ExtRat>> gammas;
  auto kept = prune_check2(tree, spec, tree.leaf_ids(), best, &gammas);
  (void)kept;
  bool found = false;
  for (const auto& [id, gamma] : gammas) {
    if (id != rep.leaf_id) continue;
    found = true;
    REQUIRE(gamma.is_finite());
    CHECK(gamma.finite() >= rep.alpha());  // relaxing the optimum bound never cuts the winner
  }
  CHECK(found);
  CHECK(rep.alpha() == Rat(7, 6));
}

TEST_CASE("input validation errors") {
  auto tree = build_lpt_tree(3, 2, lpt_cfg());
  auto spec = lpt_problem(3, 2);

  auto empty_z = spec;
  empty_z.candidate_outputs.clear();
  CHECK_THROWS_AS(compute_ratio(tree, empty_z), std::invalid_argument);

  auto wrong_dim = lpt_problem(4, 2);
  CHECK_THROWS_AS(compute_ratio(tree, wrong_dim), std::invalid_argument);

  // scale-invariant mode rejects affine cost pieces with a constant term
  auto affine = spec;
  affine.leaf_pieces = nullptr;
  affine.cost_pieces = [](const std::vector<int>&) {
    return std::vector<CostPiece>{{{}, LinExpr::var(0) + LinExpr(Rat(1))}};
  };
  affine.opt_constraints = nullptr;
  CHECK_THROWS_AS(compute_ratio(tree, affine), std::invalid_argument);
}
