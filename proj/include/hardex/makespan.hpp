#pragma once

#include <cstdint>

#include "hardex/search.hpp"

namespace hardex::makespan {

/// Machine per job (0-based) plus the machine the greedy run saw as most
/// loaded (lowest index on ties).
struct Assignment {
  std::vector<int> machine;
  int max_machine = 0;

  bool operator==(const Assignment&) const = default;
};

/// x1 >= x2 >= ... >= xn >= 0.
std::vector<Constraint> sorted_region(int n);

/// Greedy list scheduling over sorted jobs: each job goes to the machine
/// with the smallest load so far, scanning machines in index order and
/// switching only on strictly smaller load. Every load comparison routes
/// through the oracle.
std::vector<int> lpt_assign(std::span<const LinExpr> xs, int m, DecisionOracle& oracle);

/// Same, then an argmax scan over the final loads (same tie rule) to record
/// the most loaded machine. The extra comparisons refine the traced tree so
/// the cost is a single load expression on every leaf.
Assignment lpt_traced(std::span<const LinExpr> xs, int m, DecisionOracle& oracle);

std::vector<LinExpr> loads(std::span<const LinExpr> xs, std::span<const int> z, int m);
std::vector<Rat> loads_at(std::span<const Rat> x, std::span<const int> z, int m);
Rat makespan_at(std::span<const Rat> x, std::span<const int> z, int m);

/// Piece i: machine i dominates every other load; cost = load_i. The m
/// pieces cover the sorted region.
std::vector<CostPiece> cost_pieces(int n, int m, std::span<const int> z);

/// load_i(x, z*) <= 1 for every machine i, one constraint per machine (kept
/// even when vacuous).
std::vector<Constraint> opt_constraints(int n, int m, std::span<const int> z);

/// Assignments up to machine relabeling: z1 = 1 and each entry at most one
/// above the running maximum, capped at m (restricted growth strings).
std::vector<std::vector<int>> canonical_assignments(int n, int m);
std::uint64_t canonical_count(int n, int m);

struct BruteResult {
  Rat lpt_makespan;
  Rat opt_makespan;
  ExtRat ratio;  // 0/0 reported as 1
  std::vector<int> lpt_assignment;
  std::vector<int> opt_assignment;
};

/// Direct simulation for the greedy makespan plus exhaustive search over
/// canonical assignments for the optimum. Ground truth for tests; requires
/// sorted nonnegative input and errors past the enumeration budget.
BruteResult brute_oracle(std::span<const Rat> x, int m, std::uint64_t budget = 4'000'000);

using LptProblem = ProblemSpec<Assignment, std::vector<int>>;

LptProblem lpt_problem(int n, int m);

DecisionTree<Assignment> build_lpt_tree(int n, int m, const TraceConfig& cfg, LpStats* stats = nullptr);

/// Tree of the bare assignment function, without the argmax annotation; this
/// is the tree the `tree` subcommand prints.
DecisionTree<std::vector<int>> build_plain_lpt_tree(int n, int m, const TraceConfig& cfg,
                                                    LpStats* stats = nullptr);

struct PipelineResult {
  HardExampleReport<std::vector<int>> report;  // witness and outputs lifted to n jobs
  DecisionTree<Assignment> tree;               // tree of the size that won
  int winning_n = 0;
};

/// Full trace-prune-search pipeline. The last-job prune keeps only leaves
/// whose worst examples genuinely use all jobs; any other hard example is a
/// zero-padded shorter instance (trailing zeros land on lightly loaded
/// machines and never move either makespan). With the prune enabled the
/// pipeline therefore scans every size up to n and takes the maximum, which
/// restores the exact supremum; with it disabled a single size suffices.
PipelineResult lpt_worst_ratio(int n, int m, const TraceConfig& cfg, const SearchOptions& opts,
                               bool binary_search = false);

}  // namespace hardex::makespan
