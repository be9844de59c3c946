#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "hardex/errors.hpp"
#include "hardex/lp.hpp"

namespace hardex {

/// Answers the data-dependent branches of a traced program. Constant
/// comparisons never reach the oracle; `holds` is the normalized constraint
/// equivalent to the asked condition being true.
class DecisionOracle {
 public:
  virtual ~DecisionOracle() = default;
  virtual bool decide(const Constraint& holds) = 0;
};

/// Folds constant comparisons; routes genuine branches through the oracle.
inline bool oracle_compare(DecisionOracle& o, const LinExpr& lhs, Rel rel, const LinExpr& rhs) {
  CompareResult r = compare(lhs, rel, rhs);
  if (const bool* decided = std::get_if<bool>(&r)) return *decided;
  return o.decide(std::get<Constraint>(r));
}

/// Oracle that evaluates every branch exactly at a fixed point; running a
/// traced program under it reproduces the concrete execution.
class ConcreteOracle final : public DecisionOracle {
 public:
  explicit ConcreteOracle(std::vector<Rat> point) : point_(std::move(point)) {}
  bool decide(const Constraint& holds) override { return holds.holds(point_); }

 private:
  std::vector<Rat> point_;
};

struct TraceConfig {
  /// Drop branch sides whose region has no point (they contain no inputs).
  bool prune_infeasible = true;
  /// Additionally drop sides whose region stays empty after sharpening all
  /// weak constraints; sound only when the cost is continuous, so off by
  /// default.
  bool prune_empty_interior = false;
  std::int64_t max_nodes = 1'000'000;
};

/// Binary tree of halfspace tests. Internal nodes keep a constraint and two
/// children (true child = constraint holds); leaves keep the traced payload
/// plus every branch constraint along the way, including the ones whose
/// other side was pruned. Nodes are stored in preorder, true side first.
template <typename P>
struct DecisionTree {
  struct Node {
    std::optional<Constraint> test;  // internal nodes only
    int true_child = -1;
    int false_child = -1;
    std::optional<P> payload;        // leaves only
    std::vector<Constraint> path;    // leaves only

    bool is_leaf() const { return payload.has_value(); }
  };

  int n = 0;
  std::vector<Constraint> base_region;
  std::vector<Node> nodes;

  int root() const { return 0; }

  std::vector<int> leaf_ids() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].is_leaf()) out.push_back(static_cast<int>(i));
    return out;
  }

  std::size_t leaf_count() const { return leaf_ids().size(); }
  std::size_t internal_count() const { return nodes.size() - leaf_count(); }

  const P& payload(int leaf) const { return *nodes[static_cast<std::size_t>(leaf)].payload; }
  const std::vector<Constraint>& path(int leaf) const { return nodes[static_cast<std::size_t>(leaf)].path; }

  /// Leaf region as a polyhedron: base region plus the leaf's path.
  Polyhedron leaf_region(int leaf) const {
    Polyhedron r = Polyhedron::make(n, base_region);
    r.add_all(path(leaf));
    return r;
  }

  /// Root-to-leaf walk evaluating each internal test exactly at x.
  int route(std::span<const Rat> x) const {
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("route: dimension mismatch");
    for (const auto& c : base_region)
      if (!c.holds(x)) throw std::invalid_argument("route: point outside the base region");
    int at = root();
    while (!nodes[static_cast<std::size_t>(at)].is_leaf()) {
      const Node& nd = nodes[static_cast<std::size_t>(at)];
      at = nd.test->holds(x) ? nd.true_child : nd.false_child;
    }
    return at;
  }

  /// Whether x satisfies the leaf's full constraint list (base + path).
  bool in_leaf_region(int leaf, std::span<const Rat> x) const {
    for (const auto& c : base_region)
      if (!c.holds(x)) return false;
    for (const auto& c : path(leaf))
      if (!c.holds(x)) return false;
    return true;
  }
};

namespace detail {

struct TraceStep {
  Constraint holds;
  bool answer;
  bool fork;  // both sides kept: this step is an internal node
};

struct TraceContext {
  int n = 0;
  std::vector<Constraint> base;
  TraceConfig cfg;
  LpStats* stats = nullptr;
  std::vector<std::vector<TraceStep>> pending;
  std::int64_t node_count = 0;

  void count_node() {
    if (++node_count > cfg.max_nodes)
      throw BudgetExceeded("trace: node budget exceeded (" + std::to_string(cfg.max_nodes) + ")");
  }

  bool keep(const std::vector<Constraint>& path, const Constraint& next) const {
    if (!cfg.prune_infeasible && !cfg.prune_empty_interior) return true;
    Polyhedron region = Polyhedron::make(n, base);
    region.add_all(path);
    region.add(next);
    if (cfg.prune_empty_interior) region = region.strictified();
    return feasible_open(region, stats).feasible;
  }
};

class ReplayOracle final : public DecisionOracle {
 public:
  ReplayOracle(TraceContext& ctx, std::vector<TraceStep> prefix)
      : ctx_(ctx), steps_(std::move(prefix)) {
    for (const auto& s : steps_)
      path_.push_back(s.answer ? s.holds : negate_constraint(s.holds));
  }

  bool decide(const Constraint& holds) override {
    if (holds.kind() == Constraint::Kind::Eq)
      throw Error("trace: branching on an equality is not supported");
    if (pos_ < steps_.size()) {
      const TraceStep& s = steps_[pos_];
      if (!(s.holds == holds))
        throw NondeterminismError("trace: program asked a different question on replay: expected " +
                                  s.holds.str() + ", got " + holds.str());
      ++pos_;
      return s.answer;
    }
    Constraint neg = negate_constraint(holds);
    bool keep_true = ctx_.keep(path_, holds);
    bool keep_false = ctx_.keep(path_, neg);
    if (keep_true && keep_false) {
      ctx_.count_node();  // internal node
      std::vector<TraceStep> alt = steps_;
      alt.push_back({holds, false, true});
      ctx_.pending.push_back(std::move(alt));
      steps_.push_back({holds, true, true});
      path_.push_back(holds);
      ++pos_;
      return true;
    }
    if (!keep_true && !keep_false)
      throw Error("trace: both branch sides pruned; base region fails the pruning predicate");
    bool answer = keep_true;
    steps_.push_back({holds, answer, false});
    path_.push_back(answer ? holds : neg);
    ++pos_;
    return answer;
  }

  std::vector<TraceStep> take_steps() { return std::move(steps_); }

 private:
  TraceContext& ctx_;
  std::vector<TraceStep> steps_;
  std::vector<Constraint> path_;
  std::size_t pos_ = 0;
};

template <typename P>
struct LeafRecord {
  std::vector<TraceStep> steps;
  P payload;
};

// Builds preorder nodes from leaf records that share a decision prefix.
template <typename P>
int assemble(DecisionTree<P>& tree, std::vector<const LeafRecord<P>*> group, std::size_t pos) {
  for (;;) {
    const LeafRecord<P>* first = group.front();
    if (pos == first->steps.size()) {
      if (group.size() != 1)
        throw NondeterminismError("trace: two paths finished with the same decisions");
      int id = static_cast<int>(tree.nodes.size());
      auto& node = tree.nodes.emplace_back();
      node.payload = first->payload;
      for (const auto& s : first->steps)
        node.path.push_back(s.answer ? s.holds : negate_constraint(s.holds));
      return id;
    }
    const TraceStep& step = first->steps[pos];
    for (const auto* rec : group) {
      if (pos >= rec->steps.size() || !(rec->steps[pos].holds == step.holds) ||
          rec->steps[pos].fork != step.fork)
        throw NondeterminismError("trace: inconsistent replays at the same depth");
    }
    if (!step.fork) {
      ++pos;
      continue;
    }
    std::vector<const LeafRecord<P>*> tgroup, fgroup;
    for (const auto* rec : group)
      (rec->steps[pos].answer ? tgroup : fgroup).push_back(rec);
    if (tgroup.empty() || fgroup.empty())
      throw NondeterminismError("trace: fork with a missing side");
    int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back().test = step.holds;
    int t = assemble(tree, std::move(tgroup), pos + 1);
    int f = assemble(tree, std::move(fgroup), pos + 1);
    tree.nodes[static_cast<std::size_t>(id)].true_child = t;
    tree.nodes[static_cast<std::size_t>(id)].false_child = f;
    return id;
  }
}

}  // namespace detail

/// Extracts the decision tree of `prog` over `base_region` by systematic
/// re-execution: each run replays a forced prefix of branch answers and the
/// first fresh branch forks the worklist. Branch sides failing the pruning
/// predicate are folded into the path without creating a node. `prog` must
/// be deterministic and route every data-dependent branch through the
/// oracle.
template <typename Prog>
auto build_tree(Prog&& prog, int n, std::span<const Constraint> base_region,
                const TraceConfig& cfg = {}, LpStats* stats = nullptr) {
  using P = std::decay_t<std::invoke_result_t<Prog&, std::span<const LinExpr>, DecisionOracle&>>;
  if (n < 0) throw std::invalid_argument("build_tree: negative dimension");
  if (cfg.max_nodes < 1) throw std::invalid_argument("build_tree: max_nodes must be >= 1");
  for (const auto& c : base_region)
    if (c.max_var() >= n) throw std::invalid_argument("build_tree: base region references variable beyond n");

  detail::TraceContext ctx;
  ctx.n = n;
  ctx.base.assign(base_region.begin(), base_region.end());
  ctx.cfg = cfg;
  ctx.stats = stats;

  if ((cfg.prune_infeasible || cfg.prune_empty_interior)) {
    Polyhedron region = Polyhedron::make(n, ctx.base);
    if (cfg.prune_empty_interior) region = region.strictified();
    if (!feasible_open(region, stats).feasible)
      throw std::invalid_argument("build_tree: base region fails the pruning predicate");
  }

  std::vector<LinExpr> vars;
  vars.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) vars.push_back(LinExpr::var(j));

  std::vector<detail::LeafRecord<P>> leaves;
  ctx.pending.push_back({});
  while (!ctx.pending.empty()) {
    std::vector<detail::TraceStep> prefix = std::move(ctx.pending.back());
    ctx.pending.pop_back();
    detail::ReplayOracle oracle(ctx, std::move(prefix));
    P payload = prog(std::span<const LinExpr>(vars), static_cast<DecisionOracle&>(oracle));
    ctx.count_node();  // leaf
    leaves.push_back({oracle.take_steps(), std::move(payload)});
  }

  DecisionTree<P> tree;
  tree.n = n;
  tree.base_region = ctx.base;
  std::vector<const detail::LeafRecord<P>*> group;
  group.reserve(leaves.size());
  for (const auto& rec : leaves) group.push_back(&rec);
  detail::assemble(tree, std::move(group), 0);
  return tree;
}

/// Runs `prog` concretely at x (all branches answered by exact evaluation).
template <typename Prog>
auto run_concrete(Prog&& prog, std::span<const Rat> x) {
  std::vector<LinExpr> vars;
  vars.reserve(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) vars.push_back(LinExpr::var(static_cast<int>(j)));
  ConcreteOracle oracle(std::vector<Rat>(x.begin(), x.end()));
  return prog(std::span<const LinExpr>(vars), static_cast<DecisionOracle&>(oracle));
}

}  // namespace hardex
