#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "hardex/trace.hpp"

namespace hardex {

enum class Mode { ConstantCost, ScaleInvariant, General };

/// Subregion of the input space together with the affine cost valid on it.
struct CostPiece {
  std::vector<Constraint> region;
  LinExpr cost;
};

/// A linear minimization problem for a fixed input size, plus the hooks the
/// search tricks need. `cost_pieces(z)` must cover the base region for every
/// candidate output z.
template <typename P, typename Z>
struct ProblemSpec {
  int n = 0;
  std::vector<Constraint> base_region;
  std::vector<Z> candidate_outputs;
  Mode mode = Mode::General;

  std::function<Z(const P&)> output_of;
  std::function<std::vector<CostPiece>(const Z&)> cost_pieces;

  /// Optional: encodes c(x, z*) <= 1 as plain constraints, avoiding the
  /// piecewise split of the denominator.
  std::function<std::vector<Constraint>(const Z&)> opt_constraints;
  /// Optional: cost pieces that are already valid on a leaf's own region
  /// (e.g. when the traced payload pins down which piece applies).
  std::function<std::vector<CostPiece>(const P&)> leaf_pieces;
  /// Optional: keep predicate for the last-decision/max-outcome prune.
  std::function<bool(const P&)> check1_keep;
  /// Optional: outer relaxation of "some z* has cost at most 1"; enables the
  /// per-leaf upper-bound screen and the default bisection upper bound.
  std::vector<Constraint> relaxation;
  /// Concrete cost, used for report validation and tests.
  std::function<Rat(std::span<const Rat>, const Z&)> cost_at;
};

struct SearchStats {
  std::int64_t leaves_total = 0;
  std::int64_t leaves_after_check1 = 0;
  std::int64_t leaves_after_check2 = 0;
  std::int64_t leaves_pruned_check1 = 0;
  std::int64_t leaves_pruned_check2 = 0;
  std::uint64_t lps_solved = 0;
  std::int64_t wall_ms = 0;
  /// The last-decision prune removed every leaf (degenerate sizes where the
  /// worst example effectively uses fewer inputs); the search reran without it.
  bool check1_fallback = false;
};

template <typename Z>
struct HardExampleReport {
  Rat alpha_lo;
  Rat alpha_hi;
  bool exact = true;      // alpha_lo == alpha_hi, computed without bisection
  bool attained = false;
  std::vector<Rat> witness;
  int leaf_id = -1;
  Z algorithm_output{};
  Z optimal_output{};
  SearchStats stats;

  const Rat& alpha() const {
    if (!exact) throw std::logic_error("alpha(): interval report, use alpha_lo/alpha_hi");
    return alpha_lo;
  }
};

/// Shared monotone maximum cell; stale reads only weaken pruning.
class RunningBest {
 public:
  std::optional<Rat> get() const {
    std::lock_guard<std::mutex> lk(mu_);
    return v_;
  }
  void raise(const Rat& candidate) {
    std::lock_guard<std::mutex> lk(mu_);
    if (!v_ || *v_ < candidate) v_ = candidate;
  }

 private:
  mutable std::mutex mu_;
  std::optional<Rat> v_;
};

struct SearchOptions {
  bool check1 = true;
  bool check2 = true;
  int workers = 1;
  /// Near-witness offset for unattained suprema; shrunk further when needed
  /// to keep the witness ratio within epsilon*(alpha-1) of alpha.
  Rat epsilon = Rat(1, 1000000);
  /// Interval width for General-mode bisection.
  Rat tol = Rat(1, 1000);
};

namespace detail {

template <typename F>
void parallel_for(int workers, std::size_t count, F&& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count || failed.load(std::memory_order_relaxed)) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (std::size_t t = 0; t < k; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline Rat dot(std::span<const Rat> a, std::span<const Rat> b) {
  Rat s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <typename P, typename Z>
std::vector<CostPiece> pieces_for_leaf(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec, int leaf) {
  if (spec.leaf_pieces) return spec.leaf_pieces(tree.payload(leaf));
  return spec.cost_pieces(spec.output_of(tree.payload(leaf)));
}

inline void require_linear(const LinExpr& cost, const char* what) {
  if (!cost.has_finite_constant() || !cost.constant().finite().is_zero())
    throw std::invalid_argument(std::string(what) +
                                ": scale-invariant mode requires linear costs (zero constant term)");
}

inline void require_affine_finite(const LinExpr& cost, const char* what) {
  if (!cost.has_finite_constant())
    throw std::invalid_argument(std::string(what) + ": infinite cost piece is not supported here");
}

template <typename P, typename Z>
void validate_spec(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec) {
  if (spec.candidate_outputs.empty())
    throw std::invalid_argument("compute_ratio: empty candidate output set");
  if (spec.n != tree.n)
    throw std::invalid_argument("compute_ratio: tree and problem dimensions differ");
  if (!spec.output_of || !spec.cost_pieces)
    throw std::invalid_argument("compute_ratio: output_of and cost_pieces are required");
}

struct SupItem {
  bool feasible = false;
  bool unbounded = false;
  Rat value;
  Rat anchor_value;
  SupOutcome sup;
};

inline void merge_sup_item(SupItem& into, SupItem&& cand) {
  if (cand.unbounded) {
    into = std::move(cand);
    return;
  }
  if (!cand.feasible || into.unbounded) return;
  if (!into.feasible || cand.value > into.value ||
      (cand.value == into.value && cand.sup.attained && !into.sup.attained))
    into = std::move(cand);
}

inline SupItem sup_item_from(SupOutcome&& s, const LinExpr& cost) {
  SupItem item;
  switch (s.status) {
    case SupStatus::Infeasible:
      return item;
    case SupStatus::Unbounded:
      item.unbounded = true;
      return item;
    case SupStatus::Sup:
      item.feasible = true;
      item.value = s.value;
      item.anchor_value = cost.eval_finite(s.interior_anchor);
      item.sup = std::move(s);
      return item;
  }
  return item;
}

/// Supremum of the leaf cost over leaf-region /\ piece /\ "c(x,z*) <= 1".
template <typename P, typename Z>
SupItem eval_scale_item(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec, int leaf,
                        const CostPiece& piece, const Z& zstar, LpStats* stats) {
  auto objective = piece.cost.coeff_vector(tree.n);
  if (spec.opt_constraints) {
    Polyhedron region = tree.leaf_region(leaf);
    region.add_all(piece.region);
    for (const auto& c : spec.opt_constraints(zstar)) region.add(c);
    return sup_item_from(sup_open(region, objective, stats), piece.cost);
  }
  SupItem best;
  for (const auto& pstar : spec.cost_pieces(zstar)) {
    require_linear(pstar.cost, "compute_ratio");
    Polyhedron region = tree.leaf_region(leaf);
    region.add_all(piece.region);
    region.add_all(pstar.region);
    region.add(Constraint(pstar.cost - LinExpr(Rat(1)), Constraint::Kind::Le));
    merge_sup_item(best, sup_item_from(sup_open(region, objective, stats), piece.cost));
  }
  return best;
}

template <typename P, typename Z>
ExtRat leaf_gamma(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec, int leaf, LpStats* stats) {
  ExtRat best = ExtRat::neg_inf();
  for (const auto& piece : pieces_for_leaf(tree, spec, leaf)) {
    require_linear(piece.cost, "prune_check2");
    Polyhedron region = tree.leaf_region(leaf);
    region.add_all(piece.region);
    region.add_all(spec.relaxation);
    SupOutcome s = sup_open(region, piece.cost.coeff_vector(tree.n), stats);
    if (s.status == SupStatus::Infeasible) continue;
    if (s.status == SupStatus::Unbounded) return ExtRat::pos_inf();
    if (ExtRat(s.value) > best) best = ExtRat(s.value);
  }
  return best;
}

}  // namespace detail

/// Drops leaves whose traced run does not satisfy the problem's keep
/// predicate (for makespan: the last job must sit on the most loaded
/// machine). Requires the annotation hook.
template <typename P, typename Z>
std::vector<int> prune_check1(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec,
                              std::span<const int> leaves) {
  if (!spec.check1_keep)
    throw std::invalid_argument("prune_check1: payload lacks the required annotation hook");
  std::vector<int> out;
  for (int id : leaves)
    if (spec.check1_keep(tree.payload(id))) out.push_back(id);
  return out;
}

/// Per-leaf upper-bound screen: computes gamma(leaf) = sup of the leaf cost
/// over leaf-region /\ relaxation, drops infeasible leaves and leaves whose
/// bound cannot beat the running best, and orders the rest by decreasing
/// gamma so strong leaves establish the best value early.
template <typename P, typename Z>
std::vector<int> prune_check2(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec,
                              std::span<const int> leaves, RunningBest& running_best,
                              std::vector<std::pair<int, ExtRat>>* gamma_out = nullptr,
                              int workers = 1, LpStats* stats = nullptr) {
  if (spec.mode != Mode::ScaleInvariant)
    throw std::invalid_argument("prune_check2: scale-invariant mode only");
  if (spec.relaxation.empty())
    throw std::invalid_argument("prune_check2: problem provides no relaxation region");

  std::vector<ExtRat> gamma(leaves.size(), ExtRat::neg_inf());
  detail::parallel_for(workers, leaves.size(), [&](std::size_t i) {
    gamma[i] = detail::leaf_gamma(tree, spec, leaves[static_cast<std::ptrdiff_t>(i)], stats);
  });

  std::vector<std::pair<int, ExtRat>> kept;
  std::optional<Rat> best = running_best.get();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (gamma[i] == ExtRat::neg_inf()) continue;
    if (best && gamma[i] <= ExtRat(*best)) continue;
    kept.emplace_back(leaves[static_cast<std::ptrdiff_t>(i)], gamma[i]);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return b.second < a.second; });
  std::vector<int> out;
  out.reserve(kept.size());
  for (const auto& [id, g] : kept) out.push_back(id);
  if (gamma_out) *gamma_out = std::move(kept);
  return out;
}

namespace detail {

template <typename P, typename Z>
std::vector<int> select_leaves(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec,
                               const SearchOptions& opts, SearchStats& st) {
  std::vector<int> leaves = tree.leaf_ids();
  st.leaves_total = static_cast<std::int64_t>(leaves.size());
  if (opts.check1 && spec.check1_keep) {
    std::vector<int> kept = prune_check1(tree, spec, leaves);
    if (kept.empty()) {
      st.check1_fallback = true;  // keep all leaves; the prune removed the whole search space
    } else {
      st.leaves_pruned_check1 = static_cast<std::int64_t>(leaves.size() - kept.size());
      leaves = std::move(kept);
    }
  }
  st.leaves_after_check1 = static_cast<std::int64_t>(leaves.size());
  return leaves;
}

template <typename P, typename Z>
HardExampleReport<Z> compute_scale_invariant(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec,
                                             const SearchOptions& opts, LpStats& lp) {
  SearchStats st;
  std::vector<int> leaves = select_leaves(tree, spec, opts, st);

  RunningBest best_cell;
  std::vector<std::pair<int, ExtRat>> gammas;
  const bool use_gamma = opts.check2 && !spec.relaxation.empty();
  if (use_gamma) {
    std::size_t before = leaves.size();
    leaves = prune_check2(tree, spec, leaves, best_cell, &gammas, opts.workers, &lp);
    st.leaves_pruned_check2 += static_cast<std::int64_t>(before - leaves.size());
  }
  st.leaves_after_check2 = static_cast<std::int64_t>(leaves.size());

  struct GlobalBest {
    bool found = false;
    int leaf = -1;
    std::size_t z_index = 0;
    SupItem item;
  } best;

  const auto& candidates = spec.candidate_outputs;
  for (std::size_t li = 0; li < leaves.size(); ++li) {
    int leaf = leaves[li];
    if (use_gamma) {
      std::optional<Rat> b = best_cell.get();
      if (b && gammas[li].second <= ExtRat(*b)) {
        ++st.leaves_pruned_check2;
        continue;
      }
    }
    std::vector<CostPiece> pieces = pieces_for_leaf(tree, spec, leaf);
    for (const auto& piece : pieces) require_linear(piece.cost, "compute_ratio");

    const std::size_t items = candidates.size() * pieces.size();
    std::vector<SupItem> results(items);
    parallel_for(opts.workers, items, [&](std::size_t k) {
      std::size_t zi = k / pieces.size();
      std::size_t pi = k % pieces.size();
      results[k] = eval_scale_item(tree, spec, leaf, pieces[pi], candidates[zi], &lp);
    });
    for (std::size_t k = 0; k < items; ++k) {
      SupItem& r = results[k];
      if (r.unbounded) throw Error("compute_ratio: supremum unbounded over a leaf region");
      if (!r.feasible) continue;
      best_cell.raise(r.value);
      bool better = !best.found || r.value > best.item.value ||
                    (r.value == best.item.value && r.sup.attained && !best.item.sup.attained);
      if (better) best = {true, leaf, k / pieces.size(), std::move(r)};
    }
  }

  if (!best.found) throw Error("compute_ratio: no feasible (leaf, candidate) pair");

  HardExampleReport<Z> rep;
  rep.alpha_lo = rep.alpha_hi = best.item.value;
  rep.exact = true;
  rep.attained = best.item.sup.attained;
  rep.leaf_id = best.leaf;
  rep.algorithm_output = spec.output_of(tree.payload(best.leaf));
  rep.optimal_output = candidates[best.z_index];
  if (rep.attained) {
    rep.witness = best.item.sup.attained_point;
  } else {
    const Rat& alpha = best.item.value;
    Rat eps = opts.epsilon;
    if (alpha > Rat(1) && alpha > best.item.anchor_value) {
      Rat cap = opts.epsilon * (alpha - Rat(1)) / (alpha - best.item.anchor_value);
      if (cap < eps) eps = cap;
    }
    rep.witness = best.item.sup.epsilon_point(eps);
  }
  rep.stats = st;
  return rep;
}

template <typename P, typename Z>
HardExampleReport<Z> compute_constant_cost(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec,
                                           const SearchOptions& opts, LpStats& lp) {
  SearchStats st;
  std::vector<int> leaves = select_leaves(tree, spec, opts, st);
  st.leaves_after_check2 = static_cast<std::int64_t>(leaves.size());

  struct Candidate {
    bool found = false;
    Rat ratio;
    std::vector<Rat> point;
    int leaf = -1;
    std::size_t z_index = 0;
  } best;

  const auto& candidates = spec.candidate_outputs;
  for (int leaf : leaves) {
    std::vector<CostPiece> pieces = pieces_for_leaf(tree, spec, leaf);
    for (const auto& pl : pieces) {
      if (!pl.cost.is_constant())
        throw std::invalid_argument("compute_ratio: constant-cost mode requires constant cost pieces");
      for (std::size_t zi = 0; zi < candidates.size(); ++zi) {
        for (const auto& ps : spec.cost_pieces(candidates[zi])) {
          if (!ps.cost.is_constant())
            throw std::invalid_argument("compute_ratio: constant-cost mode requires constant cost pieces");
          if (!ps.cost.has_finite_constant()) continue;  // infinite optimum cost: never binding
          Polyhedron region = tree.leaf_region(leaf);
          region.add_all(pl.region);
          region.add_all(ps.region);
          FeasibilityOutcome f = feasible_open(region, &lp);
          if (!f.feasible) continue;
          if (!pl.cost.has_finite_constant())
            throw Error("compute_ratio: infinite algorithm cost on a feasible region");
          const Rat& cl = pl.cost.constant().finite();
          const Rat& cs = ps.cost.constant().finite();
          Rat ratio;
          if (cs.is_zero()) {
            if (!cl.is_zero()) throw Error("compute_ratio: ratio unbounded (zero-cost optimum)");
            ratio = Rat(1);  // 0/0 convention
          } else {
            ratio = cl / cs;
          }
          if (!best.found || ratio > best.ratio)
            best = {true, ratio, std::move(f.point), leaf, zi};
        }
      }
    }
  }
  if (!best.found) throw Error("compute_ratio: no feasible (leaf, candidate) pair");

  HardExampleReport<Z> rep;
  rep.alpha_lo = rep.alpha_hi = best.ratio;
  rep.exact = true;
  rep.attained = true;
  rep.witness = std::move(best.point);
  rep.leaf_id = best.leaf;
  rep.algorithm_output = spec.output_of(tree.payload(best.leaf));
  rep.optimal_output = candidates[best.z_index];
  rep.stats = st;
  return rep;
}

}  // namespace detail

/// Brackets the ratio by bisection: "ratio > alpha" holds somewhere iff some
/// leaf/piece pair admits a point with cost(leaf) > alpha * cost(z*), an open
/// polyhedron feasibility question. Returns [lo, hi] with hi - lo <= tol.
template <typename P, typename Z>
HardExampleReport<Z> binary_search_ratio(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec,
                                         Rat lo, Rat hi, const Rat& tol,
                                         const SearchOptions& opts = {}, LpStats* lp_out = nullptr) {
  detail::validate_spec(tree, spec);
  if (lo < Rat(1)) throw std::invalid_argument("binary_search_ratio: lo must be >= 1");
  if (hi < lo) throw std::invalid_argument("binary_search_ratio: hi must be >= lo");
  if (tol.sign() <= 0) throw std::invalid_argument("binary_search_ratio: tol must be positive");

  auto t0 = std::chrono::steady_clock::now();
  LpStats lp;
  SearchStats st;
  std::vector<int> leaves = detail::select_leaves(tree, spec, opts, st);
  st.leaves_after_check2 = static_cast<std::int64_t>(leaves.size());

  struct Item {
    int leaf;
    std::size_t z_index;
    CostPiece num;
    CostPiece den;
  };
  std::vector<Item> items;
  for (int leaf : leaves) {
    for (const auto& pl : detail::pieces_for_leaf(tree, spec, leaf)) {
      detail::require_affine_finite(pl.cost, "binary_search_ratio");
      for (std::size_t zi = 0; zi < spec.candidate_outputs.size(); ++zi) {
        for (const auto& ps : spec.cost_pieces(spec.candidate_outputs[zi])) {
          detail::require_affine_finite(ps.cost, "binary_search_ratio");
          items.push_back({leaf, zi, pl, ps});
        }
      }
    }
  }

  struct Hit {
    std::vector<Rat> point;
    int leaf = -1;
    std::size_t z_index = 0;
  };
  // Deterministic under workers: the hit with the smallest item index wins,
  // and indices above a known hit are skipped.
  auto test_exceeds = [&](const Rat& alpha) -> std::optional<Hit> {
    std::optional<Hit> hit;
    std::size_t hit_idx = items.size();
    std::mutex mu;
    std::atomic<std::size_t> best_idx{items.size()};
    detail::parallel_for(opts.workers, items.size(), [&](std::size_t k) {
      if (k > best_idx.load(std::memory_order_relaxed)) return;
      const Item& it = items[k];
      Polyhedron region = tree.leaf_region(it.leaf);
      region.add_all(it.num.region);
      region.add_all(it.den.region);
      region.add(Constraint(alpha * it.den.cost - it.num.cost, Constraint::Kind::Lt));
      FeasibilityOutcome f = feasible_open(region, &lp);
      if (!f.feasible) return;
      std::lock_guard<std::mutex> lk(mu);
      if (k < hit_idx) {
        hit_idx = k;
        hit = Hit{std::move(f.point), it.leaf, it.z_index};
        best_idx.store(k, std::memory_order_relaxed);
      }
    });
    return hit;
  };

  if (test_exceeds(hi))
    throw Error("binary_search_ratio: ratio exceeds hi=" + hi.str() + "; raise the upper bound");

  std::optional<Hit> last_hit;
  while (hi - lo > tol) {
    Rat mid = (lo + hi) / Rat(2);
    if (auto h = test_exceeds(mid)) {
      lo = mid;
      last_hit = std::move(h);
    } else {
      hi = mid;
    }
  }

  HardExampleReport<Z> rep;
  rep.alpha_lo = lo;
  rep.alpha_hi = hi;
  rep.exact = false;
  rep.attained = false;
  if (last_hit) {
    rep.witness = last_hit->point;
    rep.leaf_id = last_hit->leaf;
    rep.algorithm_output = spec.output_of(tree.payload(last_hit->leaf));
    rep.optimal_output = spec.candidate_outputs[last_hit->z_index];
  }
  st.lps_solved = lp.solves.load();
  st.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  rep.stats = st;
  if (lp_out) lp_out->solves.fetch_add(lp.solves.load());
  return rep;
}

/// Worst-case ratio and witness for the traced algorithm, by the per-mode
/// decomposition over (leaf, candidate optimum, cost piece) triples.
template <typename P, typename Z>
HardExampleReport<Z> compute_ratio(const DecisionTree<P>& tree, const ProblemSpec<P, Z>& spec,
                                   const SearchOptions& opts = {}, LpStats* lp_out = nullptr) {
  detail::validate_spec(tree, spec);
  auto t0 = std::chrono::steady_clock::now();
  LpStats lp;
  HardExampleReport<Z> rep;
  switch (spec.mode) {
    case Mode::ScaleInvariant:
      rep = detail::compute_scale_invariant(tree, spec, opts, lp);
      break;
    case Mode::ConstantCost:
      rep = detail::compute_constant_cost(tree, spec, opts, lp);
      break;
    case Mode::General: {
      // lo = 1; hi from the relaxation bound over all leaves.
      if (spec.relaxation.empty())
        throw std::invalid_argument(
            "compute_ratio: general mode needs a relaxation region for the default upper bound; "
            "call binary_search_ratio with an explicit hi instead");
      SearchStats st;
      std::vector<int> leaves = detail::select_leaves(tree, spec, opts, st);
      ExtRat hi = ExtRat::neg_inf();
      for (int leaf : leaves) {
        ExtRat g = detail::leaf_gamma(tree, spec, leaf, &lp);
        if (g > hi) hi = g;
      }
      if (!hi.is_finite())
        throw Error("compute_ratio: relaxation bound is not finite; supply hi explicitly");
      Rat hi_val = hi.finite() < Rat(1) ? Rat(1) : hi.finite();
      rep = binary_search_ratio(tree, spec, Rat(1), hi_val, opts.tol, opts);
      rep.stats.leaves_total = st.leaves_total;
      rep.stats.leaves_after_check1 = st.leaves_after_check1;
      rep.stats.leaves_pruned_check1 = st.leaves_pruned_check1;
      rep.stats.check1_fallback = st.check1_fallback;
      break;
    }
  }
  rep.stats.lps_solved += lp.solves.load();
  rep.stats.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  if (lp_out) lp_out->solves.fetch_add(lp.solves.load());
  return rep;
}

}  // namespace hardex
