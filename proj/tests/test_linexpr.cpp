#include "doctest.h"

#include <random>
#include <stdexcept>
#include <vector>

#include "hardex/linexpr.hpp"

using namespace hardex;

namespace {

LinExpr x(int i) { return LinExpr::var(i); }

std::vector<Rat> rand_point(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<long> num(-20, 20), den(1, 9);
  std::vector<Rat> p;
  p.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p.emplace_back(num(rng), den(rng));
  return p;
}

}  // namespace

TEST_CASE("lin_combine folds affine combinations exactly") {
  // (1)*(2x1+1) + (1)*(3x1+x2) -> 5x1 + x2 + 1
  std::vector<std::pair<Rat, LinExpr>> terms{
      {Rat(1), Rat(2) * x(0) + LinExpr(Rat(1))},
      {Rat(1), Rat(3) * x(0) + x(1)},
  };
  LinExpr got = lin_combine(terms);
  CHECK(got == Rat(5) * x(0) + x(1) + LinExpr(Rat(1)));
  CHECK(got.str() == "5*x1 + x2 + 1");

  std::vector<std::pair<Rat, LinExpr>> neg{{Rat(-1), x(0)}};
  CHECK(lin_combine(neg) == Rat(-1) * x(0));

  std::vector<std::pair<Rat, LinExpr>> inf_cost{{Rat(2), x(1)}};
  LinExpr cost = lin_combine(inf_cost, ExtRat::pos_inf());
  CHECK(cost.coeff(1) == Rat(2));
  CHECK(cost.constant() == ExtRat::pos_inf());
  CHECK_THROWS_AS(compare(cost, Rel::Le, x(0)), std::invalid_argument);
}

TEST_CASE("zero coefficients are dropped") {
  LinExpr e = x(0) + x(1) - x(0);
  CHECK(e.coeffs().size() == 1);
  CHECK(e.coeff(0) == Rat(0));
  CHECK((Rat(0) * x(3)).is_constant());
}

TEST_CASE("products of two non-constant expressions are rejected") {
  CHECK_THROWS_AS(x(0) * x(1), std::invalid_argument);
  CHECK((LinExpr(Rat(3)) * x(1)) == Rat(3) * x(1));
}

TEST_CASE("compare decides constant comparisons without branching") {
  CHECK(std::get<bool>(compare(x(0), Rel::Le, x(0))) == true);
  CHECK(std::get<bool>(compare(LinExpr(Rat(0)), Rel::Lt, LinExpr(Rat(0)))) == false);

  auto br = compare(x(0), Rel::Le, x(1) + x(2));
  const Constraint& c = std::get<Constraint>(br);
  CHECK(c.kind() == Constraint::Kind::Le);
  CHECK(c.expr() == x(0) - x(1) - x(2));
  CHECK(c.str() == "x1 - x2 - x3 <= 0");
}

TEST_CASE("constraint canonical form merges structurally equal constraints") {
  auto a = std::get<Constraint>(compare(Rat(2, 3) * x(0), Rel::Le, Rat(4, 3) * x(1)));
  auto b = std::get<Constraint>(compare(x(0), Rel::Le, Rat(2) * x(1)));
  CHECK(a == b);

  auto e1 = std::get<Constraint>(compare(Rat(-2) * x(0), Rel::Eq, x(1)));
  auto e2 = std::get<Constraint>(compare(Rat(2) * x(0), Rel::Eq, Rat(-1) * x(1)));
  CHECK(e1 == e2);  // equality sign normalization
}

TEST_CASE("negate_constraint complements halfspaces exactly") {
  Constraint le(x(0) - x(1), Constraint::Kind::Le);
  Constraint expect(x(1) - x(0), Constraint::Kind::Lt);
  CHECK(negate_constraint(le) == expect);

  Constraint lt(x(0), Constraint::Kind::Lt);
  CHECK(negate_constraint(lt) == Constraint(Rat(-1) * x(0), Constraint::Kind::Le));

  Constraint eq(x(0), Constraint::Kind::Eq);
  CHECK_THROWS_AS(negate_constraint(eq), std::invalid_argument);
}

TEST_CASE("random affine builds evaluate exactly") {
  // Expressions built through the operators must evaluate to the same value
  // as recomputing the original operation DAG node by node, for random points.
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  std::uniform_int_distribution<int> nvar(1, 6), pick(0, 2);

  struct Node {
    int op;                 // 0: var, 1: a+b, 2: a-b, 3: s*a + k
    std::size_t a = 0, b = 0;
    int var = -1;
    Rat s, k;
  };
  auto ref_eval = [](const std::vector<Node>& dag, std::span<const Rat> v) {
    std::vector<Rat> val(dag.size());
    for (std::size_t i = 0; i < dag.size(); ++i) {
      const Node& nd = dag[i];
      switch (nd.op) {
        case 0: val[i] = v[static_cast<std::size_t>(nd.var)]; break;
        case 1: val[i] = val[nd.a] + val[nd.b]; break;
        case 2: val[i] = val[nd.a] - val[nd.b]; break;
        default: val[i] = nd.s * val[nd.a] + nd.k; break;
      }
    }
    return val.back();
  };

  int total = 0;
  while (total < 1000) {
    int n = nvar(rng);
    std::vector<LinExpr> pool;
    std::vector<Node> dag;
    for (int i = 0; i < n; ++i) {
      pool.push_back(LinExpr::var(i));
      dag.push_back({0, 0, 0, i, Rat(0), Rat(0)});
    }
    for (int step = 0; step < 8; ++step) {
      std::uniform_int_distribution<std::size_t> idx(0, pool.size() - 1);
      std::size_t a = idx(rng), b = idx(rng);
      Rat s(num(rng), den(rng)), k(num(rng), den(rng));
      switch (pick(rng)) {
        case 0:
          pool.push_back(pool[a] + pool[b]);
          dag.push_back({1, a, b, -1, Rat(0), Rat(0)});
          break;
        case 1:
          pool.push_back(pool[a] - pool[b]);
          dag.push_back({2, a, b, -1, Rat(0), Rat(0)});
          break;
        default:
          pool.push_back(s * pool[a] + LinExpr(k));
          dag.push_back({3, a, 0, -1, s, k});
          break;
      }
    }
    for (int rep = 0; rep < 4; ++rep, ++total) {
      auto v = rand_point(rng, n);
      CHECK(pool.back().eval_finite(v) == ref_eval(dag, v));
    }
  }
}

TEST_CASE("compare agrees with concrete evaluation at random points") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  std::uniform_int_distribution<int> relpick(0, 4);
  const Rel rels[] = {Rel::Eq, Rel::Le, Rel::Lt, Rel::Ge, Rel::Gt};
  for (int t = 0; t < 1000; ++t) {
    int n = 4;
    LinExpr lhs, rhs;
    for (int i = 0; i < n; ++i) {
      lhs += Rat(num(rng), den(rng)) * LinExpr::var(i);
      rhs += Rat(num(rng), den(rng)) * LinExpr::var(i);
    }
    lhs += LinExpr(Rat(num(rng), den(rng)));
    rhs += LinExpr(Rat(num(rng), den(rng)));
    Rel rel = rels[relpick(rng)];
    auto res = compare(lhs, rel, rhs);
    auto v = rand_point(rng, n);
    Rat dl = lhs.eval_finite(v), dr = rhs.eval_finite(v);
    bool truth = false;
    switch (rel) {
      case Rel::Eq: truth = dl == dr; break;
      case Rel::Le: truth = dl <= dr; break;
      case Rel::Lt: truth = dl < dr; break;
      case Rel::Ge: truth = dl >= dr; break;
      case Rel::Gt: truth = dl > dr; break;
    }
    if (std::holds_alternative<bool>(res)) {
      CHECK(std::get<bool>(res) == truth);
    } else {
      CHECK(std::get<Constraint>(res).holds(v) == truth);
    }
  }
}

TEST_CASE("negation is an involution and complements point membership") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  std::uniform_int_distribution<int> kindpick(0, 1);
  for (int t = 0; t < 500; ++t) {
    LinExpr e;
    for (int i = 0; i < 3; ++i) e += Rat(num(rng), den(rng)) * LinExpr::var(i);
    e += LinExpr(Rat(num(rng), den(rng)));
    if (e.is_constant()) continue;
    auto kind = kindpick(rng) == 0 ? Constraint::Kind::Le : Constraint::Kind::Lt;
    Constraint c(e, kind);
    CHECK(negate_constraint(negate_constraint(c)) == c);
    auto v = rand_point(rng, 3);
    CHECK(c.holds(v) != negate_constraint(c).holds(v));
  }
}

TEST_CASE("rendering moves the constant to the right-hand side") {
  Constraint c(Rat(5, 3) * x(0) - x(1) - LinExpr(Rat(7)), Constraint::Kind::Le);
  // canonical integer scaling multiplies through by 3
  CHECK(c.str() == "5*x1 - 3*x2 <= 21");
  Constraint vac(LinExpr(Rat(-1)), Constraint::Kind::Le);
  CHECK(vac.str() == "0 <= 1");
}
