#include "doctest.h"

#include "pluricas/jet.hpp"
#include "pluricas/parser.hpp"
#include "support/generators.hpp"

using namespace pluricas;

namespace {

ContextPtr xyz() { return make_context({"x", "y", "z"}, {"u"}); }

Expr P(const ContextPtr& ctx, const char* text) { return parse_expr(text, ctx); }

JetVar var(std::vector<int> counts, int dep = 0) { return JetVar{dep, MultiIndex(std::move(counts))}; }

// Naive expander: monomials as (atom name -> power) maps.
using NaiveMonomial = std::map<std::string, int>;
using NaivePoly = std::map<NaiveMonomial, Rational>;

NaivePoly naive_mul(const NaivePoly& a, const NaivePoly& b) {
  NaivePoly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      NaiveMonomial m = ma;
      for (const auto& [atom, p] : mb)
        m[atom] += p;
      out[m] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

} // namespace

TEST_SUITE("jet") {

TEST_CASE("context validation") {
  CHECK_THROWS_AS(make_context({"x", "x"}, {"u"}), ContextError);
  CHECK_THROWS_AS(make_context({"x"}, {"x"}), ContextError);
  CHECK_THROWS_AS(make_context({}, {"u"}), ContextError);
  CHECK_THROWS_AS(make_context({"x"}, {""}), ContextError);
  auto ctx = make_context({"t", "s"}, {"u", "v"});
  CHECK(ctx->independent_index("s") == 1);
  CHECK(ctx->dependent_index("v") == 1);
  CHECK(ctx->dependent_index("w") == -1);
}

TEST_CASE("multi-index arithmetic and ordering") {
  MultiIndex a({2, 0, 1}), b({1, 0, 1});
  CHECK(a.order() == 3);
  CHECK(b.divides(a));
  CHECK_FALSE(a.divides(b));
  CHECK(a - b == MultiIndex({1, 0, 0}));
  CHECK(a + b == MultiIndex({3, 0, 2}));
  CHECK_THROWS(b - a);
  CHECK(b < a); // lower order first
  CHECK(MultiIndex({0, 1, 0}) < MultiIndex({1, 0, 0}));
  CHECK(MultiIndex::unit(3, 2) == MultiIndex({0, 0, 1}));
}

TEST_CASE("normalize: commutativity collapses terms") {
  auto ctx = xyz();
  Expr e = P(ctx, "u_x*u_y*1/2 + u_y*u_x*1/2");
  CHECK(e == P(ctx, "u_x*u_y"));
  CHECK(e.size() == 1);
}

TEST_CASE("normalize: Pythagorean identity") {
  auto ctx = xyz();
  CHECK(P(ctx, "cos(u)^2 + sin(u)^2") == Expr::constant(ctx, 1));
  CHECK(P(ctx, "cos(u)^3") == P(ctx, "cos(u) - cos(u)*sin(u)^2"));
}

TEST_CASE("normalize: the sine-Gordon Lagrangian is already canonical") {
  auto ctx = xyz();
  Expr L = P(ctx, "1/2*u_x*u_y - cos(u)");
  CHECK(normalize(RawExpr::embed(L), ctx) == L);
  CHECK(L.size() == 2);
}

TEST_CASE("normalize: negative exponent is unsupported") {
  auto ctx = xyz();
  CHECK_THROWS_AS(normalize(RawExpr::power(RawExpr::jet(var({1, 0, 0})), -1), ctx),
                  UnsupportedOperation);
  CHECK(normalize(RawExpr::power(RawExpr::jet(var({1, 0, 0})), 0), ctx) == Expr::constant(ctx, 1));
}

TEST_CASE("arithmetic") {
  auto ctx = xyz();
  Expr e = P(ctx, "u_x - 3*sin(u)");
  CHECK(e + Expr::constant(ctx, 0) == e);
  CHECK(e - e == Expr::constant(ctx, 0));
  CHECK((e - e).is_zero());
  CHECK(P(ctx, "(u_x + u_y)^2") == P(ctx, "u_x^2 + 2*u_x*u_y + u_y^2"));
  CHECK(e.pow(0) == Expr::constant(ctx, 1));
  CHECK(e.scaled(Rational(1, 2)) == P(ctx, "1/2*u_x - 3/2*sin(u)"));
  Expr c(5);
  CHECK(c.is_constant());
  CHECK((c * e) == P(ctx, "5*u_x - 15*sin(u)"));
}

TEST_CASE("arithmetic across unrelated contexts is rejected") {
  auto a = xyz();
  auto b = make_context({"s", "t"}, {"v"});
  CHECK_THROWS_AS(P(a, "u_x") + P(b, "v_s"), ContextError);
  // Structurally equal contexts are interchangeable.
  auto c = xyz();
  CHECK(P(a, "u_x") + P(c, "u_y") == P(a, "u_x + u_y"));
}

TEST_CASE("the closure factor product expands to six canonical terms") {
  auto ctx = xyz();
  // Oracle: multiply the two factors as plain polynomials in named atoms.
  NaivePoly first{{{{"u_xy", 1}}, 1}, {{{"sin", 1}}, -1}};
  NaivePoly second{{{{"u_z", 1}}, 1}, {{{"u_x", 3}}, Rational(-1, 2)}, {{{"u_xxx", 1}}, -1}};
  const NaivePoly expected = naive_mul(first, second);
  Expr product = P(ctx, "(u_xy - sin(u))*(u_z - 1/2*u_x^3 - u_xxx)");
  CHECK(product.size() == expected.size());
  CHECK(expected.size() == 6);
  // Compare coefficient by coefficient.
  auto name_of = [&](const Atom& a) {
    if (a.kind == AtomKind::Sin)
      return std::string("sin");
    if (a.kind == AtomKind::Cos)
      return std::string("cos");
    return print_jet(a.var, *ctx);
  };
  for (const auto& [factors, coeff] : product.terms()) {
    NaiveMonomial m;
    for (const auto& f : factors)
      m[name_of(f.atom)] = static_cast<int>(f.power);
    REQUIRE(expected.count(m) == 1);
    CHECK(expected.at(m) == coeff);
  }
}

TEST_CASE("partial derivatives") {
  auto ctx = xyz();
  Expr L = P(ctx, "1/2*u_x*u_y - cos(u)");
  CHECK(partial(L, var({1, 0, 0})) == P(ctx, "1/2*u_y"));
  CHECK(partial(L, var({0, 0, 0})) == P(ctx, "sin(u)"));
  CHECK(partial(P(ctx, "u_xx^2"), var({2, 0, 0})) == P(ctx, "2*u_xx"));
  CHECK(partial(P(ctx, "sin(u)*cos(u)"), var({0, 0, 0})) == P(ctx, "1 - 2*sin(u)^2"));
  CHECK(partial(P(ctx, "sin(u)"), var({1, 0, 0})).is_zero());
}

TEST_CASE("max_order") {
  auto ctx = xyz();
  auto info = max_order(P(ctx, "1/2*u_x*u_z - 1/8*u_x^4 + 1/2*u_xx^2"), *ctx);
  CHECK(info.max_total == 2);
  CHECK(info.max_index[0][0] == 2);
  CHECK(info.max_index[0][2] == 1);
  auto constant = max_order(Expr::constant(ctx, 5), *ctx);
  CHECK(constant.max_total == 0);
  CHECK(constant.max_index[0] == MultiIndex(3));
  CHECK_FALSE(constant.present[0]);
  auto third = max_order(P(ctx, "u_xxx"), *ctx);
  CHECK(third.max_index[0] == MultiIndex({3, 0, 0}));
  CHECK(third.max_total == 3);
  CHECK(max_order(P(ctx, "sin(u)"), *ctx).present[0]);
}

TEST_CASE("property: canonical form ignores order and association") {
  auto ctx = make_context({"x", "y", "z"}, {"u", "v"});
  gen::Random rnd(101);
  for (int n = 0; n < 300; ++n) {
    auto terms = rnd.raw_terms(*ctx, {});
    CHECK(normalize(rnd.reassociate(terms), ctx) == normalize(rnd.reassociate(terms), ctx));
  }
}

TEST_CASE("property: zero test and Pythagorean closure") {
  auto ctx = make_context({"x", "y"}, {"u", "v"});
  gen::Random rnd(202);
  for (int n = 0; n < 300; ++n) {
    auto terms = rnd.raw_terms(*ctx, {});
    RawExpr t = RawExpr::sum(terms);
    CHECK(normalize(RawExpr::sum({t, RawExpr::neg(t)}), ctx).is_zero());
    Expr e = normalize(RawExpr::power(t, rnd.uniform(1, 3)), ctx);
    for (const auto& [factors, coeff] : e.terms()) {
      CHECK(coeff != 0);
      for (const auto& f : factors)
        if (f.atom.kind == AtomKind::Cos)
          CHECK(f.power == 1);
    }
  }
}

TEST_CASE("property: partial derivatives commute") {
  auto ctx = xyz();
  gen::Random rnd(303);
  for (int n = 0; n < 300; ++n) {
    Expr f = rnd.expr(ctx, {.max_order = 2});
    JetVar v = rnd.jet_var(*ctx, 2), w = rnd.jet_var(*ctx, 2);
    CHECK(partial(partial(f, v), w) == partial(partial(f, w), v));
  }
}

TEST_CASE("property: ring laws") {
  auto ctx = make_context({"x", "y"}, {"u"});
  gen::Random rnd(404);
  gen::Bounds small{.max_terms = 3, .max_factors = 2};
  for (int n = 0; n < 200; ++n) {
    Expr a = rnd.expr(ctx, small), b = rnd.expr(ctx, small), c = rnd.expr(ctx, small);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK(a.pow(2) == a * a);
  }
}

} // TEST_SUITE
