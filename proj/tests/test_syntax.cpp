#include "doctest.h"

#include "au/error.hpp"
#include "au/syntax.hpp"
#include "gen.hpp"

using namespace au;

TEST_CASE("substitute replaces free occurrences") {
    Expr c = mk::proper("C");
    Expr r = substitute(mk::eq(c, mk::var("x"), mk::var("d")), "x", mk::var("c"));
    CHECK(alphaEqual(r, mk::eq(c, mk::var("c"), mk::var("d"))));
    CHECK(alphaEqual(substitute(mk::top(), "x", mk::var("c")), mk::top()));
}

TEST_CASE("substitution under a binder does not capture") {
    Expr d = mk::proper("D");
    Expr s = mk::sigma("y", d, mk::eq(d, mk::var("y"), mk::var("x")));
    Expr r = substitute(s, "x", mk::var("y"));
    REQUIRE(r->kind == Kind::Sigma);
    Expr body = openBody(r->kids[1], mk::var("z"));
    CHECK(alphaEqual(body, mk::eq(d, mk::var("z"), mk::var("y"))));
    CHECK(show(r) == "(Sigma (y' D) (Eq D y' y))");
}

TEST_CASE("weaken inserts a fresh variable") {
    Expr d = mk::proper("D"), c = mk::proper("C");
    Judgement j0 = weaken(Judgement::typeJ({}, mk::top()), d, 0);
    REQUIRE(j0.ctx.size() == 1);
    CHECK(j0.ctx[0].name == "y");

    Judgement j1 = weaken(Judgement::termJ({{"x", c}}, mk::var("x"), c), d, 1);
    REQUIRE(j1.ctx.size() == 2);
    CHECK(j1.ctx[0].name == "x");
    CHECK(alphaEqual(j1.ctx[1].type, d));

    Judgement j2 = weaken(Judgement::typeJ({{"x", c}}, mk::proper("B")), d, 0);
    CHECK(j2.ctx[0].name == "y");
    CHECK(j2.ctx[1].name == "x");

    CHECK_THROWS_AS(weaken(Judgement::typeJ({}, mk::top()), d, 2), UsageError);
}

TEST_CASE("alpha equality ignores binder names") {
    Expr d = mk::proper("D");
    Expr a = mk::sigma("x", d, mk::eq(d, mk::var("x"), mk::var("x")));
    Expr b = mk::sigma("y", d, mk::eq(d, mk::var("y"), mk::var("y")));
    CHECK(alphaEqual(a, b));
    CHECK_FALSE(alphaEqual(mk::top(), mk::bot()));
    Expr r = mk::rec(mk::var("l"), mk::star(), "acc", "e", mk::var("acc"));
    CHECK(alphaEqual(r, mk::rec(mk::var("l"), mk::star(), "u", "v", mk::var("u"))));
}

TEST_CASE("substitution properties on a generated corpus") {
    testgen::ExprGen gen(7);
    for (int i = 0; i < 300; ++i) {
        Expr b = gen.type(3, {"x", "y"});
        Expr c = gen.term(2, {"z"});
        Expr d = gen.term(2, {"z"});
        // B[x/c][y/d] = B[y/d][x/c[y/d]] with y not free in c
        Expr lhs = substitute(substitute(b, "x", c), "y", d);
        Expr rhs = substitute(substitute(b, "y", d), "x", substitute(c, "y", d));
        CHECK(alphaEqual(lhs, rhs));
        CHECK(alphaEqual(substitute(b, "x", mk::var("x")), b));
        CHECK(alphaEqual(b, b));
        Expr b2 = gen.type(3, {"x", "y"});
        CHECK(alphaEqual(b, b2) == alphaEqual(b2, b));
    }
}

TEST_CASE("weakening then instantiating recovers the judgement") {
    testgen::ExprGen gen(11);
    for (int i = 0; i < 100; ++i) {
        Context ctx{{"x", mk::proper("X")}, {"w", mk::top()}};
        Judgement j = Judgement::typeJ(ctx, gen.type(3, {"x", "w"}));
        for (std::size_t pos = 0; pos <= ctx.size(); ++pos) {
            Judgement w = weaken(j, mk::top(), pos);
            CHECK(alphaEqual(instantiate(w, pos, mk::star()), j));
        }
    }
}

TEST_CASE("scope checking") {
    CHECK_THROWS_AS(requireScoped({}, mk::var("x")), ScopeError);
    CHECK_NOTHROW(requireScoped({{"x", mk::top()}}, mk::var("x")));
    CHECK_THROWS_AS(requireScoped({}, mk::bvar(0)), ScopeError);
}
