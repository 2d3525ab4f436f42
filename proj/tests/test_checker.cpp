#include "doctest.h"

#include "au/checker.hpp"
#include "au/error.hpp"
#include "fixtures.hpp"

using namespace au;

namespace {
const Expr X = mk::proper("X");
const Expr Y = mk::proper("Y");
const Expr M = mk::proper("M");
Expr f(Expr a) { return mk::app("f", {std::move(a)}); }
Expr m(Expr a) { return mk::app("m", {std::move(a)}); }
}  // namespace

TEST_CASE("checkType") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    Checker ck(walk);
    CHECK(ck.checkType({{"x", X}}, Y).rule == "proper-type");
    CHECK_NOTHROW(ck.checkType({}, mk::sigma("x", mk::top(), mk::eq(mk::top(), mk::var("x"), mk::star()))));
    CHECK_THROWS_AS(ck.checkType({}, mk::eq(Y, f(mk::var("x")), mk::var("x"))), ScopeError);
    CHECK_THROWS_AS(ck.checkType({}, mk::proper("Z")), ScopeError);
}

TEST_CASE("checkTerm") {
    TheoryPresentation z2 = theoryFromCategory(fixtures::z2());
    Checker ck(z2);
    CHECK_NOTHROW(ck.checkTerm({}, mk::star(), mk::top()));
    CHECK_NOTHROW(ck.checkTerm({{"x", M}}, m(m(mk::var("x"))), M));
    CHECK_NOTHROW(ck.checkTerm({}, mk::nil(), mk::list(mk::top())));
    CHECK_THROWS_AS(ck.checkTerm({}, mk::star(), mk::bot()), TypeError);
    CHECK_THROWS_AS(ck.checkTerm({{"x", M}}, mk::app("m", {}), M), TypeError);
    // recursor data must have the shapes b : Y and g : Y, A -> Y
    Expr len = mk::rec(mk::var("l"), mk::nil(), "acc", "e", mk::cons(mk::var("acc"), mk::star()));
    CHECK_NOTHROW(ck.checkTerm({{"l", mk::list(M)}}, len, mk::list(mk::top())));
    Expr bad = mk::rec(mk::var("l"), mk::nil(), "acc", "e", mk::var("e"));
    CHECK_THROWS_AS(ck.checkTerm({{"l", mk::list(M)}}, bad, mk::list(mk::top())), TypeError);
}

TEST_CASE("normalize") {
    TheoryPresentation z2 = theoryFromCategory(fixtures::z2());
    Checker ck(z2);
    Expr a = mk::var("a"), b = mk::var("b");
    CHECK(alphaEqual(ck.computeNormal(mk::proj1(mk::pair(a, b))), a));

    // RecL over a cons unfolds by the right recursor square
    Expr g = mk::pair(mk::var("acc"), mk::var("e"));
    Expr r = ck.computeNormal(mk::rec(mk::cons(mk::var("l"), a), b, "acc", "e", g));
    CHECK(alphaEqual(r, mk::pair(mk::rec(mk::var("l"), b, "acc", "e", g), a)));

    NormalizeResult n = ck.normalize({{"x", M}}, m(m(mk::var("x"))));
    CHECK(n.normal);
    CHECK(alphaEqual(n.term, mk::var("x")));
    REQUIRE(n.trace.size() == 1);
    EqCertificate one;
    one.steps = n.trace;
    CHECK(ck.checkEqual({{"x", M}}, m(m(mk::var("x"))), mk::var("x"), M, &one).proved());
}

TEST_CASE("normalize reports fuel exhaustion") {
    TheoryPresentation t = theoryFromCategory(CatPresentation{"loop", {"M"}, {{"m", "M", "M"}}, {}});
    t.termAxioms.push_back({"loop", {{"x", M}}, m(mk::var("x")), m(m(mk::var("x"))), M, Orientation::LeftToRight});
    Checker ck(t, CheckerOptions{20, 3, 600});
    NormalizeResult n = ck.normalize({{"x", M}}, m(mk::var("x")));
    CHECK_FALSE(n.normal);
}

TEST_CASE("checkEqual") {
    TheoryPresentation z2 = theoryFromCategory(fixtures::z2());
    Checker ck(z2);
    Context ctx{{"x", M}};
    Expr x = mk::var("x");
    CHECK(ck.checkEqual(ctx, m(x), m(x), M).proved());

    EqVerdict v = ck.checkEqual(ctx, m(m(m(m(x)))), x, M);
    REQUIRE(v.proved());
    CHECK(v.certificate.stepCount() == 2);
    // the explicit two-step certificate
    RewriteStep s1{RewriteStep::Kind::Axiom, RewriteStep::Side::Left, {}, "z2.eq1", {}};
    EqCertificate two{{s1, s1}, {}, {}};
    CHECK(ck.checkEqual(ctx, m(m(m(m(x)))), x, M, &two).proved());

    Expr tt = mk::sum(mk::top(), mk::top());
    CHECK_FALSE(ck.checkEqual({}, mk::inl(mk::star()), mk::inr(mk::star()), tt).proved());
}

TEST_CASE("certificate replay rejects bad certificates") {
    TheoryPresentation z2 = theoryFromCategory(fixtures::z2());
    Checker ck(z2);
    Context ctx{{"x", M}};
    Expr x = mk::var("x");
    RewriteStep s1{RewriteStep::Kind::Axiom, RewriteStep::Side::Left, {}, "z2.eq1", {}};
    EqCertificate one{{s1}, {}, {}};
    CHECK_THROWS_AS(ck.checkEqual(ctx, m(m(m(m(x)))), x, M, &one), CertificateError);
    RewriteStep wrongPos{RewriteStep::Kind::Axiom, RewriteStep::Side::Left, {0, 0, 0}, "z2.eq1", {}};
    EqCertificate bad{{wrongPos}, {}, {}};
    CHECK_THROWS_AS(ck.checkEqual(ctx, m(m(x)), x, M, &bad), CertificateError);
    RewriteStep unknown{RewriteStep::Kind::Axiom, RewriteStep::Side::Left, {}, "nope", {}};
    EqCertificate bad2{{unknown}, {}, {}};
    CHECK_THROWS_AS(ck.checkEqual(ctx, m(m(x)), x, M, &bad2), CertificateError);
}

TEST_CASE("definitional eta and equality reflection") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    Checker ck(walk);
    Expr p = mk::var("p");
    Expr sig = mk::sigma("u", X, Y);
    CHECK(ck.convertible({{"p", sig}}, mk::pair(mk::proj1(p), mk::proj2(p)), p, sig));
    CHECK(ck.convertible({{"u", mk::top()}}, mk::var("u"), mk::star(), mk::top()));
    // a hypothesis of equality type can be used for rewriting
    Context ctx{{"a", X}, {"b", X}, {"h", mk::eq(X, mk::var("a"), mk::var("b"))}};
    EqVerdict v = ck.checkEqual(ctx, f(mk::var("a")), f(mk::var("b")), Y);
    CHECK(v.proved());
    CHECK_NOTHROW(ck.checkTerm(ctx, mk::refl(), mk::eq(Y, f(mk::var("a")), f(mk::var("b")))));
}

TEST_CASE("case split on a sum variable") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    Checker ck(walk);
    Expr s = mk::var("s");
    Expr tt = mk::sum(mk::top(), mk::top());
    Expr viaCase = mk::caseOf(s, "a", mk::inl(mk::star()), "b", mk::inr(mk::star()));
    EqVerdict v = ck.checkEqual({{"s", tt}}, viaCase, s, tt);
    CHECK(v.proved());
    Expr swap = mk::caseOf(s, "a", mk::inr(mk::star()), "b", mk::inl(mk::star()));
    EqVerdict w = ck.checkEqual({{"s", tt}}, mk::caseOf(swap, "a", mk::inr(mk::star()), "b", mk::inl(mk::star())), s, tt);
    REQUIRE(w.proved());
    CHECK(w.certificate.splitVar == "s");
    CHECK_NOTHROW(ck.replay({{"s", tt}}, mk::caseOf(swap, "a", mk::inr(mk::star()), "b", mk::inl(mk::star())), s, tt,
                            w.certificate));
}

TEST_CASE("unsettled equalities become obligations") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    Checker ck(walk);
    Context ctx{{"a", X}, {"b", X}};
    Derivation d = ck.checkTerm(ctx, mk::refl(), mk::eq(X, mk::var("a"), mk::var("b")));
    CHECK(d.allObligations().size() == 1);
}
