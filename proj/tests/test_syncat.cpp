#include "doctest.h"

#include "au/error.hpp"
#include "au/syncat.hpp"
#include "fixtures.hpp"

using namespace au;

namespace {
const Expr X = mk::proper("X");
const Expr Y = mk::proper("Y");
const Expr M = mk::proper("M");
const Expr One = mk::top();
const Expr Two = mk::sum(mk::top(), mk::top());
}  // namespace

TEST_CASE("identity and composition") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    SynCat c(walk);
    Morphism f = c.make(X, Y, "x", mk::app("f", {mk::var("x")}));
    CHECK(c.equal(c.compose(c.identity(Y), f), f).proved());
    CHECK(c.equal(c.compose(f, c.identity(X)), f).proved());

    TheoryPresentation z2 = theoryFromCategory(fixtures::z2());
    SynCat cz(z2);
    Morphism m = cz.make(M, M, "x", mk::app("m", {mk::var("x")}));
    HostVerdict v = cz.equal(cz.compose(m, m), cz.identity(M));
    CHECK(v.proved());
    CHECK(v.certificate.stepCount() == 1);
}

TEST_CASE("enumerateHom") {
    TheoryPresentation empty = theoryFromCategory(fixtures::empty());
    Evaluator ev(nullptr, Structure{}, 5);
    SynCat c(empty, {}, Oracle{{&ev}, false});
    HomEnumeration two = c.enumerateHom(One, Two, 5);
    REQUIRE(two.classes.size() == 2);
    CHECK(alphaEqual(two.classes[0].rep, mk::inl(mk::star())));
    CHECK(alphaEqual(two.classes[1].rep, mk::inr(mk::star())));
    CHECK(c.enumerateHom(Two, One, 5).classes.size() == 1);
    CHECK(c.enumerateHom(One, mk::sigma("x", One, One), 5).classes.size() == 1);

    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    SynCat w(walk);
    CHECK(w.enumerateHom(X, One, 5).classes.size() == 1);
    CHECK(w.enumerateHom(X, Y, 5).classes.size() == 1);
}

TEST_CASE("hom from a sum into itself") {
    TheoryPresentation empty = theoryFromCategory(fixtures::empty());
    Evaluator ev(nullptr, Structure{}, 5);
    SynCat c(empty, {}, Oracle{{&ev}, false});
    // identity, swap and the two constants
    HomEnumeration h = c.enumerateHom(Two, Two, 9);
    CHECK(h.classes.size() == 4);
    for (const auto& k : h.classes) CHECK_FALSE(k.modelMerged);
}

TEST_CASE("chosen structure") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    Evaluator ev(nullptr, Structure{}, 5);
    SynCat c(walk, {}, Oracle{});
    ChosenStructure s = auStructure(c);
    Morphism f = c.make(X, Y, "x", mk::app("f", {mk::var("x")}));
    // equalizer of (f, f): the inclusion is inverse to the lift of the identity
    Morphism incl = s.equalizerIncl(f, f);
    Morphism lift = s.equalizerLift(f, f, c.identity(X));
    CHECK_NOTHROW(c.make(lift.dom, lift.cod, lift.var, lift.term));
    CHECK(c.equal(c.compose(incl, lift), c.identity(X)).proved());
    CHECK(c.equal(c.compose(lift, incl), c.identity(s.equalizer(f, f))).proved());

    // the product projections recover the pairing components
    Morphism pr = s.pairing(f, c.identity(X));
    CHECK(c.equal(c.compose(s.fst(Y, X), pr), f).proved());
    CHECK(c.equal(c.compose(s.snd(Y, X), pr), c.identity(X)).proved());

    // recursor squares by normalization
    Morphism b = c.make(X, mk::list(One), "x", mk::nil());
    Morphism g = c.make(s.product(mk::list(One), One), mk::list(One), "p",
                        mk::cons(mk::cons(mk::proj1(mk::var("p")), mk::star()), mk::star()));
    Morphism r = s.rec(One, b, g);
    CHECK_NOTHROW(c.make(r.dom, r.cod, r.var, r.term));
    Expr xv = mk::var("x"), lv = mk::var("l");
    Context ctx{{"x", X}, {"l", mk::list(One)}};
    CHECK(c.equalTerms(ctx, applyMorphism(r, mk::pair(xv, mk::nil())), applyMorphism(b, xv), mk::list(One)).proved());
    Expr lhs = applyMorphism(r, mk::pair(xv, mk::cons(lv, mk::star())));
    Expr rhs = applyMorphism(g, mk::pair(applyMorphism(r, mk::pair(xv, lv)), mk::star()));
    CHECK(c.equalTerms(ctx, lhs, rhs, mk::list(One)).proved());

    // the coproduct injections are distinct
    SynCat ce(walk, {}, Oracle{{&ev}, false});
    HostVerdict inj = ce.equalTerms({}, mk::inl(mk::star()), mk::inr(mk::star()), Two);
    CHECK(inj.status == HostVerdict::Status::Refuted);
}

TEST_CASE("Pgr morphisms and arrow-list squares") {
    TheoryPresentation z2 = theoryFromCategory(fixtures::z2());
    SynCat c(z2);
    ChosenStructure s = auStructure(c);
    Morphism m = c.make(M, M, "x", mk::app("m", {mk::var("x")}));
    PgrObject p{{s.bang(M)}};
    PgrObject q{{s.bang(M)}};
    PgrObject longer{{s.bang(M), c.identity(M)}};
    CHECK(pgrCompose(c, c.identity(M), p, q).accepted);
    CHECK_FALSE(pgrCompose(c, c.identity(M), p, longer).accepted);

    // m . m = id only through the axiom
    PgrObject pm{{s.bang(M), c.identity(M)}};
    PgrObject qm{{s.bang(M), m}};
    PgrMorphismResult r = pgrCompose(c, m, pm, qm);
    REQUIRE(r.accepted);
    CHECK(r.lastSquare.proved());
    CHECK(r.lastSquare.certificate.stepCount() == 1);

    SquaresVerdict idv = checkArrowListSquares(c, pm, pm, identityArrowList(pm));
    CHECK(idv.proved());
    ArrowListMorphism twice = composeArrowList(r.morphism, r.morphism);
    PgrObject pmm{{s.bang(M), c.identity(M)}};
    CHECK(checkArrowListSquares(c, pm, pmm, composeArrowList(identityArrowList(pm), identityArrowList(pm))).proved());
    CHECK(checkArrowListSquares(c, qm, qm, identityArrowList(qm)).proved());
    (void)twice;
    CHECK_THROWS_AS(checkArrowListSquares(c, pm, p, identityArrowList(pm)), UsageError);
}

TEST_CASE("a failing square is not proved") {
    TheoryPresentation empty = theoryFromCategory(fixtures::empty());
    Evaluator ev(nullptr, Structure{}, 3);
    SynCat c(empty, {}, Oracle{{&ev}, false});
    Morphism toL{One, Two, "x", mk::inl(mk::star())};
    Morphism toR{One, Two, "x", mk::inr(mk::star())};
    PgrObject a{{ChosenStructure{}.bang(Two), toL}};
    PgrObject b{{ChosenStructure{}.bang(Two), toR}};
    SquaresVerdict v = checkArrowListSquares(c, a, b, identityArrowList(a));
    CHECK_FALSE(v.proved());
    CHECK(v.squares[1].status == HostVerdict::Status::Refuted);
}

TEST_CASE("slice category") {
    ModelPresentation m = fixtures::mfin();
    SliceCategory overY(m, Y, 5);
    // 3^2 maps from X and 3^3 maps from Y
    CHECK(overY.carrierObjects().size() == 9 + 27);
    SliceCategory overOne(m, One, 5);
    CHECK(overOne.carrierObjects().size() == m.objects.size());

    SliceObject fx{X, {X, Y, "x", mk::app("f", {mk::var("x")})}};
    CHECK(overY.isTriangle(fx, fx, identityMorphism(X, "z")));
    SliceHoms h = overY.hom(fx, fx, 5);
    CHECK(h.homs.size() == 1);
    CHECK_THROWS_AS(SliceCategory(m, mk::proper("Q"), 5), ScopeError);
}
