#include "doctest.h"

#include <set>

#include "au/error.hpp"
#include "au/functor.hpp"
#include "fixtures.hpp"

using namespace au;

namespace {

const Expr X = mk::proper("X");
const Expr Y = mk::proper("Y");

}  // namespace

TEST_CASE("functor presentations") {
    ModelPresentation a = fixtures::walkReal(), b = fixtures::mfin();
    FunctorPresentation f = fixtures::walkToFin();
    CHECK_NOTHROW(f.validate(a, b));
    FunctorPresentation bad = f;
    bad.carriers["Y"]["v"] = "c";
    CHECK_THROWS_AS(bad.validate(a, b), ModelError);
    bad = f;
    bad.objects.erase("Y");
    CHECK_THROWS_AS(bad.validate(a, b), ModelError);
    CHECK_NOTHROW(identityFunctor(a).validate(a, a));
}

TEST_CASE("translation along a functor") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation b = fixtures::mfin();
    Translation tr = translateAlongFunctor(fixtures::walkToFin(), walk, b);
    CHECK(alphaEqual(tr.apply(mk::app("f", {mk::var("x")})), mk::app("f", {mk::var("x")})));
    CHECK(alphaEqual(tr.apply(mk::list(mk::sum(X, Y))), mk::list(mk::sum(X, Y))));
    CHECK_NOTHROW(tr.requireCovers(walk));

    FunctorPresentation partial = fixtures::walkToFin();
    partial.arrows.clear();
    CHECK_THROWS_AS(translateAlongFunctor(partial, walk, b), ScopeError);

    for (const auto& r : checkFsum(tr, typeCorpus(walk))) {
        INFO(r.entry << ": " << r.detail);
        CHECK(r.ok);
    }
    Translation id = translateAlongFunctor(identityFunctor(fixtures::walkReal()), walk, fixtures::walkReal());
    for (const auto& j : typeCorpus(walk)) CHECK(alphaEqual(id.apply(j), j));
}

TEST_CASE("coherence witnesses of F") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation a = fixtures::walkReal(), b = fixtures::mfin();
    ModelFunctor f(fixtures::walkToFin(), a, b);
    Translation tr = translateAlongFunctor(f.presentation(), walk, b);
    Evaluator ae(&a, a.structure, 3), be(&b, b.structure, 3);
    SemInterp as(ae, SemInterp::Mode::Slice), bs(be, SemInterp::Mode::Slice);
    auto ws = f.checkWitnesses(tr, as, bs, objectCorpus(walk));
    CHECK(ws.size() >= 15);
    std::set<std::string> rules;
    for (const auto& w : ws) {
        INFO(w.object << " " << w.rule << ": " << w.detail);
        CHECK(w.ok);
        rules.insert(w.rule);
    }
    for (const char* r : {"terminal", "initial", "proper", "product", "coproduct", "list", "equalizer", "quotient"})
        CHECK(rules.count(r));
    // the image keeps the source shape
    CHECK(f.onFibre(mk::sum(X, Y), a.structure.inl(a.structure.proper(Value::atom("p")))) ==
          a.structure.inl(Value::atom("0")));
}

TEST_CASE("tau family") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation a = fixtures::walkReal(), b = fixtures::mfin();
    auto corpus = typeCorpus(walk);
    ModelFunctor f(fixtures::walkToFin(), a, b);
    Translation tr = translateAlongFunctor(f.presentation(), walk, b);
    TauGenerator tau(f, tr, 3);
    MorphismReport rep = tau.check(corpus, walk);
    if (const ConditionResult* c = rep.firstFailure()) FAIL(c->entry << " " << c->condition << ": " << c->detail);
    CHECK(rep.results.size() == corpus.size() * 5);

    const IsoComponent& top = tau.component(Judgement::typeJ({}, mk::top()));
    CHECK(top.rule == "terminal");
    CHECK(top.fwd(Value::unit()) == Value::atom("pt"));
    Judgement sig = Judgement::typeJ({}, mk::sigma("x", X, mk::eq(Y, mk::app("f", {mk::var("x")}),
                                                                   mk::app("f", {mk::var("x")}))));
    const IsoComponent& s = tau.component(sig);
    CHECK(s.rule == "sigma");
    CHECK(s.uses.size() == 1);
    Judgement body = Judgement::typeJ({{"x1", X}}, mk::eq(Y, mk::app("f", {mk::var("x1")}), mk::app("f", {mk::var("x1")})));
    CHECK(s.uses.front() == judgementKey(body));
    for (const auto& v : tau.sourceSide().total(sig).elems) CHECK(s.fwd(v) == tau.component(body).fwd(v));

    // a corrupted tau component is caught
    IsoFamily fam = tau.family(corpus);
    std::size_t caught = 0, tried = 0;
    for (const auto& c : fam.components()) {
        auto bad = corruptComponent(fam, c.key, tau.sourceSide(), tau.targetSide());
        if (!bad) continue;
        ++tried;
        ComponentSource extra = [&tau](const Judgement& j) -> const IsoComponent& { return tau.component(j); };
        if (!checkInterpMorphism(*bad, tau.sourceSide(), tau.targetSide(), {c.index}, walk, extra).ok()) ++caught;
    }
    CHECK(tried >= 10);
    CHECK(caught == tried);
}

TEST_CASE("tau for the identity functor is the identity") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation a = fixtures::walkReal();
    ModelFunctor f(identityFunctor(a), a, a);
    Translation tr = translateAlongFunctor(f.presentation(), walk, a);
    TauGenerator tau(f, tr, 3);
    auto corpus = typeCorpus(walk);
    IsoFamily fam = tau.family(corpus);
    for (const auto& c : fam.components()) {
        INFO(c.key);
        for (const auto& v : tau.sourceSide().total(c.index).elems) CHECK(c.fwd(v) == v);
    }
    CHECK(tau.check(corpus, walk).ok());
}

TEST_CASE("lifting a functor to the theories with coherent isomorphisms") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation a = fixtures::walkReal(), b = fixtures::mfin();
    auto corpus = typeCorpus(walk);
    auto lf = liftFunctorToTheory(fixtures::walkToFin(), walk, a, b, 3, corpus);
    CHECK(lf->ok());
    CHECK_NOTHROW(lf->translation.requireCovers(lf->source));

    // inverse laws translate to provable equations
    std::size_t inverseLaws = 0;
    for (const auto& ax : lf->axioms) {
        INFO(ax.name << " " << ax.verdict.str());
        CHECK(ax.verdict.holds());
        if (ax.name.ends_with(".inv1") || ax.name.ends_with(".inv2")) {
            CHECK(ax.verdict.proved());
            ++inverseLaws;
        }
    }
    CHECK(inverseLaws >= 2 * corpus.size());

    const IsoComponent* sx = lf->genA->generated().find(Judgement::typeJ({}, X));
    REQUIRE(sx);
    Expr img = lf->translation.apply(mk::iso(sx->id, mk::var("w")));
    CHECK(img->kind == Kind::Iso);
    CHECK(img->kids[0]->kind == Kind::Iso);

    MainTheoremReport rep = checkMainTheorem(*lf, objectCorpus(walk));
    std::size_t naturality = 0, components = 0;
    for (const auto& it : rep.items) {
        INFO(it.kind << " " << it.what << ": " << it.detail);
        CHECK(it.ok);
        naturality += it.kind == "naturality";
        components += it.kind == "component";
    }
    CHECK(components >= 15);
    CHECK(naturality >= 10);
}

TEST_CASE("lifting the identity functor") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation a = fixtures::walkReal();
    auto corpus = typeCorpus(walk);
    auto lf = liftFunctorToTheory(identityFunctor(a), walk, a, a, 3, corpus);
    CHECK(lf->ok());
    for (const auto& c : lf->genA->generated().components()) {
        const IsoComponent& t = lf->tau->component(c.index);
        for (const auto& v : lf->tau->sourceSide().total(c.index).elems) CHECK(t.fwd(v) == v);
    }
    CHECK(checkMainTheorem(*lf, objectCorpus(walk)).ok());
}

TEST_CASE("a functor between non-canonical structures") {
    TheoryPresentation z2 = theoryFromCategory(fixtures::z2());
    ModelPresentation a = fixtures::z2Real();
    ModelPresentation b = fixtures::z2Real();
    b.name = "z2other";
    b.structure = Structure{};
    b.structure.swapPairs = true;
    b.structure.terminal = "one";
    FunctorPresentation f;
    f.name = "flip";
    f.source = a.name;
    f.target = b.name;
    f.objects = {{"M", "M"}};
    f.arrows = {{"m", {"m"}}};
    f.carriers = {{"M", {{"0", "1"}, {"1", "0"}}}};
    auto lf = liftFunctorToTheory(f, z2, a, b, 3, typeCorpus(z2));
    CHECK(lf->ok());
    CHECK(lf->tau->check(lf->corpus, z2).ok());
    CHECK(checkMainTheorem(*lf, objectCorpus(z2)).ok());
}

TEST_CASE("reflector") {
    ModelPresentation m = fixtures::walkReal();
    Reflection rx = reflectObject(m, X, 3);
    REQUIRE(rx.iso);
    CHECK(rx.carrier.size() == 2);
    for (const auto& x : rx.iso->domain.elems) CHECK(rx.carrier.contains(rx.iso->fn(x)));
    CHECK(!reflectObject(m, mk::list(X), 3).iso);

    Morphism id = identityMorphism(X);
    CompMap rid = reflectMorphism(m, id, 3);
    for (const auto& x : rid.domain.elems) CHECK(rid.fn(x) == x);

    // R(g . f) = R(g) . R(f) on a three-morphism sample
    Morphism f1{X, mk::sum(X, X), "x", mk::inl(mk::var("x"))};
    Morphism f2{mk::sum(X, X), Y, "s", mk::caseOf(mk::var("s"), "a", mk::app("f", {mk::var("a")}), "b",
                                                    mk::app("f", {mk::var("b")}))};
    Morphism f3{Y, mk::list(Y), "y", mk::cons(mk::nil(), mk::var("y"))};
    CompMap r1 = reflectMorphism(m, f1, 3), r2 = reflectMorphism(m, f2, 3), r3 = reflectMorphism(m, f3, 3);
    CompMap r321 = reflectMorphism(m, composeMorphisms(f3, composeMorphisms(f2, f1)), 3);
    for (const auto& x : r1.domain.elems) CHECK(r321.fn(x) == r3.fn(r2.fn(r1.fn(x))));
}

TEST_CASE("lifting to an open subspace") {
    ModelPresentation m = fixtures::mfin();
    TheoryPresentation tcat = internalTheoryOfModel(m);
    auto corpus = typeCorpus(tcat);
    auto lf = liftFunctorToTheory(identityFunctor(m), tcat, m, m, 3, corpus);
    SubspaceAxioms s{"open", {}};
    SubspaceAxiom n;
    n.name = "n";
    n.type = Y;
    s.axioms.push_back(n);

    SubspaceAlpha alpha;
    alpha.constants["n"] = Value::atom("b");
    SubspaceLift lift = liftToSubspaceFunctor(*lf, s, alpha);
    CHECK(lift.realization->evalTerm(lift.translation.apply(mk::app("n", {}))) == Value::atom("b"));
    CHECK(lift.realization->evalTerm(lift.translation.apply(mk::app("f", {mk::var("x")})), {{"x", Value::atom("0")}}) ==
          Value::atom("a"));

    // an equation alpha does not satisfy
    SubspaceAxioms s2 = s;
    SubspaceAxiom eq;
    eq.form = SubspaceAxiom::Form::NewEquality;
    eq.name = "n.is.c";
    eq.type = Y;
    eq.lhs = mk::app("n", {});
    eq.rhs = mk::app("f", {mk::app("f", {})});
    s2.axioms.push_back(eq);
    CHECK_THROWS(liftToSubspaceFunctor(*lf, s2, alpha));

    // the empty subspace gives back T(F)
    SubspaceLift plain = liftToSubspaceFunctor(*lf, SubspaceAxioms{"none", {}}, {});
    CHECK(plain.target.properTerms.size() == lf->target.properTerms.size());
    for (const auto& c : objectCorpus(tcat))
        CHECK(plain.realization->evalType(plain.translation.apply(c)).elems ==
              lf->realization->evalType(lf->translation.apply(c)).elems);

    alpha.constants["n"] = Value::atom("z");
    CHECK_THROWS_AS(liftToSubspaceFunctor(*lf, s, alpha), ModelError);
}

TEST_CASE("classifying round trip") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation m = fixtures::mfin();
    ClassifyingReport rep = classifyingCheck(walk, m, 3, typeCorpus(walk));
    std::size_t pullbacks = 0;
    for (const auto& it : rep.items) {
        INFO(it.entry << " " << it.what << ": " << it.detail);
        CHECK(it.ok);
        pullbacks += it.what.starts_with("pullback");
    }
    CHECK(pullbacks >= 5);

    // reindexing along a translation maps each arrow
    HInterpretation h(walk);
    Translation tr = translateAlongFunctor(fixtures::walkToFin(), walk, m);
    Judgement j = Judgement::typeJ({{"x", X}}, mk::eq(Y, mk::app("f", {mk::var("x")}), mk::app("f", {mk::var("x")})));
    PgrObject p = h.object(j), q = reindex(p, tr);
    REQUIRE(q.arrows.size() == p.arrows.size());
    for (std::size_t i = 0; i < p.arrows.size(); ++i) CHECK(alphaEqual(q.arrows[i].term, tr.apply(p.arrows[i].term)));
    Translation id = translateAlongFunctor(identityFunctor(fixtures::walkReal()), walk, fixtures::walkReal());
    PgrObject r = reindex(p, id);
    for (std::size_t i = 0; i < p.arrows.size(); ++i) CHECK(alphaEqual(r.arrows[i].dom, p.arrows[i].dom));
}
