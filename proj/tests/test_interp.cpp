#include "doctest.h"

#include <deque>

#include "au/checker.hpp"
#include "au/error.hpp"
#include "au/interp.hpp"
#include "fixtures.hpp"

using namespace au;

namespace {

const Expr X = mk::proper("X");
const Expr Y = mk::proper("Y");
const Expr One = mk::top();

// Runs the whole morphism check for a generator's family over the corpus.
MorphismReport checkFamily(CoherenceGenerator& gen, const std::vector<Judgement>& corpus) {
    IsoFamily fam = gen.family(corpus);
    ComponentSource extra = [&gen](const Judgement& j) -> const IsoComponent& { return gen.component(j); };
    return checkInterpMorphism(fam, gen.hSide(), gen.aSide(), corpus, gen.theory(), extra);
}

}  // namespace

TEST_CASE("type corpus") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    auto c1 = typeCorpus(walk);
    auto c2 = typeCorpus(walk);
    REQUIRE(c1.size() == c2.size());
    CHECK(c1.size() <= 40);
    CHECK(c1.size() >= 30);
    bool open = false, quot = false;
    Checker ck(walk);
    for (std::size_t i = 0; i < c1.size(); ++i) {
        CHECK(judgementKey(c1[i]) == judgementKey(c2[i]));
        CHECK(c1[i].ctx.size() <= 2);
        ck.checkType(c1[i].ctx, c1[i].type);
        open = open || !c1[i].ctx.empty();
        quot = quot || c1[i].type->kind == Kind::Quot;
    }
    CHECK(open);
    CHECK(quot);
    CHECK(!typeCorpus(theoryFromCategory(fixtures::empty())).empty());
}

TEST_CASE("judgement keys ignore context names") {
    Judgement a = Judgement::typeJ({{"a", X}}, mk::eq(X, mk::var("a"), mk::var("a")));
    Judgement b = Judgement::typeJ({{"b", X}}, mk::eq(X, mk::var("b"), mk::var("b")));
    CHECK(judgementKey(a) == judgementKey(b));
    CHECK(judgementKey(a) != judgementKey(Judgement::typeJ({{"a", Y}}, mk::eq(Y, mk::var("a"), mk::var("a")))));
}

TEST_CASE("syntactic interpretation") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    SynCat syn(walk);
    HInterpretation h = hInterpretation(walk);
    Context ctx{{"x", X}, {"y", Y}};
    Judgement bj = Judgement::typeJ(ctx, mk::eq(Y, mk::app("f", {mk::var("x")}), mk::var("y")));

    PgrObject p = h.object(bj);
    p.validate();
    CHECK(p.arrows.size() == 3);
    CHECK(alphaEqual(p.arrows.front().cod, One));

    Judgement tj = Judgement::termJ({{"x", X}}, mk::app("f", {mk::var("x")}), Y);
    CHECK(h.checkSection(syn, tj).proved());
    CHECK(h.checkSection(syn, Judgement::termJ({}, mk::inl(mk::star()), mk::sum(One, One))).proved());

    CHECK(h.checkWeakeningSquare(syn, bj, X, 0).proved());
    CHECK(h.checkWeakeningSquare(syn, bj, One, 2).proved());
    Judgement lj = Judgement::typeJ(ctx, mk::list(Y));
    CHECK(h.checkSubstitutionSquare(syn, lj, 1, mk::app("f", {mk::var("x")})).proved());
    CHECK(h.checkSubstitutionSquare(syn, bj, 1, mk::app("f", {mk::var("x")})).proved());
}

TEST_CASE("semantic interpretations") {
    ModelPresentation real = fixtures::walkReal();
    Evaluator v(&real, Structure{}, 4);
    Evaluator a(&real, real.structure, 4);
    SemInterp pairs(v, SemInterp::Mode::Pairs);
    SemInterp slice(a, SemInterp::Mode::Slice);

    Judgement graph = Judgement::typeJ({{"x", X}, {"y", Y}}, mk::eq(Y, mk::app("f", {mk::var("x")}), mk::var("y")));
    CHECK(pairs.total(graph).size() == 2);
    CHECK(slice.total(graph).size() == 2);
    CHECK(pairs.total(graph).elems == v.evalType(hTotal(graph)).elems);

    // the slice interpretation of Top over a context is the context itself
    Judgement topOver = Judgement::typeJ({{"x", X}}, One);
    CHECK(slice.total(topOver).elems == slice.context(topOver.ctx).elems);
    // and a Sigma over an equality is a subset of its domain
    Judgement diag = Judgement::typeJ({}, mk::sigma("x", X, mk::eq(X, mk::var("x"), mk::var("x"))));
    CHECK(slice.total(diag).elems == a.evalType(X).elems);

    Judgement lj = Judgement::typeJ({{"x", X}}, mk::list(One));
    for (const auto& e : slice.total(lj).elems) {
        Value g = slice.base(lj, e);
        CHECK(slice.element(lj, g, slice.fibre(lj, e)) == e);
    }
    for (const auto& g : slice.context(graph.ctx).elems) CHECK(slice.encodeContext(graph.ctx, slice.env(graph.ctx, g)) == g);
    CHECK(slice.substitutionIsPullback(graph, 1, mk::app("f", {mk::var("x")})));
    CHECK(pairs.substitutionIsPullback(graph, 1, mk::app("f", {mk::var("x")})));
    CHECK_THROWS_AS(slice.substitutionIsPullback(lj, 0, mk::var("x")), ScopeError);
}

TEST_CASE("standard interpretation") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation m = fixtures::mfin();
    auto corpus = typeCorpus(walk);
    StandardInterpretation si = standardInterpretation(walk, m, 4, corpus);
    CHECK(si.ok());
    CHECK(si.onObject(X).size() == 2);
    CompMap f = si.onMorphism({X, Y, "x", mk::app("f", {mk::var("x")})});
    CHECK(f.fn(Value::atom("0")) == Value::atom("a"));

    TheoryPresentation z2 = theoryFromCategory(fixtures::z2());
    ModelPresentation bad = fixtures::z2Real();
    bad.arrows[0].graph = {{"0", "0"}, {"1", "0"}};
    bad.equations.clear();
    CHECK_THROWS_AS(standardInterpretation(z2, bad, 4), ModelError);
    try {
        standardInterpretation(z2, bad, 4);
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("z2.eq1") != std::string::npos);
    }
}

TEST_CASE("coherent isomorphisms for walk") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation real = fixtures::walkReal();
    auto corpus = typeCorpus(walk);
    CoherenceGenerator gen(walk, real, 4);
    MorphismReport rep = checkFamily(gen, corpus);
    if (const ConditionResult* f = rep.firstFailure()) FAIL(f->entry << " " << f->condition << ": " << f->detail);
    CHECK(rep.results.size() == corpus.size() * 5);
    std::size_t samples = 0;
    for (const auto& r : rep.results) samples += r.samples;
    CHECK(samples > 1000);

    // the extended theory is well formed and its axioms hold in the realization
    TheoryPresentation tiso = withCoherentIsos(walk, gen.extension());
    Checker ck(tiso);
    auto st = gen.stEvaluator();
    for (const auto& ax : tiso.termAxioms) {
        INFO(ax.name);
        ck.checkContext(ax.ctx);
        ck.checkTerm(ax.ctx, ax.lhs, ax.type);
        ck.checkTerm(ax.ctx, ax.rhs, ax.type);
        CHECK(st->agreeOn(ax.ctx, ax.lhs, ax.rhs).agree());
    }
}

TEST_CASE("proper components are identities for a canonical realization") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation m = fixtures::mfin();
    CoherenceGenerator gen(walk, m, 3);
    const IsoComponent& sx = gen.component(Judgement::typeJ({}, X));
    for (const auto& x : gen.hSide().total(Judgement::typeJ({}, X)).elems) CHECK(sx.fwd(x) == x);
    CHECK(checkFamily(gen, typeCorpus(walk)).ok());
}

TEST_CASE("corrupted components are detected") {
    TheoryPresentation z2 = theoryFromCategory(fixtures::z2());
    ModelPresentation real = fixtures::z2Real();
    auto corpus = typeCorpus(z2);
    CoherenceGenerator gen(z2, real, 3);
    IsoFamily fam = gen.family(corpus);
    ComponentSource extra = [&gen](const Judgement& j) -> const IsoComponent& { return gen.component(j); };
    REQUIRE(checkInterpMorphism(fam, gen.hSide(), gen.aSide(), corpus, z2, extra).ok());
    std::size_t tried = 0;
    for (const auto& c : fam.components()) {
        auto bad = corruptComponent(fam, c.key, gen.hSide(), gen.aSide());
        if (!bad) continue;
        ++tried;
        // the corrupted component is checked as a corpus entry of its own
        std::vector<Judgement> where{c.index};
        INFO(c.key);
        CHECK_FALSE(checkInterpMorphism(*bad, gen.hSide(), gen.aSide(), where, z2, extra).ok());
    }
    CHECK(tried >= 10);
}

TEST_CASE("identity morphism of an interpretation") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation m = fixtures::mfin();
    Evaluator a(&m, m.structure, 3);
    SemInterp in(a, SemInterp::Mode::Slice);
    auto corpus = typeCorpus(walk);
    IsoFamily id = identityFamily(corpus);
    std::deque<IsoComponent> extras;
    ComponentSource extra = [&extras](const Judgement& j) -> const IsoComponent& {
        MapFn f = [](const Value& v) { return v; };
        extras.push_back({j, judgementKey(j), "idx", "identity", "", f, f, {}, {}});
        return extras.back();
    };
    CHECK(checkInterpMorphism(id, in, in, corpus, walk, extra).ok());
}

TEST_CASE("family determined by proper components") {
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation real = fixtures::walkReal();
    auto corpus = typeCorpus(walk);
    CoherenceGenerator gen(walk, real, 3);
    for (const auto& r : checkDetermination(gen, corpus)) {
        INFO(r.entry << ": " << r.detail);
        CHECK(r.ok());
    }
}
