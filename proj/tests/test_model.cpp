#include "doctest.h"

#include "au/error.hpp"
#include "au/model.hpp"
#include "fixtures.hpp"

using namespace au;

namespace {
const Expr Nat = mk::list(mk::top());
// plus(m, n) appends the units of n to m
Expr plus(Expr a, Expr b) {
    return mk::rec(std::move(b), std::move(a), "acc", "e", mk::cons(mk::var("acc"), mk::var("e")));
}
}  // namespace

TEST_CASE("evalType") {
    ModelPresentation m = fixtures::mfin();
    Evaluator ev = modelEvaluator(m, 5);
    CHECK(ev.evalType(mk::sum(mk::top(), mk::top())).size() == 2);
    CHECK(ev.evalType(Nat).size() == 6);
    CHECK(ev.evalType(mk::eq(mk::top(), mk::star(), mk::star())).size() == 1);
    CHECK(ev.evalType(mk::bot()).size() == 0);
    CHECK(ev.evalType(mk::proper("Y")).size() == 3);
    CHECK(ev.evalType(mk::list(mk::proper("X"))).size() == 63);
    Expr fib = mk::sigma("x", mk::proper("X"), mk::eq(mk::proper("Y"), mk::app("f", {mk::var("x")}), mk::app("f", {mk::var("x")})));
    CHECK(ev.evalType(fib).size() == 2);
}

TEST_CASE("evalTerm") {
    ModelPresentation m = fixtures::mfin();
    Evaluator ev = modelEvaluator(m, 5);
    const Structure& s = ev.structure();
    CHECK(ev.evalTerm(plus(mk::var("a"), mk::var("b")), {{"a", numeral(s, 2)}, {"b", numeral(s, 3)}}) == numeral(s, 5));
    Expr c = mk::caseOf(mk::inl(mk::star()), "u", mk::inr(mk::var("u")), "v", mk::inl(mk::var("v")));
    CHECK(ev.evalTerm(c) == s.inr(s.unit()));
    CompMap f = ev.termMap({"x", mk::proper("X")}, mk::app("f", {mk::var("x")}));
    CHECK(f.fn(Value::atom("0")) == Value::atom("a"));
    CHECK(f.fn(Value::atom("1")) == Value::atom("b"));
}

TEST_CASE("morphismsEqualOnSamples") {
    Evaluator ev(nullptr, Structure{}, 5);
    Binding u{"u", mk::top()};
    CompMap l = ev.termMap(u, mk::inl(mk::star()));
    CompMap r = ev.termMap(u, mk::inr(mk::star()));
    CHECK(morphismsEqualOnSamples(l, l, 5).agree());
    SampleVerdict v = morphismsEqualOnSamples(l, r, 5);
    CHECK_FALSE(v.agree());
    CHECK(*v.witness == Value::unit());

    Binding p{"p", mk::sigma("a", Nat, Nat)};
    Expr a = mk::proj1(mk::var("p")), b = mk::proj2(mk::var("p"));
    SampleVerdict w = morphismsEqualOnSamples(ev.termMap(p, plus(a, b)), ev.termMap(p, plus(b, a)), 5);
    CHECK(w.agree());
    CHECK(w.samples == 36);
}

TEST_CASE("recursor squares hold exhaustively") {
    Evaluator ev(nullptr, Structure{}, 5);
    Context ctx{{"m", Nat}, {"l", Nat}};
    Expr mv = mk::var("m"), lv = mk::var("l");
    CHECK(ev.agreeOn({{"m", Nat}}, plus(mv, mk::nil()), mv).agree());
    CHECK(ev.agreeOn(ctx, plus(mv, mk::cons(lv, mk::star())), mk::cons(plus(mv, lv), mk::star())).agree());
}

TEST_CASE("quotients by an equivalence") {
    Evaluator ev(nullptr, Structure{}, 3);
    // lists of units modulo parity of length
    Expr parity = mk::rec(mk::var("l"), mk::inl(mk::star()), "acc", "e",
                          mk::caseOf(mk::var("acc"), "u", mk::inr(mk::star()), "v", mk::inl(mk::star())));
    auto par = [&](Expr t) { return substitute(parity, "l", t); };
    Expr q = mk::quot(Nat, "x", "y", mk::eq(mk::sum(mk::top(), mk::top()), par(mk::var("x")), par(mk::var("y"))));
    CHECK(ev.evalType(q).size() == 2);
    Expr c3 = mk::classOf(q, mk::cons(mk::cons(mk::cons(mk::nil(), mk::star()), mk::star()), mk::star()));
    Expr c1 = mk::classOf(q, mk::cons(mk::nil(), mk::star()));
    CHECK(ev.evalTerm(c3) == ev.evalTerm(c1));
    // a relation that is not an equivalence is reported
    Expr bad = mk::quot(mk::sum(mk::top(), mk::top()), "x", "y",
                        mk::eq(mk::sum(mk::top(), mk::top()), mk::var("x"), mk::inl(mk::star())));
    CHECK_THROWS_AS(ev.evalType(bad), ModelError);
}

TEST_CASE("depth monotonicity") {
    for (std::size_t d = 0; d < 5; ++d) {
        Evaluator a(nullptr, Structure{}, d), b(nullptr, Structure{}, d + 1);
        EnumSet sa = a.evalType(mk::list(mk::sum(mk::top(), mk::top())));
        EnumSet sb = b.evalType(mk::list(mk::sum(mk::top(), mk::top())));
        for (const auto& v : sa.elems) CHECK(sb.contains(v));
        CHECK(sa.size() < sb.size());
    }
}

TEST_CASE("chosen structures encode differently") {
    Structure s;
    s.swapPairs = true;
    s.reverseLists = true;
    s.properTag = "V";
    ModelPresentation m = fixtures::mfin();
    Evaluator ev(&m, s, 3);
    Value p = ev.evalTerm(mk::pair(mk::star(), mk::inl(mk::star())));
    CHECK(p.at(0).tag() == Value::Tag::Inl);
    CHECK(ev.evalTerm(mk::app("f", {mk::var("x")}), {{"x", s.proper(Value::atom("1"))}}) == s.proper(Value::atom("b")));
}
