// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   ./acceptance            all criteria
//   ./acceptance 4 7        only the listed ones

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "au/checker.hpp"
#include "au/cli.hpp"
#include "au/error.hpp"
#include "au/format.hpp"
#include "au/functor.hpp"
#include "au/subspace.hpp"
#include "fixtures.hpp"

using namespace au;

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kDepth = 5;

const Expr One = mk::top();
const Expr Two = mk::sum(mk::top(), mk::top());
const Expr Nat = mk::list(mk::top());

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Accumulates a criterion's findings; the first few failures are kept verbatim.
class Tally {
public:
    void check(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    void note(const std::string& s) { facts_ += (facts_.empty() ? "" : ", ") + s; }
    std::size_t checks() const { return checks_; }
    Outcome done() const {
        Outcome o;
        o.pass = failures_ == 0 && checks_ > 0;
        o.detail = facts_;
        if (failures_) o.detail += (o.detail.empty() ? "" : ", ") + std::to_string(failures_) + " failed: " + notes_;
        return o;
    }

private:
    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
    std::string notes_;
    std::string facts_;
};

struct Fixture {
    std::string name;
    TheoryPresentation theory;
    ModelPresentation realization;
    std::vector<Expr> objects;  // a small object sample for hom enumeration
};

std::vector<Fixture> fixtureTheories() {
    Expr X = mk::proper("X"), Y = mk::proper("Y"), M = mk::proper("M");
    return {
        {"empty", theoryFromCategory(fixtures::empty()), fixtures::emptyReal(), {One, Two}},
        {"walk", theoryFromCategory(fixtures::walk()), fixtures::walkReal(), {One, Two, X, Y}},
        {"z2", theoryFromCategory(fixtures::z2()), fixtures::z2Real(), {One, Two, M}},
    };
}

std::string show(const Morphism& m) { return m.str(); }

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fs", s);
    return buf;
}

// ---------------------------------------------------------------- 1

// Equal-by-construction variants of t: beta redexes around its variables,
// eta expansions, case splits with equal branches and the z2 relation.
std::vector<Expr> variants(const Context& ctx, const Expr& t, const Expr& type, bool involution) {
    std::vector<Expr> out;
    std::set<std::string> free = freeVars(t);
    for (const auto& b : ctx) {
        Expr v = mk::var(b.name);
        if (free.count(b.name)) {
            out.push_back(substitute(t, b.name, mk::proj1(mk::pair(v, mk::star()))));
            out.push_back(substitute(t, b.name, mk::proj2(mk::pair(mk::star(), v))));
            if (b.type->kind == Kind::Sigma) out.push_back(substitute(t, b.name, mk::pair(mk::proj1(v), mk::proj2(v))));
        }
        if (b.type->kind == Kind::Sum) out.push_back(mk::caseOf(v, "a", t, "b", t));
    }
    if (involution && type->kind == Kind::Proper) out.push_back(mk::app("m", {mk::app("m", {t})}));
    return out;
}

Outcome checkerSoundness() {
    auto t0 = Clock::now();
    Tally t;
    std::size_t proved = 0, goals = 0;
    for (const auto& fx : fixtureTheories()) {
        Evaluator ev = modelEvaluator(fx.realization, kDepth);
        SynCat syn(fx.theory);
        const Checker& ck = syn.checker();
        bool involution = fx.theory.term("m") != nullptr;
        for (const auto& j : typeCorpus(fx.theory)) {
            std::vector<Expr> terms = syn.candidates(j.ctx, j.type, 5);
            if (terms.size() > 12) terms.resize(12);
            std::vector<std::pair<Expr, Expr>> pending;
            for (std::size_t a = 0; a < terms.size(); ++a) {
                NormalizeResult n = ck.normalize(j.ctx, terms[a]);
                if (n.normal) pending.emplace_back(terms[a], n.term);
                for (const auto& v : variants(j.ctx, terms[a], j.type, involution)) pending.emplace_back(v, terms[a]);
                for (std::size_t b = a + 1; b < terms.size(); ++b) pending.emplace_back(terms[a], terms[b]);
            }
            for (const auto& [u, v] : pending) {
                try {
                    ck.checkTerm(j.ctx, u, j.type);
                    ck.checkTerm(j.ctx, v, j.type);
                } catch (const TypeError&) {
                    continue;
                }
                ++goals;
                if (!ck.checkEqual(j.ctx, u, v, j.type).proved()) continue;
                ++proved;
                t.check(ev.agreeOn(j.ctx, u, v).agree(),
                        fx.name + " " + show(j) + ": " + au::show(u) + " = " + au::show(v));
            }
        }
    }
    // the z2 relation itself and a consequence of it
    {
        TheoryPresentation z2 = theoryFromCategory(fixtures::z2());
        ModelPresentation real = fixtures::z2Real();
        Evaluator ev = modelEvaluator(real, kDepth);
        Checker ck(z2);
        Context ctx{{"x", mk::proper("M")}};
        Expr x = mk::var("x");
        auto m = [](Expr e) { return mk::app("m", {std::move(e)}); };
        for (auto [u, v] : {std::pair{m(m(x)), x}, std::pair{m(m(m(x))), m(x)}}) {
            bool p = ck.checkEqual(ctx, u, v, mk::proper("M")).proved();
            t.check(p, "z2 relation not proved");
            if (p) ++proved, t.check(ev.agreeOn(ctx, u, v).agree(), "z2 relation refuted");
        }
    }
    double s = seconds(t0);
    t.check(s < 60.0, "took " + fmt(s));
    t.check(proved >= 250, "only " + std::to_string(proved) + " proved equalities");
    t.note(std::to_string(proved) + " of " + std::to_string(goals) + " equalities proved, all confirmed at depth " +
           std::to_string(kDepth) + ", " + fmt(s));
    return t.done();
}

// ---------------------------------------------------------------- 2

Expr plus(Expr m, Expr l) {
    return mk::rec(std::move(l), std::move(m), "acc", "e", mk::cons(mk::var("acc"), mk::var("e")));
}

Outcome recursorLaws() {
    Tally t;
    Evaluator ev(nullptr, Structure{}, kDepth);
    Expr mv = mk::var("m"), lv = mk::var("l");
    Context one{{"m", Nat}};
    Context two{{"m", Nat}, {"l", Nat}};

    std::size_t longest = 0;
    for (const auto& v : ev.evalType(Nat).elems) longest = std::max(longest, ev.structure().elems(v).size());
    t.check(longest >= 5, "lists only up to length " + std::to_string(longest));

    SampleVerdict base = ev.agreeOn(one, plus(mv, mk::nil()), mv);
    SampleVerdict step = ev.agreeOn(two, plus(mv, mk::cons(lv, mk::star())), mk::cons(plus(mv, lv), mk::star()));
    t.check(base.agree(), "nil square: " + base.detail);
    t.check(step.agree(), "cons square: " + step.detail);
    Value five = ev.evalTerm(plus(mv, lv), {{"m", numeral(ev.structure(), 2)}, {"l", numeral(ev.structure(), 3)}});
    t.check(five == numeral(ev.structure(), 5), "plus(2,3) = " + five.str());

    // both squares also hold syntactically
    TheoryPresentation empty = theoryFromCategory(fixtures::empty());
    SynCat syn(empty);
    t.check(syn.checker().checkEqual(one, plus(mv, mk::nil()), mv, Nat).proved(), "nil square not proved");
    t.check(syn.checker()
                .checkEqual(two, plus(mv, mk::cons(lv, mk::star())), mk::cons(plus(mv, lv), mk::star()), Nat)
                .proved(),
            "cons square not proved");

    // every candidate of size <= 7 satisfying both squares is plus
    bool truncated = false;
    std::vector<Expr> cands = syn.candidates(two, Nat, 7, &truncated);
    std::size_t mediators = 0;
    for (const auto& h : cands) {
        if (!ev.agreeOn(one, substitute(h, "l", mk::nil()), mv).agree()) continue;
        if (!ev.agreeOn(two, substitute(h, "l", mk::cons(lv, mk::star())), mk::cons(h, mk::star())).agree()) continue;
        ++mediators;
        t.check(ev.agreeOn(two, h, plus(mv, lv)).agree(), "second mediator " + au::show(h));
    }
    t.check(mediators >= 1, "plus itself not among the candidates");
    t.note("lists to length " + std::to_string(longest) + ", " + std::to_string(cands.size()) + " candidates" +
           (truncated ? " (capped)" : "") + ", " + std::to_string(mediators) + " mediator(s), all equal to plus");
    return t.done();
}

// ---------------------------------------------------------------- 3

std::vector<Morphism> homs(const SynCat& c, const Expr& a, const Expr& b, std::size_t cap = 4) {
    std::vector<Morphism> out;
    for (const auto& k : c.enumerateHom(a, b, 5).classes) {
        if (out.size() == cap) break;
        out.push_back({a, b, "x", k.rep});
    }
    return out;
}

Outcome categoryLaws() {
    Tally t;
    std::size_t triples = 0, mediators = 0, unique = 0;
    for (const auto& fx : fixtureTheories()) {
        Evaluator ev = modelEvaluator(fx.realization, kDepth);
        SynCat c(fx.theory, {}, Oracle{{&ev}, false});
        ChosenStructure s = auStructure(c);
        const auto& obs = fx.objects;
        std::map<std::pair<std::size_t, std::size_t>, std::vector<Morphism>> hom;
        for (std::size_t i = 0; i < obs.size(); ++i)
            for (std::size_t j = 0; j < obs.size(); ++j) hom[{i, j}] = homs(c, obs[i], obs[j], 3);

        for (const auto& [ij, fs] : hom)
            for (const auto& f : fs) {
                t.check(c.equal(c.compose(c.identity(f.cod), f), f).proved(), fx.name + " left unit " + show(f));
                t.check(c.equal(c.compose(f, c.identity(f.dom)), f).proved(), fx.name + " right unit " + show(f));
            }
        for (std::size_t a = 0; a < obs.size(); ++a)
            for (std::size_t b = 0; b < obs.size(); ++b)
                for (std::size_t cc = 0; cc < obs.size(); ++cc)
                    for (std::size_t d = 0; d < obs.size(); ++d)
                        for (const auto& f : hom[{a, b}])
                            for (const auto& g : hom[{b, cc}])
                                for (const auto& h : hom[{cc, d}]) {
                                    ++triples;
                                    t.check(c.equal(c.compose(h, c.compose(g, f)), c.compose(c.compose(h, g), f)).proved(),
                                            fx.name + " assoc " + show(f) + " " + show(g) + " " + show(h));
                                }

        // products, coproducts and equalizers: the chosen mediator exists and
        // is the only enumerated arrow with its defining property
        for (std::size_t z = 0; z < obs.size(); ++z)
            for (std::size_t a = 0; a < obs.size(); ++a)
                for (std::size_t b = a; b < obs.size(); ++b) {
                    auto fs = homs(c, obs[z], obs[a], 2), gs = homs(c, obs[z], obs[b], 2);
                    Expr prod = s.product(obs[a], obs[b]);
                    auto hs = homs(c, obs[z], prod, 12);
                    for (const auto& f : fs)
                        for (const auto& g : gs) {
                            Morphism p = s.pairing(f, g);
                            ++mediators;
                            t.check(c.equal(c.compose(s.fst(obs[a], obs[b]), p), f).proved() &&
                                        c.equal(c.compose(s.snd(obs[a], obs[b]), p), g).proved(),
                                    fx.name + " pairing");
                            for (const auto& h : hs)
                                if (c.equal(c.compose(s.fst(obs[a], obs[b]), h), f).holds() &&
                                    c.equal(c.compose(s.snd(obs[a], obs[b]), h), g).holds()) {
                                    ++unique;
                                    t.check(c.equal(h, p).holds(), fx.name + " second pairing " + show(h));
                                }
                        }

                    auto us = homs(c, obs[a], obs[z], 2), vs = homs(c, obs[b], obs[z], 2);
                    Expr sum = s.coproduct(obs[a], obs[b]);
                    auto ks = homs(c, sum, obs[z], 12);
                    for (const auto& u : us)
                        for (const auto& v : vs) {
                            Morphism k = s.copair(u, v);
                            ++mediators;
                            t.check(c.equal(c.compose(k, s.inl(obs[a], obs[b])), u).proved() &&
                                        c.equal(c.compose(k, s.inr(obs[a], obs[b])), v).proved(),
                                    fx.name + " copairing");
                            for (const auto& h : ks)
                                if (c.equal(c.compose(h, s.inl(obs[a], obs[b])), u).holds() &&
                                    c.equal(c.compose(h, s.inr(obs[a], obs[b])), v).holds()) {
                                    ++unique;
                                    t.check(c.equal(h, k).holds(), fx.name + " second copairing " + show(h));
                                }
                        }
                }
        for (const auto& [ab, ps] : hom)
            for (std::size_t i = 0; i < ps.size(); ++i)
                for (std::size_t j = i; j < ps.size(); ++j) {
                    const Morphism &p = ps[i], &q = ps[j];
                    Expr e = s.equalizer(p, q);
                    Morphism incl = s.equalizerIncl(p, q);
                    for (std::size_t z = 0; z < obs.size(); ++z)
                        for (const auto& h : homs(c, obs[z], p.dom, 2)) {
                            if (!c.equal(c.compose(p, h), c.compose(q, h)).holds()) continue;
                            Morphism lift = s.equalizerLift(p, q, h);
                            ++mediators;
                            t.check(c.equal(c.compose(incl, lift), h).proved(), fx.name + " equalizer lift");
                            for (const auto& k : homs(c, obs[z], e, 12))
                                if (c.equal(c.compose(incl, k), h).holds()) {
                                    ++unique;
                                    t.check(c.equal(k, lift).holds(), fx.name + " second lift " + show(k));
                                }
                        }
                }
    }
    t.note(std::to_string(triples) + " triples, " + std::to_string(mediators) + " mediators, " +
           std::to_string(unique) + " uniqueness comparisons");
    return t.done();
}

// ---------------------------------------------------------------- 4

Outcome coherence() {
    Tally t;
    std::size_t entries = 0, mutants = 0;
    for (const auto& fx : fixtureTheories()) {
        auto corpus = typeCorpus(fx.theory);
        CoherenceGenerator gen(fx.theory, fx.realization, kDepth);
        IsoFamily fam = gen.family(corpus);
        ComponentSource extra = [&gen](const Judgement& j) -> const IsoComponent& { return gen.component(j); };
        MorphismReport rep = checkInterpMorphism(fam, gen.hSide(), gen.aSide(), corpus, fx.theory, extra);
        std::set<std::string> conditions;
        for (const auto& r : rep.results) {
            conditions.insert(r.condition);
            t.check(r.ok, fx.name + " " + r.entry + " " + r.condition + ": " + r.detail);
        }
        for (const char* c : {"inverse", "naturality", "weakening", "substitution"})
            t.check(conditions.count(c) == 1, fx.name + " never checked " + c);
        entries += corpus.size();
        for (const auto& c : fam.components()) {
            auto bad = corruptComponent(fam, c.key, gen.hSide(), gen.aSide());
            if (!bad) continue;
            ++mutants;
            std::vector<Judgement> where{c.index};
            t.check(!checkInterpMorphism(*bad, gen.hSide(), gen.aSide(), where, fx.theory, extra).ok(),
                    fx.name + " corrupted " + c.key + " undetected");
        }
    }
    t.note(std::to_string(entries) + " corpus entries, " + std::to_string(mutants) + " mutants detected");
    return t.done();
}

// ---------------------------------------------------------------- 5

Outcome determination() {
    Tally t;
    std::size_t n = 0;
    for (const auto& fx : fixtureTheories()) {
        CoherenceGenerator gen(fx.theory, fx.realization, kDepth);
        for (const auto& r : checkDetermination(gen, typeCorpus(fx.theory))) {
            ++n;
            t.check(r.ok(), fx.name + " " + r.entry + ": " + r.detail);
        }
    }
    t.note(std::to_string(n) + " components regenerated from proper components");
    return t.done();
}

// ---------------------------------------------------------------- 6

Outcome mainTheorem() {
    Tally t;
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    ModelPresentation a = fixtures::walkReal(), b = fixtures::mfin();
    auto corpus = typeCorpus(walk);
    std::size_t items = 0;
    for (const auto& f : {identityFunctor(a), fixtures::walkToFin()}) {
        const ModelPresentation& target = f.target == a.name ? a : b;
        auto lf = liftFunctorToTheory(f, walk, a, target, kDepth, corpus);
        t.check(lf->ok(), f.name + ": a translated axiom does not hold");
        MainTheoremReport rep = checkMainTheorem(*lf, objectCorpus(walk));
        std::set<std::string> kinds;
        for (const auto& it : rep.items) {
            ++items;
            kinds.insert(it.kind);
            t.check(it.ok, f.name + " " + it.kind + " " + it.what + ": " + it.detail);
        }
        for (const char* k : {"object", "arrow", "component", "naturality"})
            t.check(kinds.count(k) == 1, f.name + " has no " + k + " items");
    }
    t.note(std::to_string(items) + " generator, component and naturality items over 2 functors");
    return t.done();
}

// ---------------------------------------------------------------- 7

Outcome openSubspaceShadow() {
    Tally t;
    ModelPresentation m = fixtures::mfin();
    Expr X = mk::proper("X"), Y = mk::proper("Y");
    auto s = openSubspace(m, "Y", "n", kDepth);
    std::vector<std::pair<Expr, Expr>> pairs{{One, One}, {One, Two}, {One, Y}, {X, Y},
                                             {Y, Y},     {X, mk::sum(Y, Y)}, {Y, X}, {X, X}};
    SliceComparison cmp = sliceCompare(*s, m, pairs, 5, 9);
    std::string counts;
    for (const auto& p : cmp.pairs) {
        t.check(p.ok(), au::show(p.dom) + " -> " + au::show(p.cod) + ": " + std::to_string(p.subspaceClasses) +
                            " vs " + std::to_string(p.sliceHoms) + " " + p.detail);
        counts += (counts.empty() ? "" : " ") + std::to_string(p.subspaceClasses) + "/" + std::to_string(p.sliceHoms);
    }
    t.check(cmp.pairs.size() >= 5, "fewer than 5 pairs");

    TheoryPresentation tcat = internalTheoryOfModel(m);
    auto lf = liftFunctorToTheory(identityFunctor(m), tcat, m, m, kDepth, typeCorpus(tcat));
    SubspaceAxioms sa{"open", {}};
    SubspaceAxiom n;
    n.name = "n";
    n.type = Y;
    sa.axioms.push_back(n);
    for (const char* alpha : {"a", "b", "c"}) {
        SubspaceAlpha al;
        al.constants["n"] = m.structure.proper(Value::atom(alpha));
        SubspaceLift lift = liftToSubspaceFunctor(*lf, sa, al);
        Value got = lift.realization->evalTerm(lift.translation.apply(mk::app("n", {})));
        t.check(got == al.constants["n"], std::string("n went to ") + got.str() + " for alpha " + alpha);
    }
    t.note(std::to_string(cmp.pairs.size()) + " pairs (classes/slice homs: " + counts + "), n goes to each alpha");
    return t.done();
}

// ---------------------------------------------------------------- 8

Outcome classifying() {
    Tally t;
    std::size_t items = 0;
    struct Case {
        TheoryPresentation theory;
        ModelPresentation model;
    };
    for (const auto& [theory, model] : {Case{theoryFromCategory(fixtures::walk()), fixtures::mfin()},
                                        Case{theoryFromCategory(fixtures::z2()), fixtures::z2Real()}}) {
        ClassifyingReport rep = classifyingCheck(theory, model, kDepth, typeCorpus(theory));
        for (const auto& it : rep.items) {
            ++items;
            t.check(it.ok, theory.name + " " + it.entry + " " + it.what + ": " + it.detail);
        }
    }
    t.note(std::to_string(items) + " items over walk/mfin and z2/z2real");
    return t.done();
}

// ---------------------------------------------------------------- 9

Outcome fsum() {
    Tally t;
    TheoryPresentation walk = theoryFromCategory(fixtures::walk());
    auto corpus = typeCorpus(walk);
    std::size_t n = 0;
    for (const auto& [f, target] : {std::pair{identityFunctor(fixtures::walkReal()), fixtures::walkReal()},
                                    std::pair{fixtures::walkToFin(), fixtures::mfin()}}) {
        Translation tr = translateAlongFunctor(f, walk, target);
        for (const auto& r : checkFsum(tr, corpus)) {
            ++n;
            t.check(r.ok, f.name + " " + r.entry + ": " + r.detail);
        }
    }
    t.note(std::to_string(n) + " judgements under 2 translations");
    return t.done();
}

// ---------------------------------------------------------------- 10

Outcome cliRoundTrip() {
    Tally t;
    std::vector<std::string> files;
    for (const auto& e : std::filesystem::directory_iterator(AU_FIXTURES))
        if (e.path().extension() == ".au") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        t.check(format::print(format::parse(text)) == text, f + " does not print back to itself");
    }
    std::string first = cli::render(cli::withoutTiming(cli::cmdCheck(files, cli::Flags{}).report));
    for (int i = 0; i < 2; ++i) {
        cli::Flags flags;
        flags.jobs = i == 0 ? 1 : 4;
        t.check(cli::render(cli::withoutTiming(cli::cmdCheck(files, flags).report)) == first,
                "check report differs on run " + std::to_string(i + 2));
    }
    t.note(std::to_string(files.size()) + " fixture files, 3 identical check reports");
    return t.done();
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all{
        {1, "checker soundness against the model oracle", checkerSoundness},
        {2, "recursor laws and mediator uniqueness", recursorLaws},
        {3, "syntactic category laws and chosen mediators", categoryLaws},
        {4, "coherent isomorphisms and mutation detection", coherence},
        {5, "determination by proper components", determination},
        {6, "lifted functors agree with their inputs", mainTheorem},
        {7, "open subspace against the slice", openSubspaceShadow},
        {8, "classifying round trip", classifying},
        {9, "translation commutes with the syntactic interpretation", fsum},
        {10, "file round trip and deterministic reports", cliRoundTrip},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << o.detail << ")"
                  << std::endl;
    }
    return failed ? 1 : 0;
}
