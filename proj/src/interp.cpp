#include "au/interp.hpp"

#include <algorithm>
#include <set>

#include "au/checker.hpp"
#include "au/error.hpp"

namespace au {

namespace {

Context prefix(const Context& ctx, std::size_t k) { return Context(ctx.begin(), ctx.begin() + static_cast<long>(k)); }

std::string nextVar(const Context& ctx) {
    std::string base = "x" + std::to_string(ctx.size() + 1);
    return freshName(base, contextNames(ctx));
}

Context extend(Context ctx, std::string x, Expr t) {
    ctx.push_back({std::move(x), std::move(t)});
    return ctx;
}

Expr subst(const Expr& e, const std::vector<std::pair<std::string, Expr>>& s) {
    return s.empty() ? e : substituteAll(e, s);
}

}  // namespace

// ------------------------------------------------------------------ keys

Judgement canonicalJudgement(const Judgement& j) {
    std::vector<std::pair<std::string, Expr>> ren;
    Context ctx;
    for (std::size_t i = 0; i < j.ctx.size(); ++i) {
        std::string n = "x" + std::to_string(i + 1);
        ctx.push_back({n, subst(j.ctx[i].type, ren)});
        ren.emplace_back(j.ctx[i].name, mk::var(n));
    }
    Judgement out = j;
    out.ctx = std::move(ctx);
    if (out.type) out.type = subst(out.type, ren);
    if (out.type2) out.type2 = subst(out.type2, ren);
    if (out.term) out.term = subst(out.term, ren);
    if (out.term2) out.term2 = subst(out.term2, ren);
    return out;
}

std::string judgementKey(const Judgement& j) {
    Judgement c = canonicalJudgement(j);
    std::string k = "[";
    for (std::size_t i = 0; i < c.ctx.size(); ++i) k += (i ? ", " : "") + exprKey(c.ctx[i].type);
    k += "] ";
    k += exprKey(c.type);
    return k;
}

// ------------------------------------------------------------------ corpus

std::vector<Judgement> typeCorpus(const TheoryPresentation& t, CorpusOptions opts) {
    using namespace mk;
    const Expr T = top(), B = bot();
    std::vector<Expr> props;
    for (const auto& p : t.properTypes)
        if (props.size() < 2) props.push_back(proper(p));
    Expr two = sum(T, T);
    Expr p0 = props.empty() ? two : props[0];
    Expr p1 = props.size() > 1 ? props[1] : p0;

    const ProperTermDecl* arrow = nullptr;
    for (const auto& d : t.properTerms)
        if (!arrow && d.ctx.size() == 1 && d.ctx[0].type->kind == Kind::Proper && d.type->kind == Kind::Proper)
            arrow = &d;
    auto ap = [&](Expr a) { return app(arrow->name, {std::move(a)}); };
    Expr x = var("x"), y = var("y");
    Expr x1 = var("x1"), x2 = var("x2");

    std::vector<Judgement> out;
    auto closed = [&](Expr b) { out.push_back(Judgement::typeJ({}, std::move(b))); };

    closed(T);
    closed(B);
    for (const auto& p : props) closed(p);
    closed(two);
    closed(sum(p0, T));
    closed(sum(B, T));
    closed(list(T));
    closed(list(p0));
    closed(sigma("x", p0, p1));
    closed(sigma("x", T, B));
    closed(sigma("x", p0, eq(p0, x, x)));
    if (arrow) {
        Expr d = arrow->ctx[0].type, c = arrow->type;
        closed(sigma("x", d, eq(c, ap(x), ap(x))));
        if (opts.quotients) closed(quot(d, "x", "y", eq(c, ap(x), ap(y))));
    } else if (opts.quotients) {
        closed(quot(two, "x", "y", T));
    }
    closed(list(two));
    closed(sum(list(T), T));
    closed(sigma("x", p0, two));
    closed(sum(sigma("x", p0, p0), T));

    if (opts.maxContext >= 1) {
        Context c{{"x1", p0}};
        for (Expr b : {T, B, p1, eq(p0, x1, x1), sigma("y", p0, eq(p0, y, x1)), list(T), sum(T, p0)})
            out.push_back(Judgement::typeJ(c, b));
        if (arrow && alphaEqual(arrow->ctx[0].type, p0))
            out.push_back(Judgement::typeJ(c, eq(arrow->type, ap(x1), ap(x1))));
        Context c2{{"x1", two}};
        out.push_back(Judgement::typeJ(c2, eq(two, x1, inl(star()))));
        out.push_back(Judgement::typeJ(c2, sum(eq(two, x1, inl(star())), T)));
        if (opts.quotients) out.push_back(Judgement::typeJ(c2, quot(p0, "x", "y", eq(two, x1, x1))));
        Context c3{{"x1", list(T)}};
        out.push_back(Judgement::typeJ(c3, eq(list(T), x1, nil())));
        Context c4{{"x1", sigma("x", p0, p1)}};
        out.push_back(Judgement::typeJ(c4, list(T)));
    }
    if (opts.maxContext >= 2) {
        Context c{{"x1", p0}, {"x2", p1}};
        out.push_back(Judgement::typeJ(c, T));
        out.push_back(Judgement::typeJ(c, p0));
        out.push_back(Judgement::typeJ(c, sigma("y", p1, eq(p1, y, x2))));
        if (arrow && alphaEqual(arrow->ctx[0].type, p0) && alphaEqual(arrow->type, p1))
            out.push_back(Judgement::typeJ(c, eq(p1, ap(x1), x2)));
    }

    Checker ck(t);
    std::vector<Judgement> kept;
    std::set<std::string> seen;
    for (auto& j : out) {
        if (kept.size() >= opts.maxEntries) break;
        try {
            ck.checkContext(j.ctx);
            ck.checkType(j.ctx, j.type);
        } catch (const Error&) {
            continue;
        }
        Judgement c = canonicalJudgement(j);
        if (seen.insert(judgementKey(c)).second) kept.push_back(std::move(c));
    }
    return kept;
}

std::vector<Expr> objectCorpus(const TheoryPresentation& t, CorpusOptions opts) {
    std::vector<Expr> out;
    for (const auto& j : typeCorpus(t, opts))
        if (j.ctx.empty()) out.push_back(j.type);
    return out;
}

// ------------------------------------------------------- syntactic (-)^H

Expr contextSigma(const Context& ctx) {
    if (ctx.empty()) return mk::top();
    if (ctx.size() == 1) return ctx[0].type;
    Context pre = prefix(ctx, ctx.size() - 1);
    std::string w = freshName("w", contextNames(ctx));
    return mk::sigma(w, contextSigma(pre), subst(ctx.back().type, contextProjections(pre, mk::var(w))));
}

std::vector<std::pair<std::string, Expr>> contextProjections(const Context& ctx, const Expr& w) {
    if (ctx.empty()) return {};
    if (ctx.size() == 1) return {{ctx[0].name, w}};
    auto out = contextProjections(prefix(ctx, ctx.size() - 1), mk::proj1(w));
    out.emplace_back(ctx.back().name, mk::proj2(w));
    return out;
}

Expr contextTuple(const Context& ctx) {
    if (ctx.empty()) return mk::star();
    if (ctx.size() == 1) return mk::var(ctx[0].name);
    return mk::pair(contextTuple(prefix(ctx, ctx.size() - 1)), mk::var(ctx.back().name));
}

Expr hTotal(const Judgement& j) {
    if (j.ctx.empty()) return j.type;
    std::string w = freshName("w", contextNames(j.ctx));
    return mk::sigma(w, contextSigma(j.ctx), subst(j.type, contextProjections(j.ctx, mk::var(w))));
}

namespace {

// A variable name not clashing with the names of the context.
std::string mapVar(const Context& ctx, const std::string& base) { return freshName(base, contextNames(ctx)); }

// The map contextSigma(to) <- contextSigma(from) sending the tuple of `from`
// to the tuple of `to` under the given substitution of to's variables.
Expr retuple(const Context& to, const std::vector<std::pair<std::string, Expr>>& s) {
    return subst(contextTuple(to), s);
}

}  // namespace

PgrObject HInterpretation::object(const Judgement& j) const {
    PgrObject p;
    const std::size_t n = j.ctx.size();
    std::string v = mapVar(j.ctx, "u");
    if (n == 0) {
        p.arrows.push_back({j.type, mk::top(), v, mk::star()});
        return p;
    }
    p.arrows.push_back({j.ctx[0].type, mk::top(), v, mk::star()});
    for (std::size_t k = 2; k <= n; ++k)
        p.arrows.push_back({contextSigma(prefix(j.ctx, k)), contextSigma(prefix(j.ctx, k - 1)), v, mk::proj1(mk::var(v))});
    p.arrows.push_back({hTotal(j), contextSigma(j.ctx), v, mk::proj1(mk::var(v))});
    return p;
}

Morphism HInterpretation::section(const Judgement& tj) const {
    if (tj.form != Judgement::Form::Term) throw UsageError("section expects a term judgement");
    if (tj.ctx.empty()) return {mk::top(), tj.type, mapVar(tj.ctx, "u"), tj.term};
    std::string w = mapVar(tj.ctx, "w");
    Expr b = subst(tj.term, contextProjections(tj.ctx, mk::var(w)));
    return {contextSigma(tj.ctx), hTotal(Judgement::typeJ(tj.ctx, tj.type)), w, mk::pair(mk::var(w), b)};
}

Morphism HInterpretation::weakeningMap(const Judgement& j, const Expr& d, std::size_t pos) const {
    Judgement wj = weaken(j, d, pos);
    std::string v = mapVar(wj.ctx, "v");
    Expr vv = mk::var(v);
    Expr fib = mk::proj2(vv);
    Expr term = j.ctx.empty() ? fib : mk::pair(retuple(j.ctx, contextProjections(wj.ctx, mk::proj1(vv))), fib);
    return {hTotal(wj), hTotal(j), v, term};
}

Morphism HInterpretation::substitutionMap(const Judgement& j, std::size_t pos, const Expr& c) const {
    Judgement sj = instantiate(j, pos, c);
    std::string v = mapVar(j.ctx, "v");
    Expr vv = mk::var(v);
    std::vector<std::pair<std::string, Expr>> s;
    Expr fib = vv;
    if (!sj.ctx.empty()) {
        s = contextProjections(sj.ctx, mk::proj1(vv));
        fib = mk::proj2(vv);
    }
    // the substituted variable gets c, rewritten over the projections
    std::vector<std::pair<std::string, Expr>> full;
    for (std::size_t i = 0; i < j.ctx.size(); ++i) {
        if (i < pos) full.push_back(s[i]);
        else if (i == pos) full.emplace_back(j.ctx[i].name, subst(c, std::vector(s.begin(), s.begin() + static_cast<long>(pos))));
        else full.push_back(s[i - 1]);
    }
    return {hTotal(sj), hTotal(j), v, mk::pair(retuple(j.ctx, full), fib)};
}

HostVerdict HInterpretation::checkSection(const SynCat& host, const Judgement& tj) const {
    Morphism sec = section(tj);
    PgrObject p = object(Judgement::typeJ(tj.ctx, tj.type));
    Morphism back = host.compose(p.arrows.back(), sec);
    return host.equal(back, identityMorphism(sec.dom, sec.var));
}

HostVerdict HInterpretation::checkWeakeningSquare(const SynCat& host, const Judgement& j, const Expr& d,
                                                  std::size_t pos) const {
    Judgement wj = weaken(j, d, pos);
    Morphism q = weakeningMap(j, d, pos);
    Morphism p = object(j).arrows.back();
    Morphism pw = object(wj).arrows.back();
    std::string u = mapVar(wj.ctx, "u");
    Morphism qctx{contextSigma(wj.ctx), contextSigma(j.ctx), u,
                  retuple(j.ctx, contextProjections(wj.ctx, mk::var(u)))};
    return host.equal(host.compose(p, q), host.compose(qctx, pw));
}

HostVerdict HInterpretation::checkSubstitutionSquare(const SynCat& host, const Judgement& j, std::size_t pos,
                                                     const Expr& c) const {
    Judgement sj = instantiate(j, pos, c);
    Morphism q = substitutionMap(j, pos, c);
    Morphism p = object(j).arrows.back();
    Morphism ps = object(sj).arrows.back();
    std::string u = mapVar(j.ctx, "u");
    auto s = contextProjections(sj.ctx, mk::var(u));
    std::vector<std::pair<std::string, Expr>> full;
    for (std::size_t i = 0; i < j.ctx.size(); ++i) {
        if (i < pos) full.push_back(s[i]);
        else if (i == pos) full.emplace_back(j.ctx[i].name, subst(c, std::vector(s.begin(), s.begin() + static_cast<long>(pos))));
        else full.push_back(s[i - 1]);
    }
    Morphism qctx{contextSigma(sj.ctx), contextSigma(j.ctx), u, retuple(j.ctx, full)};
    return host.equal(host.compose(p, q), host.compose(qctx, ps));
}

HInterpretation hInterpretation(const TheoryPresentation& t) { return HInterpretation(t); }

// ------------------------------------------------- semantic interpretations

EnumSet SemInterp::context(const Context& ctx) const {
    if (ctx.empty()) return EnumSet::of({unitOf()});
    return total(Judgement::typeJ(prefix(ctx, ctx.size() - 1), ctx.back().type));
}

EnumSet SemInterp::total(const Judgement& j) const {
    std::vector<Value> out;
    for (const auto& g : context(j.ctx).elems) {
        Env e = env(j.ctx, g);
        for (const auto& v : ev_->evalType(j.type, e).elems) out.push_back(element(j, g, v));
    }
    return EnumSet::of(std::move(out));
}

Value SemInterp::element(const Judgement& j, const Value& g, const Value& v) const {
    const Structure& s = structure();
    const bool closed = j.ctx.empty();
    if (mode_ == Mode::Pairs) return closed ? v : s.pair(g, v);
    const Expr& b = j.type;
    switch (b->kind) {
    case Kind::Top:
    case Kind::Eq: return g;
    case Kind::Bot: throw ModelError("no element of an empty type");
    case Kind::Sum: {
        Judgement side = Judgement::typeJ(j.ctx, b->kids[s.isInl(v) ? 0 : 1]);
        Value inner = element(side, g, s.payload(v));
        return s.isInl(v) ? s.inl(inner) : s.inr(inner);
    }
    case Kind::Sigma: {
        Judgement dj = Judgement::typeJ(j.ctx, b->kids[0]);
        std::string x = nextVar(j.ctx);
        Judgement bj = Judgement::typeJ(extend(j.ctx, x, b->kids[0]), openBody(b->kids[1], mk::var(x)));
        return element(bj, element(dj, g, s.fst(v)), s.snd(v));
    }
    default: return closed ? v : s.pair(g, v);
    }
}

Value SemInterp::base(const Judgement& j, const Value& e) const {
    const Structure& s = structure();
    const bool closed = j.ctx.empty();
    if (mode_ == Mode::Pairs) return closed ? unitOf() : s.fst(e);
    const Expr& b = j.type;
    switch (b->kind) {
    case Kind::Top:
    case Kind::Eq: return e;
    case Kind::Bot: throw ModelError("no element of an empty type");
    case Kind::Sum: return base(Judgement::typeJ(j.ctx, b->kids[s.isInl(e) ? 0 : 1]), s.payload(e));
    case Kind::Sigma: {
        Judgement dj = Judgement::typeJ(j.ctx, b->kids[0]);
        std::string x = nextVar(j.ctx);
        Judgement bj = Judgement::typeJ(extend(j.ctx, x, b->kids[0]), openBody(b->kids[1], mk::var(x)));
        return base(dj, base(bj, e));
    }
    default: return closed ? unitOf() : s.fst(e);
    }
}

Value SemInterp::fibre(const Judgement& j, const Value& e) const {
    const Structure& s = structure();
    const bool closed = j.ctx.empty();
    if (mode_ == Mode::Pairs) return closed ? e : s.snd(e);
    const Expr& b = j.type;
    switch (b->kind) {
    case Kind::Top: return s.unit();
    case Kind::Eq: return s.refl();
    case Kind::Bot: throw ModelError("no element of an empty type");
    case Kind::Sum: {
        Value inner = fibre(Judgement::typeJ(j.ctx, b->kids[s.isInl(e) ? 0 : 1]), s.payload(e));
        return s.isInl(e) ? s.inl(inner) : s.inr(inner);
    }
    case Kind::Sigma: {
        Judgement dj = Judgement::typeJ(j.ctx, b->kids[0]);
        std::string x = nextVar(j.ctx);
        Judgement bj = Judgement::typeJ(extend(j.ctx, x, b->kids[0]), openBody(b->kids[1], mk::var(x)));
        Value gd = base(bj, e);
        return s.pair(fibre(dj, gd), fibre(bj, e));
    }
    default: return closed ? e : s.snd(e);
    }
}

Env SemInterp::env(const Context& ctx, const Value& g) const {
    if (ctx.empty()) return {};
    Judgement last = Judgement::typeJ(prefix(ctx, ctx.size() - 1), ctx.back().type);
    Env e = env(last.ctx, base(last, g));
    e.emplace_back(ctx.back().name, fibre(last, g));
    return e;
}

Value SemInterp::encodeContext(const Context& ctx, const Env& e) const {
    if (ctx.empty()) return unitOf();
    if (e.size() != ctx.size()) throw UsageError("environment does not match the context");
    Judgement last = Judgement::typeJ(prefix(ctx, ctx.size() - 1), ctx.back().type);
    Env pre(e.begin(), e.end() - 1);
    return element(last, encodeContext(last.ctx, pre), e.back().second);
}

Value SemInterp::section(const Judgement& tj, const Value& g) const {
    Value v = ev_->evalTerm(tj.term, env(tj.ctx, g));
    return element(Judgement::typeJ(tj.ctx, tj.type), g, v);
}

Value SemInterp::weakeningMap(const Judgement& j, const Expr& d, std::size_t pos, const Value& e) const {
    Judgement wj = weaken(j, d, pos);
    Env we = env(wj.ctx, base(wj, e));
    we.erase(we.begin() + static_cast<long>(pos));
    return element(j, encodeContext(j.ctx, we), fibre(wj, e));
}

namespace {

Env substitutedEnv(const Evaluator& ev, const Judgement& j, std::size_t pos, const Expr& c, const Env& se) {
    Env pre(se.begin(), se.begin() + static_cast<long>(pos));
    Value cv = ev.evalTerm(c, pre);
    Env out = pre;
    out.emplace_back(j.ctx[pos].name, cv);
    for (std::size_t i = pos; i < se.size(); ++i) out.emplace_back(j.ctx[i + 1].name, se[i].second);
    return out;
}

}  // namespace

Value SemInterp::substitutionMap(const Judgement& j, std::size_t pos, const Expr& c, const Value& e) const {
    Judgement sj = instantiate(j, pos, c);
    Env se = env(sj.ctx, base(sj, e));
    Env full = substitutedEnv(*ev_, j, pos, c, se);
    return element(j, encodeContext(j.ctx, full), fibre(sj, e));
}

bool SemInterp::substitutionIsPullback(const Judgement& j, std::size_t pos, const Expr& c) const {
    Judgement sj = instantiate(j, pos, c);
    EnumSet src = total(sj);
    EnumSet tgt = total(j);
    std::set<Value> image;
    for (const auto& e : src.elems) {
        Value q = substitutionMap(j, pos, c, e);
        if (!tgt.contains(q) || !image.insert(q).second) return false;
    }
    std::set<Value> points;
    for (const auto& g : context(sj.ctx).elems)
        points.insert(encodeContext(j.ctx, substitutedEnv(*ev_, j, pos, c, env(sj.ctx, g))));
    std::size_t over = 0;
    for (const auto& e : tgt.elems)
        if (points.count(base(j, e))) ++over;
    return over == image.size();
}

// ------------------------------------------------ standard interpretation

bool StandardInterpretation::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

EnumSet StandardInterpretation::onObject(const Expr& c) const { return interp->total(Judgement::typeJ({}, c)); }

CompMap StandardInterpretation::onMorphism(const Morphism& m) const {
    const SemInterp* in = interp.get();
    Judgement dj = Judgement::typeJ({}, m.dom), cj = Judgement::typeJ({}, m.cod);
    Morphism mm = m;
    return {in->total(dj), [in, dj, cj, mm](const Value& x) {
                Value v = in->evaluator().evalTerm(mm.term, {{mm.var, in->fibre(dj, x)}});
                return in->element(cj, in->evaluator().structure().unit(), v);
            }};
}

namespace {

bool bijective(const EnumSet& dom, const EnumSet& cod, const std::function<Value(const Value&)>& f) {
    if (dom.size() != cod.size()) return false;
    std::set<Value> seen;
    for (const auto& x : dom.elems) {
        Value y = f(x);
        if (!cod.contains(y) || !seen.insert(y).second) return false;
    }
    return true;
}

}  // namespace

StandardInterpretation standardInterpretation(const TheoryPresentation& t, const ModelPresentation& m,
                                              std::size_t depth, const std::vector<Judgement>& corpus) {
    m.validate();
    StandardInterpretation out;
    out.evaluator = std::make_unique<Evaluator>(&m, m.structure, depth);
    out.interp = std::make_unique<SemInterp>(*out.evaluator, SemInterp::Mode::Slice);
    const Evaluator& ev = *out.evaluator;
    const Structure& s = m.structure;

    for (const auto& p : t.properTypes)
        if (!m.object(p)) throw ModelError("no carrier for proper type '" + p + "' in model '" + m.name + "'");
    for (const auto& d : t.properTerms)
        if (!m.arrow(d.name)) throw ModelError("no map for proper term '" + d.name + "' in model '" + m.name + "'");

    for (const auto& ax : t.termAxioms) {
        SampleVerdict v = ev.agreeOn(ax.ctx, ax.lhs, ax.rhs);
        if (!v.agree())
            throw ModelError("axiom '" + ax.name + "' fails in model '" + m.name + "': " + v.detail);
        out.checks.push_back({"axiom " + ax.name, true, std::to_string(v.samples) + " samples"});
    }
    for (const auto& ax : t.typeAxioms) {
        for (const auto& e : ev.enumerateContext(ax.ctx)) {
            EnumSet l = ev.evalType(ax.lhs, e), r = ev.evalType(ax.rhs, e);
            if (l.elems != r.elems) throw ModelError("type axiom '" + ax.name + "' fails in model '" + m.name + "'");
        }
        out.checks.push_back({"type axiom " + ax.name, true, ""});
    }

    // Sections and substitution pullbacks over the corpus.
    SynCat syn(t);
    const SemInterp& in = *out.interp;
    for (const auto& j : corpus) {
        std::string key = judgementKey(j);
        for (const auto& b : syn.candidates(j.ctx, j.type, 3)) {
            Judgement tj = Judgement::termJ(j.ctx, b, j.type);
            bool ok = true;
            for (const auto& g : in.context(j.ctx).elems)
                if (in.base(j, in.section(tj, g)) != g) ok = false;
            out.checks.push_back({"section " + key + " / " + show(b), ok, ""});
            break;
        }
        for (std::size_t pos = 0; pos < j.ctx.size(); ++pos) {
            auto cs = syn.candidates(prefix(j.ctx, pos), j.ctx[pos].type, 3);
            if (cs.empty()) continue;
            bool ok = in.substitutionIsPullback(j, pos, cs.front());
            out.checks.push_back({"pullback " + key + " at " + std::to_string(pos), ok, show(cs.front())});
        }
    }

    // Coherence witnesses: the chosen structure of the model against the
    // set-level universal constructions.
    std::vector<Expr> objs;
    for (const auto& j : corpus)
        if (j.ctx.empty() && objs.size() < 6) objs.push_back(j.type);
    if (objs.empty()) objs = {mk::top(), mk::sum(mk::top(), mk::top())};
    // closed objects are compared through their fibre values
    auto fib = [&](const Expr& c) {
        Judgement j = Judgement::typeJ({}, c);
        std::vector<Value> xs;
        for (const auto& e : in.total(j).elems) xs.push_back(in.fibre(j, e));
        return EnumSet::of(std::move(xs));
    };
    out.checks.push_back({"terminal", fib(mk::top()).size() == 1, ""});
    out.checks.push_back({"initial", fib(mk::bot()).size() == 0, ""});
    for (const auto& a : objs)
        for (const auto& b : objs) {
            EnumSet prod = fib(mk::sigma("x", a, b)), sa = fib(a), sb = fib(b);
            bool ok = prod.size() == sa.size() * sb.size();
            for (const auto& p : prod.elems)
                if (!sa.contains(s.fst(p)) || !sb.contains(s.snd(p))) ok = false;
            out.checks.push_back({"product " + show(a) + " x " + show(b), ok, ""});
            std::vector<Value> both;
            for (const auto& v : sa.elems) both.push_back(s.inl(v));
            for (const auto& v : sb.elems) both.push_back(s.inr(v));
            out.checks.push_back({"coproduct " + show(a) + " + " + show(b),
                                  bijective(EnumSet::of(both), fib(mk::sum(a, b)), [](const Value& v) { return v; }),
                                  ""});
        }
    for (const auto& a : objs) {
        EnumSet l = fib(mk::list(a)), sa = fib(a);
        std::size_t expect = 0, pw = 1;
        for (std::size_t k = 0; k <= depth; ++k, pw *= sa.size()) expect += pw;
        bool ok = l.size() == expect;
        for (const auto& v : l.elems)
            for (const auto& x : s.elems(v))
                if (!sa.contains(x)) ok = false;
        out.checks.push_back({"list " + show(a), ok, ""});
    }
    return out;
}

}  // namespace au
