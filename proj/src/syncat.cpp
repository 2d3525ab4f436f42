#include "au/syncat.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "au/error.hpp"

namespace au {

std::string Morphism::str() const { return "(" + var + " : " + show(dom) + ") |-> " + show(term) + " : " + show(cod); }

Morphism identityMorphism(const Expr& x, const std::string& var) { return {x, x, var, mk::var(var)}; }

Morphism composeMorphisms(const Morphism& u, const Morphism& t) {
    return {t.dom, u.cod, t.var, substitute(u.term, u.var, t.term)};
}

Expr applyMorphism(const Morphism& m, const Expr& arg) { return substitute(m.term, m.var, arg); }

std::string HostVerdict::str() const {
    switch (status) {
    case Status::Proved: return "proved";
    case Status::AgreeAtDepth: return "agree-at-depth";
    case Status::Unknown: return "unknown";
    case Status::Refuted: return "counterexample" + (sample ? " " + sample->detail : std::string());
    }
    return "?";
}

SampleVerdict Oracle::agree(const Context& ctx, const Expr& t, const Expr& u) const {
    SampleVerdict total;
    for (const Evaluator* ev : evaluators) {
        SampleVerdict v = ev->agreeOn(ctx, t, u);
        total.depth = v.depth;
        total.samples += v.samples;
        if (!v.agree()) {
            v.samples = total.samples;
            return v;
        }
    }
    return total;
}

Value Oracle::signature(const Context& ctx, const Expr& t) const {
    std::vector<Value> vs;
    for (const Evaluator* ev : evaluators)
        for (const auto& env : ev->enumerateContext(ctx)) vs.push_back(ev->evalTerm(t, env));
    return Value::list(std::move(vs));
}

// ------------------------------------------------------------ enumeration

namespace {

std::size_t termSize(const Expr& e) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < e->kids.size(); ++i)
        if (!(e->kind == Kind::ClassOf && i == 0)) n += termSize(e->kids[i]);
    return n;
}

std::string ctxKey(const Context& ctx) {
    std::string k;
    for (const auto& b : ctx) k += b.name + ":" + exprKey(b.type) + ";";
    return k;
}

class Enumerator {
public:
    Enumerator(const Checker& ck, std::size_t cap) : ck_(ck), cap_(cap) {}

    bool truncated() const { return truncated_; }

    const std::vector<Expr>& exact(const Context& ctx, const Expr& type, std::size_t n) {
        std::string key = ctxKey(ctx) + "|" + exprKey(type) + "|" + std::to_string(n);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::vector<Expr> out = build(ctx, type, n);
        return memo_.emplace(key, std::move(out)).first->second;
    }

private:
    using Typed = std::pair<Expr, Expr>;

    const Checker& ck_;
    std::size_t cap_;
    std::size_t produced_ = 0;
    bool truncated_ = false;
    std::map<std::string, std::vector<Expr>> memo_;
    std::map<std::string, std::vector<Typed>> neutralMemo_;

    bool full() {
        if (produced_ > cap_) truncated_ = true;
        return truncated_;
    }

    std::string binderName(const Context& ctx, const std::string& base) const {
        return freshName(base + std::to_string(ctx.size()), contextNames(ctx));
    }

    const std::vector<Typed>& neutrals(const Context& ctx, std::size_t n) {
        std::string key = ctxKey(ctx) + "|" + std::to_string(n);
        if (auto it = neutralMemo_.find(key); it != neutralMemo_.end()) return it->second;
        std::vector<Typed> out;
        if (n == 1) {
            std::set<std::string> seen;
            for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
                if (seen.insert(it->name).second) out.emplace_back(mk::var(it->name), it->type);
        }
        if (n >= 2) {
            for (const auto& [s, ty] : neutrals(ctx, n - 1)) {
                if (ty->kind != Kind::Sigma) continue;
                out.emplace_back(mk::proj1(s), ty->kids[0]);
                out.emplace_back(mk::proj2(s), openBody(ty->kids[1], mk::proj1(s)));
            }
        }
        for (const auto& decl : ck_.theory().properTerms) {
            const std::size_t k = decl.ctx.size();
            if (k == 0) {
                if (n == 1) out.emplace_back(mk::app(decl.name, {}), decl.type);
                continue;
            }
            if (n < k + 1) continue;
            std::vector<Expr> args;
            std::vector<std::pair<std::string, Expr>> subst;
            appArgs(ctx, decl, 0, n - 1, args, subst, out);
        }
        return neutralMemo_.emplace(key, std::move(out)).first->second;
    }

    void appArgs(const Context& ctx, const ProperTermDecl& decl, std::size_t i, std::size_t budget,
                 std::vector<Expr>& args, std::vector<std::pair<std::string, Expr>>& subst, std::vector<Typed>& out) {
        const std::size_t remaining = decl.ctx.size() - i;
        if (remaining == 0) {
            if (budget == 0) out.emplace_back(mk::app(decl.name, args), substituteAll(decl.type, subst));
            return;
        }
        Expr ty = substituteAll(decl.ctx[i].type, subst);
        for (std::size_t sz = 1; sz + (remaining - 1) <= budget; ++sz) {
            if (remaining == 1 && sz != budget) continue;
            for (const auto& a : exact(ctx, ty, sz)) {
                args.push_back(a);
                subst.emplace_back(decl.ctx[i].name, a);
                appArgs(ctx, decl, i + 1, budget - sz, args, subst, out);
                args.pop_back();
                subst.pop_back();
            }
        }
    }

    bool sameType(const Context& ctx, const Expr& a, const Expr& b) const {
        return alphaEqual(a, b) || ck_.typesConvertible(ctx, a, b);
    }

    std::vector<Expr> build(const Context& ctx, const Expr& type, std::size_t n) {
        std::vector<Expr> out;
        if (n == 0 || full()) return out;
        const auto& k = type->kids;
        switch (type->kind) {
        case Kind::Top:
            if (n == 1) out.push_back(mk::star());
            return out;
        case Kind::Eq:
            if (n == 1 && ck_.checkEqual(ctx, k[1], k[2], k[0]).proved()) out.push_back(mk::refl());
            return out;
        case Kind::Sigma:
            for (std::size_t i = 1; i + 2 <= n; ++i)
                for (const auto& a : exact(ctx, k[0], i))
                    for (const auto& b : exact(ctx, openBody(k[1], a), n - 1 - i)) out.push_back(mk::pair(a, b));
            break;
        case Kind::Sum:
            if (n >= 2) {
                for (const auto& a : exact(ctx, k[0], n - 1)) out.push_back(mk::inl(a));
                for (const auto& a : exact(ctx, k[1], n - 1)) out.push_back(mk::inr(a));
            }
            break;
        case Kind::List:
            if (n == 1) out.push_back(mk::nil());
            for (std::size_t i = 1; i + 2 <= n; ++i)
                for (const auto& l : exact(ctx, type, i))
                    for (const auto& a : exact(ctx, k[0], n - 1 - i)) out.push_back(mk::cons(l, a));
            break;
        case Kind::Quot:
            if (n >= 2)
                for (const auto& a : exact(ctx, k[0], n - 1)) out.push_back(mk::classOf(type, a));
            break;
        default:
            break;
        }
        // neutral terms and eliminations
        for (const auto& [s, ty] : neutrals(ctx, n))
            if (sameType(ctx, ty, type)) out.push_back(s);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            for (const auto& [s, ty] : neutrals(ctx, i)) {
                const std::size_t rest = n - 1 - i;
                switch (ty->kind) {
                case Kind::Bot:
                    if (rest == 0 && type->kind != Kind::Bot) out.push_back(mk::abort(s));
                    break;
                case Kind::Sum: {
                    std::string v = binderName(ctx, "v");
                    Context cl = ctx, cr = ctx;
                    cl.push_back({v, ty->kids[0]});
                    cr.push_back({v, ty->kids[1]});
                    for (std::size_t j = 1; j < rest; ++j)
                        for (const auto& l : exact(cl, type, j))
                            for (const auto& r : exact(cr, type, rest - j)) out.push_back(mk::caseOf(s, v, l, v, r));
                    break;
                }
                case Kind::List: {
                    std::string acc = binderName(ctx, "acc"), e = binderName(ctx, "e");
                    Context cg = ctx;
                    cg.push_back({acc, type});
                    cg.push_back({e, ty->kids[0]});
                    for (std::size_t j = 1; j < rest; ++j)
                        for (const auto& b : exact(ctx, type, j))
                            for (const auto& g : exact(cg, type, rest - j)) out.push_back(mk::rec(s, b, acc, e, g));
                    break;
                }
                case Kind::Quot: {
                    std::string v = binderName(ctx, "v");
                    Context ce = ctx;
                    ce.push_back({v, ty->kids[0]});
                    for (const auto& e : exact(ce, type, rest)) {
                        Expr cand = mk::quotElim(s, v, e);
                        try {
                            if (ck_.checkTerm(ctx, cand, type).allObligations().empty()) out.push_back(cand);
                        } catch (const Error&) {
                        }
                    }
                    break;
                }
                default:
                    break;
                }
            }
        }
        // keep normal forms only, without repeats
        std::vector<Expr> kept;
        std::set<std::string> seen;
        for (auto& c : out) {
            if (!alphaEqual(ck_.computeNormal(c), c)) continue;
            NormalizeResult nr = ck_.normalize(ctx, c);
            if (!nr.trace.empty()) continue;
            if (seen.insert(exprKey(c)).second) kept.push_back(std::move(c));
        }
        produced_ += kept.size();
        return kept;
    }
};

}  // namespace

SynCat::SynCat(const TheoryPresentation& theory, CheckerOptions opts, Oracle oracle)
    : theory_(&theory), checker_(theory, opts), oracle_(std::move(oracle)) {}

Morphism SynCat::compose(const Morphism& u, const Morphism& t) const {
    if (!checker_.typesConvertible({}, t.cod, u.dom))
        throw TypeError("morphisms do not compose: " + show(t.cod) + " vs " + show(u.dom));
    return composeMorphisms(u, t);
}

Morphism SynCat::make(Expr dom, Expr cod, std::string var, Expr term) const {
    Morphism m{std::move(dom), std::move(cod), std::move(var), std::move(term)};
    checker_.checkType({}, m.dom);
    checker_.checkType({}, m.cod);
    checker_.checkTerm(m.context(), m.term, m.cod);
    return m;
}

HostVerdict SynCat::equalTerms(const Context& ctx, const Expr& t, const Expr& u, const Expr& type) const {
    HostVerdict v;
    EqVerdict e = checker_.checkEqual(ctx, t, u, type);
    if (e.proved()) {
        v.status = HostVerdict::Status::Proved;
        v.certificate = std::move(e.certificate);
        return v;
    }
    if (!oracle_.empty()) {
        SampleVerdict s = oracle_.agree(ctx, t, u);
        v.status = s.agree() ? HostVerdict::Status::AgreeAtDepth : HostVerdict::Status::Refuted;
        v.sample = std::move(s);
    }
    return v;
}

HostVerdict SynCat::equal(const Morphism& a, const Morphism& b) const {
    return equalTerms(a.context(), a.term, substitute(b.term, b.var, mk::var(a.var)), a.cod);
}

std::vector<Expr> SynCat::candidates(const Context& ctx, const Expr& type, std::size_t maxSize, bool* truncated) const {
    Enumerator en(checker_, candidateCap);
    std::vector<Expr> out;
    for (std::size_t n = 1; n <= maxSize; ++n) {
        const auto& layer = en.exact(ctx, type, n);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    if (truncated) *truncated = en.truncated();
    return out;
}

HomEnumeration SynCat::enumerateTerms(const Context& ctx, const Expr& type, std::size_t sizeBound) const {
    HomEnumeration h;
    h.ctx = ctx;
    h.cod = type;
    std::vector<Expr> cands = candidates(ctx, type, sizeBound, &h.truncated);
    h.candidates = cands.size();
    std::vector<Value> sigs;
    for (const auto& c : cands) {
        std::optional<Value> sig;
        if (!oracle_.empty()) sig = oracle_.signature(ctx, c);
        bool placed = false;
        std::optional<std::size_t> sameSig;
        for (std::size_t k = 0; k < h.classes.size() && !placed; ++k) {
            if (sig && sigs[k] != *sig) continue;
            if (sig && !sameSig) sameSig = k;
            if (checker_.checkEqual(ctx, h.classes[k].rep, c, type).proved()) {
                h.classes[k].members.push_back(c);
                placed = true;
            }
        }
        if (placed) continue;
        if (sameSig && oracle_.faithful) {
            h.classes[*sameSig].members.push_back(c);
            h.classes[*sameSig].modelMerged = true;
            continue;
        }
        h.classes.push_back(HomClass{c, {c}, false});
        sigs.push_back(sig.value_or(Value{}));
    }
    return h;
}

HomEnumeration SynCat::enumerateHom(const Expr& x, const Expr& y, std::size_t sizeBound) const {
    return enumerateTerms({{"x", x}}, y, sizeBound);
}

HostVerdict ModelHost::equalTerms(const Context& ctx, const Expr& t, const Expr& u, const Expr&) const {
    HostVerdict v;
    SampleVerdict s = oracle_.agree(ctx, t, u);
    v.status = s.agree() ? HostVerdict::Status::AgreeAtDepth : HostVerdict::Status::Refuted;
    v.sample = std::move(s);
    return v;
}

HostVerdict ModelHost::equal(const Morphism& a, const Morphism& b) const {
    return equalTerms(a.context(), a.term, substitute(b.term, b.var, mk::var(a.var)), a.cod);
}

// ------------------------------------------------------ chosen structure

namespace {
std::string avoiding(const std::string& base, std::initializer_list<Expr> es) {
    std::set<std::string> avoid;
    for (const auto& e : es)
        for (const auto& v : freeVars(e)) avoid.insert(v);
    return freshName(base, avoid);
}
}  // namespace

Morphism ChosenStructure::bang(const Expr& x) const { return {x, mk::top(), "x", mk::star()}; }
Expr ChosenStructure::product(const Expr& x, const Expr& y) const { return mk::sigma("u", x, y); }
Morphism ChosenStructure::fst(const Expr& x, const Expr& y) const {
    return {product(x, y), x, "p", mk::proj1(mk::var("p"))};
}
Morphism ChosenStructure::snd(const Expr& x, const Expr& y) const {
    return {product(x, y), y, "p", mk::proj2(mk::var("p"))};
}
Morphism ChosenStructure::pairing(const Morphism& f, const Morphism& g) const {
    return {f.dom, product(f.cod, g.cod), f.var, mk::pair(f.term, substitute(g.term, g.var, mk::var(f.var)))};
}
Expr ChosenStructure::equalizer(const Morphism& c, const Morphism& d) const {
    std::string x = avoiding("x", {c.term, d.term});
    return mk::sigma(x, c.dom, mk::eq(c.cod, applyMorphism(c, mk::var(x)), applyMorphism(d, mk::var(x))));
}
Morphism ChosenStructure::equalizerIncl(const Morphism& c, const Morphism& d) const {
    return {equalizer(c, d), c.dom, "p", mk::proj1(mk::var("p"))};
}
Morphism ChosenStructure::equalizerLift(const Morphism& c, const Morphism& d, const Morphism& h) const {
    return {h.dom, equalizer(c, d), h.var, mk::pair(h.term, mk::refl())};
}
Morphism ChosenStructure::fromInitial(const Expr& x) const { return {mk::bot(), x, "x", mk::abort(mk::var("x"))}; }
Expr ChosenStructure::coproduct(const Expr& x, const Expr& y) const { return mk::sum(x, y); }
Morphism ChosenStructure::inl(const Expr& x, const Expr& y) const { return {x, mk::sum(x, y), "x", mk::inl(mk::var("x"))}; }
Morphism ChosenStructure::inr(const Expr& x, const Expr& y) const { return {y, mk::sum(x, y), "x", mk::inr(mk::var("x"))}; }
Morphism ChosenStructure::copair(const Morphism& f, const Morphism& g) const {
    std::string s = avoiding("s", {f.term, g.term});
    return {mk::sum(f.dom, g.dom), f.cod, s, mk::caseOf(mk::var(s), f.var, f.term, g.var, g.term)};
}
Expr ChosenStructure::listObject(const Expr& a) const { return mk::list(a); }
Morphism ChosenStructure::nil(const Expr& a) const { return {mk::top(), mk::list(a), "u", mk::nil()}; }
Morphism ChosenStructure::cons(const Expr& a) const {
    Expr p = mk::var("p");
    return {product(mk::list(a), a), mk::list(a), "p", mk::cons(mk::proj1(p), mk::proj2(p))};
}
Morphism ChosenStructure::rec(const Expr& a, const Morphism& b, const Morphism& g) const {
    std::string p = avoiding("p", {b.term, g.term});
    std::string acc = avoiding("acc", {g.term}), e = avoiding("e", {g.term});
    Expr pv = mk::var(p);
    Expr step = applyMorphism(g, mk::pair(mk::var(acc), mk::var(e)));
    return {product(b.dom, mk::list(a)), b.cod, p, mk::rec(mk::proj2(pv), applyMorphism(b, mk::proj1(pv)), acc, e, step)};
}
Expr ChosenStructure::pullback(const Morphism& f, const Morphism& g) const {
    return equalizer(composeMorphisms(f, fst(f.dom, g.dom)), composeMorphisms(g, snd(f.dom, g.dom)));
}

ChosenStructure auStructure(const SynCat&) { return ChosenStructure{}; }

// --------------------------------------------------------- Pgr and lists

void PgrObject::validate() const {
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        if (i == 0 && !alphaEqual(arrows[0].cod, mk::top()))
            throw UsageError("first arrow of a Pgr object must end at Top");
        if (i > 0 && !alphaEqual(arrows[i].cod, arrows[i - 1].dom))
            throw UsageError("arrows " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not compose");
    }
}

bool SquaresVerdict::holds() const {
    return std::all_of(squares.begin(), squares.end(), [](const HostVerdict& v) { return v.holds(); });
}
bool SquaresVerdict::proved() const {
    return std::all_of(squares.begin(), squares.end(), [](const HostVerdict& v) { return v.proved(); });
}

SquaresVerdict checkArrowListSquares(const Host& host, const PgrObject& source, const PgrObject& target,
                                     const ArrowListMorphism& phi) {
    const std::size_t n = source.arrows.size();
    if (target.arrows.size() != n || phi.components.size() != n + 1)
        throw UsageError("misaligned arrow lists: lengths " + std::to_string(n) + ", " +
                         std::to_string(target.arrows.size()) + " with " + std::to_string(phi.components.size()) +
                         " components");
    SquaresVerdict out;
    for (std::size_t i = 1; i <= n; ++i) {
        Morphism lhs = composeMorphisms(target.arrows[i - 1], phi.components[i]);
        Morphism rhs = composeMorphisms(phi.components[i - 1], source.arrows[i - 1]);
        out.squares.push_back(host.equal(lhs, rhs));
    }
    return out;
}

ArrowListMorphism composeArrowList(const ArrowListMorphism& psi, const ArrowListMorphism& phi) {
    if (psi.components.size() != phi.components.size()) throw UsageError("misaligned arrow-list morphisms");
    ArrowListMorphism out;
    for (std::size_t i = 0; i < phi.components.size(); ++i)
        out.components.push_back(composeMorphisms(psi.components[i], phi.components[i]));
    return out;
}

ArrowListMorphism identityArrowList(const PgrObject& p) {
    ArrowListMorphism out;
    out.components.push_back(identityMorphism(mk::top()));
    for (const auto& a : p.arrows) out.components.push_back(identityMorphism(a.dom));
    return out;
}

PgrMorphismResult pgrCompose(const Host& host, const Morphism& d, const PgrObject& p, const PgrObject& q) {
    PgrMorphismResult r;
    const std::size_t n = p.arrows.size();
    if (q.arrows.size() != n || n == 0) {
        r.reason = "length mismatch";
        return r;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto& b = p.arrows[i];
        const auto& c = q.arrows[i];
        if (!alphaEqual(b.dom, c.dom) || !alphaEqual(b.cod, c.cod) || !host.equal(b, c).holds()) {
            r.reason = "prefix mismatch at " + std::to_string(i + 1);
            return r;
        }
    }
    if (!alphaEqual(d.dom, p.arrows.back().dom) || !alphaEqual(d.cod, q.arrows.back().dom)) {
        r.reason = "last component has the wrong endpoints";
        return r;
    }
    r.lastSquare = host.equal(composeMorphisms(q.arrows.back(), d), p.arrows.back());
    r.accepted = r.lastSquare.holds();
    if (!r.accepted) r.reason = "last square: " + r.lastSquare.str();
    r.morphism = identityArrowList(p);
    r.morphism.components.back() = d;
    return r;
}

// ------------------------------------------------------------------ slice

SliceCategory::SliceCategory(const ModelPresentation& m, Expr u, std::size_t depth, CheckerOptions opts)
    : model_(&m), u_(std::move(u)), theory_(internalTheoryOfModel(m)), eval_(modelEvaluator(m, depth)), opts_(opts) {
    if (u_->kind == Kind::Proper && !m.object(u_->name)) throw ScopeError("unknown object '" + u_->name + "'");
}

std::vector<std::pair<std::string, std::map<std::string, std::string>>> SliceCategory::carrierObjects() const {
    std::vector<std::string> target;
    if (u_->kind == Kind::Proper) target = model_->object(u_->name)->carrier;
    else
        for (const auto& v : eval_.evalType(u_).elems) target.push_back(v.str());
    std::vector<std::pair<std::string, std::map<std::string, std::string>>> out;
    for (const auto& o : model_->objects) {
        const std::size_t n = o.carrier.size();
        if (target.empty() && n > 0) continue;
        std::vector<std::size_t> digits(n, 0);
        while (true) {
            std::map<std::string, std::string> g;
            for (std::size_t i = 0; i < n; ++i) g[o.carrier[i]] = target[digits[i]];
            out.emplace_back(o.name, std::move(g));
            std::size_t i = 0;
            while (i < n && ++digits[i] == target.size()) digits[i++] = 0;
            if (i == n) break;
        }
    }
    return out;
}

bool SliceCategory::isTriangle(const SliceObject& a, const SliceObject& b, const Morphism& h) const {
    ModelHost host(Oracle{{&eval_}, true});
    return host.equal(composeMorphisms(b.map, h), a.map).holds();
}

SliceHoms SliceCategory::hom(const SliceObject& a, const SliceObject& b, std::size_t sizeBound) const {
    SynCat syn(theory_, opts_, Oracle{{&eval_}, true});
    Context ctx{{"z", a.dom}};
    std::vector<Expr> cands = syn.candidates(ctx, b.dom, sizeBound);
    SliceHoms out;
    out.candidates = cands.size();
    std::set<Value> seen;
    for (const auto& c : cands) {
        Morphism h{a.dom, b.dom, "z", c};
        if (!isTriangle(a, b, h)) continue;
        if (seen.insert(syn.oracle().signature(ctx, c)).second) out.homs.push_back(h);
    }
    return out;
}

}  // namespace au
