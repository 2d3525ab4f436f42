#include "au/checker.hpp"

#include <atomic>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "au/error.hpp"

namespace au {

namespace {

std::atomic<unsigned long> g_fresh{0};

// Names containing '%' cannot be written in the surface syntax, so they never
// clash with user variables.
std::string internalName() { return "%" + std::to_string(g_fresh.fetch_add(1)); }

thread_local int t_automationDepth = 0;

struct AutomationGuard {
    AutomationGuard() { ++t_automationDepth; }
    ~AutomationGuard() { --t_automationDepth; }
};

bool childIsType(Kind k, std::size_t i) {
    if (isTypeKind(k)) return true;
    return k == Kind::ClassOf && i == 0;
}

Context extend(Context ctx, const std::string& x, Expr type) {
    ctx.push_back(Binding{x, std::move(type)});
    return ctx;
}

const Binding* lookup(const Context& ctx, const std::string& x) {
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
        if (it->name == x) return &*it;
    return nullptr;
}

// One step of the computation rules at the head of `e`.
std::optional<Expr> headStep(const Expr& e) {
    const auto& k = e->kids;
    switch (e->kind) {
    case Kind::Proj1:
        if (k[0]->kind == Kind::Pair) return k[0]->kids[0];
        break;
    case Kind::Proj2:
        if (k[0]->kind == Kind::Pair) return k[0]->kids[1];
        break;
    case Kind::Case: {
        if (k[0]->kind == Kind::Inl) return openBody(k[1], k[0]->kids[0]);
        if (k[0]->kind == Kind::Inr) return openBody(k[2], k[0]->kids[0]);
        // a case whose branches ignore the bound variable and agree
        if (isLocallyClosed(k[1]) && alphaEqual(k[1], k[2])) return k[1];
        // sum eta
        if (k[1]->kind == Kind::Inl && k[1]->kids[0]->kind == Kind::BVar && k[1]->kids[0]->index == 0 &&
            k[2]->kind == Kind::Inr && k[2]->kids[0]->kind == Kind::BVar && k[2]->kids[0]->index == 0)
            return k[0];
        break;
    }
    case Kind::RecL:
        if (k[0]->kind == Kind::Nil) return k[1];
        if (k[0]->kind == Kind::Cons) {
            const Expr vals[] = {mk::rebuild(e, {k[0]->kids[0], k[1], k[2]}), k[0]->kids[1]};
            return openBody(k[2], vals);
        }
        break;
    case Kind::QuotElim:
        if (k[0]->kind == Kind::ClassOf) return openBody(k[1], k[0]->kids[1]);
        break;
    case Kind::Pair:
        if (k[0]->kind == Kind::Proj1 && k[1]->kind == Kind::Proj2 && alphaEqual(k[0]->kids[0], k[1]->kids[0]))
            return k[0]->kids[0];
        break;
    default:
        break;
    }
    return std::nullopt;
}

Expr computeNf(const Expr& e, std::size_t& fuel) {
    if (isTypeKind(e->kind) || e->kids.empty()) return e;
    std::vector<Expr> kids;
    kids.reserve(e->kids.size());
    bool changed = false;
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
        const Expr& c = e->kids[i];
        Expr r;
        if (childIsType(e->kind, i)) {
            r = c;
        } else if (int n = bindersAt(e->kind, i); n > 0) {
            std::vector<std::string> names;
            std::vector<Expr> vars;
            for (int j = 0; j < n; ++j) {
                names.push_back(internalName());
                vars.push_back(mk::var(names.back()));
            }
            r = closeBody(computeNf(openBody(c, vars), fuel), names);
        } else {
            r = computeNf(c, fuel);
        }
        changed |= r != c;
        kids.push_back(std::move(r));
    }
    Expr cur = changed ? mk::rebuild(e, std::move(kids)) : e;
    while (fuel > 0) {
        auto next = headStep(cur);
        if (!next) break;
        --fuel;
        cur = computeNf(*next, fuel);
    }
    return cur;
}

bool matchPattern(const Expr& pat, const Expr& term, const std::set<std::string>& metas,
                  std::map<std::string, Expr>& bind) {
    if (pat->kind == Kind::FVar && metas.count(pat->name)) {
        auto it = bind.find(pat->name);
        if (it != bind.end()) return alphaEqual(it->second, term);
        if (!isLocallyClosed(term)) return false;
        bind.emplace(pat->name, term);
        return true;
    }
    if (pat->kind != term->kind || pat->name != term->name || pat->index != term->index ||
        pat->kids.size() != term->kids.size())
        return false;
    for (std::size_t i = 0; i < pat->kids.size(); ++i)
        if (!matchPattern(pat->kids[i], term->kids[i], metas, bind)) return false;
    return true;
}

using SiteFn = std::function<std::optional<Expr>(const Context&, const Expr&)>;

}  // namespace

struct Checker::Rule {
    std::string name;
    RewriteStep::Kind kind;
    Context metas;  // pattern variables with their types
    Expr from;
    Expr to;
};

std::vector<Judgement> Derivation::allObligations() const {
    std::vector<Judgement> out = obligations;
    for (const auto& p : premises) {
        auto sub = p.allObligations();
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

std::size_t Derivation::size() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.size();
    return n;
}

std::string RewriteStep::str() const {
    static const char* kinds[] = {"axiom", "axiom-rev", "hyp", "hyp-rev"};
    std::string s = std::string(kinds[static_cast<int>(kind)]) + " " + name + " " + (side == Side::Left ? "L" : "R") + " @";
    for (auto p : position) s += " " + std::to_string(p);
    return s;
}

std::size_t EqCertificate::stepCount() const {
    std::size_t n = steps.size();
    for (const auto& b : branches) n += b.stepCount();
    return n;
}

bool contextInconsistent(const Context& ctx) {
    for (const auto& b : ctx)
        if (b.type && b.type->kind == Kind::Bot) return true;
    return false;
}

Checker::Checker(const TheoryPresentation& theory, CheckerOptions opts) : theory_(&theory), opts_(opts) {}

// ---------------------------------------------------------------- checking

Derivation Checker::checkContext(const Context& ctx) const {
    Derivation d{"context", Judgement::typeJ(ctx, mk::top()), {}, {}};
    std::set<std::string> seen;
    Context prefix;
    for (const auto& b : ctx) {
        if (!seen.insert(b.name).second) throw ScopeError("duplicate context variable '" + b.name + "'");
        if (!b.type) throw TypeError("context variable '" + b.name + "' has no type");
        d.premises.push_back(checkType(prefix, b.type));
        prefix.push_back(b);
    }
    return d;
}

Derivation Checker::checkType(const Context& ctx, const Expr& type) const {
    requireScoped(ctx, type);
    Derivation d;
    checkTypeImpl(ctx, type, d);
    return d;
}

Derivation Checker::checkTerm(const Context& ctx, const Expr& term, const Expr& type) const {
    requireScoped(ctx, term);
    requireScoped(ctx, type);
    Derivation d;
    checkTermImpl(ctx, term, type, d);
    return d;
}

Expr Checker::inferType(const Context& ctx, const Expr& term) const {
    requireScoped(ctx, term);
    return inferImpl(ctx, term, nullptr);
}

Derivation Checker::check(const Judgement& j) const {
    requireWellScoped(j);
    Derivation d;
    d.conclusion = j;
    d.premises.push_back(checkContext(j.ctx));
    switch (j.form) {
    case Judgement::Form::Type:
        d.rule = "type";
        d.premises.push_back(checkType(j.ctx, j.type));
        break;
    case Judgement::Form::TypeEq:
        d.rule = "type-eq";
        d.premises.push_back(checkType(j.ctx, j.type));
        d.premises.push_back(checkType(j.ctx, j.type2));
        if (!typesConvertible(j.ctx, j.type, j.type2))
            throw TypeError("types not equal: " + show(j.type) + " vs " + show(j.type2));
        break;
    case Judgement::Form::Term:
        d.rule = "term";
        d.premises.push_back(checkType(j.ctx, j.type));
        d.premises.push_back(checkTerm(j.ctx, j.term, j.type));
        break;
    case Judgement::Form::TermEq: {
        d.rule = "term-eq";
        d.premises.push_back(checkType(j.ctx, j.type));
        d.premises.push_back(checkTerm(j.ctx, j.term, j.type));
        d.premises.push_back(checkTerm(j.ctx, j.term2, j.type));
        if (!checkEqual(j.ctx, j.term, j.term2, j.type).proved()) d.obligations.push_back(j);
        break;
    }
    }
    return d;
}

void Checker::checkTypeImpl(const Context& ctx, const Expr& b, Derivation& d) const {
    d.conclusion = Judgement::typeJ(ctx, b);
    auto sub = [&](const Context& c, const Expr& t) {
        d.premises.emplace_back();
        checkTypeImpl(c, t, d.premises.back());
    };
    switch (b->kind) {
    case Kind::Top: d.rule = "top-form"; return;
    case Kind::Bot: d.rule = "bot-form"; return;
    case Kind::Proper:
        if (!theory_->hasType(b->name)) throw ScopeError("unknown proper type '" + b->name + "'");
        d.rule = "proper-type";
        return;
    case Kind::Eq:
        d.rule = "eq-form";
        sub(ctx, b->kids[0]);
        d.premises.emplace_back();
        checkTermImpl(ctx, b->kids[1], b->kids[0], d.premises.back());
        d.premises.emplace_back();
        checkTermImpl(ctx, b->kids[2], b->kids[0], d.premises.back());
        return;
    case Kind::Sigma: {
        d.rule = "sigma-form";
        sub(ctx, b->kids[0]);
        std::string x = internalName();
        sub(extend(ctx, x, b->kids[0]), openBody(b->kids[1], mk::var(x)));
        return;
    }
    case Kind::Sum:
        d.rule = "sum-form";
        sub(ctx, b->kids[0]);
        sub(ctx, b->kids[1]);
        return;
    case Kind::List:
        d.rule = "list-form";
        sub(ctx, b->kids[0]);
        return;
    case Kind::Quot: {
        d.rule = "quot-form";
        sub(ctx, b->kids[0]);
        std::string x = internalName(), y = internalName();
        const Expr vs[] = {mk::var(x), mk::var(y)};
        sub(extend(extend(ctx, x, b->kids[0]), y, b->kids[0]), openBody(b->kids[1], vs));
        return;
    }
    case Kind::BVar: throw ScopeError("loose bound variable");
    default: throw TypeError("expected a type, found term " + show(b));
    }
}

Expr Checker::inferImpl(const Context& ctx, const Expr& t, Derivation* d) const {
    Derivation local;
    Derivation& node = d ? *d : local;
    auto premiseInfer = [&](const Context& c, const Expr& e) {
        if (!d) return inferImpl(c, e, nullptr);
        node.premises.emplace_back();
        return inferImpl(c, e, &node.premises.back());
    };
    auto premiseCheck = [&](const Context& c, const Expr& e, const Expr& ty) {
        node.premises.emplace_back();
        checkTermImpl(c, e, ty, node.premises.back());
        if (!d) node.premises.pop_back();
    };
    Expr result;
    switch (t->kind) {
    case Kind::FVar: {
        const Binding* b = lookup(ctx, t->name);
        if (!b) throw ScopeError("unbound variable '" + t->name + "'");
        if (!b->type) throw TypeError("variable '" + t->name + "' has unknown type");
        node.rule = "var";
        result = b->type;
        break;
    }
    case Kind::BVar: throw ScopeError("loose bound variable");
    case Kind::Star:
        node.rule = "top-intro";
        result = mk::top();
        break;
    case Kind::Pair: {
        node.rule = "pair-infer";
        Expr a = premiseInfer(ctx, t->kids[0]);
        Expr b = premiseInfer(ctx, t->kids[1]);
        result = mk::sigma(internalName(), a, b);
        break;
    }
    case Kind::Proj1:
    case Kind::Proj2: {
        node.rule = t->kind == Kind::Proj1 ? "proj1" : "proj2";
        Expr s = premiseInfer(ctx, t->kids[0]);
        if (s->kind != Kind::Sigma) throw TypeError("projection from non-Sigma type " + show(s));
        result = t->kind == Kind::Proj1 ? s->kids[0] : openBody(s->kids[1], mk::proj1(t->kids[0]));
        break;
    }
    case Kind::Cons: {
        node.rule = "list-cons";
        Expr l = premiseInfer(ctx, t->kids[0]);
        if (l->kind != Kind::List) throw TypeError("cons onto non-list type " + show(l));
        premiseCheck(ctx, t->kids[1], l->kids[0]);
        result = l;
        break;
    }
    case Kind::Case: {
        node.rule = "sum-elim";
        Expr s = premiseInfer(ctx, t->kids[0]);
        if (s->kind != Kind::Sum) throw TypeError("case on non-sum type " + show(s));
        std::string x = internalName();
        Expr l = premiseInfer(extend(ctx, x, s->kids[0]), openBody(t->kids[1], mk::var(x)));
        if (occursFree(l, x)) throw TypeError("case branch type depends on the bound variable");
        std::string y = internalName();
        premiseCheck(extend(ctx, y, s->kids[1]), openBody(t->kids[2], mk::var(y)), l);
        result = l;
        break;
    }
    case Kind::RecL: {
        node.rule = "list-rec";
        Expr s = premiseInfer(ctx, t->kids[0]);
        if (s->kind != Kind::List) throw TypeError("recursor on non-list type " + show(s));
        Expr y = premiseInfer(ctx, t->kids[1]);
        std::string acc = internalName(), el = internalName();
        const Expr vs[] = {mk::var(acc), mk::var(el)};
        premiseCheck(extend(extend(ctx, acc, y), el, s->kids[0]), openBody(t->kids[2], vs), y);
        result = y;
        break;
    }
    case Kind::ClassOf: {
        node.rule = "quot-intro";
        Expr q = t->kids[0];
        node.premises.emplace_back();
        checkTypeImpl(ctx, q, node.premises.back());
        if (!d) node.premises.pop_back();
        if (q->kind != Kind::Quot) throw TypeError("class annotation is not a quotient type");
        premiseCheck(ctx, t->kids[1], q->kids[0]);
        result = q;
        break;
    }
    case Kind::QuotElim: {
        node.rule = "quot-elim";
        Expr s = premiseInfer(ctx, t->kids[0]);
        if (s->kind != Kind::Quot) throw TypeError("quotient elimination on non-quotient " + show(s));
        std::string x = internalName();
        Expr e = premiseInfer(extend(ctx, x, s->kids[0]), openBody(t->kids[1], mk::var(x)));
        if (occursFree(e, x)) throw TypeError("quotient elimination type depends on the bound variable");
        Derivation tmp;
        checkTermImpl(ctx, t, e, tmp);  // records the well-definedness obligation
        for (auto& o : tmp.obligations) node.obligations.push_back(o);
        result = e;
        break;
    }
    case Kind::App: {
        node.rule = "proper-term";
        const ProperTermDecl* decl = theory_->term(t->name);
        if (!decl) throw ScopeError("unknown proper term '" + t->name + "'");
        if (decl->ctx.size() != t->kids.size())
            throw TypeError("arity mismatch for '" + t->name + "': expected " + std::to_string(decl->ctx.size()) +
                            ", got " + std::to_string(t->kids.size()));
        std::vector<std::pair<std::string, Expr>> s;
        for (std::size_t i = 0; i < t->kids.size(); ++i) {
            premiseCheck(ctx, t->kids[i], substituteAll(decl->ctx[i].type, s));
            s.emplace_back(decl->ctx[i].name, t->kids[i]);
        }
        result = substituteAll(decl->type, s);
        break;
    }
    case Kind::Iso:
    case Kind::IsoInv: {
        node.rule = t->kind == Kind::Iso ? "coherent-iso" : "coherent-iso-inv";
        const CoherenceEntry* e = theory_->coherenceEntry(t->name);
        if (!e) throw ScopeError("unknown coherence constant '" + t->name + "'");
        const bool fwd = t->kind == Kind::Iso;
        premiseCheck(ctx, t->kids[0], fwd ? e->domain : e->codomain);
        result = fwd ? e->codomain : e->domain;
        break;
    }
    case Kind::Refl:
    case Kind::Inl:
    case Kind::Inr:
    case Kind::Nil:
    case Kind::Abort:
        throw TypeError(std::string("cannot infer the type of '") + kindName(t->kind) + "' without an expected type");
    default:
        throw TypeError("expected a term, found type " + show(t));
    }
    node.conclusion = Judgement::termJ(ctx, t, result);
    return result;
}

void Checker::checkTermImpl(const Context& ctx, const Expr& t, const Expr& b, Derivation& d) const {
    d.conclusion = Judgement::termJ(ctx, t, b);
    auto sub = [&](const Context& c, const Expr& e, const Expr& ty) {
        d.premises.emplace_back();
        checkTermImpl(c, e, ty, d.premises.back());
    };
    auto expect = [&](Kind k) {
        if (b->kind != k)
            throw TypeError(std::string("'") + kindName(t->kind) + "' cannot have type " + show(b));
    };
    switch (t->kind) {
    case Kind::Star:
        expect(Kind::Top);
        d.rule = "top-intro";
        return;
    case Kind::Refl: {
        expect(Kind::Eq);
        d.rule = "eq-intro";
        if (!checkEqual(ctx, b->kids[1], b->kids[2], b->kids[0]).proved())
            d.obligations.push_back(Judgement::termEqJ(ctx, b->kids[1], b->kids[2], b->kids[0]));
        return;
    }
    case Kind::Pair:
        if (b->kind != Kind::Sigma) break;
        d.rule = "sigma-intro";
        sub(ctx, t->kids[0], b->kids[0]);
        sub(ctx, t->kids[1], openBody(b->kids[1], t->kids[0]));
        return;
    case Kind::Inl:
    case Kind::Inr:
        expect(Kind::Sum);
        d.rule = t->kind == Kind::Inl ? "sum-inl" : "sum-inr";
        sub(ctx, t->kids[0], b->kids[t->kind == Kind::Inl ? 0 : 1]);
        return;
    case Kind::Nil:
        expect(Kind::List);
        d.rule = "list-nil";
        return;
    case Kind::Cons:
        expect(Kind::List);
        d.rule = "list-cons";
        sub(ctx, t->kids[0], b);
        sub(ctx, t->kids[1], b->kids[0]);
        return;
    case Kind::Abort: {
        d.rule = "bot-elim";
        d.premises.emplace_back();
        Expr s = inferImpl(ctx, t->kids[0], &d.premises.back());
        if (s->kind != Kind::Bot) throw TypeError("abort of non-empty type " + show(s));
        return;
    }
    case Kind::Case: {
        d.rule = "sum-elim";
        d.premises.emplace_back();
        Expr s = inferImpl(ctx, t->kids[0], &d.premises.back());
        if (s->kind != Kind::Sum) throw TypeError("case on non-sum type " + show(s));
        std::string x = internalName(), y = internalName();
        sub(extend(ctx, x, s->kids[0]), openBody(t->kids[1], mk::var(x)), b);
        sub(extend(ctx, y, s->kids[1]), openBody(t->kids[2], mk::var(y)), b);
        return;
    }
    case Kind::RecL: {
        d.rule = "list-rec";
        d.premises.emplace_back();
        Expr s = inferImpl(ctx, t->kids[0], &d.premises.back());
        if (s->kind != Kind::List) throw TypeError("recursor on non-list type " + show(s));
        sub(ctx, t->kids[1], b);
        std::string acc = internalName(), el = internalName();
        const Expr vs[] = {mk::var(acc), mk::var(el)};
        sub(extend(extend(ctx, acc, b), el, s->kids[0]), openBody(t->kids[2], vs), b);
        return;
    }
    case Kind::QuotElim: {
        d.rule = "quot-elim";
        d.premises.emplace_back();
        Expr s = inferImpl(ctx, t->kids[0], &d.premises.back());
        if (s->kind != Kind::Quot) throw TypeError("quotient elimination on non-quotient " + show(s));
        std::string x = internalName();
        sub(extend(ctx, x, s->kids[0]), openBody(t->kids[1], mk::var(x)), b);
        // e[x] = e[y] whenever R(x, y)
        std::set<std::string> avoid = contextNames(ctx);
        for (const auto& v : freeVars(t)) avoid.insert(v);
        std::string u = freshName("u", avoid);
        avoid.insert(u);
        std::string v = freshName("v", avoid);
        avoid.insert(v);
        std::string r = freshName("r", avoid);
        const Expr uv[] = {mk::var(u), mk::var(v)};
        Context wctx = extend(extend(extend(ctx, u, s->kids[0]), v, s->kids[0]), r, openBody(s->kids[1], uv));
        Expr lhs = openBody(t->kids[1], mk::var(u));
        Expr rhs = openBody(t->kids[1], mk::var(v));
        if (!checkEqual(wctx, lhs, rhs, b).proved()) d.obligations.push_back(Judgement::termEqJ(wctx, lhs, rhs, b));
        return;
    }
    default:
        break;
    }
    d.rule = "conv";
    d.premises.emplace_back();
    Expr inferred = inferImpl(ctx, t, &d.premises.back());
    if (!typesConvertible(ctx, inferred, b))
        throw TypeError("type mismatch for " + show(t) + ": expected " + show(b) + ", got " + show(inferred));
}

// ------------------------------------------------------------- conversion

Expr Checker::computeNormal(const Expr& term) const {
    std::size_t fuel = opts_.fuel;
    return computeNf(term, fuel);
}

bool Checker::typesConvertible(const Context& ctx, const Expr& a, const Expr& b) const {
    if (alphaEqual(a, b)) return true;
    for (const auto& ax : theory_->typeAxioms) {
        std::set<std::string> metas = contextNames(ax.ctx);
        for (int dir = 0; dir < 2; ++dir) {
            std::map<std::string, Expr> bind;
            if (matchPattern(dir ? ax.rhs : ax.lhs, a, metas, bind) && matchPattern(dir ? ax.lhs : ax.rhs, b, metas, bind))
                return true;
        }
    }
    if (a->kind != b->kind || a->name != b->name) return false;
    switch (a->kind) {
    case Kind::Eq:
        return typesConvertible(ctx, a->kids[0], b->kids[0]) &&
               checkEqual(ctx, a->kids[1], b->kids[1], a->kids[0]).proved() &&
               checkEqual(ctx, a->kids[2], b->kids[2], a->kids[0]).proved();
    case Kind::Sigma: {
        if (!typesConvertible(ctx, a->kids[0], b->kids[0])) return false;
        std::string x = internalName();
        return typesConvertible(extend(ctx, x, a->kids[0]), openBody(a->kids[1], mk::var(x)),
                                openBody(b->kids[1], mk::var(x)));
    }
    case Kind::Sum:
        return typesConvertible(ctx, a->kids[0], b->kids[0]) && typesConvertible(ctx, a->kids[1], b->kids[1]);
    case Kind::List:
        return typesConvertible(ctx, a->kids[0], b->kids[0]);
    case Kind::Quot: {
        if (!typesConvertible(ctx, a->kids[0], b->kids[0])) return false;
        std::string x = internalName(), y = internalName();
        const Expr vs[] = {mk::var(x), mk::var(y)};
        return typesConvertible(extend(extend(ctx, x, a->kids[0]), y, a->kids[0]), openBody(a->kids[1], vs),
                                openBody(b->kids[1], vs));
    }
    default:
        return false;
    }
}

bool Checker::convertible(const Context& ctx, const Expr& t, const Expr& u, const Expr& type) const {
    if (alphaEqual(t, u)) return true;
    if (contextInconsistent(ctx)) return true;
    switch (type->kind) {
    case Kind::Top:
    case Kind::Eq:
        return true;
    case Kind::Sigma: {
        Expr l1 = computeNormal(mk::proj1(t));
        Expr r1 = computeNormal(mk::proj1(u));
        if (!convertible(ctx, l1, r1, type->kids[0])) return false;
        return convertible(ctx, computeNormal(mk::proj2(t)), computeNormal(mk::proj2(u)), openBody(type->kids[1], l1));
    }
    default:
        return convStruct(ctx, computeNormal(t), computeNormal(u), type);
    }
}

bool Checker::convArgs(const Context& ctx, const ProperTermDecl& decl, const Expr& a, const Expr& b) const {
    if (a->kids.size() != b->kids.size() || decl.ctx.size() != a->kids.size()) return false;
    std::vector<std::pair<std::string, Expr>> s;
    for (std::size_t i = 0; i < a->kids.size(); ++i) {
        if (!convertible(ctx, a->kids[i], b->kids[i], substituteAll(decl.ctx[i].type, s))) return false;
        s.emplace_back(decl.ctx[i].name, a->kids[i]);
    }
    return true;
}

bool Checker::convStruct(const Context& ctx, const Expr& a, const Expr& b, const Expr& type) const {
    if (alphaEqual(a, b)) return true;
    if (a->kind == Kind::Abort || b->kind == Kind::Abort) return true;  // the context proves Bot
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case Kind::Inl:
    case Kind::Inr:
        if (type->kind != Kind::Sum) return false;
        return convertible(ctx, a->kids[0], b->kids[0], type->kids[a->kind == Kind::Inl ? 0 : 1]);
    case Kind::Nil:
        return true;
    case Kind::Cons:
        if (type->kind != Kind::List) return false;
        return convertible(ctx, a->kids[0], b->kids[0], type) && convertible(ctx, a->kids[1], b->kids[1], type->kids[0]);
    case Kind::ClassOf:
        if (type->kind != Kind::Quot) return false;
        return convertible(ctx, a->kids[1], b->kids[1], type->kids[0]);
    case Kind::Star:
    case Kind::Refl:
        return true;
    default:
        return convNeutral(ctx, a, b);
    }
}

bool Checker::convNeutral(const Context& ctx, const Expr& a, const Expr& b) const {
    if (alphaEqual(a, b)) return true;
    if (a->kind != b->kind || a->name != b->name || a->kids.size() != b->kids.size()) return false;
    try {
        switch (a->kind) {
        case Kind::Proj1:
        case Kind::Proj2:
            return convNeutral(ctx, a->kids[0], b->kids[0]);
        case Kind::App: {
            const ProperTermDecl* decl = theory_->term(a->name);
            return decl && convArgs(ctx, *decl, a, b);
        }
        case Kind::Iso:
        case Kind::IsoInv: {
            const CoherenceEntry* e = theory_->coherenceEntry(a->name);
            if (!e) return false;
            return convertible(ctx, a->kids[0], b->kids[0], a->kind == Kind::Iso ? e->domain : e->codomain);
        }
        case Kind::Case: {
            if (!convNeutral(ctx, a->kids[0], b->kids[0])) return false;
            Expr s = inferImpl(ctx, a->kids[0], nullptr);
            Expr ty = inferImpl(ctx, a, nullptr);
            if (s->kind != Kind::Sum) return false;
            for (std::size_t i = 1; i <= 2; ++i) {
                std::string x = internalName();
                if (!convertible(extend(ctx, x, s->kids[i - 1]), openBody(a->kids[i], mk::var(x)),
                                 openBody(b->kids[i], mk::var(x)), ty))
                    return false;
            }
            return true;
        }
        case Kind::RecL: {
            if (!convNeutral(ctx, a->kids[0], b->kids[0])) return false;
            Expr s = inferImpl(ctx, a->kids[0], nullptr);
            Expr ty = inferImpl(ctx, a->kids[1], nullptr);
            if (s->kind != Kind::List || !convertible(ctx, a->kids[1], b->kids[1], ty)) return false;
            std::string acc = internalName(), el = internalName();
            const Expr vs[] = {mk::var(acc), mk::var(el)};
            return convertible(extend(extend(ctx, acc, ty), el, s->kids[0]), openBody(a->kids[2], vs),
                               openBody(b->kids[2], vs), ty);
        }
        case Kind::QuotElim: {
            if (!convNeutral(ctx, a->kids[0], b->kids[0])) return false;
            Expr s = inferImpl(ctx, a->kids[0], nullptr);
            if (s->kind != Kind::Quot) return false;
            std::string x = internalName();
            Context c2 = extend(ctx, x, s->kids[0]);
            Expr body = openBody(a->kids[1], mk::var(x));
            Expr ty = inferImpl(c2, body, nullptr);
            return convertible(c2, body, openBody(b->kids[1], mk::var(x)), ty);
        }
        default:
            return false;
        }
    } catch (const Error&) {
        return false;
    }
}

// ------------------------------------------------------------- rewriting

namespace {

std::vector<Expr> binderTypes(const Checker& ck, const Context& ctx, const Expr& e, std::size_t i) {
    auto tryInfer = [&](const Expr& t) -> Expr {
        try {
            return ck.inferType(ctx, t);
        } catch (const Error&) {
            return nullptr;
        }
    };
    switch (e->kind) {
    case Kind::Case: {
        Expr s = tryInfer(e->kids[0]);
        return {s && s->kind == Kind::Sum ? s->kids[i - 1] : nullptr};
    }
    case Kind::RecL: {
        Expr s = tryInfer(e->kids[0]);
        return {tryInfer(e->kids[1]), s && s->kind == Kind::List ? s->kids[0] : nullptr};
    }
    case Kind::QuotElim: {
        Expr s = tryInfer(e->kids[0]);
        return {s && s->kind == Kind::Quot ? s->kids[0] : nullptr};
    }
    default:
        return std::vector<Expr>(static_cast<std::size_t>(bindersAt(e->kind, i)), nullptr);
    }
}

std::optional<Expr> rewriteAt(const Checker& ck, const Context& ctx, const Expr& e, std::span<const std::size_t> path,
                              const SiteFn& fn) {
    if (path.empty()) return fn(ctx, e);
    std::size_t i = path.front();
    if (isTypeKind(e->kind) || i >= e->kids.size() || childIsType(e->kind, i)) return std::nullopt;
    int n = bindersAt(e->kind, i);
    std::optional<Expr> r;
    if (n == 0) {
        r = rewriteAt(ck, ctx, e->kids[i], path.subspan(1), fn);
    } else {
        auto types = binderTypes(ck, ctx, e, i);
        std::vector<std::string> names;
        std::vector<Expr> vars;
        Context inner = ctx;
        for (int j = 0; j < n; ++j) {
            names.push_back(internalName());
            vars.push_back(mk::var(names.back()));
            inner.push_back(Binding{names.back(), types[static_cast<std::size_t>(j)]});
        }
        r = rewriteAt(ck, inner, openBody(e->kids[i], vars), path.subspan(1), fn);
        if (r) r = closeBody(*r, names);
    }
    if (!r) return std::nullopt;
    std::vector<Expr> kids = e->kids;
    kids[i] = *r;
    return mk::rebuild(e, std::move(kids));
}

// Preorder walk over term positions; stops at the first site where fn succeeds.
bool firstSite(const Checker& ck, const Context& ctx, const Expr& e, std::vector<std::size_t>& path,
               const std::function<bool(const Context&, const Expr&)>& fn) {
    if (isTypeKind(e->kind)) return false;
    if (fn(ctx, e)) return true;
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
        if (childIsType(e->kind, i)) continue;
        path.push_back(i);
        int n = bindersAt(e->kind, i);
        bool found;
        if (n == 0) {
            found = firstSite(ck, ctx, e->kids[i], path, fn);
        } else {
            auto types = binderTypes(ck, ctx, e, i);
            std::vector<Expr> vars;
            Context inner = ctx;
            for (int j = 0; j < n; ++j) {
                std::string nm = internalName();
                vars.push_back(mk::var(nm));
                inner.push_back(Binding{nm, types[static_cast<std::size_t>(j)]});
            }
            found = firstSite(ck, inner, openBody(e->kids[i], vars), path, fn);
        }
        if (found) return true;
        path.pop_back();
    }
    return false;
}

}  // namespace

std::vector<Checker::Rule> Checker::rules(const Context& ctx, bool orientedOnly) const {
    std::vector<Rule> out;
    for (const auto& ax : theory_->termAxioms) {
        const bool fwd = ax.orientation != Orientation::RightToLeft;
        const bool bwd = ax.orientation != Orientation::LeftToRight;
        if (orientedOnly && ax.orientation == Orientation::None) continue;
        if (fwd || !orientedOnly) out.push_back({ax.name, RewriteStep::Kind::Axiom, ax.ctx, ax.lhs, ax.rhs});
        if (bwd || !orientedOnly) out.push_back({ax.name, RewriteStep::Kind::AxiomReverse, ax.ctx, ax.rhs, ax.lhs});
    }
    if (!orientedOnly) {
        for (const auto& b : ctx) {
            if (!b.type || b.type->kind != Kind::Eq) continue;
            out.push_back({b.name, RewriteStep::Kind::Hypothesis, {}, b.type->kids[1], b.type->kids[2]});
            out.push_back({b.name, RewriteStep::Kind::HypothesisReverse, {}, b.type->kids[2], b.type->kids[1]});
        }
    }
    // A bare pattern variable on the left matches everything; such rules are
    // only usable through explicit certificates.
    std::erase_if(out, [](const Rule& r) {
        if (r.from->kind != Kind::FVar) return false;
        for (const auto& m : r.metas)
            if (m.name == r.from->name) return true;
        return false;
    });
    return out;
}

namespace {

// Matches `rule.from` at `site` and returns the instantiated right-hand side,
// verifying that each pattern variable is bound to a term of its declared type.
std::optional<Expr> instantiateRule(const Checker& ck, const Context& lctx, const Expr& site,
                                    const Context& metas, const Expr& from, const Expr& to,
                                    const std::vector<std::pair<std::string, Expr>>& explicitInst) {
    std::set<std::string> metaNames = contextNames(metas);
    std::map<std::string, Expr> bind;
    for (const auto& [x, e] : explicitInst) bind[x] = e;
    if (!matchPattern(from, site, metaNames, bind)) return std::nullopt;
    std::vector<std::pair<std::string, Expr>> s;
    for (const auto& m : metas) {
        auto it = bind.find(m.name);
        if (it == bind.end()) return std::nullopt;
        try {
            AutomationGuard guard;
            Derivation d = ck.checkTerm(lctx, it->second, substituteAll(m.type, s));
            (void)d;
        } catch (const Error&) {
            return std::nullopt;
        }
        s.emplace_back(m.name, it->second);
    }
    return substituteAll(to, s);
}

}  // namespace

std::optional<Expr> Checker::applyStep(const Context& ctx, const Expr& term, const RewriteStep& step) const {
    Context metas;
    Expr from, to;
    switch (step.kind) {
    case RewriteStep::Kind::Axiom:
    case RewriteStep::Kind::AxiomReverse: {
        const TermAxiom* ax = theory_->axiom(step.name);
        if (!ax) return std::nullopt;
        metas = ax->ctx;
        const bool fwd = step.kind == RewriteStep::Kind::Axiom;
        from = fwd ? ax->lhs : ax->rhs;
        to = fwd ? ax->rhs : ax->lhs;
        break;
    }
    case RewriteStep::Kind::Hypothesis:
    case RewriteStep::Kind::HypothesisReverse: {
        const Binding* b = lookup(ctx, step.name);
        if (!b || !b->type || b->type->kind != Kind::Eq) return std::nullopt;
        const bool fwd = step.kind == RewriteStep::Kind::Hypothesis;
        from = b->type->kids[fwd ? 1 : 2];
        to = b->type->kids[fwd ? 2 : 1];
        break;
    }
    }
    return rewriteAt(*this, ctx, term, step.position, [&](const Context& lctx, const Expr& site) {
        return instantiateRule(*this, lctx, site, metas, from, to, step.instantiation);
    });
}

NormalizeResult Checker::normalize(const Context& ctx, const Expr& term, std::optional<std::size_t> fuel) const {
    std::size_t left = fuel.value_or(opts_.fuel);
    NormalizeResult res;
    std::size_t before = left;
    res.term = computeNf(term, left);
    if (left == 0 && before > 0) res.normal = false;
    auto rs = rules(ctx, /*orientedOnly=*/true);
    while (true) {
        if (left == 0) {
            res.normal = false;
            break;
        }
        std::vector<std::size_t> path;
        std::optional<Expr> next;
        RewriteStep step;
        bool found = firstSite(*this, ctx, res.term, path, [&](const Context& lctx, const Expr& site) {
            for (const auto& r : rs) {
                if (auto out = instantiateRule(*this, lctx, site, r.metas, r.from, r.to, {})) {
                    step.kind = r.kind;
                    step.name = r.name;
                    return true;
                }
            }
            return false;
        });
        if (!found) break;
        step.position = path;
        next = applyStep(ctx, res.term, step);
        if (!next) break;  // cannot happen: the site matched above
        res.trace.push_back(step);
        ++res.steps;
        --left;
        std::size_t b2 = left;
        res.term = computeNf(*next, left);
        if (left == 0 && b2 > 0 && headStep(res.term)) res.normal = false;
    }
    return res;
}

// --------------------------------------------------------------- equality

namespace {

struct SplitBranch {
    Context ctx;
    Expr t, u, type;
};

std::vector<SplitBranch> splitOn(const Context& ctx, const std::string& var, const Expr& t, const Expr& u,
                                 const Expr& type) {
    std::size_t pos = 0;
    while (pos < ctx.size() && ctx[pos].name != var) ++pos;
    if (pos == ctx.size() || !ctx[pos].type || ctx[pos].type->kind != Kind::Sum)
        throw CertificateError("cannot split on '" + var + "': not a sum-typed context variable");
    std::set<std::string> avoid = contextNames(ctx);
    for (const Expr& e : {t, u, type})
        for (const auto& v : freeVars(e)) avoid.insert(v);
    std::string fresh = freshName(var, avoid);
    std::vector<SplitBranch> out;
    for (int side = 0; side < 2; ++side) {
        Expr inj = side == 0 ? mk::inl(mk::var(fresh)) : mk::inr(mk::var(fresh));
        SplitBranch b;
        for (std::size_t i = 0; i < ctx.size(); ++i) {
            if (i < pos) b.ctx.push_back(ctx[i]);
            else if (i == pos) b.ctx.push_back(Binding{fresh, ctx[pos].type->kids[static_cast<std::size_t>(side)]});
            else b.ctx.push_back(Binding{ctx[i].name, substitute(ctx[i].type, var, inj)});
        }
        b.t = substitute(t, var, inj);
        b.u = substitute(u, var, inj);
        b.type = substitute(type, var, inj);
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace

EqVerdict Checker::checkEqual(const Context& ctx, const Expr& t, const Expr& u, const Expr& type,
                              const EqCertificate* cert) const {
    EqVerdict v;
    if (cert) {
        replay(ctx, t, u, type, *cert);
        v.status = EqVerdict::Status::Proved;
        v.certificate = *cert;
        return v;
    }
    if (convertible(ctx, t, u, type)) {
        v.status = EqVerdict::Status::Proved;
        return v;
    }
    if (t_automationDepth > 0) return v;
    AutomationGuard guard;
    if (auto c = search(ctx, t, u, type, opts_.instDepth)) {
        v.status = EqVerdict::Status::Proved;
        v.certificate = std::move(*c);
    }
    return v;
}

std::optional<EqCertificate> Checker::search(const Context& ctx, const Expr& t, const Expr& u, const Expr& type,
                                             std::size_t splits) const {
    NormalizeResult nl = normalize(ctx, t);
    NormalizeResult nr = normalize(ctx, u);
    EqCertificate cert;
    for (auto s : nl.trace) {
        s.side = RewriteStep::Side::Left;
        cert.steps.push_back(s);
    }
    for (auto s : nr.trace) {
        s.side = RewriteStep::Side::Right;
        cert.steps.push_back(s);
    }
    if (convertible(ctx, nl.term, nr.term, type)) return cert;

    // Bounded search over axiom instances in both directions.
    struct SearchNode {
        Expr term;
        int parent;
        RewriteStep step;
    };
    std::vector<SearchNode> sides[2];
    std::unordered_map<std::string, int> seen[2];
    sides[0].push_back({nl.term, -1, {}});
    sides[1].push_back({nr.term, -1, {}});
    seen[0].emplace(exprKey(nl.term), 0);
    seen[1].emplace(exprKey(nr.term), 0);
    auto rs = rules(ctx, /*orientedOnly=*/false);

    auto pathOf = [&](int side, int idx) {
        std::vector<RewriteStep> steps;
        for (int i = idx; i > 0; i = sides[side][static_cast<std::size_t>(i)].parent)
            steps.push_back(sides[side][static_cast<std::size_t>(i)].step);
        std::reverse(steps.begin(), steps.end());
        return steps;
    };
    auto meet = [&](int li, int ri) {
        EqCertificate c = cert;
        for (auto s : pathOf(0, li)) {
            s.side = RewriteStep::Side::Left;
            c.steps.push_back(s);
        }
        for (auto s : pathOf(1, ri)) {
            s.side = RewriteStep::Side::Right;
            c.steps.push_back(s);
        }
        return c;
    };

    std::size_t frontierStart[2] = {0, 0};
    for (std::size_t level = 0; level < opts_.instDepth && !rs.empty(); ++level) {
        for (int side = 0; side < 2; ++side) {
            const std::size_t end = sides[side].size();
            for (std::size_t idx = frontierStart[side]; idx < end; ++idx) {
                if (sides[side].size() >= opts_.searchFrontier) break;
                Expr cur = sides[side][idx].term;
                // enumerate every site and rule
                std::vector<std::pair<std::vector<std::size_t>, const Rule*>> hits;
                std::vector<std::size_t> path;
                firstSite(*this, ctx, cur, path, [&](const Context& lctx, const Expr& site) {
                    for (const auto& r : rs)
                        if (instantiateRule(*this, lctx, site, r.metas, r.from, r.to, {})) hits.emplace_back(path, &r);
                    return false;
                });
                for (const auto& [pos, r] : hits) {
                    RewriteStep st;
                    st.kind = r->kind;
                    st.name = r->name;
                    st.position = pos;
                    auto next = applyStep(ctx, cur, st);
                    if (!next) continue;
                    Expr nf = computeNormal(*next);
                    std::string key = exprKey(nf);
                    if (seen[side].count(key)) continue;
                    int id = static_cast<int>(sides[side].size());
                    seen[side].emplace(key, id);
                    sides[side].push_back({nf, static_cast<int>(idx), st});
                    auto other = seen[1 - side].find(key);
                    if (other != seen[1 - side].end())
                        return side == 0 ? meet(id, other->second) : meet(other->second, id);
                    for (std::size_t j = 0; j < sides[1 - side].size() && j < 64; ++j) {
                        const Expr& o = sides[1 - side][j].term;
                        if (side == 0 ? convertible(ctx, nf, o, type) : convertible(ctx, o, nf, type))
                            return side == 0 ? meet(id, static_cast<int>(j)) : meet(static_cast<int>(j), id);
                    }
                }
            }
            frontierStart[side] = end;
        }
    }

    // Case split on a sum-typed variable that occurs in the goal.
    if (splits > 0) {
        for (const auto& b : ctx) {
            if (!b.type || b.type->kind != Kind::Sum) continue;
            if (!occursFree(t, b.name) && !occursFree(u, b.name)) continue;
            auto branches = splitOn(ctx, b.name, t, u, type);
            EqCertificate sc;
            sc.splitVar = b.name;
            bool ok = true;
            for (const auto& br : branches) {
                auto sub = convertible(br.ctx, br.t, br.u, br.type)
                               ? std::optional<EqCertificate>(EqCertificate{})
                               : search(br.ctx, br.t, br.u, br.type, splits - 1);
                if (!sub) {
                    ok = false;
                    break;
                }
                sc.branches.push_back(std::move(*sub));
            }
            if (ok) return sc;
        }
    }
    return std::nullopt;
}

void Checker::replay(const Context& ctx, const Expr& t, const Expr& u, const Expr& type,
                     const EqCertificate& cert) const {
    Expr l = t, r = u;
    for (std::size_t i = 0; i < cert.steps.size(); ++i) {
        const auto& st = cert.steps[i];
        Expr& side = st.side == RewriteStep::Side::Left ? l : r;
        side = computeNormal(side);
        auto next = applyStep(ctx, side, st);
        if (!next)
            throw CertificateError("step " + std::to_string(i + 1) + " (" + st.str() + ") does not apply to " +
                                   show(side));
        side = *next;
    }
    if (cert.splitVar.empty()) {
        if (!cert.branches.empty()) throw CertificateError("branches given without a split variable");
        if (!convertible(ctx, l, r, type))
            throw CertificateError("endpoints do not meet: " + show(computeNormal(l)) + " vs " + show(computeNormal(r)));
        return;
    }
    auto branches = splitOn(ctx, cert.splitVar, l, r, type);
    if (cert.branches.size() != branches.size())
        throw CertificateError("split on '" + cert.splitVar + "' needs " + std::to_string(branches.size()) + " branches");
    for (std::size_t i = 0; i < branches.size(); ++i)
        replay(branches[i].ctx, branches[i].t, branches[i].u, branches[i].type, cert.branches[i]);
}

}  // namespace au
