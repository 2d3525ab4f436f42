#include <algorithm>
#include <set>

#include "au/error.hpp"
#include "au/interp.hpp"

namespace au {

namespace {

Context prefix(const Context& ctx, std::size_t k) { return Context(ctx.begin(), ctx.begin() + static_cast<long>(k)); }

Judgement contextJudgement(const Context& ctx) {
    if (ctx.empty()) return Judgement::typeJ({}, mk::top());
    return Judgement::typeJ(prefix(ctx, ctx.size() - 1), ctx.back().type);
}

Judgement bodyJudgement(const Judgement& j) {
    std::string x = freshName("x" + std::to_string(j.ctx.size() + 1), contextNames(j.ctx));
    Context c = j.ctx;
    c.push_back({x, j.type->kids[0]});
    return Judgement::typeJ(std::move(c), openBody(j.type->kids[1], mk::var(x)));
}

[[noreturn]] void emptyMap() { throw ModelError("map out of an empty object applied"); }

}  // namespace

// ------------------------------------------------------------------ family

void IsoFamily::add(IsoComponent c) {
    if (index_.count(c.key)) return;
    index_[c.key] = comps_.size();
    comps_.push_back(std::move(c));
}

const IsoComponent* IsoFamily::find(const std::string& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &comps_[it->second];
}

IsoComponent* IsoFamily::mutableFind(const std::string& key) {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &comps_[it->second];
}

// --------------------------------------------------------------- generator

CoherenceGenerator::CoherenceGenerator(const TheoryPresentation& tcat, const ModelPresentation& realization,
                                       std::size_t depth, std::string idPrefix)
    : theory_(&tcat), model_(&realization), depth_(depth), prefix_(std::move(idPrefix)) {
    realization.validate();
    for (const auto& p : tcat.properTypes)
        if (!realization.object(p))
            throw ModelError("realization '" + realization.name + "' has no carrier for '" + p + "'");
    vEval_ = std::make_unique<Evaluator>(model_, Structure{}, depth);
    aEval_ = std::make_unique<Evaluator>(model_, realization.structure, depth);
    h_ = std::make_unique<SemInterp>(*vEval_, SemInterp::Mode::Pairs);
    a_ = std::make_unique<SemInterp>(*aEval_, SemInterp::Mode::Slice);
}

void CoherenceGenerator::setProperComponent(const std::string& type, MapFn fwd, MapFn inv) {
    properOverride_[type] = {std::move(fwd), std::move(inv)};
}

std::string CoherenceGenerator::objectDescription(const Judgement& j) const {
    Judgement c = canonicalJudgement(j);
    switch (c.type->kind) {
    case Kind::Top: return c.ctx.empty() ? "1" : objectDescription(contextJudgement(c.ctx));
    case Kind::Sigma: return objectDescription(bodyJudgement(c));
    default: return "E " + judgementKey(c);
    }
}

std::string CoherenceGenerator::reflectedType(const Judgement& j) {
    std::string d = objectDescription(j);
    auto it = reflectedByDesc_.find(d);
    if (it != reflectedByDesc_.end()) return reflected_[it->second].name;
    std::string name = prefix_ + ".r" + std::to_string(reflected_.size());
    reflectedByDesc_[d] = reflected_.size();
    reflected_.push_back({name, d, canonicalJudgement(j)});
    return name;
}

const Judgement* CoherenceGenerator::reflectedIndex(const std::string& name) const {
    for (const auto& r : reflected_)
        if (r.name == name) return &r.index;
    return nullptr;
}

std::vector<std::string> CoherenceGenerator::reflectedTypes() const {
    std::vector<std::string> out;
    for (const auto& r : reflected_) out.push_back(r.name);
    return out;
}

const Evaluator::TermFn& CoherenceGenerator::reflectedFunction(const std::string& name) const {
    auto it = reflectedFns_.find(name);
    if (it == reflectedFns_.end()) throw ScopeError("no reflected map '" + name + "'");
    return it->second;
}

void CoherenceGenerator::reflectedTerm(const std::string& name, Context ctx, Expr type, Evaluator::TermFn fn) {
    if (reflectedFns_.count(name)) return;
    reflectedTerms_.push_back({name, std::move(ctx), std::move(type)});
    reflectedFns_[name] = std::move(fn);
}

const IsoComponent& CoherenceGenerator::component(const Judgement& j) {
    Judgement c = canonicalJudgement(j);
    if (c.form != Judgement::Form::Type) throw UsageError("coherent isomorphisms are indexed by type judgements");
    std::string key = judgementKey(c);
    if (const IsoComponent* found = family_.find(key)) return *found;
    std::string id = prefix_ + std::to_string(nextId_++);
    IsoComponent built = build(c, id);
    family_.add(std::move(built));
    return *family_.find(key);
}

IsoFamily CoherenceGenerator::family(const std::vector<Judgement>& corpus) {
    IsoFamily out;
    for (const auto& j : corpus) {
        const IsoComponent& c = component(j);
        // the context components come first so that the family is closed
        std::vector<const IsoComponent*> deps;
        std::vector<std::string> todo = c.uses;
        while (!todo.empty()) {
            std::string k = todo.back();
            todo.pop_back();
            const IsoComponent* d = family_.find(k);
            if (!d) continue;
            deps.push_back(d);
            todo.insert(todo.end(), d->uses.begin(), d->uses.end());
        }
        for (auto it = deps.rbegin(); it != deps.rend(); ++it) out.add(**it);
        out.add(c);
    }
    return out;
}

IsoComponent CoherenceGenerator::build(const Judgement& j, const std::string& id) {
    using namespace mk;
    const SemInterp* H = h_.get();
    const SemInterp* A = a_.get();
    const Evaluator* VE = vEval_.get();
    const Evaluator* AE = aEval_.get();
    const Structure VS = vEval_->structure();
    const Structure S = aEval_->structure();
    const std::size_t n = j.ctx.size();
    const Expr& b = j.type;

    IsoComponent c;
    c.index = j;
    c.key = judgementKey(j);
    c.id = id;
    c.reflected = reflectedType(j);
    const Expr dom = hTotal(j);
    const Expr cod = proper(c.reflected);
    const Expr w = var("w"), e = var("e");
    const Context wctx{{"w", dom}}, ectx{{"e", cod}};
    auto equation = [&](const std::string& suffix, Context ctx, Expr lhs, Expr rhs, Expr type) {
        c.equations.push_back({id + "." + suffix, std::move(ctx), std::move(lhs), std::move(rhs), std::move(type),
                               Orientation::None});
    };

    // closed Top: the unique maps between terminal objects
    if (b->kind == Kind::Top && n == 0) {
        c.rule = "terminal";
        Value ua = S.unit(), uv = VS.unit();
        c.fwd = [ua](const Value&) { return ua; };
        c.inv = [uv](const Value&) { return uv; };
        reflectedTerm(id + ".pt", {}, cod, [ua](const std::vector<Value>&) { return ua; });
        equation("def", wctx, iso(id, w), app(id + ".pt", {}), cod);
        return c;
    }

    const IsoComponent& G = component(contextJudgement(j.ctx));
    c.uses.push_back(G.key);
    const MapFn gf = G.fwd, gi = G.inv;
    const std::string gid = G.id;
    const Expr rG = proper(G.reflected);
    const Expr cdom = contextSigma(j.ctx);
    Expr p1 = proj1(w), p2 = proj2(w);

    switch (b->kind) {
    case Kind::Top: {
        c.rule = "terminal-weakened";
        c.fwd = [gf, VS](const Value& v) { return gf(VS.fst(v)); };
        c.inv = [gi, VS](const Value& g) { return VS.pair(gi(g), VS.unit()); };
        equation("def", wctx, iso(id, w), iso(gid, p1), cod);
        equation("definv", ectx, isoInv(id, e), pair(isoInv(gid, e), star()), dom);
        break;
    }
    case Kind::Bot: {
        c.rule = "initial";
        c.fwd = [](const Value&) -> Value { emptyMap(); };
        c.inv = [](const Value&) -> Value { emptyMap(); };
        reflectedTerm(id + ".empty", ectx, bot(), [](const std::vector<Value>&) -> Value { emptyMap(); });
        equation("definv", ectx, isoInv(id, e), abort(app(id + ".empty", {e})), dom);
        break;
    }
    case Kind::Proper: {
        if (n == 0) {
            c.rule = "proper";
            if (auto it = properOverride_.find(b->name); it != properOverride_.end()) {
                c.fwd = it->second.first;
                c.inv = it->second.second;
            } else {
                c.fwd = [S, VS](const Value& v) { return S.proper(VS.unproper(v)); };
                c.inv = [S, VS](const Value& v) { return VS.proper(S.unproper(v)); };
            }
            break;
        }
        c.rule = "proper-weakened";
        const IsoComponent& X = component(Judgement::typeJ({}, b));
        c.uses.push_back(X.key);
        MapFn xf = X.fwd, xi = X.inv;
        c.fwd = [gf, xf, S, VS](const Value& v) { return S.pair(gf(VS.fst(v)), xf(VS.snd(v))); };
        c.inv = [gi, xi, S, VS](const Value& a) { return VS.pair(gi(S.fst(a)), xi(S.snd(a))); };
        Expr rX = proper(X.reflected);
        reflectedTerm(id + ".pair", {{"g", rG}, {"a", rX}}, cod,
                      [S](const std::vector<Value>& a) { return S.pair(a[0], a[1]); });
        reflectedTerm(id + ".fst", ectx, rG, [S](const std::vector<Value>& a) { return S.fst(a[0]); });
        reflectedTerm(id + ".snd", ectx, rX, [S](const std::vector<Value>& a) { return S.snd(a[0]); });
        equation("def", wctx, iso(id, w), app(id + ".pair", {iso(gid, p1), iso(X.id, p2)}), cod);
        equation("definv", ectx, isoInv(id, e),
                 pair(isoInv(gid, app(id + ".fst", {e})), isoInv(X.id, app(id + ".snd", {e}))), dom);
        break;
    }
    case Kind::Sum: {
        c.rule = "coproduct";
        Judgement j1 = Judgement::typeJ(j.ctx, b->kids[0]), j2 = Judgement::typeJ(j.ctx, b->kids[1]);
        const IsoComponent& L = component(j1);
        const IsoComponent& R = component(j2);
        c.uses.push_back(L.key);
        c.uses.push_back(R.key);
        MapFn lf = L.fwd, li = L.inv, rf = R.fwd, ri = R.inv;
        c.fwd = [=](const Value& v) {
            Value g = H->base(j, v), f = H->fibre(j, v);
            if (VS.isInl(f)) return S.inl(lf(H->element(j1, g, VS.payload(f))));
            return S.inr(rf(H->element(j2, g, VS.payload(f))));
        };
        c.inv = [=](const Value& a) {
            if (S.isInl(a)) {
                Value x = li(S.payload(a));
                return H->element(j, H->base(j1, x), VS.inl(H->fibre(j1, x)));
            }
            Value x = ri(S.payload(a));
            return H->element(j, H->base(j2, x), VS.inr(H->fibre(j2, x)));
        };
        reflectedTerm(id + ".inl", {{"a", proper(L.reflected)}}, cod,
                      [S](const std::vector<Value>& a) { return S.inl(a[0]); });
        reflectedTerm(id + ".inr", {{"a", proper(R.reflected)}}, cod,
                      [S](const std::vector<Value>& a) { return S.inr(a[0]); });
        Expr a = var("a"), bb = var("b");
        Expr body = n == 0 ? caseOf(w, "a", app(id + ".inl", {iso(L.id, a)}), "b", app(id + ".inr", {iso(R.id, bb)}))
                           : caseOf(p2, "a", app(id + ".inl", {iso(L.id, pair(p1, a))}), "b",
                                    app(id + ".inr", {iso(R.id, pair(p1, bb))}));
        equation("def", wctx, iso(id, w), body, cod);
        break;
    }
    case Kind::Sigma: {
        c.rule = "sigma";
        Judgement bj = canonicalJudgement(bodyJudgement(j));
        const IsoComponent& Bc = component(bj);
        c.uses.push_back(Bc.key);
        MapFn bf = Bc.fwd, bi = Bc.inv;
        if (n == 0) {
            c.fwd = bf;
            c.inv = bi;
            equation("def", wctx, iso(id, w), iso(Bc.id, w), cod);
            equation("definv", ectx, isoInv(id, e), isoInv(Bc.id, e), dom);
            break;
        }
        c.fwd = [bf, VS](const Value& v) {
            return bf(VS.pair(VS.pair(VS.fst(v), VS.fst(VS.snd(v))), VS.snd(VS.snd(v))));
        };
        c.inv = [bi, VS](const Value& a) {
            Value u = bi(a);
            return VS.pair(VS.fst(VS.fst(u)), VS.pair(VS.snd(VS.fst(u)), VS.snd(u)));
        };
        Expr u = isoInv(Bc.id, e);
        equation("definv", ectx, isoInv(id, e), pair(proj1(proj1(u)), pair(proj2(proj1(u)), proj2(u))), dom);
        equation("def", wctx, iso(id, w), iso(Bc.id, pair(pair(p1, proj1(p2)), proj2(p2))), cod);
        break;
    }
    case Kind::Eq: {
        c.rule = "equalizer";
        Context ctx = j.ctx;
        Expr ty = b;
        c.fwd = [=](const Value& v) {
            Value ga = gf(H->base(j, v));
            if (!AE->inhabited(ty, A->env(ctx, ga)))
                throw ModelError("no mediator into the equalizer at " + ga.str());
            return ga;
        };
        c.inv = [=](const Value& a) { return H->element(j, gi(A->base(j, a)), VS.refl()); };
        if (n > 0) {
            reflectedTerm(id + ".incl", ectx, rG, [A, j](const std::vector<Value>& a) { return A->base(j, a[0]); });
            equation("definv", ectx, proj1(isoInv(id, e)), isoInv(gid, app(id + ".incl", {e})), cdom);
        }
        break;
    }
    case Kind::List: {
        c.rule = "list";
        Judgement ej = Judgement::typeJ(j.ctx, b->kids[0]);
        const IsoComponent& El = component(ej);
        c.uses.push_back(El.key);
        MapFn ef = El.fwd, ei = El.inv;
        c.fwd = [=](const Value& v) {
            Value g = H->base(j, v);
            std::vector<Value> xs;
            for (const auto& x : VS.elems(H->fibre(j, v))) xs.push_back(A->fibre(ej, ef(H->element(ej, g, x))));
            return A->element(j, gf(g), S.list(std::move(xs)));
        };
        c.inv = [=](const Value& a) {
            Value ga = A->base(j, a);
            std::vector<Value> xs;
            for (const auto& y : S.elems(A->fibre(j, a))) xs.push_back(H->fibre(ej, ei(A->element(ej, ga, y))));
            return H->element(j, gi(ga), VS.list(std::move(xs)));
        };
        Context nilCtx = n == 0 ? Context{} : Context{{"g", rG}};
        reflectedTerm(id + ".nil", nilCtx, cod, [A, j, S](const std::vector<Value>& a) {
            return A->element(j, a.empty() ? S.unit() : a[0], S.list({}));
        });
        reflectedTerm(id + ".cons", {{"acc", cod}, {"a", proper(El.reflected)}}, cod,
                      [A, j, ej, S](const std::vector<Value>& a) {
                          std::vector<Value> xs = S.elems(A->fibre(j, a[0]));
                          xs.push_back(A->fibre(ej, a[1]));
                          return A->element(j, A->base(j, a[0]), S.list(std::move(xs)));
                      });
        Expr acc = var("acc"), x = var("x");
        Expr body = n == 0 ? rec(w, app(id + ".nil", {}), "acc", "x", app(id + ".cons", {acc, iso(El.id, x)}))
                           : rec(p2, app(id + ".nil", {iso(gid, p1)}), "acc", "x",
                                 app(id + ".cons", {acc, iso(El.id, pair(p1, x))}));
        equation("def", wctx, iso(id, w), body, cod);
        break;
    }
    case Kind::Quot: {
        c.rule = "quotient";
        Judgement cj = Judgement::typeJ(j.ctx, b->kids[0]);
        const IsoComponent& Cc = component(cj);
        c.uses.push_back(Cc.key);
        MapFn cf = Cc.fwd, ci = Cc.inv;
        Context ctx = j.ctx;
        const std::string z = freshName("%q", contextNames(ctx));
        Expr cls = classOf(b, var(z));
        auto classA = [=](const Value& ga, const Value& fib) {
            Env env = A->env(ctx, ga);
            env.emplace_back(z, fib);
            return A->element(j, ga, AE->evalTerm(cls, env));
        };
        c.fwd = [=](const Value& v) {
            Value g = H->base(j, v);
            Value a = cf(H->element(cj, g, VS.rep(H->fibre(j, v))));
            return classA(A->base(cj, a), A->fibre(cj, a));
        };
        c.inv = [=](const Value& a) {
            Value ga = A->base(j, a);
            Value x = ci(A->element(cj, ga, S.rep(A->fibre(j, a))));
            Value g = H->base(cj, x);
            Env env = H->env(ctx, g);
            env.emplace_back(z, H->fibre(cj, x));
            return H->element(j, g, VE->evalTerm(cls, env));
        };
        reflectedTerm(id + ".class", {{"a", proper(Cc.reflected)}}, cod, [=](const std::vector<Value>& a) {
            return classA(A->base(cj, a[0]), A->fibre(cj, a[0]));
        });
        Expr x = var("x");
        Expr body = n == 0 ? quotElim(w, "x", app(id + ".class", {iso(Cc.id, x)}))
                           : quotElim(p2, "x", app(id + ".class", {iso(Cc.id, pair(p1, x))}));
        equation("def", wctx, iso(id, w), body, cod);
        break;
    }
    default: throw UsageError("no coherent isomorphism for " + show(b));
    }
    return c;
}

CoherenceExtension CoherenceGenerator::extension() const {
    CoherenceExtension ext;
    for (const auto& r : reflected_) ext.properTypes.push_back(r.name);
    ext.properTerms = reflectedTerms_;
    for (const auto& c : family_.components()) {
        CoherenceEntry entry{c.id, c.index.ctx, c.index.type, hTotal(c.index), mk::proper(c.reflected), {}};
        Expr w = mk::var("w"), e = mk::var("e");
        ext.axioms.push_back({c.id + ".inv1", {{"w", entry.domain}}, mk::isoInv(c.id, mk::iso(c.id, w)), w,
                              entry.domain, Orientation::LeftToRight});
        ext.axioms.push_back({c.id + ".inv2", {{"e", entry.codomain}}, mk::iso(c.id, mk::isoInv(c.id, e)), e,
                              entry.codomain, Orientation::LeftToRight});
        entry.axioms = {c.id + ".inv1", c.id + ".inv2"};
        for (const auto& eq : c.equations) {
            ext.axioms.push_back(eq);
            entry.axioms.push_back(eq.name);
        }
        ext.entries.push_back(std::move(entry));
    }
    return ext;
}

std::unique_ptr<Evaluator> CoherenceGenerator::stEvaluator() const {
    auto ev = std::make_unique<Evaluator>(model_, Structure{}, depth_);
    for (const auto& r : reflected_) ev->defineType(r.name, a_->total(r.index).elems);
    for (const auto& [name, fn] : reflectedFns_) ev->defineTerm(name, fn);
    for (const auto& c : family_.components()) ev->defineIso(c.id, c.fwd, c.inv);
    return ev;
}

// ------------------------------------------------ interpretation morphisms

bool MorphismReport::ok() const { return failures() == 0; }

std::size_t MorphismReport::failures() const {
    return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.ok; }));
}

const ConditionResult* MorphismReport::firstFailure() const {
    for (const auto& r : results)
        if (!r.ok) return &r;
    return nullptr;
}

namespace {

// Runs one condition; the body returns a failure description or "".
template <class F>
ConditionResult runCondition(const std::string& entry, const std::string& name, F body) {
    ConditionResult r{entry, name, true, 0, ""};
    try {
        std::string fail = body(r.samples);
        if (!fail.empty()) {
            r.ok = false;
            r.detail = fail;
        }
    } catch (const Error& e) {
        r.ok = false;
        r.detail = e.what();
    }
    return r;
}

std::string mismatch(const std::string& where, const Value& at, const Value& lhs, const Value& rhs) {
    return where + " at " + at.str() + ": " + lhs.str() + " vs " + rhs.str();
}

}  // namespace

MorphismReport checkInterpMorphism(const IsoFamily& sigma, const Interp& i1, const Interp& i2,
                                   const std::vector<Judgement>& corpus, const TheoryPresentation& t,
                                   const ComponentSource& extra, MorphismCheckOptions opts) {
    SynCat syn(t);
    auto comp = [&](const Judgement& j) -> const IsoComponent& {
        if (const IsoComponent* c = sigma.find(j)) return *c;
        return extra(canonicalJudgement(j));
    };
    std::vector<Expr> weak = opts.weakeningTypes;
    if (weak.empty()) {
        weak.push_back(mk::top());
        weak.push_back(t.properTypes.empty() ? mk::sum(mk::top(), mk::top()) : mk::proper(t.properTypes[0]));
    }

    MorphismReport rep;
    for (const auto& j0 : corpus) {
        const Judgement j = canonicalJudgement(j0);
        const std::string key = judgementKey(j);
        const IsoComponent& s = comp(j);
        const IsoComponent& sg = comp(contextJudgement(j.ctx));

        rep.results.push_back(runCondition(key, "inverse", [&](std::size_t& n) -> std::string {
            EnumSet d1 = i1.total(j), d2 = i2.total(j);
            for (const auto& x : d1.elems) {
                ++n;
                Value y = s.fwd(x);
                if (!d2.contains(y)) return "image of " + x.str() + " is " + y.str() + ", outside the codomain";
                Value back = s.inv(y);
                if (back != x) return mismatch("inverse after forward", x, back, x);
            }
            for (const auto& y : d2.elems) {
                ++n;
                Value x = s.inv(y);
                if (!d1.contains(x)) return "inverse image of " + y.str() + " is outside the domain";
                Value again = s.fwd(x);
                if (again != y) return mismatch("forward after inverse", y, again, y);
            }
            return "";
        }));

        rep.results.push_back(runCondition(key, "square", [&](std::size_t& n) -> std::string {
            for (const auto& x : i1.total(j).elems) {
                ++n;
                Value l = i2.base(j, s.fwd(x)), r = sg.fwd(i1.base(j, x));
                if (l != r) return mismatch("last square", x, l, r);
            }
            return "";
        }));

        auto terms = syn.candidates(j.ctx, j.type, opts.termSize);
        if (terms.size() > opts.termsPerEntry) terms.resize(opts.termsPerEntry);
        rep.results.push_back(runCondition(key, "naturality", [&](std::size_t& n) -> std::string {
            for (const auto& b : terms) {
                Judgement tj = Judgement::termJ(j.ctx, b, j.type);
                for (const auto& g : i1.context(j.ctx).elems) {
                    ++n;
                    Value l = s.fwd(i1.section(tj, g)), r = i2.section(tj, sg.fwd(g));
                    if (l != r) return mismatch("section " + show(b), g, l, r);
                }
            }
            return "";
        }));

        rep.results.push_back(runCondition(key, "weakening", [&](std::size_t& n) -> std::string {
            for (const auto& d : weak)
                for (std::size_t pos = 0; pos <= j.ctx.size(); ++pos) {
                    Judgement wj = weaken(j, d, pos);
                    const IsoComponent& sw = comp(wj);
                    for (const auto& x : i1.total(wj).elems) {
                        ++n;
                        Value l = s.fwd(i1.weakeningMap(j, d, pos, x));
                        Value r = i2.weakeningMap(j, d, pos, sw.fwd(x));
                        if (l != r)
                            return mismatch("weakening by " + show(d) + " at " + std::to_string(pos), x, l, r);
                    }
                }
            return "";
        }));

        rep.results.push_back(runCondition(key, "substitution", [&](std::size_t& n) -> std::string {
            for (std::size_t pos = 0; pos < j.ctx.size(); ++pos) {
                auto cs = syn.candidates(prefix(j.ctx, pos), j.ctx[pos].type, opts.termSize);
                if (cs.size() > 2) cs.resize(2);
                for (const auto& c : cs) {
                    Judgement sj = instantiate(j, pos, c);
                    const IsoComponent& ss = comp(sj);
                    for (const auto& x : i1.total(sj).elems) {
                        ++n;
                        Value l = s.fwd(i1.substitutionMap(j, pos, c, x));
                        Value r = i2.substitutionMap(j, pos, c, ss.fwd(x));
                        if (l != r) return mismatch("substitution of " + show(c), x, l, r);
                    }
                }
            }
            return "";
        }));
    }
    return rep;
}

IsoFamily identityFamily(const std::vector<Judgement>& corpus) {
    IsoFamily f;
    std::size_t next = 0;
    std::function<void(const Judgement&)> add = [&](const Judgement& j0) {
        Judgement j = canonicalJudgement(j0);
        if (f.find(j)) return;
        if (!(j.ctx.empty() && j.type->kind == Kind::Top)) add(contextJudgement(j.ctx));
        MapFn id = [](const Value& v) { return v; };
        f.add({j, judgementKey(j), "id" + std::to_string(next++), "identity", "", id, id, {}, {}});
    };
    for (const auto& j : corpus) add(j);
    return f;
}

std::optional<IsoFamily> corruptComponent(const IsoFamily& f, const std::string& key, const Interp& i1,
                                          const Interp& i2) {
    IsoFamily out = f;
    IsoComponent* c = out.mutableFind(key);
    if (!c) throw UsageError("no component '" + key + "' to corrupt");
    EnumSet dom = i1.total(c->index);
    if (dom.size() == 0) return std::nullopt;
    Value x0 = dom.elems.front();
    MapFn old = c->fwd;
    Value y0 = old(x0);
    Value bad = Value::atom("%corrupt");
    for (const auto& y : i2.total(c->index).elems)
        if (y != y0) {
            bad = y;
            break;
        }
    c->fwd = [old, x0, bad](const Value& x) { return x == x0 ? bad : old(x); };
    c->rule += "+corrupted";
    return out;
}

// ------------------------------------------------------------ determination

namespace {

Expr renameIsos(const Expr& e, const std::map<std::string, std::string>& names) {
    if (!e) return e;
    std::vector<Expr> kids;
    bool changed = false;
    for (const auto& k : e->kids) {
        kids.push_back(renameIsos(k, names));
        changed = changed || kids.back() != k;
    }
    if (e->kind == Kind::Iso || e->kind == Kind::IsoInv) {
        auto it = names.find(e->name);
        std::string n = it == names.end() ? e->name : it->second;
        return e->kind == Kind::Iso ? mk::iso(n, kids[0]) : mk::isoInv(n, kids[0]);
    }
    if (e->kind == Kind::App) {
        // reflected structure maps are named after their component
        auto dot = e->name.find('.');
        if (dot != std::string::npos) {
            auto it = names.find(e->name.substr(0, dot));
            if (it != names.end()) return mk::app(it->second + e->name.substr(dot), kids);
        }
    }
    return changed ? mk::rebuild(e, kids) : e;
}

std::map<std::string, std::string> idsToKeys(const IsoFamily& f) {
    std::map<std::string, std::string> m;
    for (const auto& c : f.components()) m[c.id] = c.key;
    return m;
}

struct Transport {
    CoherenceGenerator& gen;

    Value type(const Expr& b, const Env& ev, const Env& ea, const Value& v, int depth) {
        const Structure& S = gen.aEvaluator().structure();
        const Structure& VS = gen.vEvaluator().structure();
        switch (b->kind) {
        case Kind::Top: return S.unit();
        case Kind::Eq: return S.refl();
        case Kind::Bot: throw ModelError("value of an empty type");
        case Kind::Proper: return gen.component(Judgement::typeJ({}, b)).fwd(v);
        case Kind::Sum: {
            Value inner = type(b->kids[VS.isInl(v) ? 0 : 1], ev, ea, VS.payload(v), depth);
            return VS.isInl(v) ? S.inl(inner) : S.inr(inner);
        }
        case Kind::Sigma: {
            std::string x = "%t" + std::to_string(depth);
            Value d = VS.fst(v);
            Value da = type(b->kids[0], ev, ea, d, depth + 1);
            Env ev2 = ev, ea2 = ea;
            ev2.emplace_back(x, d);
            ea2.emplace_back(x, da);
            return S.pair(da, type(openBody(b->kids[1], mk::var(x)), ev2, ea2, VS.snd(v), depth + 1));
        }
        case Kind::List: {
            std::vector<Value> xs;
            for (const auto& x : VS.elems(v)) xs.push_back(type(b->kids[0], ev, ea, x, depth));
            return S.list(std::move(xs));
        }
        case Kind::Quot: {
            std::string z = "%t" + std::to_string(depth);
            Value ra = type(b->kids[0], ev, ea, VS.rep(v), depth + 1);
            Env ea2 = ea;
            ea2.emplace_back(z, ra);
            return gen.aEvaluator().evalTerm(mk::classOf(b, mk::var(z)), ea2);
        }
        default: throw UsageError("cannot transport along " + show(b));
        }
    }

    Value element(const Judgement& j, const Value& w) {
        const SemInterp& H = gen.hSide();
        const SemInterp& A = gen.aSide();
        Value g = H.base(j, w);
        Value ga = j.ctx.empty() ? A.structure().unit() : element(contextJudgement(j.ctx), g);
        Value va = type(j.type, H.env(j.ctx, g), A.env(j.ctx, ga), H.fibre(j, w), 0);
        return A.element(j, ga, va);
    }
};

}  // namespace

std::vector<DeterminationResult> checkDetermination(CoherenceGenerator& original, const std::vector<Judgement>& corpus) {
    CoherenceGenerator regen(original.theory(), original.realization(), original.depth());
    for (const auto& p : original.theory().properTypes) {
        const IsoComponent& c = original.component(Judgement::typeJ({}, mk::proper(p)));
        regen.setProperComponent(p, c.fwd, c.inv);
    }
    std::vector<DeterminationResult> out;
    Transport oracle{original};
    for (const auto& j0 : corpus) {
        Judgement j = canonicalJudgement(j0);
        DeterminationResult r;
        r.entry = judgementKey(j);
        const IsoComponent& a = original.component(j);
        const IsoComponent& b = regen.component(j);
        auto ka = idsToKeys(original.generated()), kb = idsToKeys(regen.generated());
        if (a.equations.size() != b.equations.size()) {
            r.definitionsAgree = false;
            r.detail = "different number of defining equations";
        }
        for (std::size_t i = 0; r.definitionsAgree && i < a.equations.size(); ++i) {
            const TermAxiom &ea = a.equations[i], &eb = b.equations[i];
            if (!alphaEqual(renameIsos(ea.lhs, ka), renameIsos(eb.lhs, kb)) ||
                !alphaEqual(renameIsos(ea.rhs, ka), renameIsos(eb.rhs, kb))) {
                r.definitionsAgree = false;
                r.detail = "defining equation " + ea.name + " differs";
            }
        }
        try {
            for (const auto& w : original.hSide().total(j).elems) {
                Value x = a.fwd(w);
                if (x != b.fwd(w)) {
                    r.valuesAgree = false;
                    r.detail = "regenerated map differs at " + w.str();
                    break;
                }
                Value o = oracle.element(j, w);
                if (x != o) {
                    r.oracleAgrees = false;
                    r.detail = mismatch("transport", w, x, o);
                    break;
                }
            }
        } catch (const Error& e) {
            r.valuesAgree = false;
            r.detail = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace au
