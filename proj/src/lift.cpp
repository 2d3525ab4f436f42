#include <algorithm>
#include <optional>
#include <set>

#include "au/error.hpp"
#include "au/functor.hpp"

namespace au {

namespace {

std::string imageName(const std::string& functor, const std::string& symbol) { return functor + "." + symbol; }

bool bijectiveOnto(const EnumSet& dom, const EnumSet& cod, const MapFn& f, std::string& detail) {
    std::set<Value> hit;
    for (const auto& x : dom.elems) {
        Value y = f(x);
        if (!cod.contains(y)) {
            detail = x.str() + " goes to " + y.str() + " outside the codomain";
            return false;
        }
        if (!hit.insert(y).second) {
            detail = "two elements go to " + y.str();
            return false;
        }
    }
    if (hit.size() != cod.size()) {
        detail = "misses " + std::to_string(cod.size() - hit.size()) + " elements";
        return false;
    }
    return true;
}

}  // namespace

bool LiftedFunctor::ok() const {
    return std::all_of(axioms.begin(), axioms.end(), [](const AxiomCheck& a) { return a.verdict.holds(); });
}

std::unique_ptr<LiftedFunctor> liftFunctorToTheory(const FunctorPresentation& f, const TheoryPresentation& tcatA,
                                                   const ModelPresentation& a, const ModelPresentation& b,
                                                   std::size_t depth, const std::vector<Judgement>& corpus) {
    auto lf = std::make_unique<LiftedFunctor>();
    lf->tcatA = tcatA;
    lf->tcatB = internalTheoryOfModel(b);
    lf->corpus = corpus;
    lf->functor = std::make_unique<ModelFunctor>(f, a, b);
    lf->base = translateAlongFunctor(f, lf->tcatA, b);
    lf->genA = std::make_unique<CoherenceGenerator>(lf->tcatA, a, depth, "s");
    lf->genB = std::make_unique<CoherenceGenerator>(lf->tcatB, b, depth, "s");
    lf->tau = std::make_unique<TauGenerator>(*lf->functor, lf->base, depth, "t");

    lf->genA->family(corpus);
    // every sigma^A constant gets its tau and sigma^B partners
    std::vector<const IsoComponent*> sources;
    for (const auto& c : lf->genA->generated().components()) sources.push_back(&c);
    std::map<std::string, Translation::IsoImage> isoImages;
    for (const IsoComponent* c : sources) {
        const IsoComponent& t = lf->tau->component(c->index);
        const IsoComponent& s = lf->genB->component(lf->base.apply(c->index));
        isoImages[c->id] = {t.id, s.id};
    }

    lf->source = withCoherentIsos(lf->tcatA, lf->genA->extension());
    lf->target = withCoherentIsos(lf->tcatB, lf->genB->extension());
    lf->target.name = lf->tcatB.name + "+iso+" + f.name;

    Translation& tr = lf->translation;
    tr = lf->base;
    tr.name = "T(" + f.name + ")";
    tr.isos = isoImages;
    for (const auto& r : lf->genA->reflectedTypes()) {
        tr.types[r] = imageName(f.name, r);
        lf->target.properTypes.push_back(imageName(f.name, r));
    }
    for (const auto& d : lf->genA->reflectedTerms()) {
        tr.terms[d.name] = imageName(f.name, d.name);
        lf->target.properTerms.push_back({imageName(f.name, d.name), tr.apply(d.ctx), tr.apply(d.type)});
    }
    std::set<std::string> tauDone;
    for (const IsoComponent* c : sources) {
        const IsoComponent& t = lf->tau->component(c->index);
        if (!tauDone.insert(t.id).second) continue;
        Expr dom = mk::proper(lf->genB->reflectedType(lf->base.apply(c->index)));
        Expr cod = mk::proper(imageName(f.name, c->reflected));
        lf->target.coherence.push_back({t.id, tr.apply(c->index.ctx), tr.apply(c->index.type), dom, cod,
                                        {t.id + ".inv1", t.id + ".inv2"}});
        Expr w = mk::var("w"), e = mk::var("e");
        lf->target.termAxioms.push_back(
            {t.id + ".inv1", {{"w", dom}}, mk::isoInv(t.id, mk::iso(t.id, w)), w, dom, Orientation::LeftToRight});
        lf->target.termAxioms.push_back(
            {t.id + ".inv2", {{"e", cod}}, mk::iso(t.id, mk::isoInv(t.id, e)), e, cod, Orientation::LeftToRight});
    }

    // St_B extended by the F-images and tau
    lf->sourceRealization = lf->genA->stEvaluator();
    lf->realization = lf->genB->stEvaluator();
    const ImageInterp* img = &lf->tau->targetSide();
    const ModelFunctor* fun = lf->functor.get();
    const SemInterp* as = &lf->tau->aSlice();
    for (const auto& r : lf->genA->reflectedTypes())
        lf->realization->defineType(imageName(f.name, r), img->total(*lf->genA->reflectedIndex(r)).elems);
    for (const auto& d : lf->genA->reflectedTerms()) {
        // maps out of or into Bot have nothing to transport
        auto indexOf = [&lf](const Expr& t) -> std::optional<Judgement> {
            if (t->kind != Kind::Proper) return std::nullopt;
            return *lf->genA->reflectedIndex(t->name);
        };
        std::vector<std::optional<Judgement>> argIdx;
        for (const auto& bnd : d.ctx) argIdx.push_back(indexOf(bnd.type));
        std::optional<Judgement> codIdx = indexOf(d.type);
        Evaluator::TermFn fn = lf->genA->reflectedFunction(d.name);
        std::string name = d.name;
        lf->realization->defineTerm(imageName(f.name, d.name),
                                    [img, fun, as, argIdx, codIdx, fn, name](const std::vector<Value>& args) {
                                        std::vector<Value> pre;
                                        for (std::size_t i = 0; i < args.size(); ++i) {
                                            if (!argIdx.at(i)) throw ModelError(name + " applied to an empty type");
                                            pre.push_back(img->preimage(*argIdx[i], args[i]));
                                        }
                                        if (!codIdx) throw ModelError(name + " has an empty codomain");
                                        return fun->onElement(*as, *codIdx, fn(pre));
                                    });
    }
    for (const auto& id : tauDone) {
        for (const auto& c : sources) {
            const IsoComponent& t = lf->tau->component(c->index);
            if (t.id != id) continue;
            lf->realization->defineIso(t.id, t.fwd, t.inv);
            break;
        }
    }

    // the translated axioms, checked in the target
    Oracle oracle;
    oracle.evaluators = {lf->realization.get()};
    SynCat host(lf->target, CheckerOptions{}, oracle);
    for (const auto& ax : lf->source.termAxioms) {
        TermAxiom t = tr.apply(ax);
        host.checker().checkContext(t.ctx);
        host.checker().checkTerm(t.ctx, t.lhs, t.type);
        host.checker().checkTerm(t.ctx, t.rhs, t.type);
        HostVerdict v = host.equalTerms(t.ctx, t.lhs, t.rhs, t.type);
        if (v.status == HostVerdict::Status::Refuted)
            throw ModelError("translated axiom " + ax.name + " fails: " + (v.sample ? v.sample->detail : ""));
        lf->axioms.push_back({ax.name, std::move(v)});
    }
    return lf;
}

// ----------------------------------------------------- main theorem shadow

bool MainTheoremReport::ok() const {
    return std::all_of(items.begin(), items.end(), [](const Item& i) { return i.ok; });
}

MainTheoremReport checkMainTheorem(LiftedFunctor& lf, const std::vector<Expr>& objects, std::size_t termSize) {
    MainTheoremReport rep;
    const FunctorPresentation& f = lf.functor->presentation();
    const ModelPresentation& a = lf.functor->source();
    const ModelPresentation& b = lf.functor->target();
    const Evaluator& st = *lf.realization;
    auto run = [&rep](std::string what, std::string kind, auto body) {
        MainTheoremReport::Item it{std::move(what), std::move(kind), true, 0, ""};
        try {
            body(it);
        } catch (const Error& e) {
            it.ok = false;
            it.detail = e.what();
        }
        rep.items.push_back(std::move(it));
    };

    for (const auto& o : a.objects) {
        run(o.name, "object", [&](auto& it) {
            Expr img = lf.translation.apply(mk::proper(o.name));
            it.samples = 1;
            if (img->name != f.objects.at(o.name)) {
                it.ok = false;
                it.detail = "translated to " + img->name;
            }
        });
        run(o.name, "carrier", [&](auto& it) {
            std::vector<Value> expect;
            for (const auto& x : b.object(f.objects.at(o.name))->carrier) expect.push_back(Value::atom(x));
            EnumSet got = st.evalType(lf.translation.apply(mk::proper(o.name)));
            it.samples = got.size();
            if (got.elems != EnumSet::of(expect).elems) {
                it.ok = false;
                it.detail = "carrier differs from F(" + o.name + ")";
            }
        });
    }
    for (const auto& ar : a.arrows) {
        run(ar.name, "arrow", [&](auto& it) {
            Expr term = lf.translation.apply(mk::app(ar.name, {mk::var("x")}));
            for (const auto& [x, y] : ar.graph) {
                Value got = st.evalTerm(term, {{"x", Value::atom(f.carriers.at(ar.src).at(x))}});
                Value want = Value::atom(f.carriers.at(ar.tgt).at(y));
                ++it.samples;
                if (got != want) {
                    it.ok = false;
                    it.detail = "at " + x + ": " + got.str() + " vs " + want.str();
                    return;
                }
            }
        });
    }

    // eta_C = tau_C . sigma^B_{C^F}, read off the translated sigma^A constant
    const ImageInterp& img = lf.tau->targetSide();
    std::map<std::string, MapFn> eta;
    std::vector<Expr> objs;
    for (const auto& c : objects) {
        Judgement j = Judgement::typeJ({}, c);
        const IsoComponent* comp = lf.genA->generated().find(j);
        if (!comp) continue;
        objs.push_back(c);
        Expr term = lf.translation.apply(mk::iso(comp->id, mk::var("v")));
        MapFn fn = [&st, term](const Value& v) { return st.evalTerm(term, {{"v", v}}); };
        eta[exprKey(c)] = fn;
        run(exprKey(c), "component", [&](auto& it) {
            EnumSet dom = st.evalType(lf.translation.apply(c));
            it.samples = dom.size();
            it.ok = bijectiveOnto(dom, img.total(j), fn, it.detail);
        });
    }

    SynCat syn(lf.tcatA);
    const SemInterp& as = lf.tau->aSlice();
    const Evaluator& aEval = as.evaluator();
    std::size_t budget = 40;
    for (const auto& c : objs) {
        for (const auto& d : objs) {
            if (budget == 0) break;
            Context ctx{{"x", c}};
            auto terms = syn.candidates(ctx, d, termSize);
            if (terms.size() > 2) terms.resize(2);
            for (const auto& m : terms) {
                if (budget == 0) break;
                --budget;
                Judgement cj = Judgement::typeJ({}, c), dj = Judgement::typeJ({}, d);
                run(show(m) + " : " + exprKey(c) + " -> " + exprKey(d), "naturality", [&](auto& it) {
                    Expr mt = lf.translation.apply(m);
                    for (const auto& v : st.evalType(lf.translation.apply(c)).elems) {
                        Value lhs = eta.at(exprKey(d))(st.evalTerm(mt, {{"x", v}}));
                        Value e = img.preimage(cj, eta.at(exprKey(c))(v));
                        Value am = aEval.evalTerm(m, {{"x", as.fibre(cj, e)}});
                        Value rhs = lf.functor->onElement(as, dj, as.element(dj, as.structure().unit(), am));
                        ++it.samples;
                        if (lhs != rhs) {
                            it.ok = false;
                            it.detail = "at " + v.str() + ": " + lhs.str() + " vs " + rhs.str();
                            return;
                        }
                    }
                });
            }
        }
    }
    return rep;
}

// -------------------------------------------------------------- reflector

Reflection reflectObject(const ModelPresentation& m, const Expr& c, std::size_t depth) {
    Evaluator ev(&m, m.structure, depth);
    Reflection r;
    r.name = "R." + exprKey(c);
    r.carrier = ev.evalType(c);
    if (c->kind == Kind::Proper) {
        Evaluator v(&m, Structure{}, depth);
        Structure s = m.structure;
        r.iso = CompMap{v.evalType(c), [s](const Value& x) { return s.proper(x); }};
    }
    return r;
}

CompMap reflectMorphism(const ModelPresentation& m, const Morphism& mor, std::size_t depth) {
    auto ev = std::make_shared<Evaluator>(&m, m.structure, depth);
    EnumSet dom = ev->evalType(mor.dom);
    Morphism mm = mor;
    return {dom, [ev, mm](const Value& x) { return ev->evalTerm(mm.term, {{mm.var, x}}); }};
}

// ---------------------------------------------------------- subspace lift

SubspaceLift liftToSubspaceFunctor(const LiftedFunctor& lf, const SubspaceAxioms& s, const SubspaceAlpha& alpha) {
    SubspaceLift out;
    out.source = extendSubspace(lf.source, s);
    out.target = lf.target;
    out.translation = lf.translation;
    out.realization = std::make_unique<Evaluator>(*lf.realization);
    const std::string& fname = lf.functor->presentation().name;
    if (!s.axioms.empty()) out.target.name += "[" + s.name + "]";

    for (const auto& ax : s.axioms) {
        if (ax.form != SubspaceAxiom::Form::NewTerm) continue;
        std::string img = imageName(fname, ax.name);
        Context ctx = out.translation.apply(ax.context());
        Expr type = out.translation.apply(ax.type);
        out.translation.terms[ax.name] = img;
        out.target.properTerms.push_back({img, ctx, type});
        if (ctx.empty()) {
            auto it = alpha.constants.find(ax.name);
            if (it == alpha.constants.end()) throw ModelError("alpha gives no value for " + ax.name);
            if (!out.realization->evalType(type).contains(it->second))
                throw ModelError("alpha(" + ax.name + ") = " + it->second.str() + " is not in " + show(type));
            Value v = it->second;
            out.realization->defineTerm(img, [v](const std::vector<Value>&) { return v; });
        } else {
            auto it = alpha.maps.find(ax.name);
            if (it == alpha.maps.end()) throw ModelError("alpha gives no map for " + ax.name);
            out.realization->defineTerm(img, it->second);
        }
    }
    for (const auto& ax : s.axioms) {
        if (ax.form != SubspaceAxiom::Form::NewEquality) continue;
        TermAxiom t = out.translation.apply(TermAxiom{ax.name, ax.context(), ax.lhs, ax.rhs, ax.type, ax.orientation});
        SampleVerdict v = out.realization->agreeOn(t.ctx, t.lhs, t.rhs);
        if (!v.agree()) throw ModelError("alpha fails the subspace equation " + ax.name + ": " + v.detail);
        out.target.termAxioms.push_back(std::move(t));
    }
    return out;
}

// ----------------------------------------------------- classifying check

bool ClassifyingReport::ok() const {
    return std::all_of(items.begin(), items.end(), [](const Item& i) { return i.ok; });
}

ClassifyingReport classifyingCheck(const TheoryPresentation& t, const ModelPresentation& m, std::size_t depth,
                                   const std::vector<Judgement>& corpus) {
    ClassifyingReport rep;
    StandardInterpretation si = standardInterpretation(t, m, depth, corpus);
    const SemInterp& J = *si.interp;
    HInterpretation h(t);
    SynCat syn(t);
    auto add = [&rep](std::string entry, std::string what, std::string fail) {
        rep.items.push_back({std::move(entry), std::move(what), fail.empty(), std::move(fail)});
    };

    for (const auto& c : si.checks) add(c.what, "witness", c.ok ? "" : c.detail);

    // G on generators against the model
    for (const auto& o : m.objects) {
        std::vector<Value> expect;
        for (const auto& x : o.carrier) expect.push_back(m.structure.proper(Value::atom(x)));
        add(o.name, "generator", si.onObject(mk::proper(o.name)).elems == EnumSet::of(expect).elems
                                     ? ""
                                     : "carrier differs");
    }
    for (const auto& ar : m.arrows) {
        CompMap g = si.onMorphism({mk::proper(ar.src), mk::proper(ar.tgt), "x", mk::app(ar.name, {mk::var("x")})});
        std::string fail;
        for (const auto& [x, y] : ar.graph)
            if (g.fn(m.structure.proper(Value::atom(x))) != m.structure.proper(Value::atom(y))) fail = "differs at " + x;
        add(ar.name, "generator", fail);
    }

    auto sameMap = [](const CompMap& g, const EnumSet& dom, const std::function<Value(const Value&)>& j) {
        if (g.domain.elems != dom.elems) return std::string("domains differ");
        for (const auto& x : dom.elems)
            if (g.fn(x) != j(x)) return "differs at " + x.str();
        return std::string();
    };

    for (const auto& j : corpus) {
        std::string key = judgementKey(j);
        try {
            PgrObject p = h.object(j);
            // arrows[k] for k < n is the context projection onto the first k variables
            for (std::size_t k = 0; k < p.arrows.size(); ++k) {
                CompMap g = si.onMorphism(p.arrows[k]);
                if (k + 1 < p.arrows.size()) {
                    Context pre(j.ctx.begin(), j.ctx.begin() + static_cast<long>(k + 1));
                    Judgement lj = Judgement::typeJ(Context(pre.begin(), pre.end() - 1), pre.back().type);
                    add(key, "arrow " + std::to_string(k + 1),
                        sameMap(g, J.context(pre), [&](const Value& x) { return J.base(lj, x); }));
                } else {
                    add(key, "arrow " + std::to_string(k + 1),
                        sameMap(g, J.total(j), [&](const Value& x) { return J.base(j, x); }));
                }
            }
            // sections of a couple of terms
            auto terms = syn.candidates(j.ctx, j.type, 3);
            if (terms.size() > 2) terms.resize(2);
            for (const auto& tm : terms) {
                Judgement tj = Judgement::termJ(j.ctx, tm, j.type);
                CompMap g = si.onMorphism(h.section(tj));
                add(key, "section " + show(tm),
                    sameMap(g, J.context(j.ctx), [&](const Value& x) { return J.section(tj, x); }));
            }
            // substitution squares of the reindexed interpretation are pullbacks
            for (std::size_t pos = 0; pos < j.ctx.size(); ++pos) {
                Context pre(j.ctx.begin(), j.ctx.begin() + static_cast<long>(pos));
                auto cs = syn.candidates(pre, j.ctx[pos].type, 3);
                if (cs.empty()) continue;
                const Expr& c = cs.front();
                Judgement sj = instantiate(j, pos, c);
                CompMap q = si.onMorphism(h.substitutionMap(j, pos, c));
                CompMap p1 = si.onMorphism(h.object(sj).arrows.back());
                CompMap p0 = si.onMorphism(h.object(j).arrows.back());
                // the context substitution Gamma[x/c] -> Gamma
                Expr w = mk::var("w");
                auto proj = contextProjections(sj.ctx, w);
                std::vector<std::pair<std::string, Expr>> full;
                for (std::size_t i = 0, k = 0; i < j.ctx.size(); ++i) {
                    if (i == pos) {
                        std::vector<std::pair<std::string, Expr>> before(proj.begin(),
                                                                         proj.begin() + static_cast<long>(pos));
                        full.emplace_back(j.ctx[i].name, substituteAll(c, before));
                    } else {
                        full.push_back(proj[k++]);
                    }
                }
                Morphism sub{contextSigma(sj.ctx), contextSigma(j.ctx), "w", substituteAll(contextTuple(j.ctx), full)};
                CompMap s = si.onMorphism(sub);
                std::set<std::pair<Value, Value>> pairs;
                std::string fail;
                for (const auto& x : q.domain.elems) {
                    Value qe = q.fn(x), g1 = p1.fn(x);
                    if (p0.fn(qe) != s.fn(g1)) fail = "square does not commute at " + x.str();
                    pairs.insert({qe, g1});
                }
                std::size_t expected = 0;
                for (const auto& e : p0.domain.elems)
                    for (const auto& g1 : s.domain.elems)
                        if (p0.fn(e) == s.fn(g1)) ++expected;
                if (fail.empty() && (pairs.size() != q.domain.size() || pairs.size() != expected))
                    fail = "not a pullback: " + std::to_string(pairs.size()) + " of " + std::to_string(expected);
                add(key, "pullback " + std::to_string(pos + 1) + " along " + show(c), fail);
            }
        } catch (const Error& e) {
            add(key, "error", e.what());
        }
    }
    return rep;
}

}  // namespace au
