#include "au/subspace.hpp"

#include <algorithm>
#include <set>

#include "au/error.hpp"

namespace au {

Oracle OpenSubspace::oracle() const {
    Oracle o;
    for (const auto& e : evaluators) o.evaluators.push_back(e.get());
    o.faithful = true;
    return o;
}

std::unique_ptr<OpenSubspace> openSubspace(const ModelPresentation& m, const std::string& u, const std::string& constant,
                                           std::size_t depth, const CorpusOptions& corpus) {
    if (!m.object(u)) throw ScopeError("unknown object '" + u + "'");
    auto s = std::make_unique<OpenSubspace>();
    s->tcat = internalTheoryOfModel(m);
    s->gen = std::make_unique<CoherenceGenerator>(s->tcat, m, depth);
    s->gen->family(typeCorpus(s->tcat, corpus));
    s->tiso = withCoherentIsos(s->tcat, s->gen->extension());
    SubspaceAxiom n;
    n.name = constant;
    n.type = mk::proper(u);
    s->axioms = {"open", {n}};
    s->theory = extendSubspace(s->tiso, s->axioms);
    auto base = s->gen->stEvaluator();
    for (const auto& v : base->evalType(mk::proper(u)).elems) {
        auto ev = std::make_unique<Evaluator>(*base);
        ev->defineTerm(constant, [v](const std::vector<Value>&) { return v; });
        s->choices.push_back(v);
        s->evaluators.push_back(std::move(ev));
    }
    return s;
}

Expr replaceConstant(const Expr& e, const std::string& name, const Expr& by) {
    if (e->kind == Kind::App && e->name == name && e->kids.empty()) return by;
    if (e->kids.empty()) return e;
    std::vector<Expr> kids;
    bool changed = false;
    for (const auto& k : e->kids) {
        kids.push_back(k ? replaceConstant(k, name, by) : k);
        changed = changed || kids.back() != k;
    }
    return changed ? mk::rebuild(e, std::move(kids)) : e;
}

bool SliceComparison::ok() const {
    return !pairs.empty() && std::all_of(pairs.begin(), pairs.end(), [](const SlicePair& p) { return p.ok(); });
}

SliceComparison sliceCompare(const OpenSubspace& s, const ModelPresentation& m,
                             const std::vector<std::pair<Expr, Expr>>& pairs, std::size_t subspaceSize,
                             std::size_t sliceSize) {
    const std::string& n = s.axioms.axioms.front().name;
    const Expr u = s.axioms.axioms.front().type;
    SynCat syn(s.theory, CheckerOptions{}, s.oracle());
    SliceCategory slice(m, u, s.evaluators.front()->depth());
    const Oracle& sliceOracle = Oracle{{&slice.evaluator()}, true};
    SliceComparison out;

    for (const auto& [c, d] : pairs) {
        SlicePair p;
        p.dom = c;
        p.cod = d;
        HomEnumeration hom = syn.enumerateHom(c, d, subspaceSize);
        p.truncated = hom.truncated;
        p.subspaceClasses = hom.classes.size();
        Expr z = mk::var("z");
        SliceObject a{mk::sigma("_", c, u), {mk::sigma("_", c, u), u, "z", mk::proj2(z)}};
        SliceObject b{mk::sigma("_", d, u), {mk::sigma("_", d, u), u, "z", mk::proj2(z)}};
        Context zctx{{"z", a.dom}};
        Context xctx{{"x", c}};
        const std::string var = hom.ctx.empty() ? "x" : hom.ctx.front().name;

        auto forward = [&](const Expr& t) {
            Expr body = replaceConstant(substitute(t, var, mk::proj1(z)), n, mk::proj2(z));
            return Morphism{a.dom, b.dom, "z", mk::pair(body, mk::proj2(z))};
        };
        auto backward = [&](const Morphism& h) {
            Expr arg = mk::pair(mk::var(var), mk::app(n, {}));
            return mk::proj1(substitute(h.term, h.var, arg));
        };

        std::map<Value, std::size_t> classBySig;
        std::set<Value> images;
        Context hctx = hom.ctx;
        for (std::size_t i = 0; i < hom.classes.size(); ++i) {
            const Expr& t = hom.classes[i].rep;
            classBySig[syn.oracle().signature(hctx, t)] = i;
            Morphism h = forward(t);
            if (!slice.isTriangle(a, b, h)) {
                p.forwardOk = false;
                p.detail = show(t) + " does not give a triangle";
                continue;
            }
            if (!images.insert(sliceOracle.signature(zctx, h.term)).second) {
                p.forwardOk = false;
                p.detail = show(t) + " collides with another class";
            }
            if (!syn.oracle().agree(hctx, backward(h), t).agree()) {
                p.roundTrip = false;
                p.detail = "back(forth(" + show(t) + ")) differs";
            }
        }

        SliceHoms homs = slice.hom(a, b, sliceSize);
        p.sliceHoms = homs.homs.size();
        for (const auto& h : homs.homs) {
            Expr t = backward(h);
            if (!classBySig.count(syn.oracle().signature(hctx, t))) {
                p.backwardOk = false;
                p.detail = show(h.term) + " has no class among the enumerated ones";
            }
            if (!images.count(sliceOracle.signature(zctx, h.term))) {
                p.backwardOk = false;
                p.detail = show(h.term) + " is not the image of a class";
            }
        }
        out.pairs.push_back(std::move(p));
    }
    return out;
}

}  // namespace au
