#include "au/functor.hpp"

#include <algorithm>
#include <set>

#include "au/error.hpp"

namespace au {

namespace {

Context prefixOf(const Context& ctx, std::size_t k) { return Context(ctx.begin(), ctx.begin() + static_cast<long>(k)); }

Judgement lastJudgement(const Context& ctx) {
    return Judgement::typeJ(prefixOf(ctx, ctx.size() - 1), ctx.back().type);
}

std::string freshIn(const Env& env, const std::string& base) {
    std::set<std::string> names;
    for (const auto& [n, v] : env) names.insert(n);
    return freshName(base, names);
}

}  // namespace

// ------------------------------------------------------- presentations

void FunctorPresentation::validate(const ModelPresentation& a, const ModelPresentation& b) const {
    auto fail = [this](const std::string& what) { throw ModelError("functor " + name + ": " + what); };
    CatPresentation bc = b.asCategory();
    for (const auto& o : a.objects) {
        auto it = objects.find(o.name);
        if (it == objects.end()) fail("object " + o.name + " has no image");
        const ModelObject* fo = b.object(it->second);
        if (!fo) fail("image " + it->second + " of " + o.name + " is not an object of " + b.name);
        auto cm = carriers.find(o.name);
        if (cm == carriers.end()) fail("no carrier map for " + o.name);
        for (const auto& x : o.carrier) {
            auto xi = cm->second.find(x);
            if (xi == cm->second.end()) fail("carrier map of " + o.name + " misses " + x);
            if (std::find(fo->carrier.begin(), fo->carrier.end(), xi->second) == fo->carrier.end())
                fail(o.name + ": " + x + " goes to " + xi->second + " outside " + fo->name);
        }
    }
    for (const auto& ar : a.arrows) {
        auto it = arrows.find(ar.name);
        if (it == arrows.end()) fail("arrow " + ar.name + " has no image");
        std::string tgt;
        try {
            tgt = bc.pathTarget(objects.at(ar.src), it->second);
        } catch (const Error& e) {
            fail("image of " + ar.name + ": " + e.what());
        }
        if (tgt != objects.at(ar.tgt)) fail("image of " + ar.name + " ends in " + tgt + ", not " + objects.at(ar.tgt));
        // F(f)(F x) = F(f x)
        for (const auto& [x, y] : ar.graph) {
            std::string lhs = b.applyPath(it->second, carriers.at(ar.src).at(x));
            std::string rhs = carriers.at(ar.tgt).at(y);
            if (lhs != rhs) fail("carrier maps not natural at " + ar.name + "(" + x + "): " + lhs + " vs " + rhs);
        }
    }
}

FunctorPresentation identityFunctor(const ModelPresentation& m) {
    FunctorPresentation f;
    f.name = "id";
    f.source = f.target = m.name;
    for (const auto& o : m.objects) {
        f.objects[o.name] = o.name;
        for (const auto& x : o.carrier) f.carriers[o.name][x] = x;
        f.carriers[o.name];
    }
    for (const auto& a : m.arrows) f.arrows[a.name] = {a.name};
    return f;
}

// ---------------------------------------------------------- translations

Expr Translation::apply(const Expr& e) const {
    switch (e->kind) {
    case Kind::Proper: {
        auto it = types.find(e->name);
        if (it == types.end()) throw ScopeError("translation " + name + " does not cover proper type '" + e->name + "'");
        return mk::proper(it->second);
    }
    case Kind::App: {
        std::vector<Expr> args;
        for (const auto& k : e->kids) args.push_back(apply(k));
        if (auto p = paths.find(e->name); p != paths.end()) {
            if (args.size() != 1) throw ScopeError("path image for non-unary term '" + e->name + "'");
            return pathTerm(p->second, args[0]);
        }
        auto t = terms.find(e->name);
        if (t == terms.end()) throw ScopeError("translation " + name + " does not cover proper term '" + e->name + "'");
        return mk::app(t->second, std::move(args));
    }
    case Kind::Iso:
    case Kind::IsoInv: {
        auto it = isos.find(e->name);
        if (it == isos.end()) throw ScopeError("translation " + name + " does not cover coherence constant '" + e->name + "'");
        Expr arg = apply(e->kids[0]);
        const auto& [outer, inner] = it->second;
        if (e->kind == Kind::Iso) return mk::iso(outer, mk::iso(inner, arg));
        return mk::isoInv(inner, mk::isoInv(outer, arg));
    }
    default: {
        if (e->kids.empty()) return e;
        std::vector<Expr> kids;
        for (const auto& k : e->kids) kids.push_back(k ? apply(k) : k);
        return mk::rebuild(e, std::move(kids));
    }
    }
}

Context Translation::apply(const Context& ctx) const {
    Context out;
    for (const auto& b : ctx) out.push_back({b.name, apply(b.type)});
    return out;
}

Judgement Translation::apply(const Judgement& j) const {
    Judgement out = j;
    out.ctx = apply(j.ctx);
    if (j.type) out.type = apply(j.type);
    if (j.type2) out.type2 = apply(j.type2);
    if (j.term) out.term = apply(j.term);
    if (j.term2) out.term2 = apply(j.term2);
    return out;
}

Morphism Translation::apply(const Morphism& m) const { return {apply(m.dom), apply(m.cod), m.var, apply(m.term)}; }

TermAxiom Translation::apply(const TermAxiom& ax) const {
    return {ax.name, apply(ax.ctx), apply(ax.lhs), apply(ax.rhs), apply(ax.type), ax.orientation};
}

void Translation::requireCovers(const TheoryPresentation& t) const {
    for (const auto& ty : t.properTypes)
        if (!types.count(ty)) throw ScopeError("translation " + name + " does not cover proper type '" + ty + "'");
    for (const auto& d : t.properTerms)
        if (!paths.count(d.name) && !terms.count(d.name))
            throw ScopeError("translation " + name + " does not cover proper term '" + d.name + "'");
    for (const auto& c : t.coherence)
        if (!isos.count(c.key))
            throw ScopeError("translation " + name + " does not cover coherence constant '" + c.key + "'");
}

Translation translateAlongFunctor(const FunctorPresentation& f, const TheoryPresentation& source,
                                  const ModelPresentation& target) {
    Translation tr;
    tr.name = f.name;
    CatPresentation bc = target.asCategory();
    for (const auto& ty : source.properTypes) {
        auto it = f.objects.find(ty);
        if (it == f.objects.end()) throw ScopeError("functor " + f.name + " does not cover proper type '" + ty + "'");
        if (!bc.hasObject(it->second)) throw ScopeError("'" + it->second + "' is not an object of " + target.name);
        tr.types[ty] = it->second;
    }
    for (const auto& d : source.properTerms) {
        auto it = f.arrows.find(d.name);
        if (it == f.arrows.end()) throw ScopeError("functor " + f.name + " does not cover proper term '" + d.name + "'");
        if (d.ctx.size() != 1 || d.ctx[0].type->kind != Kind::Proper || d.type->kind != Kind::Proper)
            throw ScopeError("proper term '" + d.name + "' is not an arrow between proper types");
        if (bc.pathTarget(tr.types.at(d.ctx[0].type->name), it->second) != tr.types.at(d.type->name))
            throw ScopeError("image of '" + d.name + "' has the wrong target");
        tr.paths[d.name] = it->second;
    }
    return tr;
}

std::vector<FsumResult> checkFsum(const Translation& tr, const std::vector<Judgement>& corpus) {
    static const TheoryPresentation none;
    HInterpretation h(none);
    std::vector<FsumResult> out;
    for (const auto& j : corpus) {
        FsumResult r{judgementKey(j), true, ""};
        try {
            PgrObject lhs = reindex(h.object(j), tr);
            PgrObject rhs = h.object(tr.apply(j));
            if (lhs.arrows.size() != rhs.arrows.size()) {
                r.ok = false;
                r.detail = "arrow counts differ";
            }
            for (std::size_t i = 0; r.ok && i < lhs.arrows.size(); ++i) {
                const Morphism& a = lhs.arrows[i];
                const Morphism& b = rhs.arrows[i];
                bool same = alphaEqual(a.dom, b.dom) && alphaEqual(a.cod, b.cod) &&
                            alphaEqual(a.term, substitute(b.term, b.var, mk::var(a.var)));
                if (!same) {
                    r.ok = false;
                    r.detail = "arrow " + std::to_string(i + 1) + ": " + a.str() + " vs " + b.str();
                }
            }
        } catch (const Error& e) {
            r.ok = false;
            r.detail = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

PgrObject reindex(const PgrObject& p, const Translation& tr) {
    PgrObject out;
    for (const auto& a : p.arrows) out.arrows.push_back(tr.apply(a));
    return out;
}

// ---------------------------------------------------- F on model values

ModelFunctor::ModelFunctor(FunctorPresentation f, const ModelPresentation& a, const ModelPresentation& b)
    : f_(std::move(f)), a_(&a), b_(&b) {
    f_.validate(a, b);
}

Value ModelFunctor::onFibre(const Expr& t, const Value& v) const {
    const Structure& sa = a_->structure;
    switch (t->kind) {
    case Kind::Proper: {
        const std::string x = sa.unproper(v).text();
        const auto& cm = f_.carriers.at(t->name);
        auto it = cm.find(x);
        if (it == cm.end()) throw ModelError("functor " + f_.name + ": no image for " + x + " in " + t->name);
        return b_->structure.proper(Value::atom(it->second));
    }
    case Kind::Top:
    case Kind::Eq: return v;
    case Kind::Bot: throw ModelError("no element of an empty type");
    case Kind::Sum: {
        bool left = sa.isInl(v);
        Value inner = onFibre(t->kids[left ? 0 : 1], sa.payload(v));
        return left ? sa.inl(inner) : sa.inr(inner);
    }
    case Kind::Sigma:
        return sa.pair(onFibre(t->kids[0], sa.fst(v)), onFibre(openBody(t->kids[1], mk::var("%f")), sa.snd(v)));
    case Kind::List: {
        std::vector<Value> xs;
        for (const auto& x : sa.elems(v)) xs.push_back(onFibre(t->kids[0], x));
        return sa.list(std::move(xs));
    }
    case Kind::Quot: return sa.cls(onFibre(t->kids[0], sa.rep(v)));
    default: throw UsageError("not a type: " + show(t));
    }
}

Value ModelFunctor::onContext(const SemInterp& aSlice, const Context& ctx, const Value& g) const {
    if (ctx.empty()) return g;
    return onElement(aSlice, lastJudgement(ctx), g);
}

Value ModelFunctor::onElement(const SemInterp& aSlice, const Judgement& j, const Value& e) const {
    return aSlice.element(j, onContext(aSlice, j.ctx, aSlice.base(j, e)), onFibre(j.type, aSlice.fibre(j, e)));
}

Value ModelFunctor::witness(const Translation& tr, const Evaluator& bEval, const Expr& t, const Value& v,
                            Env envB) const {
    const Structure& sa = a_->structure;
    const Structure& sb = bEval.structure();
    switch (t->kind) {
    case Kind::Proper: return v;
    case Kind::Top: return sb.unit();
    case Kind::Eq: return sb.refl();
    case Kind::Bot: throw ModelError("no element of an empty type");
    case Kind::Sum: {
        bool left = sa.isInl(v);
        Value inner = witness(tr, bEval, t->kids[left ? 0 : 1], sa.payload(v), envB);
        return left ? sb.inl(inner) : sb.inr(inner);
    }
    case Kind::Sigma: {
        Value d = witness(tr, bEval, t->kids[0], sa.fst(v), envB);
        std::string x = freshIn(envB, "%w");
        envB.emplace_back(x, d);
        Value b = witness(tr, bEval, openBody(t->kids[1], mk::var(x)), sa.snd(v), envB);
        return sb.pair(d, b);
    }
    case Kind::List: {
        std::vector<Value> xs;
        for (const auto& x : sa.elems(v)) xs.push_back(witness(tr, bEval, t->kids[0], x, envB));
        return sb.list(std::move(xs));
    }
    case Kind::Quot: {
        Value r = witness(tr, bEval, t->kids[0], sa.rep(v), envB);
        std::string z = freshIn(envB, "%z");
        envB.emplace_back(z, r);
        return bEval.evalTerm(mk::classOf(tr.apply(t), mk::var(z)), envB);
    }
    default: throw UsageError("not a type: " + show(t));
    }
}

namespace {

std::string witnessRule(const Expr& t) {
    switch (t->kind) {
    case Kind::Top: return "terminal";
    case Kind::Bot: return "initial";
    case Kind::Proper: return "proper";
    case Kind::Sum: return "coproduct";
    case Kind::List: return "list";
    case Kind::Quot: return "quotient";
    case Kind::Eq: return "equalizer";
    case Kind::Sigma: return openBody(t->kids[1], mk::var("%r"))->kind == Kind::Eq ? "equalizer" : "product";
    default: return "other";
    }
}

}  // namespace

std::vector<ModelFunctor::WitnessCheck> ModelFunctor::checkWitnesses(const Translation& tr, const SemInterp& aSlice,
                                                                     const SemInterp& bSlice,
                                                                     const std::vector<Expr>& objects) const {
    std::vector<WitnessCheck> out;
    for (const auto& c : objects) {
        WitnessCheck w{exprKey(c), witnessRule(c), true, 0, ""};
        try {
            Judgement j = Judgement::typeJ({}, c), jb = tr.apply(j);
            EnumSet target = bSlice.total(jb);
            std::set<Value> hit;
            for (const auto& e : aSlice.total(j).elems) {
                Value fe = onElement(aSlice, j, e);
                Value y = bSlice.element(jb, bSlice.structure().unit(),
                                         witness(tr, bSlice.evaluator(), c, aSlice.fibre(j, fe), {}));
                ++w.samples;
                if (!target.contains(y)) {
                    w.ok = false;
                    w.detail = "F(" + e.str() + ") goes to " + y.str() + " outside the target";
                    break;
                }
                if (!hit.insert(y).second) {
                    w.ok = false;
                    w.detail = "not injective at " + e.str();
                    break;
                }
            }
            if (w.ok && hit.size() != target.size()) {
                w.ok = false;
                w.detail = "misses " + std::to_string(target.size() - hit.size()) + " target elements";
            }
        } catch (const Error& e) {
            w.ok = false;
            w.detail = e.what();
        }
        out.push_back(std::move(w));
    }
    return out;
}

// ------------------------------------------------------- interpretations

Value TranslatedInterp::weakeningMap(const Judgement& j, const Expr& d, std::size_t pos, const Value& e) const {
    return b_->weakeningMap(tr_->apply(j), tr_->apply(d), pos, e);
}

Value TranslatedInterp::substitutionMap(const Judgement& j, std::size_t pos, const Expr& c, const Value& e) const {
    return b_->substitutionMap(tr_->apply(j), pos, tr_->apply(c), e);
}

const std::map<Value, Value>& ImageInterp::table(const Judgement& j) const {
    std::string key = judgementKey(j);
    auto it = inverse_.find(key);
    if (it != inverse_.end()) return it->second;
    std::map<Value, Value> t;
    for (const auto& e : a_->total(j).elems) t.emplace(f_->onElement(*a_, j, e), e);
    return inverse_.emplace(key, std::move(t)).first->second;
}

Value ImageInterp::preimage(const Judgement& j, const Value& fe) const {
    const auto& t = table(j);
    auto it = t.find(fe);
    if (it == t.end()) throw ModelError(fe.str() + " is not in the image of " + show(j));
    return it->second;
}

Value ImageInterp::contextPreimage(const Context& ctx, const Value& fg) const {
    if (ctx.empty()) return fg;
    return preimage(lastJudgement(ctx), fg);
}

EnumSet ImageInterp::context(const Context& ctx) const {
    std::vector<Value> out;
    for (const auto& g : a_->context(ctx).elems) out.push_back(f_->onContext(*a_, ctx, g));
    return EnumSet::of(std::move(out));
}

EnumSet ImageInterp::total(const Judgement& j) const {
    std::vector<Value> out;
    for (const auto& [fe, e] : table(j)) out.push_back(fe);
    return EnumSet::of(std::move(out));
}

Value ImageInterp::base(const Judgement& j, const Value& fe) const {
    return f_->onContext(*a_, j.ctx, a_->base(j, preimage(j, fe)));
}

Value ImageInterp::section(const Judgement& tj, const Value& fg) const {
    return f_->onElement(*a_, Judgement::typeJ(tj.ctx, tj.type), a_->section(tj, contextPreimage(tj.ctx, fg)));
}

Value ImageInterp::weakeningMap(const Judgement& j, const Expr& d, std::size_t pos, const Value& fe) const {
    return f_->onElement(*a_, j, a_->weakeningMap(j, d, pos, preimage(weaken(j, d, pos), fe)));
}

Value ImageInterp::substitutionMap(const Judgement& j, std::size_t pos, const Expr& c, const Value& fe) const {
    return f_->onElement(*a_, j, a_->substitutionMap(j, pos, c, preimage(instantiate(j, pos, c), fe)));
}

// ------------------------------------------------------------------- tau

TauGenerator::TauGenerator(const ModelFunctor& f, const Translation& tr, std::size_t depth, std::string idPrefix)
    : f_(&f), tr_(&tr), prefix_(std::move(idPrefix)) {
    aEval_ = std::make_unique<Evaluator>(&f.source(), f.source().structure, depth);
    bEval_ = std::make_unique<Evaluator>(&f.target(), f.target().structure, depth);
    aSlice_ = std::make_unique<SemInterp>(*aEval_, SemInterp::Mode::Slice);
    bSlice_ = std::make_unique<SemInterp>(*bEval_, SemInterp::Mode::Slice);
    i1_ = std::make_unique<TranslatedInterp>(*bSlice_, tr);
    i2_ = std::make_unique<ImageInterp>(*aSlice_, f);
}

const IsoComponent& TauGenerator::component(const Judgement& typeJ) {
    Judgement j = canonicalJudgement(typeJ);
    std::string key = judgementKey(j);
    if (const IsoComponent* c = family_.find(key)) return *c;
    std::string id = prefix_ + std::to_string(nextId_++);
    IsoComponent c = build(j, id);
    family_.add(std::move(c));
    return *family_.find(key);
}

IsoFamily TauGenerator::family(const std::vector<Judgement>& corpus) {
    IsoFamily out;
    for (const auto& j : corpus) out.add(component(j));
    return out;
}

MorphismReport TauGenerator::check(const std::vector<Judgement>& corpus, const TheoryPresentation& tcat,
                                   MorphismCheckOptions opts) {
    IsoFamily fam = family(corpus);
    ComponentSource extra = [this](const Judgement& j) -> const IsoComponent& { return component(j); };
    return checkInterpMorphism(fam, *i1_, *i2_, corpus, tcat, extra, std::move(opts));
}

IsoComponent TauGenerator::build(const Judgement& j, const std::string& id) {
    IsoComponent c;
    c.index = j;
    c.key = judgementKey(j);
    c.id = id;
    const Expr& b = j.type;

    if (b->kind == Kind::Sigma) {
        std::string x = "x" + std::to_string(j.ctx.size() + 1);
        Context ext = j.ctx;
        ext.push_back({x, b->kids[0]});
        const IsoComponent& body = component(Judgement::typeJ(ext, openBody(b->kids[1], mk::var(x))));
        c.rule = "sigma";
        c.fwd = body.fwd;
        c.inv = body.inv;
        c.uses = {body.key};
        return c;
    }

    if (b->kind == Kind::Top && j.ctx.empty()) {
        // the terminal witness and its inverse
        Value fa = f_->source().structure.unit();
        Value ub = bSlice_->structure().unit();
        c.rule = "terminal";
        c.fwd = [fa](const Value&) { return fa; };
        c.inv = [ub](const Value&) { return ub; };
        return c;
    }

    static const std::map<Kind, std::string> rules{{Kind::Top, "terminal-weakened"}, {Kind::Bot, "initial"},
                                                   {Kind::Proper, "proper"},         {Kind::Sum, "coproduct"},
                                                   {Kind::List, "list"},             {Kind::Eq, "equalizer"},
                                                   {Kind::Quot, "quotient"}};
    c.rule = rules.at(b->kind);

    MapFn ctxInv = [](const Value& v) { return v; };
    if (!j.ctx.empty()) {
        const IsoComponent& g = component(lastJudgement(j.ctx));
        ctxInv = g.inv;
        c.uses.push_back(g.key);
    } else {
        Value ub = bSlice_->structure().unit();
        ctxInv = [ub](const Value&) { return ub; };
    }

    const ModelFunctor* f = f_;
    const Translation* tr = tr_;
    const SemInterp* as = aSlice_.get();
    const SemInterp* bs = bSlice_.get();
    Judgement jb = tr->apply(j);
    MapFn inv = [f, tr, as, bs, j, jb, ctxInv](const Value& fe) {
        Value gb = ctxInv(as->base(j, fe));
        Env envB = bs->env(jb.ctx, gb);
        return bs->element(jb, gb, f->witness(*tr, bs->evaluator(), j.type, as->fibre(j, fe), envB));
    };
    auto table = std::make_shared<std::map<Value, Value>>();
    for (const auto& fe : i2_->total(j).elems) table->emplace(inv(fe), fe);
    std::string where = c.key;
    c.fwd = [table, where](const Value& v) {
        auto it = table->find(v);
        if (it == table->end()) throw ModelError("tau for " + where + ": " + v.str() + " outside the domain");
        return it->second;
    };
    c.inv = inv;
    return c;
}

}  // namespace au
