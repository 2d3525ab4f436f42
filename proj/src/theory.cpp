#include "au/theory.hpp"

#include <set>

#include "au/checker.hpp"
#include "au/error.hpp"

namespace au {

const CatArrow* CatPresentation::arrow(const std::string& n) const {
    for (const auto& a : arrows)
        if (a.name == n) return &a;
    return nullptr;
}

bool CatPresentation::hasObject(const std::string& n) const {
    for (const auto& o : objects)
        if (o == n) return true;
    return false;
}

std::string CatPresentation::pathTarget(const std::string& source, const std::vector<std::string>& path) const {
    std::string cur = source;
    for (const auto& n : path) {
        const CatArrow* a = arrow(n);
        if (!a) throw ScopeError("unknown arrow '" + n + "' in path");
        if (a->src != cur) throw TypeError("arrow '" + n + "' does not compose: expected source " + cur);
        cur = a->tgt;
    }
    return cur;
}

void CatPresentation::validate() const {
    std::set<std::string> names;
    for (const auto& o : objects)
        if (!names.insert(o).second) throw ScopeError("duplicate name '" + o + "'");
    for (const auto& a : arrows) {
        if (!names.insert(a.name).second) throw ScopeError("duplicate name '" + a.name + "'");
        if (!hasObject(a.src)) throw ScopeError("arrow '" + a.name + "' has unknown source '" + a.src + "'");
        if (!hasObject(a.tgt)) throw ScopeError("arrow '" + a.name + "' has unknown target '" + a.tgt + "'");
    }
    for (const auto& e : equations) {
        if (!hasObject(e.source)) throw ScopeError("equation over unknown object '" + e.source + "'");
        if (pathTarget(e.source, e.lhs) != pathTarget(e.source, e.rhs))
            throw TypeError("equation sides have different targets");
    }
}

const ModelObject* ModelPresentation::object(const std::string& n) const {
    for (const auto& o : objects)
        if (o.name == n) return &o;
    return nullptr;
}

const ModelArrow* ModelPresentation::arrow(const std::string& n) const {
    for (const auto& a : arrows)
        if (a.name == n) return &a;
    return nullptr;
}

CatPresentation ModelPresentation::asCategory() const {
    CatPresentation c;
    c.name = name;
    for (const auto& o : objects) c.objects.push_back(o.name);
    for (const auto& a : arrows) c.arrows.push_back({a.name, a.src, a.tgt});
    c.equations = equations;
    return c;
}

std::string ModelPresentation::applyPath(const std::vector<std::string>& path, const std::string& elem) const {
    std::string cur = elem;
    for (const auto& n : path) {
        const ModelArrow* a = arrow(n);
        if (!a) throw ScopeError("unknown map '" + n + "'");
        auto it = a->graph.find(cur);
        if (it == a->graph.end()) throw ModelError("map '" + n + "' undefined at '" + cur + "'");
        cur = it->second;
    }
    return cur;
}

void ModelPresentation::validate() const {
    asCategory().validate();
    for (const auto& o : objects) {
        std::set<std::string> seen;
        for (const auto& e : o.carrier)
            if (!seen.insert(e).second) throw ModelError("carrier of '" + o.name + "' repeats '" + e + "'");
    }
    for (const auto& a : arrows) {
        const ModelObject* s = object(a.src);
        const ModelObject* t = object(a.tgt);
        std::set<std::string> tgt(t->carrier.begin(), t->carrier.end());
        if (a.graph.size() != s->carrier.size())
            throw ModelError("map '" + a.name + "' is not total on '" + a.src + "'");
        for (const auto& e : s->carrier) {
            auto it = a.graph.find(e);
            if (it == a.graph.end()) throw ModelError("map '" + a.name + "' undefined at '" + e + "'");
            if (!tgt.count(it->second))
                throw ModelError("map '" + a.name + "' sends '" + e + "' outside '" + a.tgt + "'");
        }
    }
    for (const auto& eq : equations) {
        for (const auto& e : object(eq.source)->carrier) {
            std::string l = applyPath(eq.lhs, e), r = applyPath(eq.rhs, e);
            if (l != r)
                throw ModelError("composition table not closed: equation over '" + eq.source + "' fails at '" + e +
                                 "' (" + l + " vs " + r + ")");
        }
    }
}

bool TheoryPresentation::hasType(const std::string& n) const {
    for (const auto& t : properTypes)
        if (t == n) return true;
    return false;
}

const ProperTermDecl* TheoryPresentation::term(const std::string& n) const {
    for (const auto& t : properTerms)
        if (t.name == n) return &t;
    return nullptr;
}

const CoherenceEntry* TheoryPresentation::coherenceEntry(const std::string& key) const {
    for (const auto& e : coherence)
        if (e.key == key) return &e;
    return nullptr;
}

const TermAxiom* TheoryPresentation::axiom(const std::string& n) const {
    for (const auto& a : termAxioms)
        if (a.name == n) return &a;
    return nullptr;
}

Context SubspaceAxiom::context() const {
    if (binder) return {*binder};
    return {};
}

Expr pathTerm(const std::vector<std::string>& path, Expr arg) {
    for (const auto& n : path) arg = mk::app(n, {arg});
    return arg;
}

TheoryPresentation theoryFromCategory(const CatPresentation& p) {
    p.validate();
    TheoryPresentation t;
    t.name = p.name;
    t.properTypes = p.objects;
    for (const auto& a : p.arrows) t.properTerms.push_back({a.name, {{"x", mk::proper(a.src)}}, mk::proper(a.tgt)});
    for (std::size_t i = 0; i < p.equations.size(); ++i) {
        const auto& e = p.equations[i];
        TermAxiom ax;
        ax.name = p.name.empty() ? "eq" + std::to_string(i + 1) : p.name + ".eq" + std::to_string(i + 1);
        ax.ctx = {{"x", mk::proper(e.source)}};
        ax.lhs = pathTerm(e.lhs, mk::var("x"));
        ax.rhs = pathTerm(e.rhs, mk::var("x"));
        ax.type = mk::proper(p.pathTarget(e.source, e.lhs));
        ax.orientation = e.lhs.size() >= e.rhs.size() ? Orientation::LeftToRight : Orientation::RightToLeft;
        t.termAxioms.push_back(std::move(ax));
    }
    return t;
}

TheoryPresentation internalTheoryOfModel(const ModelPresentation& m) {
    m.validate();
    TheoryPresentation t = theoryFromCategory(m.asCategory());
    t.realization = m.name;
    for (const auto& a : m.arrows) {
        if (a.src != a.tgt) continue;
        bool identity = true;
        for (const auto& [k, v] : a.graph) identity = identity && k == v;
        if (!identity) continue;
        t.termAxioms.push_back({m.name + "." + a.name + ".id", {{"x", mk::proper(a.src)}},
                                mk::app(a.name, {mk::var("x")}), mk::var("x"), mk::proper(a.src),
                                Orientation::LeftToRight});
    }
    return t;
}

TheoryPresentation withCoherentIsos(const TheoryPresentation& t, const CoherenceExtension& ext) {
    if (ext.entries.empty()) throw UsageError("missing coherent isomorphism family");
    TheoryPresentation out = t;
    out.name = t.name + "+iso";
    for (const auto& ty : ext.properTypes)
        if (!out.hasType(ty)) out.properTypes.push_back(ty);
    for (const auto& d : ext.properTerms)
        if (!out.term(d.name)) out.properTerms.push_back(d);
    for (const auto& e : ext.entries)
        if (!out.coherenceEntry(e.key)) out.coherence.push_back(e);
    for (const auto& a : ext.axioms)
        if (!out.axiom(a.name)) out.termAxioms.push_back(a);
    return out;
}

TheoryPresentation extendSubspace(const TheoryPresentation& tIso, const SubspaceAxioms& s) {
    TheoryPresentation out = tIso;
    if (!s.axioms.empty()) out.name = tIso.name + "[" + s.name + "]";
    for (const auto& ax : s.axioms) {
        Checker ck(out);
        Context ctx = ax.context();
        try {
            ck.checkContext(ctx);
            ck.checkType(ctx, ax.type);
            if (ax.form == SubspaceAxiom::Form::NewTerm) {
                if (out.term(ax.name) || out.hasType(ax.name))
                    throw ScopeError("name '" + ax.name + "' already declared");
                out.properTerms.push_back({ax.name, ctx, ax.type});
            } else {
                ck.checkTerm(ctx, ax.lhs, ax.type);
                ck.checkTerm(ctx, ax.rhs, ax.type);
                if (out.axiom(ax.name)) throw ScopeError("axiom '" + ax.name + "' already declared");
                out.termAxioms.push_back({ax.name, ctx, ax.lhs, ax.rhs, ax.type, ax.orientation});
            }
        } catch (const ScopeError& e) {
            throw ScopeError("subspace axiom '" + ax.name + "': " + e.what());
        } catch (const TypeError& e) {
            throw TypeError("subspace axiom '" + ax.name + "': " + e.what());
        }
    }
    return out;
}

}  // namespace au
