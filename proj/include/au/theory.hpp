#pragma once

// Theory presentations and the constructions producing them: the free theory
// of a category, the internal theory of a model, the extension by coherent
// isomorphisms and the extension by subspace axioms.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "au/syntax.hpp"
#include "au/value.hpp"

namespace au {

struct CatArrow {
    std::string name;
    std::string src;
    std::string tgt;
};

/// A path equation `lhs = rhs` between arrows out of `source`. Paths list arrow
/// names in application order (first applied first); the empty path is the
/// identity.
struct CatEquation {
    std::string source;
    std::vector<std::string> lhs;
    std::vector<std::string> rhs;
};

struct CatPresentation {
    std::string name;
    std::vector<std::string> objects;
    std::vector<CatArrow> arrows;
    std::vector<CatEquation> equations;

    const CatArrow* arrow(const std::string& n) const;
    bool hasObject(const std::string& n) const;
    /// Target object of a path from `source`; throws on a broken path.
    std::string pathTarget(const std::string& source, const std::vector<std::string>& path) const;
    void validate() const;
};

struct ModelObject {
    std::string name;
    std::vector<std::string> carrier;
};

struct ModelArrow {
    std::string name;
    std::string src;
    std::string tgt;
    std::map<std::string, std::string> graph;
};

/// A finitely presented model realized in sets: named carriers, named maps,
/// a composition table and the chosen AU structure used by the model.
struct ModelPresentation {
    std::string name;
    std::vector<ModelObject> objects;
    std::vector<ModelArrow> arrows;
    std::vector<CatEquation> equations;
    Structure structure;
    bool faithful = false;

    const ModelObject* object(const std::string& n) const;
    const ModelArrow* arrow(const std::string& n) const;
    CatPresentation asCategory() const;
    /// Applies a path to a carrier element.
    std::string applyPath(const std::vector<std::string>& path, const std::string& elem) const;
    void validate() const;
};

enum class Orientation { LeftToRight, RightToLeft, None };

struct ProperTermDecl {
    std::string name;
    Context ctx;
    Expr type;
};

struct TypeAxiom {
    std::string name;
    Context ctx;
    Expr lhs;
    Expr rhs;
};

struct TermAxiom {
    std::string name;
    Context ctx;
    Expr lhs;
    Expr rhs;
    Expr type;
    Orientation orientation = Orientation::LeftToRight;
};

/// One coherent isomorphism sigma_{B[ctx]}: domain -> codomain, both closed.
struct CoherenceEntry {
    std::string key;
    Context ctx;
    Expr type;
    Expr domain;
    Expr codomain;
    std::vector<std::string> axioms;  // names of its defining equations
};

/// Data produced by the coherent-isomorphism generator for withCoherentIsos.
struct CoherenceExtension {
    std::vector<std::string> properTypes;
    std::vector<ProperTermDecl> properTerms;
    std::vector<CoherenceEntry> entries;
    std::vector<TermAxiom> axioms;
};

struct TheoryPresentation {
    std::string name;
    std::vector<std::string> properTypes;
    std::vector<ProperTermDecl> properTerms;
    std::vector<TypeAxiom> typeAxioms;
    std::vector<TermAxiom> termAxioms;
    std::vector<CoherenceEntry> coherence;
    /// Name of the model whose objects and maps the proper symbols come from
    /// (the Em/V correspondence); empty for purely syntactic theories.
    std::string realization;

    bool hasType(const std::string& n) const;
    const ProperTermDecl* term(const std::string& n) const;
    const CoherenceEntry* coherenceEntry(const std::string& key) const;
    const TermAxiom* axiom(const std::string& n) const;
};

/// One axiom of a subspace: a new constant `c : C [x : B]` or an equation
/// `c = d : C [x : B]`. The binder is optional (empty context).
struct SubspaceAxiom {
    enum class Form { NewTerm, NewEquality };
    Form form = Form::NewTerm;
    std::string name;
    std::optional<Binding> binder;
    Expr type;
    Expr lhs;  // NewEquality
    Expr rhs;  // NewEquality
    Orientation orientation = Orientation::LeftToRight;

    Context context() const;
};

struct SubspaceAxioms {
    std::string name;
    std::vector<SubspaceAxiom> axioms;
};

TheoryPresentation theoryFromCategory(const CatPresentation& p);
TheoryPresentation internalTheoryOfModel(const ModelPresentation& m);
/// Adds the sigma constants, their inverses and defining equations.
TheoryPresentation withCoherentIsos(const TheoryPresentation& t, const CoherenceExtension& ext);
TheoryPresentation extendSubspace(const TheoryPresentation& tIso, const SubspaceAxioms& s);

/// The term for a category path applied to `arg`.
Expr pathTerm(const std::vector<std::string>& path, Expr arg);

}  // namespace au
