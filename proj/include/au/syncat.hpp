#pragma once

// Syntactic categories with their chosen AU structure, the categories Pgr and
// arrow lists over a host, slices of a model, and bounded hom enumeration.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "au/checker.hpp"
#include "au/model.hpp"
#include "au/syntax.hpp"
#include "au/theory.hpp"

namespace au {

/// A morphism dom -> cod presented by a term in the one-variable context
/// [var : dom].
struct Morphism {
    Expr dom;
    Expr cod;
    std::string var;
    Expr term;

    Context context() const { return {{var, dom}}; }
    std::string str() const;
};

Morphism identityMorphism(const Expr& x, const std::string& var = "x");
/// u after t; composition is substitution.
Morphism composeMorphisms(const Morphism& u, const Morphism& t);
/// The term of `m` with its variable replaced by `arg`.
Expr applyMorphism(const Morphism& m, const Expr& arg);

struct HostVerdict {
    enum class Status { Proved, AgreeAtDepth, Unknown, Refuted };
    Status status = Status::Unknown;
    EqCertificate certificate;
    std::optional<SampleVerdict> sample;

    bool holds() const { return status == Status::Proved || status == Status::AgreeAtDepth; }
    bool proved() const { return status == Status::Proved; }
    std::string str() const;
};

/// A category whose objects are closed types and whose morphisms are terms,
/// with some way of deciding (or semi-deciding) equality of parallel arrows.
class Host {
public:
    virtual ~Host() = default;
    virtual HostVerdict equal(const Morphism& a, const Morphism& b) const = 0;
    virtual HostVerdict equalTerms(const Context& ctx, const Expr& t, const Expr& u, const Expr& type) const = 0;
    virtual std::string name() const = 0;
};

/// Semantic oracle: a family of evaluators (for instance one per choice of
/// a subspace constant). Terms agree when they agree under all of them.
struct Oracle {
    std::vector<const Evaluator*> evaluators;
    bool faithful = false;  // agreement may identify hom classes

    bool empty() const { return evaluators.empty(); }
    SampleVerdict agree(const Context& ctx, const Expr& t, const Expr& u) const;
    Value signature(const Context& ctx, const Expr& t) const;
};

struct HomClass {
    Expr rep;
    std::vector<Expr> members;
    bool modelMerged = false;  // some member joined by model agreement only
};

struct HomEnumeration {
    Context ctx;
    Expr cod;
    std::vector<HomClass> classes;
    std::size_t candidates = 0;
    bool truncated = false;
};

class SynCat : public Host {
public:
    explicit SynCat(const TheoryPresentation& theory, CheckerOptions opts = {}, Oracle oracle = {});

    const TheoryPresentation& theory() const { return *theory_; }
    const Checker& checker() const { return checker_; }
    const Oracle& oracle() const { return oracle_; }

    Morphism identity(const Expr& x) const { return identityMorphism(x); }
    Morphism compose(const Morphism& u, const Morphism& t) const;
    /// Type-checks the term; throws TypeError.
    Morphism make(Expr dom, Expr cod, std::string var, Expr term) const;

    HostVerdict equal(const Morphism& a, const Morphism& b) const override;
    HostVerdict equalTerms(const Context& ctx, const Expr& t, const Expr& u, const Expr& type) const override;
    std::string name() const override { return "syn(" + theory_->name + ")"; }

    /// Normal-form terms of the type in the context, ordered by size, with
    /// term size at most maxSize (type annotations do not count).
    std::vector<Expr> candidates(const Context& ctx, const Expr& type, std::size_t maxSize,
                                 bool* truncated = nullptr) const;
    HomEnumeration enumerateTerms(const Context& ctx, const Expr& type, std::size_t sizeBound) const;
    HomEnumeration enumerateHom(const Expr& x, const Expr& y, std::size_t sizeBound) const;

    std::size_t candidateCap = 20000;

private:
    const TheoryPresentation* theory_;
    Checker checker_;
    Oracle oracle_;
};

/// Hosts morphisms in a model: equality is agreement at the evaluation depth.
class ModelHost : public Host {
public:
    explicit ModelHost(Oracle oracle) : oracle_(std::move(oracle)) {}
    HostVerdict equal(const Morphism& a, const Morphism& b) const override;
    HostVerdict equalTerms(const Context& ctx, const Expr& t, const Expr& u, const Expr& type) const override;
    std::string name() const override { return "model"; }
    const Oracle& oracle() const { return oracle_; }

private:
    Oracle oracle_;
};

/// The chosen AU structure of a syntactic category.
struct ChosenStructure {
    Expr terminal() const { return mk::top(); }
    Morphism bang(const Expr& x) const;
    Expr product(const Expr& x, const Expr& y) const;
    Morphism fst(const Expr& x, const Expr& y) const;
    Morphism snd(const Expr& x, const Expr& y) const;
    Morphism pairing(const Morphism& f, const Morphism& g) const;
    Expr equalizer(const Morphism& c, const Morphism& d) const;
    Morphism equalizerIncl(const Morphism& c, const Morphism& d) const;
    /// The factorization of h through the equalizer (h must equalize c, d).
    Morphism equalizerLift(const Morphism& c, const Morphism& d, const Morphism& h) const;
    Expr initial() const { return mk::bot(); }
    Morphism fromInitial(const Expr& x) const;
    Expr coproduct(const Expr& x, const Expr& y) const;
    Morphism inl(const Expr& x, const Expr& y) const;
    Morphism inr(const Expr& x, const Expr& y) const;
    Morphism copair(const Morphism& f, const Morphism& g) const;
    Expr listObject(const Expr& a) const;
    Morphism nil(const Expr& a) const;                   // r0 : Top -> List A
    Morphism cons(const Expr& a) const;                  // r1 : List A x A -> List A
    /// rec(b, g) : B x List A -> Y for b : B -> Y and g : Y x A -> Y.
    Morphism rec(const Expr& a, const Morphism& b, const Morphism& g) const;
    Expr pullback(const Morphism& f, const Morphism& g) const;
};

ChosenStructure auStructure(const SynCat& c);

/// b1, ..., bn with cod(b1) = Top and dom(b_i) = cod(b_{i+1}).
struct PgrObject {
    std::vector<Morphism> arrows;
    void validate() const;
    Expr top() const { return arrows.empty() ? mk::top() : arrows.back().dom; }
};

/// phi_0, ..., phi_n between two arrow lists of length n; phi_i maps dom(b_i)
/// to dom(c_i) and phi_0 maps the codomains of b_1 and c_1.
struct ArrowListMorphism {
    std::vector<Morphism> components;
};

struct SquaresVerdict {
    std::vector<HostVerdict> squares;  // square i: c_i . phi_i = phi_{i-1} . b_i
    bool holds() const;
    bool proved() const;
};

SquaresVerdict checkArrowListSquares(const Host& host, const PgrObject& source, const PgrObject& target,
                                     const ArrowListMorphism& phi);
ArrowListMorphism composeArrowList(const ArrowListMorphism& psi, const ArrowListMorphism& phi);
ArrowListMorphism identityArrowList(const PgrObject& p);

struct PgrMorphismResult {
    bool accepted = false;
    std::string reason;
    ArrowListMorphism morphism;
    HostVerdict lastSquare;
};

/// A Pgr morphism p -> q: identities except the last component d, accepted
/// when c_n . d = b_n.
PgrMorphismResult pgrCompose(const Host& host, const Morphism& d, const PgrObject& p, const PgrObject& q);

struct SliceObject {
    Expr dom;
    Morphism map;  // dom -> U
};

struct SliceHoms {
    std::vector<Morphism> homs;  // one representative per semantic class
    std::size_t candidates = 0;
};

/// The slice of a model over U. Homs are the definable triangles, enumerated
/// through the model's internal theory and identified by evaluation.
class SliceCategory {
public:
    SliceCategory(const ModelPresentation& m, Expr u, std::size_t depth, CheckerOptions opts = {});

    const Expr& base() const { return u_; }
    /// Every map from a declared carrier into U, as a graph.
    std::vector<std::pair<std::string, std::map<std::string, std::string>>> carrierObjects() const;
    bool isTriangle(const SliceObject& a, const SliceObject& b, const Morphism& h) const;
    SliceHoms hom(const SliceObject& a, const SliceObject& b, std::size_t sizeBound) const;
    const Evaluator& evaluator() const { return eval_; }

private:
    const ModelPresentation* model_;
    Expr u_;
    TheoryPresentation theory_;
    Evaluator eval_;
    CheckerOptions opts_;
};

}  // namespace au
