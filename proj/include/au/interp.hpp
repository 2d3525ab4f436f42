#pragma once

// Interpretations of type theories: the syntactic interpretation (-)^H into
// a syntactic category, semantic interpretations into the set model, the
// coherent-isomorphism family between them and the checks an interpretation
// morphism has to pass.

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "au/model.hpp"
#include "au/syncat.hpp"
#include "au/theory.hpp"

namespace au {

// ------------------------------------------------------------------ corpus

struct CorpusOptions {
    std::size_t maxEntries = 40;
    std::size_t maxContext = 2;
    bool quotients = true;
};

/// Types under context built from Top, Bot and the proper types with Sum,
/// Sigma (plain or over an equality), List and Eq, of constructor depth at
/// most 3. Deterministic.
std::vector<Judgement> typeCorpus(const TheoryPresentation& t, CorpusOptions opts = {});
/// The closed entries of the corpus.
std::vector<Expr> objectCorpus(const TheoryPresentation& t, CorpusOptions opts = {});

/// Canonical key of a type judgement: context variables renamed x1..xn.
std::string judgementKey(const Judgement& j);
Judgement canonicalJudgement(const Judgement& j);

// ------------------------------------------------------- syntactic (-)^H

/// The left-nested Sigma of a context (Top for the empty context).
Expr contextSigma(const Context& ctx);
/// Substitution sending each context variable to its projection out of w.
std::vector<std::pair<std::string, Expr>> contextProjections(const Context& ctx, const Expr& w);
/// The term of contextSigma(ctx) built from the context variables.
Expr contextTuple(const Context& ctx);
/// The total type: B when closed, Sigma(contextSigma, B) otherwise.
Expr hTotal(const Judgement& typeJ);

class HInterpretation {
public:
    explicit HInterpretation(const TheoryPresentation& t) : theory_(&t) {}

    /// b_1, ..., b_{n+1}: the chain of first projections ending in Top.
    PgrObject object(const Judgement& typeJ) const;
    /// The section w |-> <w, b> of the last arrow.
    Morphism section(const Judgement& termJ) const;
    /// q for the weakening of B[Gamma] by D at `pos`: total(w(B,D)) -> total(B).
    Morphism weakeningMap(const Judgement& typeJ, const Expr& d, std::size_t pos) const;
    /// q for B[Gamma, x:C, Delta] along c: total(B[x/c]) -> total(B).
    Morphism substitutionMap(const Judgement& typeJ, std::size_t pos, const Expr& c) const;

    /// The section law B . b = id, proved in the syntactic category.
    HostVerdict checkSection(const SynCat& host, const Judgement& termJ) const;
    /// The weakening and substitution squares commute.
    HostVerdict checkWeakeningSquare(const SynCat& host, const Judgement& typeJ, const Expr& d, std::size_t pos) const;
    HostVerdict checkSubstitutionSquare(const SynCat& host, const Judgement& typeJ, std::size_t pos,
                                        const Expr& c) const;

private:
    const TheoryPresentation* theory_;
};

HInterpretation hInterpretation(const TheoryPresentation& t);

// ------------------------------------------------- semantic interpretations

/// An interpretation of a theory into the set model, seen through its
/// action on type judgements, sections and the weakening/substitution maps.
class Interp {
public:
    virtual ~Interp() = default;
    virtual EnumSet context(const Context& ctx) const = 0;
    virtual EnumSet total(const Judgement& typeJ) const = 0;
    /// The last arrow of the interpretation: total(B) -> context.
    virtual Value base(const Judgement& typeJ, const Value& e) const = 0;
    virtual Value section(const Judgement& termJ, const Value& g) const = 0;
    /// q for the weakening of B[Gamma] by D at `pos`: total(w(B,D)) -> total(B).
    virtual Value weakeningMap(const Judgement& typeJ, const Expr& d, std::size_t pos, const Value& e) const = 0;
    /// q for B[Gamma, x:C, Delta] along c: total(B[x/c]) -> total(B).
    virtual Value substitutionMap(const Judgement& typeJ, std::size_t pos, const Expr& c, const Value& e) const = 0;
};

/// An interpretation into the set model. In Pairs mode a type over a context
/// denotes the set of pairs (context element, fibre element) as (-)^H does;
/// in Slice mode it denotes the object chosen by the model's own structure
/// (the context itself for Top, a subset for Eq, the body for Sigma, ...).
class SemInterp : public Interp {
public:
    enum class Mode { Pairs, Slice };

    SemInterp(const Evaluator& ev, Mode mode) : ev_(&ev), mode_(mode) {}

    const Evaluator& evaluator() const { return *ev_; }
    Mode mode() const { return mode_; }
    const Structure& structure() const { return ev_->structure(); }

    EnumSet context(const Context& ctx) const override;
    EnumSet total(const Judgement& typeJ) const override;
    Value base(const Judgement& typeJ, const Value& e) const override;
    /// The fibre value of e, encoded with the model's structure.
    Value fibre(const Judgement& typeJ, const Value& e) const;
    /// The element over g with the given fibre value.
    Value element(const Judgement& typeJ, const Value& g, const Value& fibreValue) const;

    Env env(const Context& ctx, const Value& g) const;
    Value encodeContext(const Context& ctx, const Env& env) const;

    Value section(const Judgement& termJ, const Value& g) const override;
    Value weakeningMap(const Judgement& typeJ, const Expr& d, std::size_t pos, const Value& e) const override;
    Value substitutionMap(const Judgement& typeJ, std::size_t pos, const Expr& c, const Value& e) const override;

    /// The square (q, B[x/c]) is a pullback: q is a bijection from
    /// total(B[x/c]) onto the elements of total(B) over the substituted points.
    bool substitutionIsPullback(const Judgement& typeJ, std::size_t pos, const Expr& c) const;

private:
    const Evaluator* ev_;
    Mode mode_;
    Value unitOf() const { return ev_->structure().unit(); }
};

/// The standard interpretation of T in a model together with the data its
/// verification produced.
struct StandardInterpretation {
    std::unique_ptr<Evaluator> evaluator;
    std::unique_ptr<SemInterp> interp;
    struct Check {
        std::string what;
        bool ok = true;
        std::string detail;
    };
    std::vector<Check> checks;

    bool ok() const;
    /// The induced functor on closed types and on one-variable terms.
    EnumSet onObject(const Expr& closedType) const;
    CompMap onMorphism(const Morphism& m) const;
};

/// Throws ModelError with the counterexample when an axiom of T fails in M.
StandardInterpretation standardInterpretation(const TheoryPresentation& t, const ModelPresentation& m,
                                              std::size_t depth, const std::vector<Judgement>& corpus = {});

// ---------------------------------------------------- coherent isomorphisms

using MapFn = std::function<Value(const Value&)>;

struct IsoComponent {
    Judgement index;   // canonical type judgement
    std::string key;   // judgementKey(index)
    std::string id;    // name of the coherence constant
    std::string rule;  // which case of the construction produced it
    std::string reflected;  // reflected proper type of the codomain
    MapFn fwd;         // (-)^H side -> model side
    MapFn inv;
    std::vector<TermAxiom> equations;  // defining equations (may be empty)
    std::vector<std::string> uses;     // keys of the components it is built from
};

class IsoFamily {
public:
    void add(IsoComponent c);
    const IsoComponent* find(const std::string& key) const;
    const IsoComponent* find(const Judgement& j) const { return find(judgementKey(j)); }
    const std::deque<IsoComponent>& components() const { return comps_; }
    IsoComponent* mutableFind(const std::string& key);

private:
    std::deque<IsoComponent> comps_;
    std::map<std::string, std::size_t> index_;
};

/// Builds sigma : (-)^H -> Int_A by induction on types. The H side is the
/// model read through V (canonical structure); the A side is the model with
/// its own chosen structure. Components are generated lazily.
class CoherenceGenerator {
public:
    CoherenceGenerator(const TheoryPresentation& tcat, const ModelPresentation& realization, std::size_t depth,
                       std::string idPrefix = "s");

    const TheoryPresentation& theory() const { return *theory_; }
    const ModelPresentation& realization() const { return *model_; }
    std::size_t depth() const { return depth_; }

    const SemInterp& hSide() const { return *h_; }
    const SemInterp& aSide() const { return *a_; }
    const Evaluator& vEvaluator() const { return *vEval_; }
    const Evaluator& aEvaluator() const { return *aEval_; }

    /// Replaces the proper-type component for X (before anything is generated).
    void setProperComponent(const std::string& type, MapFn fwd, MapFn inv);

    const IsoComponent& component(const Judgement& typeJ);
    IsoFamily family(const std::vector<Judgement>& corpus);
    const IsoFamily& generated() const { return family_; }

    /// Reflected types, structure maps, sigma constants and their equations,
    /// for every component generated so far.
    CoherenceExtension extension() const;
    /// Realization of the extended theory: H-side symbols through V, the
    /// reflected symbols and sigma constants through the model.
    std::unique_ptr<Evaluator> stEvaluator() const;

    /// Name of the reflected proper type standing for the model object
    /// interpreting B[Gamma] (shared between judgements denoting the same object).
    std::string reflectedType(const Judgement& typeJ);
    /// The judgement whose interpretation a reflected type names.
    const Judgement* reflectedIndex(const std::string& name) const;
    std::vector<std::string> reflectedTypes() const;
    const std::vector<ProperTermDecl>& reflectedTerms() const { return reflectedTerms_; }
    const Evaluator::TermFn& reflectedFunction(const std::string& name) const;

private:
    const TheoryPresentation* theory_;
    const ModelPresentation* model_;
    std::size_t depth_;
    std::string prefix_;
    std::unique_ptr<Evaluator> vEval_;
    std::unique_ptr<Evaluator> aEval_;
    std::unique_ptr<SemInterp> h_;
    std::unique_ptr<SemInterp> a_;
    IsoFamily family_;
    std::size_t nextId_ = 0;
    std::map<std::string, std::pair<MapFn, MapFn>> properOverride_;

    struct Reflected {
        std::string name;
        std::string description;
        Judgement index;
    };
    std::vector<Reflected> reflected_;
    std::map<std::string, std::size_t> reflectedByDesc_;
    std::vector<ProperTermDecl> reflectedTerms_;
    std::map<std::string, Evaluator::TermFn> reflectedFns_;

    std::string objectDescription(const Judgement& typeJ) const;
    void reflectedTerm(const std::string& name, Context ctx, Expr type, Evaluator::TermFn fn);
    IsoComponent build(const Judgement& j, const std::string& id);
};

// ------------------------------------------------ interpretation morphisms

struct ConditionResult {
    std::string entry;      // judgement key
    std::string condition;  // inverse, square, naturality, weakening, substitution, membership
    bool ok = true;
    std::size_t samples = 0;
    std::string detail;  // located failure
};

struct MorphismCheckOptions {
    std::size_t termSize = 3;
    std::size_t termsPerEntry = 3;
    std::vector<Expr> weakeningTypes;  // default: Top and the first proper type
};

struct MorphismReport {
    std::vector<ConditionResult> results;
    bool ok() const;
    std::size_t failures() const;
    const ConditionResult* firstFailure() const;
};

/// Components outside the family (for weakened and substituted judgements)
/// are requested from `extra`.
using ComponentSource = std::function<const IsoComponent&(const Judgement&)>;

MorphismReport checkInterpMorphism(const IsoFamily& sigma, const Interp& i1, const Interp& i2,
                                   const std::vector<Judgement>& corpus, const TheoryPresentation& t,
                                   const ComponentSource& extra, MorphismCheckOptions opts = {});

/// The identity morphism of a semantic interpretation, over the corpus.
IsoFamily identityFamily(const std::vector<Judgement>& corpus);

/// A copy of the family in which one output of one component is changed
/// (or sent outside the codomain when the codomain is a singleton).
/// Returns nullopt when the component has an empty domain.
std::optional<IsoFamily> corruptComponent(const IsoFamily& f, const std::string& key, const Interp& i1,
                                          const Interp& i2);

struct DeterminationResult {
    std::string entry;
    bool definitionsAgree = true;  // regenerated defining terms alpha-equal
    bool valuesAgree = true;       // regenerated maps agree at depth
    bool oracleAgrees = true;      // independent transport through proper components
    std::string detail;
    bool ok() const { return definitionsAgree && valuesAgree && oracleAgrees; }
};

/// Regenerates the family from its proper-type components alone and compares.
std::vector<DeterminationResult> checkDetermination(CoherenceGenerator& original, const std::vector<Judgement>& corpus);

}  // namespace au
