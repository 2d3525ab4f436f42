#pragma once

// AU functors between finitely presented models and what they induce: the
// translation of types and terms, the tau family comparing the two ways of
// interpreting a translated type, the lift to theories with coherent
// isomorphisms, the reflector, subspace lifts and the classifying round trip.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "au/interp.hpp"

namespace au {

/// A functor between two models, given on generators. Objects go to objects,
/// arrows to paths, and each source carrier element to a target carrier
/// element. Its action on the rest of the source is forced: a value keeps the
/// shape the source structure gave it with its proper leaves mapped, and the
/// coherence witnesses re-encode those shapes in the target structure.
struct FunctorPresentation {
    std::string name;
    std::string source;  // model names
    std::string target;
    std::map<std::string, std::string> objects;
    std::map<std::string, std::vector<std::string>> arrows;
    std::map<std::string, std::map<std::string, std::string>> carriers;

    /// Totality, typing of the images and naturality of the carrier maps.
    void validate(const ModelPresentation& a, const ModelPresentation& b) const;
};

FunctorPresentation identityFunctor(const ModelPresentation& m);

// ----------------------------------------------------------- translations

/// A translation of types and terms: proper types renamed, proper terms sent
/// to paths (unary) or renamed, coherence constants sent to composites
/// outer . inner. Everything else is carried over constructor by constructor.
class Translation {
public:
    struct IsoImage {
        std::string outer;
        std::string inner;
    };

    std::string name;
    std::map<std::string, std::string> types;
    std::map<std::string, std::vector<std::string>> paths;
    std::map<std::string, std::string> terms;
    std::map<std::string, IsoImage> isos;

    Expr apply(const Expr& e) const;
    Context apply(const Context& ctx) const;
    Judgement apply(const Judgement& j) const;
    Morphism apply(const Morphism& m) const;
    TermAxiom apply(const TermAxiom& ax) const;

    /// Throws ScopeError naming the first proper symbol of t it leaves out.
    void requireCovers(const TheoryPresentation& t) const;
};

/// (-)^F : T_cat(A) -> T_cat(B).
Translation translateAlongFunctor(const FunctorPresentation& f, const TheoryPresentation& source,
                                  const ModelPresentation& target);

struct FsumResult {
    std::string entry;
    bool ok = true;
    std::string detail;
};

/// ((B[Gamma])^H)^F against ((B[Gamma])^F)^H, arrow by arrow, up to alpha.
std::vector<FsumResult> checkFsum(const Translation& tr, const std::vector<Judgement>& corpus);

// ------------------------------------------------------- F on model values

class ModelFunctor {
public:
    ModelFunctor(FunctorPresentation f, const ModelPresentation& a, const ModelPresentation& b);

    const FunctorPresentation& presentation() const { return f_; }
    const ModelPresentation& source() const { return *a_; }
    const ModelPresentation& target() const { return *b_; }

    /// F on a fibre value of `type` encoded with the source structure.
    Value onFibre(const Expr& type, const Value& v) const;
    /// F on an element of Int_A(B[Gamma]).
    Value onElement(const SemInterp& aSlice, const Judgement& typeJ, const Value& e) const;
    Value onContext(const SemInterp& aSlice, const Context& ctx, const Value& g) const;

    /// The witness F(E) -> its target-structure counterpart on a fibre value:
    /// shapes rebuilt with the target structure, quotient classes recomputed
    /// in `bEval` under `envB` (the translated context's environment).
    Value witness(const Translation& tr, const Evaluator& bEval, const Expr& type, const Value& v, Env envB) const;

    struct WitnessCheck {
        std::string object;  // exprKey of the closed type
        std::string rule;    // terminal, initial, product, coproduct, list, equalizer, quotient, proper
        bool ok = true;
        std::size_t samples = 0;
        std::string detail;
    };
    /// Every witness on the closed corpus is a bijection F(Int_A(C)) -> Int_B(C^F).
    std::vector<WitnessCheck> checkWitnesses(const Translation& tr, const SemInterp& aSlice, const SemInterp& bSlice,
                                             const std::vector<Expr>& objects) const;

private:
    FunctorPresentation f_;
    const ModelPresentation* a_;
    const ModelPresentation* b_;
};

/// ((-)^F)^B: a type judgement of T_cat(A) read through its translation.
class TranslatedInterp : public Interp {
public:
    TranslatedInterp(const Interp& b, const Translation& tr) : b_(&b), tr_(&tr) {}
    EnumSet context(const Context& ctx) const override { return b_->context(tr_->apply(ctx)); }
    EnumSet total(const Judgement& j) const override { return b_->total(tr_->apply(j)); }
    Value base(const Judgement& j, const Value& e) const override { return b_->base(tr_->apply(j), e); }
    Value section(const Judgement& tj, const Value& g) const override { return b_->section(tr_->apply(tj), g); }
    Value weakeningMap(const Judgement& j, const Expr& d, std::size_t pos, const Value& e) const override;
    Value substitutionMap(const Judgement& j, std::size_t pos, const Expr& c, const Value& e) const override;

private:
    const Interp* b_;
    const Translation* tr_;
};

/// ((-)^A)^F: F applied to every object and map of Int_A.
class ImageInterp : public Interp {
public:
    ImageInterp(const SemInterp& a, const ModelFunctor& f) : a_(&a), f_(&f) {}
    EnumSet context(const Context& ctx) const override;
    EnumSet total(const Judgement& j) const override;
    Value base(const Judgement& j, const Value& e) const override;
    Value section(const Judgement& tj, const Value& g) const override;
    Value weakeningMap(const Judgement& j, const Expr& d, std::size_t pos, const Value& e) const override;
    Value substitutionMap(const Judgement& j, std::size_t pos, const Expr& c, const Value& e) const override;

    /// Some source element with the given image.
    Value preimage(const Judgement& j, const Value& fe) const;
    Value contextPreimage(const Context& ctx, const Value& fg) const;

private:
    const SemInterp* a_;
    const ModelFunctor* f_;
    mutable std::map<std::string, std::map<Value, Value>> inverse_;
    const std::map<Value, Value>& table(const Judgement& j) const;
};

/// tau : ((-)^F)^B -> ((-)^A)^F, generated lazily per canonical judgement.
class TauGenerator {
public:
    TauGenerator(const ModelFunctor& f, const Translation& tr, std::size_t depth, std::string idPrefix = "t");

    const SemInterp& aSlice() const { return *aSlice_; }
    const SemInterp& bSlice() const { return *bSlice_; }
    const Evaluator& bEvaluator() const { return *bEval_; }
    const Interp& sourceSide() const { return *i1_; }  // ((-)^F)^B
    const ImageInterp& targetSide() const { return *i2_; }  // ((-)^A)^F
    const Translation& translation() const { return *tr_; }
    const ModelFunctor& functor() const { return *f_; }

    const IsoComponent& component(const Judgement& typeJ);
    IsoFamily family(const std::vector<Judgement>& corpus);
    MorphismReport check(const std::vector<Judgement>& corpus, const TheoryPresentation& tcat,
                         MorphismCheckOptions opts = {});

private:
    const ModelFunctor* f_;
    const Translation* tr_;
    std::string prefix_;
    std::unique_ptr<Evaluator> aEval_;
    std::unique_ptr<Evaluator> bEval_;
    std::unique_ptr<SemInterp> aSlice_;
    std::unique_ptr<SemInterp> bSlice_;
    std::unique_ptr<TranslatedInterp> i1_;
    std::unique_ptr<ImageInterp> i2_;
    IsoFamily family_;
    std::size_t nextId_ = 0;

    IsoComponent build(const Judgement& j, const std::string& id);
};

// --------------------------------------------------- lifting to theories

struct AxiomCheck {
    std::string name;
    HostVerdict verdict;
};

/// T(F) : T_iso(A) -> T_iso(B) together with everything it was built from.
/// The target is T_iso(B) extended by the F-images of A's reflected objects
/// and structure maps and by the tau constants; `realization` interprets it
/// in B (the St side through V, reflected symbols through B and F).
struct LiftedFunctor {
    TheoryPresentation tcatA;
    TheoryPresentation tcatB;
    std::unique_ptr<ModelFunctor> functor;
    std::unique_ptr<CoherenceGenerator> genA;
    std::unique_ptr<CoherenceGenerator> genB;
    Translation base;      // (-)^F on T_cat(A)
    std::unique_ptr<TauGenerator> tau;
    TheoryPresentation source;  // T_iso(A)
    TheoryPresentation target;
    Translation translation;    // T(F)
    std::unique_ptr<Evaluator> sourceRealization;  // St_A
    std::unique_ptr<Evaluator> realization;        // St_B extended
    std::vector<AxiomCheck> axioms;
    std::vector<Judgement> corpus;

    bool ok() const;
};

/// Throws ModelError when a translated axiom is refuted, naming the axiom.
std::unique_ptr<LiftedFunctor> liftFunctorToTheory(const FunctorPresentation& f, const TheoryPresentation& tcatA,
                                                   const ModelPresentation& a, const ModelPresentation& b,
                                                   std::size_t depth, const std::vector<Judgement>& corpus);

struct MainTheoremReport {
    struct Item {
        std::string what;  // generator or object key
        std::string kind;  // object, arrow, carrier, component, naturality
        bool ok = true;
        std::size_t samples = 0;
        std::string detail;
    };
    std::vector<Item> items;
    bool ok() const;
};

/// The induced functor St_B . T(F) agrees with F on generators, and
/// eta_C = tau_C . sigma^B_{C^F} is a natural isomorphism to F . Int_A on the
/// closed objects (naturality sampled on terms up to `termSize`).
MainTheoremReport checkMainTheorem(LiftedFunctor& lf, const std::vector<Expr>& objects, std::size_t termSize = 3);

// -------------------------------------------------------------- reflector

struct Reflection {
    std::string name;           // the reflected proper type
    EnumSet carrier;            // V(C^Em), encoded with the model's structure
    std::optional<CompMap> iso;  // to Y(X) for a proper X
};

/// R^A on a closed type over the model's generators and on a one-variable
/// morphism between such types.
Reflection reflectObject(const ModelPresentation& m, const Expr& closedType, std::size_t depth);
CompMap reflectMorphism(const ModelPresentation& m, const Morphism& mor, std::size_t depth);

// ---------------------------------------------------------- subspace lift

/// alpha: a value for every constant of S (closed constants) or a map (for
/// constants with a binder), encoded as the realization encodes the target type.
struct SubspaceAlpha {
    std::map<std::string, Value> constants;
    std::map<std::string, Evaluator::TermFn> maps;
};

struct SubspaceLift {
    TheoryPresentation source;  // T_iso(A)[S]
    TheoryPresentation target;  // lifted target with the images of S
    Translation translation;
    std::unique_ptr<Evaluator> realization;
};

/// Extends T(F) by S: each constant n goes to a new constant F.n realized as
/// alpha(n). Throws ModelError when alpha fails an S-equality.
SubspaceLift liftToSubspaceFunctor(const LiftedFunctor& lf, const SubspaceAxioms& s, const SubspaceAlpha& alpha);

// ----------------------------------------------------- classifying check

struct ClassifyingReport {
    struct Item {
        std::string entry;
        std::string what;
        bool ok = true;
        std::string detail;
    };
    std::vector<Item> items;
    bool ok() const;
};

/// J = standard interpretation of T in M; G = C(J). Checks that the
/// reindexed syntactic interpretation G((-)^H) gives back J on the corpus
/// (contexts, arrows and sections), that its substitution squares are
/// pullbacks and that C(J) carries verified coherence witnesses.
ClassifyingReport classifyingCheck(const TheoryPresentation& t, const ModelPresentation& m, std::size_t depth,
                                   const std::vector<Judgement>& corpus);

/// Reindexing a syntactic interpretation along a translation: each b_i goes to F(b_i).
PgrObject reindex(const PgrObject& p, const Translation& tr);

}  // namespace au
