#pragma once

// The text format of presentations, theories, functors, subspace axioms and
// judgements to check. One declaration per line, blocks closed by `end`,
// types and terms as s-expressions with explicit binders:
//
//   category walk                      model mfin
//     object X                           object X { 0 1 }
//     arrow f : X -> Y                   arrow f : X -> Y { 0=a 1=b }
//     equation M : m m = id              structure swap-pairs terminal=pt
//   end                                end
//
//   theory T = free walk | internal mfin | iso T0 by walkreal | subspace T1 with S
//   functor F : walkreal -> mfin ... end      subspace S ... end
//   judgement T [x : X] (f x) : Y
//   equal T [x : M] (m (m x)) = x : M

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "au/functor.hpp"
#include "au/interp.hpp"
#include "au/theory.hpp"

namespace au::format {

struct TheoryDecl {
    enum class Kind { Free, Internal, Iso, Subspace, Explicit };
    std::string name;
    Kind kind = Kind::Explicit;
    std::string from;         // category, model or theory it is built from
    std::string realization;  // Iso
    std::string subspace;     // Subspace
    TheoryPresentation body;  // Explicit
    std::vector<int> axiomLines;  // parallel to body.termAxioms
};

struct CheckDecl {
    std::string theory;
    Judgement judgement;
};

struct Document {
    enum class Kind { Comment, Category, Model, Theory, Functor, Subspace, Check };
    struct Entry {
        Kind kind;
        std::size_t index;
        int line = 0;  // where the declaration starts; 0 when built in memory
    };

    std::vector<std::string> comments;
    std::vector<CatPresentation> categories;
    std::vector<ModelPresentation> models;
    std::vector<TheoryDecl> theories;
    std::vector<FunctorPresentation> functors;
    std::vector<SubspaceAxioms> subspaces;
    std::vector<CheckDecl> checks;
    std::vector<Entry> order;

    void append(const Document& other);
};

/// Throws ParseError with the line and column of the offending token.
Document parse(std::string_view text);
Document parseFile(const std::string& path);
std::string print(const Document& doc);

Expr parseType(std::string_view text);
Expr parseTerm(std::string_view text);
std::string printExpr(const Expr& e);
std::string printContext(const Context& ctx);

/// Presentations of a document with its theory constructions carried out.
class Workspace {
public:
    Workspace(Document doc, std::size_t depth, CorpusOptions corpus = {});

    const Document& document() const { return doc_; }
    const CatPresentation& category(const std::string& name) const;
    const ModelPresentation& model(const std::string& name) const;
    const FunctorPresentation& functor(const std::string& name) const;
    const SubspaceAxioms& subspace(const std::string& name) const;
    /// Builds on first use; iso theories run the coherence generator over
    /// the type corpus of the theory they extend.
    const TheoryPresentation& theory(const std::string& name);
    CoherenceGenerator* generator(const std::string& isoTheory);

private:
    Document doc_;
    std::size_t depth_;
    CorpusOptions corpus_;
    std::map<std::string, TheoryPresentation> built_;
    std::map<std::string, std::unique_ptr<CoherenceGenerator>> gens_;
    std::vector<std::string> building_;
};

}  // namespace au::format
