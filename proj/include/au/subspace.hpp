#pragma once

// The open subspace A[n : 1 -> U] of a model against the slice over U: hom
// classes of the extended syntactic category matched with slice homs.

#include <memory>
#include <string>
#include <vector>

#include "au/interp.hpp"

namespace au {

/// T_iso(M)[n : U] with one realization per choice of n in U.
struct OpenSubspace {
    TheoryPresentation tcat;
    std::unique_ptr<CoherenceGenerator> gen;
    TheoryPresentation tiso;
    SubspaceAxioms axioms;
    TheoryPresentation theory;
    std::vector<Value> choices;
    std::vector<std::unique_ptr<Evaluator>> evaluators;

    Oracle oracle() const;
};

std::unique_ptr<OpenSubspace> openSubspace(const ModelPresentation& m, const std::string& u, const std::string& constant,
                                           std::size_t depth, const CorpusOptions& corpus = {});

struct SlicePair {
    Expr dom;
    Expr cod;
    std::size_t subspaceClasses = 0;
    std::size_t sliceHoms = 0;
    bool forwardOk = true;   // images are triangles, pairwise distinct
    bool backwardOk = true;  // every slice hom comes from a class
    bool roundTrip = true;   // back . forth = id on classes
    bool truncated = false;
    std::string detail;
    bool ok() const { return forwardOk && backwardOk && roundTrip && subspaceClasses == sliceHoms; }
};

struct SliceComparison {
    std::vector<SlicePair> pairs;
    bool ok() const;
};

/// hom(C, D) in the subspace against hom(C x U -> U, D x U -> U) in the slice.
SliceComparison sliceCompare(const OpenSubspace& s, const ModelPresentation& m, const std::vector<std::pair<Expr, Expr>>& pairs,
                             std::size_t subspaceSize, std::size_t sliceSize);

/// Replaces the constant `name` (a nullary proper term) by `by`.
Expr replaceConstant(const Expr& e, const std::string& name, const Expr& by);

}  // namespace au
