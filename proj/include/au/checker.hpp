#pragma once

// Judgement checking and certificate-based judgemental equality.
//
// Equality is semi-decided: checkEqual answers Proved (with a replayable
// certificate) or Unknown, never "different". Refutation is left to model
// evaluation.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "au/syntax.hpp"
#include "au/theory.hpp"

namespace au {

struct CheckerOptions {
    std::size_t fuel = 1000;         // rewrite steps per normalization
    std::size_t instDepth = 3;       // axiom-instance search depth and case splits
    std::size_t searchFrontier = 600;
};

/// A node of a derivation tree. Equality goals the automation could not
/// settle are recorded as obligations instead of failing the check.
struct Derivation {
    std::string rule;
    Judgement conclusion;
    std::vector<Derivation> premises;
    std::vector<Judgement> obligations;

    std::vector<Judgement> allObligations() const;
    std::size_t size() const;
};

/// One rewrite of a certificate. Positions are child-index paths into the
/// computation-normal form of the current side.
struct RewriteStep {
    enum class Kind { Axiom, AxiomReverse, Hypothesis, HypothesisReverse };
    enum class Side { Left, Right };
    Kind kind = Kind::Axiom;
    Side side = Side::Left;
    std::vector<std::size_t> position;
    std::string name;  // axiom name or hypothesis variable
    std::vector<std::pair<std::string, Expr>> instantiation;

    std::string str() const;
};

/// Replayable equality certificate: rewrite steps on either side until the
/// two sides are definitionally convertible, optionally followed by a case
/// split on a sum-typed context variable with one sub-certificate per branch.
struct EqCertificate {
    std::vector<RewriteStep> steps;
    std::string splitVar;
    std::vector<EqCertificate> branches;

    std::size_t stepCount() const;
};

struct EqVerdict {
    enum class Status { Proved, Unknown };
    Status status = Status::Unknown;
    EqCertificate certificate;

    bool proved() const { return status == Status::Proved; }
};

struct NormalizeResult {
    Expr term;
    bool normal = true;  // false: fuel ran out before a normal form
    std::size_t steps = 0;
    std::vector<RewriteStep> trace;  // axiom steps (computation steps are implicit)
};

class Checker {
public:
    explicit Checker(const TheoryPresentation& theory, CheckerOptions opts = {});

    const TheoryPresentation& theory() const { return *theory_; }
    const CheckerOptions& options() const { return opts_; }

    Derivation checkContext(const Context& ctx) const;
    Derivation checkType(const Context& ctx, const Expr& type) const;
    Derivation checkTerm(const Context& ctx, const Expr& term, const Expr& type) const;
    Derivation check(const Judgement& j) const;
    Expr inferType(const Context& ctx, const Expr& term) const;

    /// Computation rules only (projections, case, recursor, quotient
    /// elimination and the eta laws for pairs and sums).
    Expr computeNormal(const Expr& term) const;
    /// Computation rules plus oriented theory axioms, up to `fuel` steps.
    NormalizeResult normalize(const Context& ctx, const Expr& term, std::optional<std::size_t> fuel = {}) const;

    /// Typed definitional equality (no axioms).
    bool convertible(const Context& ctx, const Expr& t, const Expr& u, const Expr& type) const;
    bool typesConvertible(const Context& ctx, const Expr& a, const Expr& b) const;

    /// With a certificate: replays it (throws CertificateError on failure).
    /// Without: bounded automation.
    EqVerdict checkEqual(const Context& ctx, const Expr& t, const Expr& u, const Expr& type,
                         const EqCertificate* cert = nullptr) const;
    void replay(const Context& ctx, const Expr& t, const Expr& u, const Expr& type, const EqCertificate& cert) const;

    /// Applies one rewrite step to `term`; nullopt when it does not apply.
    std::optional<Expr> applyStep(const Context& ctx, const Expr& term, const RewriteStep& step) const;

private:
    struct Rule;
    const TheoryPresentation* theory_;
    CheckerOptions opts_;

    Expr inferImpl(const Context& ctx, const Expr& t, Derivation* d) const;
    void checkTypeImpl(const Context& ctx, const Expr& b, Derivation& d) const;
    void checkTermImpl(const Context& ctx, const Expr& t, const Expr& b, Derivation& d) const;
    bool convStruct(const Context& ctx, const Expr& a, const Expr& b, const Expr& type) const;
    bool convNeutral(const Context& ctx, const Expr& a, const Expr& b) const;
    bool convArgs(const Context& ctx, const ProperTermDecl& decl, const Expr& a, const Expr& b) const;
    std::optional<EqCertificate> search(const Context& ctx, const Expr& t, const Expr& u, const Expr& type,
                                        std::size_t splits) const;
    std::vector<Rule> rules(const Context& ctx, bool orientedOnly) const;
};

/// Whether the context contains a variable of the empty type.
bool contextInconsistent(const Context& ctx);

}  // namespace au
