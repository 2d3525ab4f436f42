#pragma once

// Locally nameless abstract syntax of the arithmetic-universe calculus.
//
// Bound variables are de Bruijn indices (BVar), free variables are names (FVar).
// A child that binds n variables v0..v(n-1) sees v(n-1) as index 0 and v0 as
// index n-1. Binder names are kept only as printing hints and never take part
// in equality.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace au {

enum class Kind : std::uint8_t {
    // types
    Top,
    Bot,
    Eq,      // Eq(C, c, d)
    Sigma,   // Sigma(D, x.B)
    Sum,     // Sum(A, B)
    List,    // List(A)
    Quot,    // Quot(A, x y.R)
    Proper,  // proper type, by name
    // terms
    BVar,
    FVar,
    Star,
    Abort,     // Abort(t), t : Bot
    Refl,      // sole element of a provable Eq type
    Pair,
    Proj1,
    Proj2,
    Inl,
    Inr,
    Case,      // Case(s, x.l, y.r)
    Nil,
    Cons,      // Cons(l, a): appends a to l
    RecL,      // RecL(s, b, acc e.g)
    ClassOf,   // ClassOf(Q, a), Q the quotient type
    QuotElim,  // QuotElim(s, x.e)
    App,       // proper term applied to arguments
    Iso,       // coherent isomorphism constant applied to an argument
    IsoInv,
};

bool isTypeKind(Kind k);
const char* kindName(Kind k);

class Node;
using Expr = std::shared_ptr<const Node>;

class Node {
public:
    Kind kind;
    std::string name;                // Proper / FVar / App / Iso / IsoInv
    std::size_t index = 0;           // BVar
    std::vector<Expr> kids;
    std::vector<std::string> hints;  // binder names, printing only

    Node(Kind k, std::string n, std::size_t i, std::vector<Expr> ks, std::vector<std::string> hs)
        : kind(k), name(std::move(n)), index(i), kids(std::move(ks)), hints(std::move(hs)) {}
};

/// Number of variables bound by child `child` of a node of kind `k`.
int bindersAt(Kind k, std::size_t child);

namespace mk {
Expr top();
Expr bot();
Expr eq(Expr type, Expr lhs, Expr rhs);
/// Sigma over D whose body B may mention the free variable `x`.
Expr sigma(const std::string& x, Expr domain, Expr body);
Expr sum(Expr left, Expr right);
Expr list(Expr elem);
/// Quotient of A by the relation R(x, y), which may mention free `x` and `y`.
Expr quot(Expr carrier, const std::string& x, const std::string& y, Expr relation);
Expr proper(const std::string& name);

Expr var(const std::string& name);
Expr bvar(std::size_t index);
Expr star();
Expr abort(Expr t);
Expr refl();
Expr pair(Expr a, Expr b);
Expr proj1(Expr t);
Expr proj2(Expr t);
Expr inl(Expr t);
Expr inr(Expr t);
Expr caseOf(Expr scrut, const std::string& x, Expr left, const std::string& y, Expr right);
Expr nil();
Expr cons(Expr l, Expr a);
Expr rec(Expr scrut, Expr base, const std::string& acc, const std::string& elem, Expr step);
Expr classOf(Expr quotType, Expr a);
Expr quotElim(Expr scrut, const std::string& x, Expr body);
Expr app(const std::string& fn, std::vector<Expr> args);
Expr iso(const std::string& key, Expr arg);
Expr isoInv(const std::string& key, Expr arg);

/// Rebuilds a node with new children, keeping kind, name, index and hints.
Expr rebuild(const Expr& e, std::vector<Expr> kids);
}  // namespace mk

/// Instantiates the variables bound at the top of `body` with `values`
/// (values[i] replaces binder i). Values must be locally closed.
Expr openBody(const Expr& body, std::span<const Expr> values);
Expr openBody(const Expr& body, const Expr& value);
/// Abstracts free variables `names` into bound indices (inverse of openBody).
Expr closeBody(const Expr& body, std::span<const std::string> names);

/// Capture-avoiding substitution e[x/c]. `c` must be locally closed.
Expr substitute(const Expr& e, const std::string& x, const Expr& c);
/// Simultaneous substitution.
Expr substituteAll(const Expr& e, std::span<const std::pair<std::string, Expr>> subst);

std::set<std::string> freeVars(const Expr& e);
bool occursFree(const Expr& e, const std::string& x);
bool isLocallyClosed(const Expr& e);
std::size_t exprSize(const Expr& e);

bool alphaEqual(const Expr& a, const Expr& b);
/// Total order compatible with alphaEqual.
int compareExpr(const Expr& a, const Expr& b);
struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compareExpr(a, b) < 0; }
};

/// Canonical hint-free rendering; equal keys iff alpha-equal.
std::string exprKey(const Expr& e);

/// Surface rendering with explicit binders, freshening binder names against
/// free variables.
std::string show(const Expr& e);

std::string freshName(const std::string& base, const std::set<std::string>& avoid);

struct Binding {
    std::string name;
    Expr type;
};
using Context = std::vector<Binding>;

std::set<std::string> contextNames(const Context& ctx);
std::string showContext(const Context& ctx);

struct Judgement {
    enum class Form { Type, TypeEq, Term, TermEq };
    Form form = Form::Type;
    Context ctx;
    Expr type;
    Expr type2;  // TypeEq
    Expr term;   // Term, TermEq
    Expr term2;  // TermEq

    static Judgement typeJ(Context ctx, Expr b);
    static Judgement typeEqJ(Context ctx, Expr b, Expr c);
    static Judgement termJ(Context ctx, Expr t, Expr b);
    static Judgement termEqJ(Context ctx, Expr t, Expr u, Expr b);
};

std::string show(const Judgement& j);
bool alphaEqual(const Judgement& a, const Judgement& b);

/// Throws ScopeError unless every free variable of `e` is bound in the first
/// `prefix` entries of ctx and `e` has no loose indices.
void requireScoped(const Context& ctx, const Expr& e, std::size_t prefix);
void requireScoped(const Context& ctx, const Expr& e);
void requireWellScoped(const Judgement& j);

/// Inserts a fresh variable of type D at position j of the context.
Judgement weaken(const Judgement& j, const Expr& d, std::size_t position);
/// The fresh name that weaken(j, d, position) inserts.
std::string weakeningName(const Judgement& j, const Expr& d);
/// Removes context entry `position` by substituting `c` for it in the rest.
Judgement instantiate(const Judgement& j, std::size_t position, const Expr& c);

}  // namespace au
