#include "au/syntax.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "au/error.hpp"

namespace au {

bool isTypeKind(Kind k) {
    switch (k) {
    case Kind::Top:
    case Kind::Bot:
    case Kind::Eq:
    case Kind::Sigma:
    case Kind::Sum:
    case Kind::List:
    case Kind::Quot:
    case Kind::Proper:
        return true;
    default:
        return false;
    }
}

const char* kindName(Kind k) {
    switch (k) {
    case Kind::Top: return "Top";
    case Kind::Bot: return "Bot";
    case Kind::Eq: return "Eq";
    case Kind::Sigma: return "Sigma";
    case Kind::Sum: return "Sum";
    case Kind::List: return "List";
    case Kind::Quot: return "Quot";
    case Kind::Proper: return "Proper";
    case Kind::BVar: return "BVar";
    case Kind::FVar: return "Var";
    case Kind::Star: return "star";
    case Kind::Abort: return "abort";
    case Kind::Refl: return "refl";
    case Kind::Pair: return "pair";
    case Kind::Proj1: return "fst";
    case Kind::Proj2: return "snd";
    case Kind::Inl: return "inl";
    case Kind::Inr: return "inr";
    case Kind::Case: return "case";
    case Kind::Nil: return "nil";
    case Kind::Cons: return "cons";
    case Kind::RecL: return "rec";
    case Kind::ClassOf: return "class";
    case Kind::QuotElim: return "qelim";
    case Kind::App: return "app";
    case Kind::Iso: return "iso";
    case Kind::IsoInv: return "iso-inv";
    }
    return "?";
}

int bindersAt(Kind k, std::size_t child) {
    switch (k) {
    case Kind::Sigma: return child == 1 ? 1 : 0;
    case Kind::Quot: return child == 1 ? 2 : 0;
    case Kind::Case: return child >= 1 ? 1 : 0;
    case Kind::RecL: return child == 2 ? 2 : 0;
    case Kind::QuotElim: return child == 1 ? 1 : 0;
    default: return 0;
    }
}

namespace {

Expr node(Kind k, std::vector<Expr> kids = {}, std::string name = {}, std::vector<std::string> hints = {}) {
    return std::make_shared<const Node>(k, std::move(name), 0, std::move(kids), std::move(hints));
}

Expr openAt(const Expr& e, std::size_t lvl, std::span<const Expr> vals) {
    if (e->kind == Kind::BVar) {
        const std::size_t n = vals.size();
        if (e->index >= lvl && e->index < lvl + n) return vals[n - 1 - (e->index - lvl)];
        return e;
    }
    if (e->kids.empty()) return e;
    std::vector<Expr> kids;
    kids.reserve(e->kids.size());
    bool changed = false;
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
        kids.push_back(openAt(e->kids[i], lvl + bindersAt(e->kind, i), vals));
        changed |= kids.back() != e->kids[i];
    }
    return changed ? mk::rebuild(e, std::move(kids)) : e;
}

Expr closeAt(const Expr& e, std::size_t lvl, std::span<const std::string> names) {
    if (e->kind == Kind::FVar) {
        const std::size_t n = names.size();
        for (std::size_t i = 0; i < n; ++i)
            if (names[i] == e->name) return mk::bvar(lvl + n - 1 - i);
        return e;
    }
    if (e->kids.empty()) return e;
    std::vector<Expr> kids;
    kids.reserve(e->kids.size());
    bool changed = false;
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
        kids.push_back(closeAt(e->kids[i], lvl + bindersAt(e->kind, i), names));
        changed |= kids.back() != e->kids[i];
    }
    return changed ? mk::rebuild(e, std::move(kids)) : e;
}

Expr substMap(const Expr& e, const std::map<std::string, Expr>& s) {
    if (e->kind == Kind::FVar) {
        auto it = s.find(e->name);
        return it == s.end() ? e : it->second;
    }
    if (e->kids.empty()) return e;
    std::vector<Expr> kids;
    kids.reserve(e->kids.size());
    bool changed = false;
    for (const auto& k : e->kids) {
        kids.push_back(substMap(k, s));
        changed |= kids.back() != k;
    }
    return changed ? mk::rebuild(e, std::move(kids)) : e;
}

void collectFree(const Expr& e, std::set<std::string>& out) {
    if (e->kind == Kind::FVar) out.insert(e->name);
    for (const auto& k : e->kids) collectFree(k, out);
}

bool closedAt(const Expr& e, std::size_t lvl) {
    if (e->kind == Kind::BVar) return e->index < lvl;
    for (std::size_t i = 0; i < e->kids.size(); ++i)
        if (!closedAt(e->kids[i], lvl + bindersAt(e->kind, i))) return false;
    return true;
}

void writeKey(const Expr& e, std::ostringstream& os) {
    os << '(' << static_cast<int>(e->kind);
    if (!e->name.empty()) os << ' ' << e->name.size() << ':' << e->name;
    if (e->kind == Kind::BVar) os << " #" << e->index;
    for (const auto& k : e->kids) {
        os << ' ';
        writeKey(k, os);
    }
    os << ')';
}

std::string quoteKey(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

class Printer {
public:
    explicit Printer(const Expr& root) : avoid_(freeVars(root)) {}

    void print(const Expr& e, std::ostringstream& os) {
        switch (e->kind) {
        case Kind::Top: os << "Top"; return;
        case Kind::Bot: os << "Bot"; return;
        case Kind::Proper: os << e->name; return;
        case Kind::FVar: os << e->name; return;
        case Kind::BVar: os << '#' << e->index; return;
        case Kind::Star: os << "star"; return;
        case Kind::Refl: os << "refl"; return;
        case Kind::Nil: os << "nil"; return;
        case Kind::Eq: return simple("Eq", e, os);
        case Kind::Sum: return simple("Sum", e, os);
        case Kind::List: return simple("List", e, os);
        case Kind::Abort: return simple("abort", e, os);
        case Kind::Pair: return simple("pair", e, os);
        case Kind::Proj1: return simple("fst", e, os);
        case Kind::Proj2: return simple("snd", e, os);
        case Kind::Inl: return simple("inl", e, os);
        case Kind::Inr: return simple("inr", e, os);
        case Kind::Cons: return simple("cons", e, os);
        case Kind::ClassOf: return simple("class", e, os);
        case Kind::App: {
            os << '(' << e->name;
            for (const auto& k : e->kids) {
                os << ' ';
                print(k, os);
            }
            os << ')';
            return;
        }
        case Kind::Iso:
        case Kind::IsoInv:
            os << '(' << (e->kind == Kind::Iso ? "iso " : "iso-inv ") << quoteKey(e->name) << ' ';
            print(e->kids[0], os);
            os << ')';
            return;
        case Kind::Sigma: {
            os << "(Sigma (";
            auto names = bind(e, 1);
            os << names[0] << ' ';
            print(e->kids[0], os);
            os << ") ";
            printOpened(e->kids[1], names, os);
            os << ')';
            return;
        }
        case Kind::Quot: {
            os << "(Quot ";
            print(e->kids[0], os);
            auto names = bind(e, 2);
            os << " (" << names[0] << ' ' << names[1] << ") ";
            printOpened(e->kids[1], names, os);
            os << ')';
            return;
        }
        case Kind::Case: {
            os << "(case ";
            print(e->kids[0], os);
            for (std::size_t i = 1; i <= 2; ++i) {
                std::vector<std::string> names{pick(e->hints.size() >= i ? e->hints[i - 1] : "z")};
                os << " (" << names[0] << ' ';
                printOpened(e->kids[i], names, os);
                os << ')';
            }
            os << ')';
            return;
        }
        case Kind::RecL: {
            os << "(rec ";
            print(e->kids[0], os);
            os << ' ';
            print(e->kids[1], os);
            auto names = bind(e, 2);
            os << " (" << names[0] << ' ' << names[1] << ' ';
            printOpened(e->kids[2], names, os);
            os << "))";
            return;
        }
        case Kind::QuotElim: {
            os << "(qelim ";
            print(e->kids[0], os);
            auto names = bind(e, 1);
            os << " (" << names[0] << ' ';
            printOpened(e->kids[1], names, os);
            os << "))";
            return;
        }
        }
    }

private:
    std::set<std::string> avoid_;

    void simple(const char* head, const Expr& e, std::ostringstream& os) {
        os << '(' << head;
        for (const auto& k : e->kids) {
            os << ' ';
            print(k, os);
        }
        os << ')';
    }

    std::string pick(const std::string& hint) {
        std::string n = freshName(hint.empty() ? "z" : hint, avoid_);
        avoid_.insert(n);
        return n;
    }

    std::vector<std::string> bind(const Expr& e, std::size_t count) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < count; ++i)
            names.push_back(pick(i < e->hints.size() ? e->hints[i] : "z"));
        return names;
    }

    void printOpened(const Expr& body, const std::vector<std::string>& names, std::ostringstream& os) {
        std::vector<Expr> vals;
        for (const auto& n : names) vals.push_back(mk::var(n));
        print(openBody(body, vals), os);
    }
};

}  // namespace

namespace mk {
Expr top() {
    static const Expr e = node(Kind::Top);
    return e;
}
Expr bot() {
    static const Expr e = node(Kind::Bot);
    return e;
}
Expr eq(Expr type, Expr lhs, Expr rhs) { return node(Kind::Eq, {std::move(type), std::move(lhs), std::move(rhs)}); }
Expr sigma(const std::string& x, Expr domain, Expr body) {
    const std::string names[] = {x};
    return node(Kind::Sigma, {std::move(domain), closeBody(body, names)}, {}, {x});
}
Expr sum(Expr left, Expr right) { return node(Kind::Sum, {std::move(left), std::move(right)}); }
Expr list(Expr elem) { return node(Kind::List, {std::move(elem)}); }
Expr quot(Expr carrier, const std::string& x, const std::string& y, Expr relation) {
    const std::string names[] = {x, y};
    return node(Kind::Quot, {std::move(carrier), closeBody(relation, names)}, {}, {x, y});
}
Expr proper(const std::string& name) { return node(Kind::Proper, {}, name); }
Expr var(const std::string& name) { return node(Kind::FVar, {}, name); }
Expr bvar(std::size_t index) { return std::make_shared<const Node>(Kind::BVar, std::string{}, index, std::vector<Expr>{}, std::vector<std::string>{}); }
Expr star() {
    static const Expr e = node(Kind::Star);
    return e;
}
Expr abort(Expr t) { return node(Kind::Abort, {std::move(t)}); }
Expr refl() {
    static const Expr e = node(Kind::Refl);
    return e;
}
Expr pair(Expr a, Expr b) { return node(Kind::Pair, {std::move(a), std::move(b)}); }
Expr proj1(Expr t) { return node(Kind::Proj1, {std::move(t)}); }
Expr proj2(Expr t) { return node(Kind::Proj2, {std::move(t)}); }
Expr inl(Expr t) { return node(Kind::Inl, {std::move(t)}); }
Expr inr(Expr t) { return node(Kind::Inr, {std::move(t)}); }
Expr caseOf(Expr scrut, const std::string& x, Expr left, const std::string& y, Expr right) {
    const std::string xs[] = {x};
    const std::string ys[] = {y};
    return node(Kind::Case, {std::move(scrut), closeBody(left, xs), closeBody(right, ys)}, {}, {x, y});
}
Expr nil() {
    static const Expr e = node(Kind::Nil);
    return e;
}
Expr cons(Expr l, Expr a) { return node(Kind::Cons, {std::move(l), std::move(a)}); }
Expr rec(Expr scrut, Expr base, const std::string& acc, const std::string& elem, Expr step) {
    const std::string names[] = {acc, elem};
    return node(Kind::RecL, {std::move(scrut), std::move(base), closeBody(step, names)}, {}, {acc, elem});
}
Expr classOf(Expr quotType, Expr a) { return node(Kind::ClassOf, {std::move(quotType), std::move(a)}); }
Expr quotElim(Expr scrut, const std::string& x, Expr body) {
    const std::string names[] = {x};
    return node(Kind::QuotElim, {std::move(scrut), closeBody(body, names)}, {}, {x});
}
Expr app(const std::string& fn, std::vector<Expr> args) { return node(Kind::App, std::move(args), fn); }
Expr iso(const std::string& key, Expr arg) { return node(Kind::Iso, {std::move(arg)}, key); }
Expr isoInv(const std::string& key, Expr arg) { return node(Kind::IsoInv, {std::move(arg)}, key); }

Expr rebuild(const Expr& e, std::vector<Expr> kids) {
    return std::make_shared<const Node>(e->kind, e->name, e->index, std::move(kids), e->hints);
}
}  // namespace mk

Expr openBody(const Expr& body, std::span<const Expr> values) { return openAt(body, 0, values); }
Expr openBody(const Expr& body, const Expr& value) { return openAt(body, 0, std::span<const Expr>(&value, 1)); }
Expr closeBody(const Expr& body, std::span<const std::string> names) { return closeAt(body, 0, names); }

Expr substitute(const Expr& e, const std::string& x, const Expr& c) {
    if (!isLocallyClosed(c)) throw UsageError("substitute: replacement has loose bound variables");
    return substMap(e, {{x, c}});
}

Expr substituteAll(const Expr& e, std::span<const std::pair<std::string, Expr>> subst) {
    std::map<std::string, Expr> m;
    for (const auto& [x, c] : subst) {
        if (!isLocallyClosed(c)) throw UsageError("substitute: replacement has loose bound variables");
        m[x] = c;
    }
    return m.empty() ? e : substMap(e, m);
}

std::set<std::string> freeVars(const Expr& e) {
    std::set<std::string> out;
    collectFree(e, out);
    return out;
}

bool occursFree(const Expr& e, const std::string& x) {
    if (e->kind == Kind::FVar) return e->name == x;
    for (const auto& k : e->kids)
        if (occursFree(k, x)) return true;
    return false;
}

bool isLocallyClosed(const Expr& e) { return closedAt(e, 0); }

std::size_t exprSize(const Expr& e) {
    std::size_t n = 1;
    for (const auto& k : e->kids) n += exprSize(k);
    return n;
}

int compareExpr(const Expr& a, const Expr& b) {
    if (a == b) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    if (int c = a->name.compare(b->name); c != 0) return c < 0 ? -1 : 1;
    if (a->index != b->index) return a->index < b->index ? -1 : 1;
    if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (int c = compareExpr(a->kids[i], b->kids[i]); c != 0) return c;
    return 0;
}

bool alphaEqual(const Expr& a, const Expr& b) { return compareExpr(a, b) == 0; }

std::string exprKey(const Expr& e) {
    std::ostringstream os;
    writeKey(e, os);
    return os.str();
}

std::string show(const Expr& e) {
    std::ostringstream os;
    Printer p(e);
    p.print(e, os);
    return os.str();
}

std::string freshName(const std::string& base, const std::set<std::string>& avoid) {
    std::string n = base;
    while (avoid.count(n)) n += '\'';
    return n;
}

std::set<std::string> contextNames(const Context& ctx) {
    std::set<std::string> out;
    for (const auto& b : ctx) out.insert(b.name);
    return out;
}

std::string showContext(const Context& ctx) {
    std::string out = "[";
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        if (i) out += ", ";
        out += ctx[i].name + " : " + show(ctx[i].type);
    }
    return out + "]";
}

Judgement Judgement::typeJ(Context ctx, Expr b) {
    Judgement j;
    j.form = Form::Type;
    j.ctx = std::move(ctx);
    j.type = std::move(b);
    return j;
}
Judgement Judgement::typeEqJ(Context ctx, Expr b, Expr c) {
    Judgement j = typeJ(std::move(ctx), std::move(b));
    j.form = Form::TypeEq;
    j.type2 = std::move(c);
    return j;
}
Judgement Judgement::termJ(Context ctx, Expr t, Expr b) {
    Judgement j = typeJ(std::move(ctx), std::move(b));
    j.form = Form::Term;
    j.term = std::move(t);
    return j;
}
Judgement Judgement::termEqJ(Context ctx, Expr t, Expr u, Expr b) {
    Judgement j = termJ(std::move(ctx), std::move(t), std::move(b));
    j.form = Form::TermEq;
    j.term2 = std::move(u);
    return j;
}

std::string show(const Judgement& j) {
    switch (j.form) {
    case Judgement::Form::Type: return show(j.type) + " type " + showContext(j.ctx);
    case Judgement::Form::TypeEq: return show(j.type) + " = " + show(j.type2) + " " + showContext(j.ctx);
    case Judgement::Form::Term: return show(j.term) + " : " + show(j.type) + " " + showContext(j.ctx);
    case Judgement::Form::TermEq:
        return show(j.term) + " = " + show(j.term2) + " : " + show(j.type) + " " + showContext(j.ctx);
    }
    return {};
}

namespace {
// Compares two optional components after renaming a's context names to b's.
bool sameUpTo(const Expr& a, const Expr& b, const std::vector<std::pair<std::string, Expr>>& ren) {
    if (!a || !b) return !a && !b;
    return alphaEqual(substituteAll(a, ren), b);
}
}  // namespace

bool alphaEqual(const Judgement& a, const Judgement& b) {
    if (a.form != b.form || a.ctx.size() != b.ctx.size()) return false;
    std::vector<std::pair<std::string, Expr>> ren;
    for (std::size_t i = 0; i < a.ctx.size(); ++i) {
        if (!sameUpTo(a.ctx[i].type, b.ctx[i].type, ren)) return false;
        ren.emplace_back(a.ctx[i].name, mk::var(b.ctx[i].name));
    }
    return sameUpTo(a.type, b.type, ren) && sameUpTo(a.type2, b.type2, ren) && sameUpTo(a.term, b.term, ren) &&
           sameUpTo(a.term2, b.term2, ren);
}

void requireScoped(const Context& ctx, const Expr& e, std::size_t prefix) {
    if (!isLocallyClosed(e)) throw ScopeError("loose bound variable in " + show(e));
    std::set<std::string> names;
    for (std::size_t i = 0; i < prefix && i < ctx.size(); ++i) names.insert(ctx[i].name);
    for (const auto& v : freeVars(e))
        if (!names.count(v)) throw ScopeError("unbound variable '" + v + "' in " + show(e));
}

void requireScoped(const Context& ctx, const Expr& e) { requireScoped(ctx, e, ctx.size()); }

void requireWellScoped(const Judgement& j) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < j.ctx.size(); ++i) {
        if (!seen.insert(j.ctx[i].name).second) throw ScopeError("duplicate context variable '" + j.ctx[i].name + "'");
        requireScoped(j.ctx, j.ctx[i].type, i);
    }
    for (const Expr& e : {j.type, j.type2, j.term, j.term2})
        if (e) requireScoped(j.ctx, e);
}

std::string weakeningName(const Judgement& j, const Expr& d) {
    std::set<std::string> avoid = contextNames(j.ctx);
    for (const Expr& e : {j.type, j.type2, j.term, j.term2, d})
        if (e) collectFree(e, avoid);
    return freshName("y", avoid);
}

Judgement weaken(const Judgement& j, const Expr& d, std::size_t position) {
    if (position > j.ctx.size())
        throw UsageError("weaken: position " + std::to_string(position) + " outside context of length " +
                         std::to_string(j.ctx.size()));
    requireScoped(j.ctx, d, position);
    Judgement out = j;
    out.ctx.insert(out.ctx.begin() + static_cast<std::ptrdiff_t>(position), Binding{weakeningName(j, d), d});
    return out;
}

Judgement instantiate(const Judgement& j, std::size_t position, const Expr& c) {
    if (position >= j.ctx.size()) throw UsageError("instantiate: position outside context");
    requireScoped(j.ctx, c, position);
    const std::string x = j.ctx[position].name;
    Judgement out = j;
    out.ctx.erase(out.ctx.begin() + static_cast<std::ptrdiff_t>(position));
    for (std::size_t i = position; i < out.ctx.size(); ++i) out.ctx[i].type = substitute(out.ctx[i].type, x, c);
    for (Expr* e : {&out.type, &out.type2, &out.term, &out.term2})
        if (*e) *e = substitute(*e, x, c);
    return out;
}

}  // namespace au
