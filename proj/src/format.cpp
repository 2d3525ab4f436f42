#include "au/format.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "au/error.hpp"

namespace au::format {

namespace {

struct Tok {
    std::string text;
    int line;
    int col;
};

bool isDelim(char c) {
    return c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',' || c == ':';
}

std::vector<Tok> tokenize(std::string_view line, int lineNo) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        int col = static_cast<int>(i) + 1;
        if (isDelim(c)) {
            out.push_back({std::string(1, c), lineNo, col});
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !isDelim(line[j]) && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        out.push_back({std::string(line.substr(i, j - i)), lineNo, col});
        i = j;
    }
    return out;
}

const std::set<std::string>& reserved() {
    static const std::set<std::string> r{"eq",   "sigma", "sum",   "list", "quot", "abort", "pair",   "fst",
                                         "snd",  "inl",   "inr",   "case", "cons", "rec",   "class",  "qelim",
                                         "iso",  "iso-inv", "Top", "Bot",  "refl", "nil",   "*",      "id"};
    return r;
}

class Line {
public:
    Line(std::string_view text, int lineNo) : toks_(tokenize(text, lineNo)), line_(lineNo), width_(text.size()) {}

    bool atEnd() const { return i_ >= toks_.size(); }
    const std::string& peek() const {
        static const std::string none;
        return atEnd() ? none : toks_[i_].text;
    }
    std::string next(const char* what) {
        if (atEnd()) fail(std::string("expected ") + what);
        return toks_[i_++].text;
    }
    bool accept(const std::string& s) {
        if (!atEnd() && toks_[i_].text == s) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(const std::string& s) {
        if (!accept(s)) fail("expected '" + s + "'" + (atEnd() ? std::string() : " before '" + peek() + "'"));
    }
    void finish() {
        if (!atEnd()) fail("unexpected '" + peek() + "'");
    }
    std::string name(const char* what) {
        std::string n = next(what);
        if (n.size() == 1 && isDelim(n[0])) {
            --i_;
            fail(std::string("expected ") + what);
        }
        return n;
    }
    int line() const { return line_; }
    [[noreturn]] void fail(const std::string& msg) const {
        int col = atEnd() ? static_cast<int>(width_) + 1 : toks_[i_].col;
        throw ParseError(msg, line_, col);
    }

    Expr type() {
        if (accept("(")) {
            std::string head = name("type constructor");
            Expr out;
            if (head == "eq") {
                Expr c = type();
                Expr a = term();
                out = mk::eq(c, a, term());
            } else if (head == "sigma") {
                std::string x = binder();
                Expr d = type();
                out = mk::sigma(x, d, type());
            } else if (head == "sum") {
                Expr a = type();
                out = mk::sum(a, type());
            } else if (head == "list") {
                out = mk::list(type());
            } else if (head == "quot") {
                Expr a = type();
                std::string x = binder(), y = binder();
                out = mk::quot(a, x, y, type());
            } else {
                fail("unknown type constructor '" + head + "'");
            }
            expect(")");
            return out;
        }
        std::string n = name("a type");
        if (n == "Top") return mk::top();
        if (n == "Bot") return mk::bot();
        if (reserved().count(n)) fail("'" + n + "' is not a type");
        return mk::proper(n);
    }

    Expr term() {
        if (accept("(")) {
            std::string head = name("term constructor");
            Expr out;
            auto one = [&] { return term(); };
            if (head == "abort") out = mk::abort(one());
            else if (head == "pair") {
                Expr a = term();
                out = mk::pair(a, term());
            } else if (head == "fst") out = mk::proj1(one());
            else if (head == "snd") out = mk::proj2(one());
            else if (head == "inl") out = mk::inl(one());
            else if (head == "inr") out = mk::inr(one());
            else if (head == "case") {
                Expr s = term();
                std::string x = binder();
                Expr l = term();
                std::string y = binder();
                out = mk::caseOf(s, x, l, y, term());
            } else if (head == "cons") {
                Expr l = term();
                out = mk::cons(l, term());
            } else if (head == "rec") {
                Expr s = term();
                Expr b = term();
                std::string acc = binder(), e = binder();
                out = mk::rec(s, b, acc, e, term());
            } else if (head == "class") {
                Expr q = type();
                out = mk::classOf(q, term());
            } else if (head == "qelim") {
                Expr s = term();
                std::string x = binder();
                out = mk::quotElim(s, x, term());
            } else if (head == "iso" || head == "iso-inv") {
                std::string k = name("coherence constant");
                Expr a = term();
                out = head == "iso" ? mk::iso(k, a) : mk::isoInv(k, a);
            } else if (reserved().count(head)) {
                fail("'" + head + "' cannot be applied");
            } else {
                std::vector<Expr> args;
                while (!atEnd() && peek() != ")") args.push_back(term());
                out = mk::app(head, std::move(args));
            }
            expect(")");
            return out;
        }
        std::string n = name("a term");
        if (n == "*") return mk::star();
        if (n == "refl") return mk::refl();
        if (n == "nil") return mk::nil();
        if (reserved().count(n)) fail("'" + n + "' is not a term");
        return mk::var(n);
    }

    std::string binder() {
        std::string x = name("a variable");
        if (reserved().count(x)) fail("'" + x + "' cannot be bound");
        return x;
    }

    Context context() {
        Context ctx;
        expect("[");
        if (accept("]")) return ctx;
        do {
            std::string x = binder();
            expect(":");
            ctx.push_back({x, type()});
        } while (accept(","));
        expect("]");
        return ctx;
    }

    Orientation orientation() {
        if (accept("->")) return Orientation::LeftToRight;
        if (accept("<-")) return Orientation::RightToLeft;
        if (accept("<->")) return Orientation::None;
        return Orientation::LeftToRight;
    }

    std::vector<std::string> path() {
        std::vector<std::string> p;
        if (accept("id")) return p;
        while (!atEnd() && peek() != "=") p.push_back(name("an arrow"));
        if (p.empty()) fail("expected a path");
        return p;
    }

private:
    std::vector<Tok> toks_;
    std::size_t i_ = 0;
    int line_;
    std::size_t width_;
};

// -------------------------------------------------------------- printing

void printTo(const Expr& e, std::ostream& os);

std::string bindName(const Expr& body, const std::string& hint, std::set<std::string>& taken) {
    std::set<std::string> avoid = freeVars(body);
    avoid.insert(taken.begin(), taken.end());
    std::string x = freshName(hint.empty() ? "x" : hint, avoid);
    taken.insert(x);
    return x;
}

void printBinders(const Expr& body, const std::vector<std::string>& hints, std::size_t first, std::size_t count,
                  std::ostream& os) {
    std::set<std::string> taken;
    std::vector<Expr> vals;
    for (std::size_t i = 0; i < count; ++i) {
        std::string hint = first + i < hints.size() ? hints[first + i] : "x";
        std::string x = bindName(body, hint, taken);
        os << x << ' ';
        vals.push_back(mk::var(x));
    }
    printTo(openBody(body, vals), os);
}

void printTo(const Expr& e, std::ostream& os) {
    auto kid = [&](std::size_t i) {
        os << ' ';
        printTo(e->kids[i], os);
    };
    switch (e->kind) {
    case Kind::Top: os << "Top"; return;
    case Kind::Bot: os << "Bot"; return;
    case Kind::Proper:
        if (reserved().count(e->name)) throw UsageError("proper type named '" + e->name + "' cannot be printed");
        os << e->name;
        return;
    case Kind::FVar: os << e->name; return;
    case Kind::BVar: throw UsageError("cannot print a loose bound variable");
    case Kind::Star: os << "*"; return;
    case Kind::Refl: os << "refl"; return;
    case Kind::Nil: os << "nil"; return;
    case Kind::Eq: os << "(eq"; kid(0); kid(1); kid(2); os << ')'; return;
    case Kind::Sigma:
        os << "(sigma ";
        {
            // the domain is printed between the binder and the body
            std::set<std::string> taken;
            std::string x = bindName(e->kids[1], e->hints.empty() ? "x" : e->hints[0], taken);
            os << x << ' ';
            printTo(e->kids[0], os);
            os << ' ';
            printTo(openBody(e->kids[1], mk::var(x)), os);
        }
        os << ')';
        return;
    case Kind::Sum: os << "(sum"; kid(0); kid(1); os << ')'; return;
    case Kind::List: os << "(list"; kid(0); os << ')'; return;
    case Kind::Quot:
        os << "(quot";
        kid(0);
        os << ' ';
        printBinders(e->kids[1], e->hints, 0, 2, os);
        os << ')';
        return;
    case Kind::Abort: os << "(abort"; kid(0); os << ')'; return;
    case Kind::Pair: os << "(pair"; kid(0); kid(1); os << ')'; return;
    case Kind::Proj1: os << "(fst"; kid(0); os << ')'; return;
    case Kind::Proj2: os << "(snd"; kid(0); os << ')'; return;
    case Kind::Inl: os << "(inl"; kid(0); os << ')'; return;
    case Kind::Inr: os << "(inr"; kid(0); os << ')'; return;
    case Kind::Case:
        os << "(case";
        kid(0);
        os << ' ';
        printBinders(e->kids[1], e->hints, 0, 1, os);
        os << ' ';
        printBinders(e->kids[2], e->hints, 1, 1, os);
        os << ')';
        return;
    case Kind::Cons: os << "(cons"; kid(0); kid(1); os << ')'; return;
    case Kind::RecL:
        os << "(rec";
        kid(0);
        kid(1);
        os << ' ';
        printBinders(e->kids[2], e->hints, 0, 2, os);
        os << ')';
        return;
    case Kind::ClassOf: os << "(class"; kid(0); kid(1); os << ')'; return;
    case Kind::QuotElim:
        os << "(qelim";
        kid(0);
        os << ' ';
        printBinders(e->kids[1], e->hints, 0, 1, os);
        os << ')';
        return;
    case Kind::App:
        if (reserved().count(e->name)) throw UsageError("proper term named '" + e->name + "' cannot be printed");
        os << '(' << e->name;
        for (std::size_t i = 0; i < e->kids.size(); ++i) kid(i);
        os << ')';
        return;
    case Kind::Iso: os << "(iso " << e->name; kid(0); os << ')'; return;
    case Kind::IsoInv: os << "(iso-inv " << e->name; kid(0); os << ')'; return;
    }
}

const char* orientationMark(Orientation o) {
    switch (o) {
    case Orientation::LeftToRight: return "";
    case Orientation::RightToLeft: return " <-";
    case Orientation::None: return " <->";
    }
    return "";
}

std::string pathText(const std::vector<std::string>& p) {
    if (p.empty()) return "id";
    std::string out;
    for (const auto& a : p) out += (out.empty() ? "" : " ") + a;
    return out;
}

void printStructure(const Structure& s, std::ostream& os) {
    if (s.isCanonical()) return;
    os << "  structure";
    if (s.swapPairs) os << " swap-pairs";
    if (s.swapSums) os << " swap-sums";
    if (s.reverseLists) os << " reverse-lists";
    if (!s.terminal.empty()) os << " terminal=" << s.terminal;
    if (!s.properTag.empty()) os << " proper-tag=" << s.properTag;
    os << '\n';
}

std::string judgementText(const Judgement& j) {
    std::string ctx = printContext(j.ctx);
    switch (j.form) {
    case Judgement::Form::Type: return ctx + " " + printExpr(j.type) + " type";
    case Judgement::Form::Term: return ctx + " " + printExpr(j.term) + " : " + printExpr(j.type);
    case Judgement::Form::TypeEq: return ctx + " " + printExpr(j.type) + " = " + printExpr(j.type2) + " type";
    case Judgement::Form::TermEq:
        return ctx + " " + printExpr(j.term) + " = " + printExpr(j.term2) + " : " + printExpr(j.type);
    }
    return ctx;
}

// ------------------------------------------------------------- parsing

class DocParser {
public:
    explicit DocParser(std::string_view text) {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t nl = text.find('\n', start);
            if (nl == std::string_view::npos) nl = text.size();
            lines_.push_back(text.substr(start, nl - start));
            start = nl + 1;
        }
    }

    Document run() {
        while (n_ < lines_.size()) {
            std::string_view raw = lines_[n_];
            int no = static_cast<int>(++n_);
            start_ = no;
            std::string_view trimmed = trim(raw);
            if (trimmed.empty()) continue;
            if (trimmed.front() == '#') {
                doc_.comments.emplace_back(trimmed);
                doc_.order.push_back({Document::Kind::Comment, doc_.comments.size() - 1, start_});
                continue;
            }
            Line l(raw, no);
            std::string kw = l.name("a declaration");
            if (kw == "category") category(l);
            else if (kw == "model") model(l);
            else if (kw == "theory") theory(l);
            else if (kw == "functor") functor(l);
            else if (kw == "subspace") subspace(l);
            else if (kw == "judgement" || kw == "equal") check(l, kw == "equal");
            else throw ParseError("unknown declaration '" + kw + "'", no, firstCol(raw));
        }
        return std::move(doc_);
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t n_ = 0;
    int start_ = 0;
    Document doc_;

    static std::string_view trim(std::string_view s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string_view::npos) return {};
        std::size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }
    static int firstCol(std::string_view s) { return static_cast<int>(s.find_first_not_of(" \t")) + 1; }

    // the lines of a block up to `end`
    template <class F>
    void block(const char* what, F onLine) {
        int openedAt = static_cast<int>(n_);
        while (n_ < lines_.size()) {
            std::string_view raw = lines_[n_];
            int no = static_cast<int>(++n_);
            std::string_view t = trim(raw);
            if (t.empty() || t.front() == '#') continue;
            Line l(raw, no);
            std::string kw = l.name("an entry");
            if (kw == "end") {
                l.finish();
                return;
            }
            onLine(kw, l);
            l.finish();
        }
        throw ParseError(std::string("unterminated ") + what, openedAt, 1);
    }

    void category(Line& l) {
        CatPresentation c;
        c.name = l.name("a category name");
        l.finish();
        block("category", [&](const std::string& kw, Line& e) {
            if (kw == "object") c.objects.push_back(e.name("an object"));
            else if (kw == "arrow") {
                CatArrow a;
                a.name = e.name("an arrow name");
                e.expect(":");
                a.src = e.name("a source");
                e.expect("->");
                a.tgt = e.name("a target");
                c.arrows.push_back(a);
            } else if (kw == "equation") c.equations.push_back(equation(e));
            else e.fail("unknown category entry '" + kw + "'");
        });
        doc_.categories.push_back(std::move(c));
        doc_.order.push_back({Document::Kind::Category, doc_.categories.size() - 1, start_});
    }

    static CatEquation equation(Line& e) {
        CatEquation q;
        q.source = e.name("a source object");
        e.expect(":");
        q.lhs = e.path();
        e.expect("=");
        q.rhs = e.path();
        return q;
    }

    static std::vector<std::pair<std::string, std::string>> graph(Line& e) {
        std::vector<std::pair<std::string, std::string>> out;
        e.expect("{");
        while (!e.atEnd() && e.peek() != "}") {
            std::string kv = e.name("x=y");
            auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size()) e.fail("expected x=y, got '" + kv + "'");
            out.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
        e.expect("}");
        return out;
    }

    void model(Line& l) {
        ModelPresentation m;
        m.name = l.name("a model name");
        l.finish();
        block("model", [&](const std::string& kw, Line& e) {
            if (kw == "object") {
                ModelObject o;
                o.name = e.name("an object");
                e.expect("{");
                while (!e.atEnd() && e.peek() != "}") o.carrier.push_back(e.name("an element"));
                e.expect("}");
                m.objects.push_back(std::move(o));
            } else if (kw == "arrow") {
                ModelArrow a;
                a.name = e.name("an arrow name");
                e.expect(":");
                a.src = e.name("a source");
                e.expect("->");
                a.tgt = e.name("a target");
                for (auto& [x, y] : graph(e)) a.graph[x] = y;
                m.arrows.push_back(std::move(a));
            } else if (kw == "equation") {
                m.equations.push_back(equation(e));
            } else if (kw == "structure") {
                while (!e.atEnd()) {
                    std::string f = e.name("a structure flag");
                    if (f == "swap-pairs") m.structure.swapPairs = true;
                    else if (f == "swap-sums") m.structure.swapSums = true;
                    else if (f == "reverse-lists") m.structure.reverseLists = true;
                    else if (f.starts_with("terminal=")) m.structure.terminal = f.substr(9);
                    else if (f.starts_with("proper-tag=")) m.structure.properTag = f.substr(11);
                    else e.fail("unknown structure flag '" + f + "'");
                }
            } else if (kw == "faithful") {
                m.faithful = true;
            } else {
                e.fail("unknown model entry '" + kw + "'");
            }
        });
        doc_.models.push_back(std::move(m));
        doc_.order.push_back({Document::Kind::Model, doc_.models.size() - 1, start_});
    }

    void theory(Line& l) {
        TheoryDecl t;
        t.name = l.name("a theory name");
        if (l.accept("=")) {
            std::string how = l.name("free, internal, iso or subspace");
            t.from = l.name("a source name");
            if (how == "free") t.kind = TheoryDecl::Kind::Free;
            else if (how == "internal") t.kind = TheoryDecl::Kind::Internal;
            else if (how == "iso") {
                t.kind = TheoryDecl::Kind::Iso;
                l.expect("by");
                t.realization = l.name("a model name");
            } else if (how == "subspace") {
                t.kind = TheoryDecl::Kind::Subspace;
                l.expect("with");
                t.subspace = l.name("a subspace name");
            } else {
                l.fail("unknown theory construction '" + how + "'");
            }
            l.finish();
        } else {
            l.finish();
            t.kind = TheoryDecl::Kind::Explicit;
            t.body.name = t.name;
            block("theory", [&](const std::string& kw, Line& e) {
                if (kw == "type") t.body.properTypes.push_back(e.name("a type name"));
                else if (kw == "term") {
                    ProperTermDecl d;
                    d.name = e.name("a term name");
                    d.ctx = e.context();
                    e.expect(":");
                    d.type = e.type();
                    t.body.properTerms.push_back(std::move(d));
                } else if (kw == "axiom") {
                    TermAxiom a;
                    a.name = e.name("an axiom name");
                    a.orientation = e.orientation();
                    a.ctx = e.context();
                    a.lhs = e.term();
                    e.expect("=");
                    a.rhs = e.term();
                    e.expect(":");
                    a.type = e.type();
                    t.body.termAxioms.push_back(std::move(a));
                    t.axiomLines.push_back(e.line());
                } else if (kw == "type-axiom") {
                    TypeAxiom a;
                    a.name = e.name("an axiom name");
                    a.ctx = e.context();
                    a.lhs = e.type();
                    e.expect("=");
                    a.rhs = e.type();
                    t.body.typeAxioms.push_back(std::move(a));
                } else if (kw == "realization") {
                    t.body.realization = e.name("a model name");
                } else {
                    e.fail("unknown theory entry '" + kw + "'");
                }
            });
        }
        doc_.theories.push_back(std::move(t));
        doc_.order.push_back({Document::Kind::Theory, doc_.theories.size() - 1, start_});
    }

    void functor(Line& l) {
        FunctorPresentation f;
        f.name = l.name("a functor name");
        l.expect(":");
        f.source = l.name("a source model");
        l.expect("->");
        f.target = l.name("a target model");
        l.finish();
        block("functor", [&](const std::string& kw, Line& e) {
            if (kw == "object") {
                std::string x = e.name("an object");
                e.expect("->");
                f.objects[x] = e.name("an object");
                auto& cm = f.carriers[x];
                for (auto& [a, b] : graph(e)) cm[a] = b;
            } else if (kw == "arrow") {
                std::string a = e.name("an arrow");
                e.expect("->");
                f.arrows[a] = e.path();
            } else {
                e.fail("unknown functor entry '" + kw + "'");
            }
        });
        doc_.functors.push_back(std::move(f));
        doc_.order.push_back({Document::Kind::Functor, doc_.functors.size() - 1, start_});
    }

    void subspace(Line& l) {
        SubspaceAxioms s;
        s.name = l.name("a subspace name");
        l.finish();
        block("subspace", [&](const std::string& kw, Line& e) {
            SubspaceAxiom a;
            a.name = e.name("an axiom name");
            if (kw == "const") {
                a.form = SubspaceAxiom::Form::NewTerm;
            } else if (kw == "equal") {
                a.form = SubspaceAxiom::Form::NewEquality;
                a.orientation = e.orientation();
            } else {
                e.fail("unknown subspace entry '" + kw + "'");
            }
            Context ctx = e.context();
            if (ctx.size() > 1) e.fail("a subspace axiom binds at most one variable");
            if (!ctx.empty()) a.binder = ctx.front();
            if (a.form == SubspaceAxiom::Form::NewEquality) {
                a.lhs = e.term();
                e.expect("=");
                a.rhs = e.term();
            }
            e.expect(":");
            a.type = e.type();
            s.axioms.push_back(std::move(a));
        });
        doc_.subspaces.push_back(std::move(s));
        doc_.order.push_back({Document::Kind::Subspace, doc_.subspaces.size() - 1, start_});
    }

    void check(Line& l, bool equal) {
        CheckDecl c;
        c.theory = l.name("a theory name");
        Context ctx = l.context();
        // the form is known only after the first expression: try a term, fall back to a type
        Line save = l;
        Judgement j;
        try {
            Expr t = l.term();
            if (equal) {
                l.expect("=");
                Expr u = l.term();
                l.expect(":");
                j = Judgement::termEqJ(ctx, t, u, l.type());
            } else {
                l.expect(":");
                j = Judgement::termJ(ctx, t, l.type());
            }
        } catch (const ParseError& asTerm) {
            l = save;
            try {
                Expr a = l.type();
                if (equal) {
                    l.expect("=");
                    Expr b = l.type();
                    j = Judgement::typeEqJ(ctx, a, b);
                } else {
                    j = Judgement::typeJ(ctx, a);
                }
                l.expect("type");
            } catch (const ParseError& asType) {
                // report whichever reading got further
                if (asType.column() >= asTerm.column()) throw;
                throw asTerm;
            }
        }
        l.finish();
        c.judgement = std::move(j);
        doc_.checks.push_back(std::move(c));
        doc_.order.push_back({Document::Kind::Check, doc_.checks.size() - 1, start_});
    }
};

}  // namespace

// ------------------------------------------------------------ public API

void Document::append(const Document& o) {
    auto shift = [this](Kind k) -> std::size_t {
        switch (k) {
        case Kind::Comment: return comments.size();
        case Kind::Category: return categories.size();
        case Kind::Model: return models.size();
        case Kind::Theory: return theories.size();
        case Kind::Functor: return functors.size();
        case Kind::Subspace: return subspaces.size();
        case Kind::Check: return checks.size();
        }
        return 0;
    };
    std::vector<Entry> added;
    for (const auto& e : o.order) added.push_back({e.kind, e.index + shift(e.kind), e.line});
    comments.insert(comments.end(), o.comments.begin(), o.comments.end());
    categories.insert(categories.end(), o.categories.begin(), o.categories.end());
    models.insert(models.end(), o.models.begin(), o.models.end());
    theories.insert(theories.end(), o.theories.begin(), o.theories.end());
    functors.insert(functors.end(), o.functors.begin(), o.functors.end());
    subspaces.insert(subspaces.end(), o.subspaces.begin(), o.subspaces.end());
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
    order.insert(order.end(), added.begin(), added.end());
}

Document parse(std::string_view text) { return DocParser(text).run(); }

Document parseFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Expr parseType(std::string_view text) {
    Line l(text, 1);
    Expr e = l.type();
    l.finish();
    return e;
}

Expr parseTerm(std::string_view text) {
    Line l(text, 1);
    Expr e = l.term();
    l.finish();
    return e;
}

std::string printExpr(const Expr& e) {
    std::ostringstream os;
    printTo(e, os);
    return os.str();
}

std::string printContext(const Context& ctx) {
    std::string out = "[";
    for (std::size_t i = 0; i < ctx.size(); ++i) out += (i ? ", " : "") + ctx[i].name + " : " + printExpr(ctx[i].type);
    return out + "]";
}

std::string print(const Document& doc) {
    std::ostringstream os;
    Document::Kind prev = Document::Kind::Comment;
    bool first = true;
    for (const auto& entry : doc.order) {
        const auto kind = entry.kind;
        const std::size_t i = entry.index;
        bool isBlock = kind != Document::Kind::Comment && kind != Document::Kind::Check;
        bool wasBlock = prev != Document::Kind::Comment && prev != Document::Kind::Check;
        if (!first && (isBlock || wasBlock || kind != prev)) os << '\n';
        first = false;
        prev = kind;
        switch (kind) {
        case Document::Kind::Comment: os << doc.comments[i] << '\n'; break;
        case Document::Kind::Category: {
            const auto& c = doc.categories[i];
            os << "category " << c.name << '\n';
            for (const auto& o : c.objects) os << "  object " << o << '\n';
            for (const auto& a : c.arrows) os << "  arrow " << a.name << " : " << a.src << " -> " << a.tgt << '\n';
            for (const auto& q : c.equations)
                os << "  equation " << q.source << " : " << pathText(q.lhs) << " = " << pathText(q.rhs) << '\n';
            os << "end\n";
            break;
        }
        case Document::Kind::Model: {
            const auto& m = doc.models[i];
            os << "model " << m.name << '\n';
            for (const auto& o : m.objects) {
                os << "  object " << o.name << " {";
                for (const auto& x : o.carrier) os << ' ' << x;
                os << " }\n";
            }
            for (const auto& a : m.arrows) {
                os << "  arrow " << a.name << " : " << a.src << " -> " << a.tgt << " {";
                for (const auto& [x, y] : a.graph) os << ' ' << x << '=' << y;
                os << " }\n";
            }
            for (const auto& q : m.equations)
                os << "  equation " << q.source << " : " << pathText(q.lhs) << " = " << pathText(q.rhs) << '\n';
            printStructure(m.structure, os);
            if (m.faithful) os << "  faithful\n";
            os << "end\n";
            break;
        }
        case Document::Kind::Theory: {
            const auto& t = doc.theories[i];
            switch (t.kind) {
            case TheoryDecl::Kind::Free: os << "theory " << t.name << " = free " << t.from << '\n'; break;
            case TheoryDecl::Kind::Internal: os << "theory " << t.name << " = internal " << t.from << '\n'; break;
            case TheoryDecl::Kind::Iso:
                os << "theory " << t.name << " = iso " << t.from << " by " << t.realization << '\n';
                break;
            case TheoryDecl::Kind::Subspace:
                os << "theory " << t.name << " = subspace " << t.from << " with " << t.subspace << '\n';
                break;
            case TheoryDecl::Kind::Explicit: {
                const auto& b = t.body;
                os << "theory " << t.name << '\n';
                if (!b.realization.empty()) os << "  realization " << b.realization << '\n';
                for (const auto& ty : b.properTypes) os << "  type " << ty << '\n';
                for (const auto& d : b.properTerms)
                    os << "  term " << d.name << ' ' << printContext(d.ctx) << " : " << printExpr(d.type) << '\n';
                for (const auto& a : b.typeAxioms)
                    os << "  type-axiom " << a.name << ' ' << printContext(a.ctx) << ' ' << printExpr(a.lhs) << " = "
                       << printExpr(a.rhs) << '\n';
                for (const auto& a : b.termAxioms)
                    os << "  axiom " << a.name << orientationMark(a.orientation) << ' ' << printContext(a.ctx) << ' '
                       << printExpr(a.lhs) << " = " << printExpr(a.rhs) << " : " << printExpr(a.type) << '\n';
                if (!b.coherence.empty()) throw UsageError("theory " + t.name + " has coherence constants");
                os << "end\n";
                break;
            }
            }
            break;
        }
        case Document::Kind::Functor: {
            const auto& f = doc.functors[i];
            os << "functor " << f.name << " : " << f.source << " -> " << f.target << '\n';
            for (const auto& [x, y] : f.objects) {
                os << "  object " << x << " -> " << y << " {";
                if (auto it = f.carriers.find(x); it != f.carriers.end())
                    for (const auto& [a, b] : it->second) os << ' ' << a << '=' << b;
                os << " }\n";
            }
            for (const auto& [a, p] : f.arrows) os << "  arrow " << a << " -> " << pathText(p) << '\n';
            os << "end\n";
            break;
        }
        case Document::Kind::Subspace: {
            const auto& s = doc.subspaces[i];
            os << "subspace " << s.name << '\n';
            for (const auto& a : s.axioms) {
                std::string ctx = printContext(a.context());
                if (a.form == SubspaceAxiom::Form::NewTerm)
                    os << "  const " << a.name << ' ' << ctx << " : " << printExpr(a.type) << '\n';
                else
                    os << "  equal " << a.name << orientationMark(a.orientation) << ' ' << ctx << ' ' << printExpr(a.lhs)
                       << " = " << printExpr(a.rhs) << " : " << printExpr(a.type) << '\n';
            }
            os << "end\n";
            break;
        }
        case Document::Kind::Check: {
            const auto& c = doc.checks[i];
            bool eq = c.judgement.form == Judgement::Form::TermEq || c.judgement.form == Judgement::Form::TypeEq;
            os << (eq ? "equal " : "judgement ") << c.theory << ' ' << judgementText(c.judgement) << '\n';
            break;
        }
        }
    }
    return os.str();
}

// ------------------------------------------------------------- workspace

Workspace::Workspace(Document doc, std::size_t depth, CorpusOptions corpus)
    : doc_(std::move(doc)), depth_(depth), corpus_(corpus) {}

namespace {

template <class T>
const T& byName(const std::vector<T>& xs, const std::string& name, const char* what) {
    for (const auto& x : xs)
        if (x.name == name) return x;
    throw ScopeError(std::string("no ") + what + " named '" + name + "'");
}

}  // namespace

const CatPresentation& Workspace::category(const std::string& n) const { return byName(doc_.categories, n, "category"); }
const ModelPresentation& Workspace::model(const std::string& n) const { return byName(doc_.models, n, "model"); }
const FunctorPresentation& Workspace::functor(const std::string& n) const { return byName(doc_.functors, n, "functor"); }
const SubspaceAxioms& Workspace::subspace(const std::string& n) const { return byName(doc_.subspaces, n, "subspace"); }

const TheoryPresentation& Workspace::theory(const std::string& name) {
    if (auto it = built_.find(name); it != built_.end()) return it->second;
    if (std::find(building_.begin(), building_.end(), name) != building_.end())
        throw ScopeError("theory '" + name + "' is defined in terms of itself");
    const TheoryDecl& d = byName(doc_.theories, name, "theory");
    building_.push_back(name);
    TheoryPresentation t;
    switch (d.kind) {
    case TheoryDecl::Kind::Free: t = theoryFromCategory(category(d.from)); break;
    case TheoryDecl::Kind::Internal: t = internalTheoryOfModel(model(d.from)); break;
    case TheoryDecl::Kind::Explicit: t = d.body; break;
    case TheoryDecl::Kind::Iso: {
        const TheoryPresentation& base = theory(d.from);
        auto gen = std::make_unique<CoherenceGenerator>(base, model(d.realization), depth_);
        gen->family(typeCorpus(base, corpus_));
        t = withCoherentIsos(base, gen->extension());
        gens_[name] = std::move(gen);
        break;
    }
    case TheoryDecl::Kind::Subspace: t = extendSubspace(theory(d.from), subspace(d.subspace)); break;
    }
    building_.pop_back();
    t.name = name;
    return built_.emplace(name, std::move(t)).first->second;
}

CoherenceGenerator* Workspace::generator(const std::string& isoTheory) {
    theory(isoTheory);
    auto it = gens_.find(isoTheory);
    return it == gens_.end() ? nullptr : it->second.get();
}

}  // namespace au::format
