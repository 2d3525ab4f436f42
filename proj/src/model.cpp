#include "au/model.hpp"

#include <algorithm>
#include <numeric>

#include "au/error.hpp"

namespace au {

EnumSet EnumSet::of(std::vector<Value> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return EnumSet{std::move(xs)};
}

bool EnumSet::contains(const Value& v) const { return std::binary_search(elems.begin(), elems.end(), v); }

SampleVerdict morphismsEqualOnSamples(const CompMap& f, const CompMap& g, std::size_t depth) {
    SampleVerdict v;
    v.depth = depth;
    for (const auto& x : f.domain.elems) {
        ++v.samples;
        Value a = f.fn(x), b = g.fn(x);
        if (a != b) {
            v.status = SampleVerdict::Status::CounterexampleFound;
            v.witness = x;
            v.detail = a.str() + " vs " + b.str();
            return v;
        }
    }
    return v;
}

Evaluator::Evaluator(const ModelPresentation* model, Structure structure, std::size_t depth, std::size_t enumCap)
    : model_(model), structure_(std::move(structure)), depth_(depth), cap_(enumCap) {}

void Evaluator::defineType(const std::string& name, std::vector<Value> carrier) {
    types_[name] = std::move(carrier);
    std::lock_guard lock(cache_.ptr->mutex);
    cache_.ptr->types.clear();
}
void Evaluator::defineTerm(const std::string& name, TermFn fn) { terms_[name] = std::move(fn); }
void Evaluator::defineIso(const std::string& key, MapFn forward, MapFn inverse) {
    isos_[key] = {std::move(forward), std::move(inverse)};
}
bool Evaluator::hasTerm(const std::string& name) const {
    return terms_.count(name) || (model_ && model_->arrow(name));
}

void Evaluator::guard(std::size_t n) const {
    if (n > cap_) throw ModelError("enumeration exceeds " + std::to_string(cap_) + " elements at depth " +
                                   std::to_string(depth_));
}

namespace {

const Value* lookupEnv(const Env& env, const std::string& x) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == x) return &it->second;
    return nullptr;
}

struct Push {
    std::vector<Value>& stack;
    std::size_t n;
    Push(std::vector<Value>& s, std::initializer_list<Value> vs) : stack(s), n(vs.size()) {
        for (const auto& v : vs) stack.push_back(v);
    }
    ~Push() { stack.resize(stack.size() - n); }
};

void listsUpTo(const std::vector<Value>& elems, std::size_t depth, std::size_t cap, std::vector<std::vector<Value>>& out) {
    std::vector<std::vector<Value>> layer{{}};
    out.push_back({});
    for (std::size_t len = 1; len <= depth && !elems.empty(); ++len) {
        std::vector<std::vector<Value>> next;
        for (const auto& l : layer)
            for (const auto& e : elems) {
                auto l2 = l;
                l2.push_back(e);
                next.push_back(std::move(l2));
                if (out.size() + next.size() > cap)
                    throw ModelError("list enumeration exceeds " + std::to_string(cap) + " elements");
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
}

}  // namespace

EnumSet Evaluator::evalType(const Expr& type, const Env& env) const {
    std::vector<Value> bound;
    return typeImpl(type, env, bound);
}

Value Evaluator::evalTerm(const Expr& term, const Env& env) const {
    std::vector<Value> bound;
    return termImpl(term, env, bound);
}

bool Evaluator::inhabited(const Expr& type, const Env& env) const {
    if (type->kind == Kind::Eq) {
        std::vector<Value> bound;
        return termImpl(type->kids[1], env, bound) == termImpl(type->kids[2], env, bound);
    }
    return evalType(type, env).size() > 0;
}

EnumSet Evaluator::typeImpl(const Expr& b, const Env& env, std::vector<Value>& bound) const {
    const bool closed = bound.empty() && freeVars(b).empty();
    std::string key;
    if (closed) {
        key = exprKey(b);
        std::lock_guard lock(cache_.ptr->mutex);
        auto it = cache_.ptr->types.find(key);
        if (it != cache_.ptr->types.end()) return *it->second;
    }
    const Structure& s = structure_;
    std::vector<Value> out;
    switch (b->kind) {
    case Kind::Top: out.push_back(s.unit()); break;
    case Kind::Bot: break;
    case Kind::Proper: {
        auto it = types_.find(b->name);
        if (it != types_.end()) {
            out = it->second;
        } else if (const ModelObject* o = model_ ? model_->object(b->name) : nullptr) {
            for (const auto& e : o->carrier) out.push_back(s.proper(Value::atom(e)));
        } else {
            throw ModelError("no carrier for proper type '" + b->name + "'");
        }
        break;
    }
    case Kind::Eq:
        if (termImpl(b->kids[1], env, bound) == termImpl(b->kids[2], env, bound)) out.push_back(s.refl());
        break;
    case Kind::Sigma: {
        EnumSet d = typeImpl(b->kids[0], env, bound);
        for (const auto& a : d.elems) {
            Push p(bound, {a});
            EnumSet body = typeImpl(b->kids[1], env, bound);
            for (const auto& c : body.elems) out.push_back(s.pair(a, c));
            guard(out.size());
        }
        break;
    }
    case Kind::Sum: {
        EnumSet l = typeImpl(b->kids[0], env, bound);
        EnumSet r = typeImpl(b->kids[1], env, bound);
        for (const auto& a : l.elems) out.push_back(s.inl(a));
        for (const auto& a : r.elems) out.push_back(s.inr(a));
        guard(out.size());
        break;
    }
    case Kind::List: {
        EnumSet a = typeImpl(b->kids[0], env, bound);
        std::vector<std::vector<Value>> lists;
        listsUpTo(a.elems, depth_, cap_, lists);
        for (auto& l : lists) out.push_back(s.list(std::move(l)));
        break;
    }
    case Kind::Quot: {
        auto classes = quotClasses(b, env, bound);
        for (const auto& [elem, rep] : *classes) out.push_back(s.cls(rep));
        break;
    }
    case Kind::BVar: throw ScopeError("loose bound variable");
    default: throw TypeError("expected a type, found " + show(b));
    }
    EnumSet result = EnumSet::of(std::move(out));
    if (closed) {
        std::lock_guard lock(cache_.ptr->mutex);
        cache_.ptr->types.emplace(key, std::make_shared<const EnumSet>(result));
    }
    return result;
}

std::shared_ptr<const std::map<Value, Value>> Evaluator::quotClasses(const Expr& q, const Env& env,
                                                                      std::vector<Value>& bound) const {
    const bool closed = bound.empty() && freeVars(q).empty();
    std::string key;
    if (closed) {
        key = exprKey(q);
        std::lock_guard lock(cache_.ptr->mutex);
        auto it = cache_.ptr->quotients.find(key);
        if (it != cache_.ptr->quotients.end()) return it->second;
    }
    EnumSet a = typeImpl(q->kids[0], env, bound);
    const std::size_t n = a.size();
    guard(n * n);
    std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Push p(bound, {a.elems[i], a.elems[j]});
            if (q->kids[1]->kind == Kind::Eq) {
                rel[i][j] = termImpl(q->kids[1]->kids[1], env, bound) == termImpl(q->kids[1]->kids[2], env, bound);
            } else {
                rel[i][j] = typeImpl(q->kids[1], env, bound).size() > 0;
            }
            if (rel[i][j]) parent[find(i)] = find(j);
        }
    // the relation must already be an equivalence at this depth
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (find(i) == find(j) && !rel[i][j])
                throw ModelError("quotient relation is not an equivalence at depth " + std::to_string(depth_) + ": " +
                                 a.elems[i].str() + " ~ " + a.elems[j].str() + " fails");
    // representative: the least element of each class (elements are sorted)
    std::vector<std::optional<std::size_t>> least(n);
    for (std::size_t i = 0; i < n; ++i)
        if (!least[find(i)]) least[find(i)] = i;
    auto classes = std::make_shared<std::map<Value, Value>>();
    for (std::size_t i = 0; i < n; ++i) classes->emplace(a.elems[i], a.elems[*least[find(i)]]);
    if (closed) {
        std::lock_guard lock(cache_.ptr->mutex);
        cache_.ptr->quotients.emplace(key, classes);
    }
    return classes;
}

Value Evaluator::termImpl(const Expr& t, const Env& env, std::vector<Value>& bound) const {
    const Structure& s = structure_;
    const auto& k = t->kids;
    switch (t->kind) {
    case Kind::FVar: {
        const Value* v = lookupEnv(env, t->name);
        if (!v) throw ScopeError("unbound variable '" + t->name + "' during evaluation");
        return *v;
    }
    case Kind::BVar:
        if (t->index >= bound.size()) throw ScopeError("loose bound variable");
        return bound[bound.size() - 1 - t->index];
    case Kind::Star: return s.unit();
    case Kind::Refl: return s.refl();
    case Kind::Abort: throw ModelError("evaluated an element of the empty type");
    case Kind::Pair: return s.pair(termImpl(k[0], env, bound), termImpl(k[1], env, bound));
    case Kind::Proj1: return s.fst(termImpl(k[0], env, bound));
    case Kind::Proj2: return s.snd(termImpl(k[0], env, bound));
    case Kind::Inl: return s.inl(termImpl(k[0], env, bound));
    case Kind::Inr: return s.inr(termImpl(k[0], env, bound));
    case Kind::Case: {
        Value v = termImpl(k[0], env, bound);
        Push p(bound, {s.payload(v)});
        return termImpl(s.isInl(v) ? k[1] : k[2], env, bound);
    }
    case Kind::Nil: return s.list({});
    case Kind::Cons: {
        auto xs = s.elems(termImpl(k[0], env, bound));
        xs.push_back(termImpl(k[1], env, bound));
        return s.list(std::move(xs));
    }
    case Kind::RecL: {
        auto xs = s.elems(termImpl(k[0], env, bound));
        Value acc = termImpl(k[1], env, bound);
        for (const auto& e : xs) {
            Push p(bound, {acc, e});
            acc = termImpl(k[2], env, bound);
        }
        return acc;
    }
    case Kind::ClassOf: {
        auto classes = quotClasses(k[0], env, bound);
        Value a = termImpl(k[1], env, bound);
        auto it = classes->find(a);
        if (it == classes->end()) throw ModelError("element " + a.str() + " outside the enumerated quotient carrier");
        return s.cls(it->second);
    }
    case Kind::QuotElim: {
        Value v = termImpl(k[0], env, bound);
        Push p(bound, {s.rep(v)});
        return termImpl(k[1], env, bound);
    }
    case Kind::App: {
        std::vector<Value> args;
        for (const auto& a : k) args.push_back(termImpl(a, env, bound));
        if (auto it = terms_.find(t->name); it != terms_.end()) return it->second(args);
        if (const ModelArrow* a = model_ ? model_->arrow(t->name) : nullptr) {
            if (args.size() != 1) throw ModelError("map '" + t->name + "' takes one argument");
            Value atom = s.unproper(args[0]);
            auto g = a->graph.find(atom.text());
            if (atom.tag() != Value::Tag::Atom || g == a->graph.end())
                throw ModelError("map '" + t->name + "' undefined at " + args[0].str());
            return s.proper(Value::atom(g->second));
        }
        throw ModelError("no realization for proper term '" + t->name + "'");
    }
    case Kind::Iso:
    case Kind::IsoInv: {
        auto it = isos_.find(t->name);
        if (it == isos_.end()) throw ModelError("no realization for coherence constant '" + t->name + "'");
        Value a = termImpl(k[0], env, bound);
        return t->kind == Kind::Iso ? it->second.first(a) : it->second.second(a);
    }
    default: throw TypeError("expected a term, found " + show(t));
    }
}

std::vector<Env> Evaluator::enumerateContext(const Context& ctx) const {
    std::vector<Env> envs{{}};
    for (const auto& b : ctx) {
        std::vector<Env> next;
        for (const auto& e : envs) {
            EnumSet vals = evalType(b.type, e);
            for (const auto& v : vals.elems) {
                Env e2 = e;
                e2.emplace_back(b.name, v);
                next.push_back(std::move(e2));
            }
            guard(next.size());
        }
        envs = std::move(next);
    }
    return envs;
}

CompMap Evaluator::termMap(const Binding& var, const Expr& term) const {
    CompMap m;
    m.domain = evalType(var.type);
    std::string x = var.name;
    m.fn = [this, x, term](const Value& v) { return evalTerm(term, Env{{x, v}}); };
    return m;
}

SampleVerdict Evaluator::agreeOn(const Context& ctx, const Expr& t, const Expr& u) const {
    SampleVerdict v;
    v.depth = depth_;
    for (const auto& env : enumerateContext(ctx)) {
        ++v.samples;
        Value a = evalTerm(t, env), b = evalTerm(u, env);
        if (a != b) {
            v.status = SampleVerdict::Status::CounterexampleFound;
            std::vector<Value> xs;
            std::string where;
            for (const auto& [n, val] : env) {
                xs.push_back(val);
                where += (where.empty() ? "" : ", ") + n + " = " + val.str();
            }
            v.witness = Value::list(std::move(xs));
            v.detail = "at " + (where.empty() ? std::string("()") : where) + ": " + a.str() + " vs " + b.str();
            return v;
        }
    }
    return v;
}

Evaluator modelEvaluator(const ModelPresentation& m, std::size_t depth) {
    return Evaluator(&m, m.structure, depth);
}

Value numeral(const Structure& s, std::size_t n) { return s.list(std::vector<Value>(n, s.unit())); }

}  // namespace au
